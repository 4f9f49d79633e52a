import numpy as np
import pytest

from vga.dataset import (
    Dataset,
    DatasetError,
    DmuRecord,
    dumps_csv,
    exclude_dmus,
    load_csv,
    loads_csv,
    loads_json,
    to_jsonable,
    validate,
    write_csv,
    write_json,
    load_json,
)


def test_load_table1(table1):
    assert (table1.n, table1.m, table1.s) == (6, 2, 2)
    assert table1.ids == ("K", "A", "B", "D", "G", "H")
    k = table1.dmu("K")
    np.testing.assert_allclose(k.inputs, [1.6, 145.0])
    np.testing.assert_allclose(k.outputs, [1036.0, 49.0])
    assert table1.input_names == ("x1[ton]", "x2[Hrs]")


def test_validate_table1_ok(table1):
    assert validate(table1) == []


def test_size_rule_rejected():
    # n = m + s exactly is too small; n = m + s + 1 is the smallest valid size.
    text = "id,x:a[u],x:b[u],y:c[u],y:d[u]\n" + "\n".join(
        f"r{i},1,2,3,4" for i in range(4)
    )
    with pytest.raises(DatasetError, match="n must exceed m\\+s"):
        loads_csv(text)
    ok = "id,x:a[u],x:b[u],y:c[u],y:d[u]\n" + "\n".join(
        f"r{i},1,2,3,4" for i in range(5)
    )
    assert loads_csv(ok).n == 5


def test_negative_value_rejected():
    text = "id,x:a[u],y:c[u]\n" + "\n".join(f"r{i},1,2" for i in range(6))
    text = text.replace("r0,1,2", "r0,-1,2")
    with pytest.raises(DatasetError, match="negative"):
        loads_csv(text)


def test_duplicate_id_violation():
    recs = tuple(DmuRecord("K" if j < 2 else f"r{j}", [1.0], [2.0]) for j in range(6))
    ds = Dataset(recs, ("a[u]",), ("c[u]",))
    assert any("duplicate id" in v for v in validate(ds))


def test_zero_column_violation():
    recs = tuple(DmuRecord(f"r{j}", [1.0], [0.0]) for j in range(6))
    ds = Dataset(recs, ("a[u]",), ("c[u]",))
    assert any("zero index column" in v for v in validate(ds))


def test_zero_single_entry_is_loadable():
    # A single zero level is fine at load time; it only blocks assessing
    # that unit.
    recs = [DmuRecord(f"r{j}", [1.0 + j], [2.0]) for j in range(6)]
    recs[0] = DmuRecord("r0", [0.0], [2.0])
    ds = Dataset(tuple(recs), ("a[u]",), ("c[u]",))
    assert validate(ds) == []


@pytest.mark.parametrize("header", ["dmu,x:a[u],y:b[u]", "id,z:a[u],y:b[u]", "id,y:b[u],x:a[u]"])
def test_malformed_headers(header):
    with pytest.raises(DatasetError):
        loads_csv(header + "\n" + "\n".join(f"r{i},1,2" for i in range(6)))


def test_malformed_row():
    text = "id,x:a[u],y:c[u]\nr0,1\n"
    with pytest.raises(DatasetError, match="row 2"):
        loads_csv(text)
    text = "id,x:a[u],y:c[u]\nr0,one,2\n"
    with pytest.raises(DatasetError, match="row 2"):
        loads_csv(text)


def test_csv_round_trip(table1, tmp_path):
    path = tmp_path / "ds.csv"
    write_csv(table1, path)
    again = load_csv(path)
    assert again == table1


def test_json_round_trip(table1, tmp_path):
    path = tmp_path / "ds.json"
    write_json(table1, path)
    again = load_json(path)
    assert again == table1


def test_json_csv_same_dataset(table1):
    import json

    via_json = loads_json(json.dumps(to_jsonable(table1)))
    via_csv = loads_csv(dumps_csv(table1))
    assert via_json == via_csv == table1


def test_exclude_one(table1):
    reduced = exclude_dmus(table1, {"H"})
    assert reduced.n == 5
    assert reduced.ids == ("K", "A", "B", "D", "G")
    assert table1.n == 6  # original untouched


def test_exclude_empty_is_identity(table1):
    assert exclude_dmus(table1, set()) == table1


def test_exclude_breaking_size_rule(table1):
    with pytest.raises(DatasetError, match="m\\+s"):
        exclude_dmus(table1, {"A", "H"})


def test_exclude_unknown_id(table1):
    with pytest.raises(DatasetError, match="unknown"):
        exclude_dmus(table1, {"Z"})


def test_matrices_shapes(table1):
    assert table1.X.shape == (6, 2)
    assert table1.Y.shape == (6, 2)
    np.testing.assert_allclose(table1.X[2], [1.0, 29.0])
