import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vga.dataset import Dataset, DmuRecord, load_csv

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def table1() -> Dataset:
    return load_csv(DATA_DIR / "table1.csv")


def random_dataset(rng: np.random.Generator) -> Dataset:
    """Random positive dataset: n in [6,12], m,s in [1,3], values in (0.1, 100)."""
    while True:
        m = int(rng.integers(1, 4))
        s = int(rng.integers(1, 4))
        n = int(rng.integers(6, 13))
        if n > m + s:
            break
    recs = tuple(
        DmuRecord(f"d{j}", rng.uniform(0.1, 100.0, m), rng.uniform(0.1, 100.0, s))
        for j in range(n)
    )
    return Dataset(recs, tuple(f"x{i}[u]" for i in range(m)), tuple(f"y{r}[u]" for r in range(s)))
