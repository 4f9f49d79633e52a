import * as d3 from "d3";

import type { BenchmarkRow, Gauge, PeerRow, ScatterSpec } from "./viewmodel";

const WIDTH = 460;
const HEIGHT = 460;
const MARGIN = 42;

export function renderScatter(svgEl: SVGSVGElement, spec: ScatterSpec): void {
  const svg = d3.select(svgEl);
  svg.selectAll("*").remove();
  svg.attr("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);

  const lo = Math.min(0, spec.anchor?.y ?? 0, ...spec.points.map((p) => p.y)) - 0.05 * spec.diagonalMax;
  const hi = spec.diagonalMax;
  const x = d3.scaleLinear().domain([Math.min(0, lo), hi]).range([MARGIN, WIDTH - MARGIN]);
  const y = d3.scaleLinear().domain([Math.min(0, lo), hi]).range([HEIGHT - MARGIN, MARGIN]);

  svg.append("g").attr("transform", `translate(0,${HEIGHT - MARGIN})`).call(d3.axisBottom(x).ticks(6));
  svg.append("g").attr("transform", `translate(${MARGIN},0)`).call(d3.axisLeft(y).ticks(6));

  // best-efficiency boundary: the diagonal through the origin
  svg
    .append("line")
    .attr("x1", x(0))
    .attr("y1", y(0))
    .attr("x2", x(hi))
    .attr("y2", y(hi))
    .attr("stroke", "#888")
    .attr("stroke-dasharray", "4 3");

  svg
    .selectAll("line.vector")
    .data(spec.vectors)
    .enter()
    .append("line")
    .attr("class", "vector")
    .attr("x1", (v) => x(v.x1))
    .attr("y1", (v) => y(v.y1))
    .attr("x2", (v) => x(v.x2))
    .attr("y2", (v) => y(v.y2))
    .attr("stroke", "#7a5195")
    .attr("stroke-width", 1.2)
    .append("title")
    .text((v) => v.label);

  const color = (kind: string) =>
    kind === "assessed" ? "#ef5675" : kind === "peer" ? "#003f5c" : kind === "target" ? "#ffa600" : "#666";

  const dots = svg
    .selectAll("g.pt")
    .data(spec.points)
    .enter()
    .append("g")
    .attr("class", "pt")
    .attr("transform", (p) => `translate(${x(p.x)},${y(p.y)})`);
  dots
    .append("circle")
    .attr("r", (p) => (p.kind === "assessed" ? 6 : 4.5))
    .attr("fill", (p) => color(p.kind));
  dots.append("title").text((p) => p.hover);
  dots
    .append("text")
    .attr("dx", 7)
    .attr("dy", 4)
    .attr("font-size", "11px")
    .text((p) => p.id);

  if (spec.anchor) {
    const g = svg
      .append("g")
      .attr("transform", `translate(${x(spec.anchor.x)},${y(spec.anchor.y)})`);
    g.append("rect").attr("x", -4).attr("y", -4).attr("width", 8).attr("height", 8).attr("fill", "#2f9e44");
    g.append("title").text(`AP: (${spec.anchor.x.toFixed(3)}, ${spec.anchor.y.toFixed(3)})`);
    g.append("text").attr("dx", 7).attr("dy", 4).attr("font-size", "11px").text("AP");
  }
}

export function renderGauges(el: HTMLElement, items: Gauge[]): void {
  const sel = d3.select(el).selectAll<HTMLDivElement, Gauge>("div.gauge").data(items, (g) => g.label);
  const enter = sel.enter().append("div").attr("class", "gauge");
  enter.append("span").attr("class", "gauge-label");
  enter.append("span").attr("class", "gauge-value");
  const merged = enter.merge(sel);
  merged.select(".gauge-label").text((g) => g.label);
  merged.select(".gauge-value").text((g) => g.value.toFixed(3));
  sel.exit().remove();
}

export function renderBenchmarkTable(el: HTMLElement, rows: BenchmarkRow[]): void {
  const table = d3.select(el);
  table.selectAll("*").remove();
  const header = table.append("tr");
  for (const h of ["index", "side", "current", "target", "slack ratio"]) header.append("th").text(h);
  for (const r of rows) {
    const tr = table.append("tr");
    tr.append("td").text(r.index);
    tr.append("td").text(r.side);
    tr.append("td").text(r.current.toFixed(2));
    tr.append("td").text(r.target.toFixed(2));
    tr.append("td").text(r.slackRatio.toFixed(4));
  }
}

export function renderPeerPanel(
  el: HTMLElement,
  rows: PeerRow[],
  readOnly: boolean,
  onToggle: (id: string) => void,
): void {
  const table = d3.select(el);
  table.selectAll("*").remove();
  const header = table.append("tr");
  for (const h of ["exclude", "unit", "inputs", "outputs", "best peer"]) header.append("th").text(h);
  for (const r of rows) {
    const tr = table.append("tr");
    const box = tr.append("td").append("input").attr("type", "checkbox");
    box.property("checked", r.pending).property("disabled", readOnly || !r.isPeer);
    box.on("change", () => onToggle(r.id));
    tr.append("td").text(r.id);
    tr.append("td").text(r.inputs.map((v) => v.toFixed(2)).join(", "));
    tr.append("td").text(r.outputs.map((v) => v.toFixed(2)).join(", "));
    tr.append("td").text(r.isPeer ? "yes" : "");
  }
}
