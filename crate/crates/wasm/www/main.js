import init, { pattern_curve, coverage_ccdf, thresholds_db, isr_series_curve } from "./pkg/hexbeam_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function plot(canvas, series, xr, yr, labels) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 36;
  ctx.clearRect(0, 0, w, h);
  const sx = (x) => pad + (x - xr[0]) / (xr[1] - xr[0]) * (w - 2 * pad);
  const sy = (y) => h - pad - (y - yr[0]) / (yr[1] - yr[0]) * (h - 2 * pad);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.fillText(`${xr[0]}`, pad, h - pad + 14);
  ctx.fillText(`${xr[1]}`, w - pad - 16, h - pad + 14);
  ctx.fillText(`${yr[1]}`, 4, pad + 4);
  ctx.fillText(`${yr[0]}`, 4, h - pad);
  const colors = ["#1f77b4", "#d62728", "#2ca02c"];
  series.forEach((pts, i) => {
    ctx.strokeStyle = colors[i % colors.length];
    ctx.beginPath();
    pts.forEach(([x, y], k) => (k ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y))));
    ctx.stroke();
    if (labels) ctx.fillText(labels[i], w - pad - 60, pad + 14 * (i + 1));
  });
}

function pairs(flat, stride, cols) {
  const out = cols.map(() => []);
  for (let i = 0; i < flat.length; i += stride) {
    cols.forEach((c, j) => out[j].push([flat[i], flat[i + c]]));
  }
  return out;
}

function guard(f) {
  try {
    $("status").textContent = "";
    f();
  } catch (e) {
    $("status").textContent = String(e.message ?? e);
  }
}

function drawPattern() {
  guard(() => {
    const rows = pattern_curve(num("ph"), num("pv"), 0.25);
    plot($("pattern"), pairs(rows, 3, [1, 2]), [-90, 90], [0, 1], ["H", "V"]);
  });
}

function drawCoverage() {
  guard(() => {
    const tilt = $("tilt").value === "" ? NaN : num("tilt");
    const cov = coverage_ccdf($("mode").value, num("ch"), num("cv"), tilt, num("eta"), num("trials") | 0, 1);
    const g = thresholds_db();
    plot($("coverage"), [Array.from(g, (x, i) => [x, cov[i]])], [g[0], g[g.length - 1]], [0, 1]);
  });
}

function drawSeries() {
  guard(() => {
    const rows = isr_series_curve(num("exp"), 0.66, 120);
    const pts = pairs(rows, 2, [1])[0];
    const top = Math.max(...pts.map((p) => p[1]));
    plot($("series"), [pts], [0, 0.66], [0, +top.toPrecision(2)]);
  });
}

await init();
["ph", "pv"].forEach((id) => $(id).addEventListener("input", drawPattern));
$("exp").addEventListener("input", drawSeries);
$("run").addEventListener("click", drawCoverage);
drawPattern();
drawSeries();
drawCoverage();
