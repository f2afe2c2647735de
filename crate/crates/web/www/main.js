import init, { stream, leastFf, discrepancy } from "./pkg/ffdigits_web.js";

const $ = (id) => document.getElementById(id);

function fields(form) {
  const d = new FormData(form);
  return (name) => d.get(name);
}

function showError(target, e) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = e.message ?? String(e);
  target.append(p);
}

function renderStream(target, r) {
  // highlight the last digit of every block
  const cuts = new Set(r.cuts);
  const sep = r.base > 10 ? " " : "";
  const pre = document.createElement("pre");
  pre.className = "digits";
  r.digits.forEach((d, i) => {
    const span = document.createElement("span");
    span.textContent = (i > 0 ? sep : "") + d;
    if (cuts.has(i + 1)) span.className = "cut";
    pre.append(span);
  });
  const ok = r.blocks.filter((b) => b.verified).length;
  const info = document.createElement("p");
  info.textContent = `${r.digits.length} digits, ${r.blocks.length} complete blocks (${ok} verified), block ends at ${r.cuts.join(", ")}`;
  target.replaceChildren(pre, info);
}

function renderLeastFf(target, r) {
  const table = document.createElement("table");
  table.innerHTML = "<tr><th>step</th><th>appended</th><th>node</th><th>exponents</th><th>runner-up</th></tr>";
  r.steps.forEach((s, i) => {
    const row = table.insertRow();
    for (const v of [i + 1, s.appended, s.node, s.exponents.join(" "), s.runner_up ?? "-"]) {
      row.insertCell().textContent = v;
    }
  });
  const pre = document.createElement("pre");
  pre.textContent = r.digits;
  target.replaceChildren(pre, table);
}

function axes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(30, 10, w - 40, h - 30);
}

function plotHistogram(canvas, points) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  axes(ctx, w, h);
  const bins = new Array(40).fill(0);
  for (const x of points) bins[Math.min(39, Math.floor(x * 40))]++;
  const max = Math.max(...bins);
  const bw = (w - 40) / bins.length;
  ctx.fillStyle = "#4a7bb7";
  bins.forEach((c, i) => {
    const bh = ((h - 30) * c) / max;
    ctx.fillRect(30 + i * bw + 1, h - 20 - bh, bw - 2, bh);
  });
  ctx.fillStyle = "#222";
  ctx.fillText("0", 27, h - 6);
  ctx.fillText("1", w - 13, h - 6);
}

function plotSeries(canvas, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  axes(ctx, w, h);
  const nMax = series[series.length - 1].n;
  const dMax = Math.max(...series.map((p) => p.d));
  ctx.strokeStyle = "#b7562a";
  ctx.beginPath();
  series.forEach((p, i) => {
    const x = 30 + ((w - 40) * p.n) / nMax;
    const y = h - 20 - ((h - 30) * p.d) / dMax;
    i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
  });
  ctx.stroke();
  ctx.fillStyle = "#222";
  ctx.fillText(dMax.toFixed(3), 0, 18);
  ctx.fillText(`N = ${nMax}`, w - 60, h - 6);
}

function bind(formId, outId, action) {
  $(formId).addEventListener("submit", (ev) => {
    ev.preventDefault();
    const out = $(outId);
    try {
      action(fields(ev.target), out);
    } catch (e) {
      showError(out, e);
    }
  });
}

await init();

bind("stream-form", "stream-out", (f, out) => {
  const family = f("family");
  const primes = family === "liouville-nodes" ? "" : f("primes");
  const r = JSON.parse(stream(+f("base"), family, primes, +f("digits"), f("filler"), f("weighted") === "on"));
  renderStream(out, r);
});

bind("lff-form", "lff-out", (f, out) => {
  renderLeastFf(out, JSON.parse(leastFf(+f("base"), f("primes"), f("prefix"), +f("steps"), +f("cap"))));
});

bind("disc-form", "disc-out", (f, out) => {
  const r = JSON.parse(discrepancy(+f("base"), f("primes"), +f("count")));
  plotHistogram($("disc-hist"), r.points);
  plotSeries($("disc-series"), r.series);
  const last = r.series[r.series.length - 1];
  out.textContent = `D* = ${last.d.toFixed(5)} over the ${last.n} least nodes of {${r.primes.join(",")}}`;
});

for (const id of ["stream-form", "lff-form", "disc-form"]) $(id).requestSubmit();
