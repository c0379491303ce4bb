import init, { negativityCurve, thresholdTable, pairSpectrum } from "./pkg/ferri_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function guard(msgId, fn) {
  $(msgId).textContent = "";
  $(msgId).className = "";
  try {
    fn();
  } catch (e) {
    $(msgId).textContent = String(e.message ?? e);
    $(msgId).className = "error";
  }
}

function fillTable(table, header, rows) {
  table.innerHTML = "";
  const head = table.insertRow();
  for (const h of header) head.appendChild(document.createElement("th")).textContent = h;
  for (const r of rows) {
    const tr = table.insertRow();
    for (const v of r) tr.insertCell().textContent = typeof v === "number" ? v.toPrecision(8) : v;
  }
}

function plot(canvas, xs, ys) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const y1 = Math.max(...ys, 1e-12);
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const py = (y) => h - pad - (y / y1) * (h - 2 * pad);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.fillText(`N max ${y1.toPrecision(4)}`, pad + 4, pad - 6);
  ctx.fillText(`T ${x0}`, pad, h - pad + 14);
  ctx.fillText(`${x1}`, w - pad - 20, h - pad + 14);
  ctx.strokeStyle = "#1060c0";
  ctx.lineWidth = 2;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(px(x), py(ys[i])) : ctx.moveTo(px(x), py(ys[i]))));
  ctx.stroke();
}

function runCurve() {
  guard("c-msg", () => {
    const flat = negativityCurve(num("c-twice"), num("c-cells"), num("c-tmin"), num("c-tmax"), num("c-steps"));
    const xs = [], ys = [];
    for (let i = 0; i < flat.length; i += 3) {
      xs.push(flat[i]);
      ys.push(flat[i + 1]);
    }
    plot($("c-plot"), xs, ys);
    const zero = xs.find((_, i) => ys[i] === 0);
    $("c-msg").textContent = zero === undefined ? "entangled over the whole range" : `N = 0 from T = ${zero.toPrecision(4)}`;
  });
}

function runThresholds() {
  guard("t-msg", () => {
    const flat = thresholdTable(num("t-max"), num("t-cells"));
    const rows = [];
    for (let i = 0; i < flat.length; i += 2) rows.push([flat[i], flat[i + 1]]);
    fillTable($("t-table"), ["2s", "T_th / J"], rows);
  });
}

function runSpectrum() {
  guard("s-msg", () => {
    const ev = pairSpectrum(num("s-twice"), num("s-cells"), num("s-temp"));
    const neg = ev.filter((x) => x < 0).reduce((a, x) => a - x, 0);
    $("s-msg").textContent = `negativity ${neg.toPrecision(8)}`;
    fillTable($("s-table"), ["#", "eigenvalue"], Array.from(ev, (x, i) => [String(i), x]));
  });
}

await init();
$("c-run").onclick = runCurve;
$("t-run").onclick = runThresholds;
$("s-run").onclick = runSpectrum;
runCurve();
