import init, { normalize, decision_field, compare } from "./pkg/surveycode_demo.js";

const $ = (id) => document.getElementById(id);
const RES = 80;
let points = [];

function showTokens() {
  const out = JSON.parse(normalize($("answer").value));
  $("normalized").textContent = out.normalized;
  $("tokens").replaceChildren(...out.tokens.map((t) => {
    const s = document.createElement("span");
    s.className = "tok";
    s.textContent = t;
    return s;
  }));
}

function toCanvas(v, size) {
  return ((v + 1) / 2) * size;
}

function drawField() {
  const canvas = $("field");
  const ctx = canvas.getContext("2d");
  const w = canvas.width;
  ctx.clearRect(0, 0, w, w);
  $("field-info").textContent = "";
  const labels = new Set(points.map((p) => p.label));
  if (labels.size === 2) {
    try {
      const f = JSON.parse(decision_field(JSON.stringify(points), +$("c").value, +$("gamma").value, RES));
      const cell = w / f.resolution;
      f.values.forEach((v, i) => {
        const row = Math.floor(i / f.resolution);
        const col = i % f.resolution;
        const a = Math.min(Math.abs(v), 1) * 0.45 + 0.05;
        ctx.fillStyle = v >= 0 ? `rgba(40,110,200,${a})` : `rgba(210,80,40,${a})`;
        if (Math.abs(v) < 0.04) ctx.fillStyle = "#222";
        ctx.fillRect(col * cell, row * cell, cell + 1, cell + 1);
      });
      $("field-info").textContent = `training errors: ${f.training_errors}`;
    } catch (e) {
      $("field-info").textContent = String(e);
    }
  }
  for (const p of points) {
    ctx.beginPath();
    ctx.arc(toCanvas(p.x, w), toCanvas(-p.y, w), 5, 0, 2 * Math.PI);
    ctx.fillStyle = p.label > 0 ? "#1a4f9c" : "#a8321a";
    ctx.fill();
    ctx.strokeStyle = "white";
    ctx.stroke();
  }
}

function runComparison() {
  $("report").textContent = "training";
  // let the browser paint before the blocking call
  setTimeout(() => {
    try {
      const r = JSON.parse(compare(+$("records").value, +$("seed").value));
      $("report").textContent = `BR ${r.br.toFixed(4)}   ECC ${r.ecc.toFixed(4)}\n\n${r.table}`;
    } catch (e) {
      $("report").textContent = String(e);
    }
  }, 20);
}

await init();
$("status").textContent = "";

$("answer").addEventListener("input", showTokens);
showTokens();

$("field").addEventListener("click", (ev) => {
  const rect = ev.target.getBoundingClientRect();
  const x = ((ev.clientX - rect.left) / rect.width) * 2 - 1;
  const y = 1 - ((ev.clientY - rect.top) / rect.height) * 2;
  points.push({ x, y, label: ev.shiftKey ? -1 : 1 });
  drawField();
});
$("c").addEventListener("change", drawField);
$("gamma").addEventListener("change", drawField);
$("clear").addEventListener("click", () => {
  points = [];
  drawField();
});
$("run").addEventListener("click", runComparison);
drawField();
