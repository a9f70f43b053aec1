import init, { train_ensembles, diversity_of_matrix, t_test_p_value } from "./pkg/udeed_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const fmt = (x) => x.toFixed(4);

const VIEW = 3.5; // plots cover [-VIEW, VIEW]^2
const COLORS = { pos: "#1565c0", neg: "#c62828" };

function toCanvas(canvas, x, y) {
  return [((x + VIEW) / (2 * VIEW)) * canvas.width, ((VIEW - y) / (2 * VIEW)) * canvas.height];
}

// Shades each pixel block by the weighted vote sign, then draws every
// member's boundary w_x x + w_y y + b = 0.
function drawEnsemble(canvas, points, weights) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const cell = 6;
  for (let px = 0; px < canvas.width; px += cell) {
    for (let py = 0; py < canvas.height; py += cell) {
      const x = (px / canvas.width) * 2 * VIEW - VIEW;
      const y = VIEW - (py / canvas.height) * 2 * VIEW;
      let margin = 0;
      for (const [a, b, c] of weights) margin += Math.tanh((a * x + b * y + c) / 2);
      ctx.fillStyle = margin >= 0 ? "rgba(21,101,192,0.08)" : "rgba(198,40,40,0.08)";
      ctx.fillRect(px, py, cell, cell);
    }
  }
  ctx.strokeStyle = "rgba(0,0,0,0.35)";
  for (const [a, b, c] of weights) {
    ctx.beginPath();
    if (Math.abs(b) > Math.abs(a)) {
      ctx.moveTo(...toCanvas(canvas, -VIEW, (-c + a * VIEW) / b));
      ctx.lineTo(...toCanvas(canvas, VIEW, (-c - a * VIEW) / b));
    } else if (a !== 0) {
      ctx.moveTo(...toCanvas(canvas, (-c + b * VIEW) / a, -VIEW));
      ctx.lineTo(...toCanvas(canvas, (-c - b * VIEW) / a, VIEW));
    }
    ctx.stroke();
  }
  for (const p of points) {
    if (p.role === "test") continue;
    const [cx, cy] = toCanvas(canvas, p.x, p.y);
    const color = p.label > 0 ? COLORS.pos : COLORS.neg;
    ctx.beginPath();
    if (p.role === "labeled") {
      ctx.fillStyle = color;
      ctx.arc(cx, cy, 5, 0, 2 * Math.PI);
      ctx.fill();
      ctx.strokeStyle = "#000";
      ctx.stroke();
    } else {
      ctx.fillStyle = "#999";
      ctx.arc(cx, cy, 2, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}

function drawTraces(canvas, traces) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const all = traces.flatMap((t) => t.values);
  if (all.length < 2) return;
  const lo = Math.min(...all), hi = Math.max(...all);
  const steps = Math.max(...traces.map((t) => t.values.length)) - 1 || 1;
  const pad = 24;
  ctx.font = "11px sans-serif";
  traces.forEach((t, i) => {
    ctx.strokeStyle = t.color;
    ctx.beginPath();
    t.values.forEach((v, k) => {
      const x = pad + (k / steps) * (canvas.width - 2 * pad);
      const y = canvas.height - pad - ((v - lo) / (hi - lo || 1)) * (canvas.height - 2 * pad);
      k === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
    });
    ctx.stroke();
    ctx.fillStyle = t.color;
    ctx.fillText(`${t.name} total loss`, pad + 130 * i, 12);
  });
}

function table(el, header, rows) {
  el.innerHTML =
    "<tr>" + header.map((h) => `<th>${h}</th>`).join("") + "</tr>" +
    rows.map((r) => "<tr>" + r.map((c) => `<td>${c}</td>`).join("") + "</tr>").join("");
}

function train() {
  $("train-error").textContent = "";
  let run;
  try {
    run = JSON.parse(train_ensembles(num("seed"), num("m"), num("gamma"), num("labeled"), num("unlabeled"), num("separation")));
  } catch (e) {
    $("train-error").textContent = String(e);
    return;
  }
  drawEnsemble($("plot-initial"), run.points, run.initial.weights);
  drawEnsemble($("plot-lc"), run.points, run.lc.weights);
  drawEnsemble($("plot-lcud"), run.points, run.lcud.weights);
  const row = (name, e) => [name, fmt(e.accuracy), fmt(e.diversity.dis), fmt(e.diversity.df_complement), fmt(e.diversity.ent), fmt(e.diversity.cfd)];
  table($("train-table"), ["ensemble", "test accuracy", "DIS", "1-DF", "ENT", "CFD"],
    [row("initial", run.initial), row("LC", run.lc), row("LCUD", run.lcud)]);
  drawTraces($("trace"), [
    { name: "LC", color: "#555", values: run.lc.trace },
    { name: "LCUD", color: "#2e7d32", values: run.lcud.trace },
  ]);
}

function score() {
  $("matrix-error").textContent = "";
  try {
    const d = JSON.parse(diversity_of_matrix($("matrix").value));
    table($("matrix-table"), ["DIS", "1-DF", "ENT", "CFD"], [[d.dis, d.df_complement, d.ent, d.cfd].map(fmt)]);
  } catch (e) {
    $("matrix-error").textContent = String(e);
    $("matrix-table").innerHTML = "";
  }
}

function pValue() {
  try {
    $("p").textContent = t_test_p_value(num("t"), num("df")).toPrecision(6);
  } catch (e) {
    $("p").textContent = String(e);
  }
}

await init();
$("train").addEventListener("click", train);
$("score").addEventListener("click", score);
for (const id of ["t", "df"]) $(id).addEventListener("input", pValue);
train();
score();
pValue();
