import init, { classify, homoclinicOrbit, simulate } from "./pkg/maxwell_bloch_web.js";

const STRIDE = 6; // t, x1, y1, x2, y2, z
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function column(rows, k) {
  const out = new Float64Array(rows.length / STRIDE);
  for (let i = 0; i < out.length; i++) out[i] = rows[i * STRIDE + k];
  return out;
}

function range(...arrays) {
  let lo = Infinity, hi = -Infinity;
  for (const a of arrays) for (const v of a) { if (v < lo) lo = v; if (v > hi) hi = v; }
  if (lo === hi) { lo -= 1; hi += 1; }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

// Maps data coordinates into the box [x0, x0 + w] × [0, h] of a canvas.
function frame(ctx, box, xr, yr) {
  const { x0, w, h } = box;
  ctx.strokeStyle = "#ddd";
  ctx.strokeRect(x0, 0, w, h);
  return (x, y) => [x0 + (x - xr[0]) / (xr[1] - xr[0]) * w, h - (y - yr[0]) / (yr[1] - yr[0]) * h];
}

function line(ctx, map, xs, ys, color) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  for (let i = 0; i < xs.length; i++) {
    const [px, py] = map(xs[i], ys[i]);
    i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
  }
  ctx.stroke();
}

function dots(ctx, map, xs, ys, color) {
  ctx.fillStyle = color;
  for (let i = 0; i < xs.length; i++) {
    const [px, py] = map(xs[i], ys[i]);
    ctx.fillRect(px - 1.5, py - 1.5, 3, 3);
  }
}

function report(id, f) {
  try { f(); } catch (e) { $(id).textContent = "error: " + (e.message ?? e); }
}

function drawClassify() {
  const c = num("cls-c");
  $("cls-c-value").textContent = c.toFixed(2);
  report("cls-out", () => {
    const r = JSON.parse(classify(c));
    $("cls-out").textContent = `${r.kind}, ${r.stable}\nα = ${r.alpha}\nA = ${r.A}, B = ${r.B}`;
    const canvas = $("cls-plot"), ctx = canvas.getContext("2d");
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const s = 2.2;
    const map = frame(ctx, { x0: 0, w: canvas.width, h: canvas.height }, [-s, s], [-s, s]);
    line(ctx, map, [-s, s], [0, 0], "#bbb");
    line(ctx, map, [0, 0], [-s, s], "#bbb");
    dots(ctx, map, r.roots.map((z) => z[0]), r.roots.map((z) => z[1]), "#d62728");
  });
}

function drawHomoclinic() {
  report("hom-out", () => {
    const c = num("hom-c"), theta = num("hom-theta"), plus = $("hom-sign").value === "+";
    const span = 8 / Math.sqrt(c);
    const exact = homoclinicOrbit(c, theta, plus, -span, span, 600);
    const start = Array.from(exact.slice(1, STRIDE));
    const numeric = simulate(...start, 2 * span, num("hom-tol"));
    const te = column(exact, 0), tn = column(numeric, 0).map((t) => t - span);
    const canvas = $("hom-plot"), ctx = canvas.getContext("2d");
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const cols = [[1, "#1f77b4"], [3, "#d62728"], [5, "#2ca02c"]];
    const yr = range(...cols.map(([k]) => column(exact, k)));
    const map = frame(ctx, { x0: 0, w: canvas.width, h: canvas.height }, [-span, span], yr);
    for (const [k, color] of cols) {
      line(ctx, map, te, column(exact, k), color);
      dots(ctx, map, tn, column(numeric, k), color);
    }
    const last = numeric.length - STRIDE;
    const endExact = exact.slice(exact.length - STRIDE + 1);
    let err = 0;
    for (let k = 1; k < STRIDE; k++) err = Math.max(err, Math.abs(numeric[last + k] - endExact[k - 1]));
    $("hom-out").textContent = `${numeric.length / STRIDE} rk45 steps, endpoint deviation ${err.toExponential(2)}`;
  });
}

function drawSimulation() {
  report("sim-out", () => {
    const p = ["sim-x1", "sim-y1", "sim-x2", "sim-y2", "sim-z"].map(num);
    const rows = simulate(...p, num("sim-t"), 1e-10);
    const t = column(rows, 0), x1 = column(rows, 1), x2 = column(rows, 3), z = column(rows, 5);
    const canvas = $("sim-plot"), ctx = canvas.getContext("2d");
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const half = canvas.width / 2 - 10, h = canvas.height;
    const r = range(x1, x2);
    line(ctx, frame(ctx, { x0: 0, w: half, h }, r, r), x1, x2, "#1f77b4");
    line(ctx, frame(ctx, { x0: half + 20, w: half, h }, range(t), range(z)), t, z, "#2ca02c");
    $("sim-out").textContent = `${t.length} steps to t = ${t[t.length - 1]}`;
  });
}

await init();
$("cls-c").addEventListener("input", drawClassify);
$("hom-run").addEventListener("click", drawHomoclinic);
$("sim-run").addEventListener("click", drawSimulation);
drawClassify();
drawHomoclinic();
drawSimulation();
