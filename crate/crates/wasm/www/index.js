import init, { generate_scenario, contours, depth_at, convex_hull } from "./pkg/zonoid_depth_wasm.js";

const canvas = document.getElementById("plot");
const ctx = canvas.getContext("2d");
const form = document.getElementById("controls");
const readout = document.getElementById("readout");
const status = document.getElementById("status");

const READOUT_MODES = ["1", "2", "4", "8", "inf", "zonoid"];
const MARGIN = 20;

let state = null;

function levels(from) {
  const out = [];
  for (let i = 0; i < 10; i++) out.push(i === 9 ? 1 : from + ((1 - from) * i) / 9);
  return out;
}

function unpack(packed) {
  const rings = [];
  for (let i = 0; i < packed.length; ) {
    const level = packed[i];
    const m = packed[i + 1];
    rings.push({ level, xy: packed.subarray(i + 2, i + 2 + 2 * m) });
    i += 2 + 2 * m;
  }
  return rings;
}

function frame(arrays) {
  let [x0, y0, x1, y1] = [Infinity, Infinity, -Infinity, -Infinity];
  for (const xy of arrays) {
    for (let i = 0; i < xy.length; i += 2) {
      x0 = Math.min(x0, xy[i]); x1 = Math.max(x1, xy[i]);
      y0 = Math.min(y0, xy[i + 1]); y1 = Math.max(y1, xy[i + 1]);
    }
  }
  const scale = (canvas.width - 2 * MARGIN) / Math.max(x1 - x0, y1 - y0, 1e-12);
  const ox = MARGIN + 0.5 * (canvas.width - 2 * MARGIN - scale * (x1 - x0));
  const oy = MARGIN + 0.5 * (canvas.height - 2 * MARGIN - scale * (y1 - y0));
  return {
    toPx: (x, y) => [ox + scale * (x - x0), canvas.height - (oy + scale * (y - y0))],
    fromPx: (px, py) => [x0 + (px - ox) / scale, y0 + (canvas.height - py - oy) / scale],
  };
}

function color(i, count) {
  const t = count > 1 ? i / (count - 1) : 0;
  const mix = (a, b) => Math.round(a + t * (b - a));
  return `rgb(${mix(33, 215)},${mix(102, 48)},${mix(172, 39)})`;
}

function trace(xy, f, close) {
  ctx.beginPath();
  for (let i = 0; i < xy.length; i += 2) {
    const [px, py] = f.toPx(xy[i], xy[i + 1]);
    if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
  }
  if (close) ctx.closePath();
  ctx.stroke();
}

function draw() {
  const { points, rings, hull, showHull } = state;
  const f = state.frame;
  ctx.fillStyle = "white";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  ctx.lineWidth = 1.5;
  ctx.lineCap = "round";
  rings.forEach((r, i) => {
    ctx.strokeStyle = color(i, rings.length);
    trace(r.xy, f, true);
  });
  if (showHull) {
    ctx.setLineDash([5, 4]);
    ctx.strokeStyle = "gray";
    ctx.lineWidth = 1;
    trace(hull, f, true);
    ctx.setLineDash([]);
  }
  ctx.strokeStyle = "black";
  ctx.lineWidth = 0.8;
  for (let i = 0; i < points.length; i += 2) {
    const [px, py] = f.toPx(points[i], points[i + 1]);
    ctx.beginPath();
    ctx.arc(px, py, 2.2, 0, 2 * Math.PI);
    ctx.stroke();
  }
  const mean = rings[rings.length - 1].xy;
  const [mx, my] = f.toPx(mean[0], mean[1]);
  ctx.fillStyle = "black";
  ctx.beginPath();
  ctx.arc(mx, my, 5, 0, 2 * Math.PI);
  ctx.fill();
}

function rebuild() {
  const data = new FormData(form);
  status.textContent = "";
  try {
    const points = generate_scenario(data.get("scenario"), Number(data.get("n")), BigInt(data.get("seed")));
    const t0 = performance.now();
    const rings = unpack(contours(points, data.get("q"), Float64Array.from(levels(Number(data.get("from")))), Number(data.get("rays"))));
    const ms = performance.now() - t0;
    const hull = convex_hull(points);
    state = { points, rings, hull, showHull: data.get("hull") !== null, frame: frame([points, rings[0].xy]) };
    draw();
    status.style.color = "#555";
    status.textContent = `${rings.length} contours in ${ms.toFixed(0)} ms`;
  } catch (e) {
    status.style.color = "#a00";
    status.textContent = String(e.message ?? e);
  }
}

let pending = null;

canvas.addEventListener("mousemove", (ev) => {
  if (!state) return;
  const rect = canvas.getBoundingClientRect();
  if (pending === null) requestAnimationFrame(() => showDepth(pending));
  pending = [ev.clientX - rect.left, ev.clientY - rect.top];
});

function showDepth([px, py]) {
  pending = null;
  const [x, y] = state.frame.fromPx(px, py);
  const rows = [`<tr><td>x</td><td>${x.toFixed(3)}, ${y.toFixed(3)}</td></tr>`];
  for (const mode of READOUT_MODES) {
    let value;
    try { value = depth_at(state.points, x, y, mode).toFixed(4); } catch (e) { value = "error"; }
    const name = mode === "zonoid" ? "zonoid" : `q = ${mode}`;
    rows.push(`<tr><td>${name}</td><td>${value}</td></tr>`);
  }
  readout.innerHTML = rows.join("");
}

form.addEventListener("submit", (ev) => {
  ev.preventDefault();
  rebuild();
});
form.elements.hull.addEventListener("change", () => {
  if (!state) return;
  state.showHull = form.elements.hull.checked;
  draw();
});

await init();
rebuild();
