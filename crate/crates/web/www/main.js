import init, { mg_curve, lmg_curve, bivariate_grid, sample_histogram } from "./pkg/multigauss_web.js";

const $ = (id) => document.getElementById(id);

// Sliders for M are logarithmic: value v maps to M = e^v, snapped to an
// integer when close so that M = 1, 2, 10, 40 are reachable.
function shape(input) {
  const m = Math.exp(Number(input.value));
  const r = Math.round(m);
  return r >= 1 && Math.abs(m - r) < 0.02 * r ? r : Number(m.toPrecision(3));
}

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
}

function plot(canvas, xs, ys, { ymax, color = "#1f5fa8", clear = true, label = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  if (clear) axes(ctx, w, h, pad);
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const top = ymax ?? Math.max(...ys) * 1.05;
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 1.5 * pad);
  const py = (y) => h - pad - (y / top) * (h - 1.5 * pad);
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(px(x), py(ys[i])) : ctx.moveTo(px(x), py(ys[i]))));
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "11px system-ui";
  ctx.fillText(x0.toFixed(2), pad, h - pad + 14);
  ctx.fillText(x1.toFixed(2), w - pad - 20, h - pad + 14);
  ctx.fillText(top.toPrecision(3), 2, pad / 2 + 8);
  if (label) ctx.fillText(label, w - 140, pad);
  return top;
}

function guard(errId, f) {
  try {
    f();
    $(errId).textContent = "";
  } catch (e) {
    $(errId).textContent = String(e.message ?? e);
  }
}

function drawCurves() {
  guard("c-err", () => {
    const m = shape($("c-m"));
    const mu = Number($("c-mu").value);
    const sigma = Number($("c-sigma").value);
    $("c-m-out").value = m;
    $("c-mu-out").value = mu;
    $("c-sigma-out").value = sigma;
    const n = 401;
    const f = $("c-family").value === "mg" ? mg_curve : lmg_curve;
    const v = f(mu, sigma, m, n);
    const x = v.subarray(0, n), pdf = v.subarray(n, 2 * n), cdf = v.subarray(2 * n);
    plot($("c-pdf"), x, pdf, { label: "density" });
    plot($("c-cdf"), x, cdf, { ymax: 1, label: "distribution" });
  });
}

function drawSurface() {
  guard("s-err", () => {
    const m = shape($("s-m"));
    const rho = Number($("s-rho").value);
    $("s-m-out").value = m;
    $("s-rho-out").value = rho;
    const canvas = $("s-map");
    const n = canvas.width;
    const v = bivariate_grid(m, rho, n);
    let max = 0;
    for (const p of v) max = Math.max(max, p);
    const ctx = canvas.getContext("2d");
    const img = ctx.createImageData(n, n);
    for (let i = 0; i < v.length; i++) {
      const t = v[i] / max;
      img.data[4 * i] = 255 * Math.min(1, 1.6 * t);
      img.data[4 * i + 1] = 255 * t * t;
      img.data[4 * i + 2] = 255 * (0.35 + 0.65 * t) * (1 - t) + 40 * t;
      img.data[4 * i + 3] = 255;
    }
    ctx.putImageData(img, 0, 0);
  });
}

function drawSamples() {
  guard("h-err", () => {
    const m = shape($("h-m"));
    $("h-m-out").value = m;
    const n = Number($("h-n").value);
    const seed = BigInt(Math.max(0, Math.floor(Number($("h-seed").value) || 0)));
    const bins = 80;
    const h = sample_histogram(0, 1, m, n, seed, bins);
    const curve = mg_curve(0, 1, m, 401);
    const x = curve.subarray(0, 401), pdf = curve.subarray(401, 802);
    const canvas = $("h-plot");
    const ymax = Math.max(...h, ...pdf) * 1.05;
    const ctx = canvas.getContext("2d");
    const { width: w, height: ht } = canvas;
    const pad = 30;
    axes(ctx, w, ht, pad);
    ctx.fillStyle = "#c9d7ea";
    const bw = (w - 1.5 * pad) / bins;
    h.forEach((d, i) => {
      const bh = (d / ymax) * (ht - 1.5 * pad);
      ctx.fillRect(pad + i * bw, ht - pad - bh, bw - 1, bh);
    });
    plot(canvas, x, pdf, { ymax, clear: false, color: "#b0302a", label: `n = ${n}, seed = ${seed}` });
  });
}

await init();
for (const id of ["c-family", "c-m", "c-mu", "c-sigma"]) $(id).addEventListener("input", drawCurves);
for (const id of ["s-m", "s-rho"]) $(id).addEventListener("input", drawSurface);
$("h-m").addEventListener("input", () => ($("h-m-out").value = shape($("h-m"))));
$("h-run").addEventListener("click", drawSamples);
drawCurves();
drawSurface();
drawSamples();
