"""Figure rendering for the four diagnostic plot kinds.

All figures use a fixed style and embed no timestamps, so identical inputs
produce identical image files.
"""

from __future__ import annotations

import argparse
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .records import RecordError, read_gfld, read_ratio_csv, read_summary, read_trajectory

FIGURE_KINDS = ("norm_decay", "region_polar", "spectrum", "estimate_histogram")
_PNG_METADATA = {"Software": "gevreyviz"}


@dataclass(frozen=True)
class PlotRequest:
    kind: str
    inputs: tuple[str, ...]
    output: str
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise RecordError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise RecordError("at least one input file is required")


def _save(fig, output: str):
    Path(output).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)


def render(request: PlotRequest) -> str:
    """Render one figure; returns the output path."""
    handler = {
        "norm_decay": _render_norm_decay,
        "region_polar": _render_region_polar,
        "spectrum": _render_spectrum,
        "estimate_histogram": _render_estimate_histogram,
    }[request.kind]
    handler(request)
    return request.output


def _render_norm_decay(request: PlotRequest):
    fig, ax = plt.subplots(figsize=(6, 4))
    for path in request.inputs:
        records = read_trajectory(path)
        s = [r["s"] for r in records]
        g = [r["norms"]["combined_gevrey"] for r in records]
        theta = records[0]["theta"]
        ax.plot(s, g, label=f"theta = {theta:.3f}")
    ax.set_xlabel("arclength s")
    ax.set_ylabel("tracked Gevrey norm")
    ax.set_title("norm decay along complex-time rays")
    ax.legend(fontsize=8)
    _save(fig, request.output)


def _render_region_polar(request: PlotRequest):
    summary = read_summary(request.inputs[0])
    fig = plt.figure(figsize=(5, 5))
    ax = fig.add_subplot(projection="polar")
    thetas = [t["theta"] for t in summary["per_theta"]]
    radii = [t["s_empirical"] for t in summary["per_theta"]]
    circle = np.linspace(0.0, 2.0 * math.pi, 256)
    ax.plot(circle, [summary["s_certified"]] * len(circle), "-", label="certified radius")
    censored = [t.get("censored", False) for t in summary["per_theta"]]
    ax.plot(
        [th for th, c in zip(thetas, censored) if c],
        [r for r, c in zip(radii, censored) if c],
        "o",
        label="censored",
    )
    ax.plot(
        [th for th, c in zip(thetas, censored) if not c],
        [r for r, c in zip(radii, censored) if not c],
        "x",
        label="blow-up",
    )
    ax.set_title("certified vs empirical region")
    ax.legend(loc="lower left", fontsize=8)
    _save(fig, request.output)


def _render_spectrum(request: PlotRequest):
    r = float(request.options.get("r", 2.0))
    beta = float(request.options.get("beta", 0.0))
    fig, ax = plt.subplots(figsize=(6, 4))
    for path in request.inputs:
        d, n, cutoff, coeffs = read_gfld(path)
        freqs = np.fft.fftfreq(n, d=1.0 / n)
        mesh = np.meshgrid(*([freqs] * d), indexing="ij")
        kn = np.sqrt(sum(m**2 for m in mesh))
        amp2 = np.sum(np.abs(coeffs) ** 2, axis=0)
        shells = np.arange(1, cutoff + 1)
        energy = []
        for shell in shells:
            mask = (kn > shell - 0.5) & (kn <= shell + 0.5)
            weight = shell ** (2.0 * r) * math.exp(2.0 * beta * shell)
            energy.append(weight * float(np.sum(amp2[mask])))
        ax.semilogy(shells, np.maximum(energy, 1e-300), "o-", label=Path(path).stem)
    ax.set_xlabel("|k| shell")
    ax.set_ylabel("weighted shell energy")
    ax.set_title(f"weighted spectrum (r={r:g}, beta={beta:g})")
    ax.legend(fontsize=8)
    _save(fig, request.output)


def _render_estimate_histogram(request: PlotRequest):
    ratios = read_ratio_csv(request.inputs[0])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(ratios, bins=int(request.options.get("bins", 30)))
    c_emp = request.options.get("c_emp")
    if c_emp is None and len(request.inputs) > 1:
        c_emp = json.loads(Path(request.inputs[1]).read_text()).get("c_emp")
    if c_emp is not None:
        ax.axvline(float(c_emp), linestyle="--", label=f"C_emp = {float(c_emp):.4g}")
        ax.legend(fontsize=8)
    ax.set_xlabel("estimate ratio")
    ax.set_ylabel("count")
    ax.set_title("nonlinear-estimate ratio distribution")
    _save(fig, request.output)


# ---------------------------------------------------------------------------
# script entry points


def _run(kind: str, description: str, extra_opts=()):
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("inputs", nargs="+", help="input record files")
    ap.add_argument("-o", "--output", required=True, help="output image path")
    for name, kwargs in extra_opts:
        ap.add_argument(name, **kwargs)
    args = ap.parse_args()
    options = {
        k: v
        for k, v in vars(args).items()
        if k not in ("inputs", "output") and v is not None
    }
    try:
        out = render(
            PlotRequest(kind=kind, inputs=tuple(args.inputs), output=args.output, options=options)
        )
    except (RecordError, FileNotFoundError) as exc:
        raise SystemExit(f"error: {exc}")
    print(out)
    return 0


def main_norms():
    return _run("norm_decay", "Tracked-norm curves, one per ray JSONL file.")


def main_region():
    return _run("region_polar", "Certified circle vs empirical radii from a sweep summary.")


def main_spectrum():
    return _run(
        "spectrum",
        "Weighted shell spectrum from GFLD1 snapshots.",
        extra_opts=(
            ("--r", {"type": float, "default": 2.0}),
            ("--beta", {"type": float, "default": 0.0}),
        ),
    )


def main_estimates():
    return _run(
        "estimate_histogram",
        "Ratio histogram from an estimate CSV (optional C_emp JSON second input).",
        extra_opts=(("--bins", {"type": int, "default": 30}),),
    )
