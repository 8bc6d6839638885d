"""Numerical verification of the a-priori inequalities, with measured constants.

Each `verify_*` routine evaluates the weighted nonlinear pairing on the left
through the direct-convolution oracle (no FFTs), forms the structural product
of norms on the right without any constant, and reports the ratio.  The
maximum ratio over an ensemble, padded by a safety factor, instantiates the
otherwise unspecified constant in the bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .grid import GridSpec, SpectralField, bilinear_advect, l2_inner, wavenumber_norm
from .models import AnalyticSeries, ModelState, riesz_velocity, rhs
from .norms import cwien, gevrey_norm, gevrey_quarter_norm
from . import oracle

SAFETY_FACTOR = 1.1
DEGENERATE_LHS = 1e-300


@dataclass(frozen=True)
class EstimateReport:
    lhs: float
    rhs_without_c: float
    ratio: float
    lhs_fft: float | None = None  # pseudospectral cross-check of the oracle pairing
    meta: dict = field(default_factory=dict)


def _weight_pairing_fft(bterm: SpectralField, u: SpectralField, r: float, beta: float) -> complex:
    """Pseudospectral-path pairing <bterm, |k|^{2r} e^{2 beta |k|} u>."""
    kn = wavenumber_norm(u.grid)
    weight = np.where(kn > 0, np.where(kn > 0, kn, 1.0) ** (2.0 * r), 0.0) * np.exp(
        2.0 * beta * kn
    )
    weighted = u.with_coeffs(u.coeffs * weight)
    return l2_inner(bterm, weighted)


def verify_euler_estimate(u: SpectralField, r: float, beta: float) -> EstimateReport:
    """|<B(u,u), A^r e^{2 beta A^{1/2}} u>| against 2^r C_W ||u|| ||A^{1/4}u||^2."""
    grid = u.grid
    K = grid.cutoff
    um = oracle.gather_modes(u, K)
    bm = oracle.convolve_advection(um, um, grid.d, K, project=True)
    lhs = abs(oracle.weighted_pairing(bm, um, grid.d, K, r, beta))
    bfield = bilinear_advect(u, u, project=True)
    lhs_fft = abs(_weight_pairing_fft(bfield, u, r, beta))
    rhs_v = (
        2.0**r * cwien(r, grid.d) * gevrey_norm(u, r, beta) * gevrey_quarter_norm(u, r, beta) ** 2
    )
    return EstimateReport(
        lhs=lhs,
        rhs_without_c=rhs_v,
        ratio=lhs / rhs_v if rhs_v > 0 else 0.0,
        lhs_fft=lhs_fft,
    )


def verify_sqg_estimate(eta: SpectralField, r: float, beta: float) -> EstimateReport:
    """Transport pairing with the Riesz velocity against 2^r C_W ||eta|| ||L^{1/2}eta||^2."""
    grid = eta.grid
    if grid.d != 2:
        raise ConfigurationError("the transport estimate is two-dimensional")
    K = grid.cutoff
    em = oracle.gather_modes(eta, K)
    um = oracle.riesz_velocity_modes(em, K)
    bm = oracle.convolve_advection(um, em, grid.d, K, project=False)
    lhs = abs(oracle.weighted_pairing(bm, em, grid.d, K, r, beta))
    u = riesz_velocity(eta)
    bfield = bilinear_advect(u, eta, project=False)
    lhs_fft = abs(_weight_pairing_fft(bfield, eta, r, beta))
    rhs_v = (
        2.0**r
        * cwien(r, grid.d)
        * gevrey_norm(eta, r, beta)
        * gevrey_quarter_norm(eta, r, beta) ** 2
    )
    return EstimateReport(
        lhs=lhs,
        rhs_without_c=rhs_v,
        ratio=lhs / rhs_v if rhs_v > 0 else 0.0,
        lhs_fft=lhs_fft,
    )


def verify_pair_advection_estimate(
    a: SpectralField, b: SpectralField, r: float, beta: float
) -> EstimateReport:
    """Coupled two-field form used by the Elsasser and buoyancy systems.

    LHS = |<B(b,a), W a>| + |<B(a,b), W b>| with the joint Gevrey norm of the
    pair on the right: 2^r C_W ||(a,b)|| (||A^{1/4}a||^2 + ||A^{1/4}b||^2).
    """
    grid = a.grid
    K = grid.cutoff
    am, bm_ = oracle.gather_modes(a, K), oracle.gather_modes(b, K)
    adv_a = oracle.convolve_advection(bm_, am, grid.d, K, project=True)
    adv_b = oracle.convolve_advection(am, bm_, grid.d, K, project=True)
    lhs = abs(oracle.weighted_pairing(adv_a, am, grid.d, K, r, beta)) + abs(
        oracle.weighted_pairing(adv_b, bm_, grid.d, K, r, beta)
    )
    lhs_fft = abs(_weight_pairing_fft(bilinear_advect(b, a, True), a, r, beta)) + abs(
        _weight_pairing_fft(bilinear_advect(a, b, True), b, r, beta)
    )
    pair_norm = math.sqrt(gevrey_norm(a, r, beta) ** 2 + gevrey_norm(b, r, beta) ** 2)
    quarters = gevrey_quarter_norm(a, r, beta) ** 2 + gevrey_quarter_norm(b, r, beta) ** 2
    rhs_v = 2.0**r * cwien(r, grid.d) * pair_norm * quarters
    return EstimateReport(
        lhs=lhs,
        rhs_without_c=rhs_v,
        ratio=lhs / rhs_v if rhs_v > 0 else 0.0,
        lhs_fft=lhs_fft,
    )


def verify_analytic_estimate(
    u: SpectralField,
    series: AnalyticSeries,
    r: float,
    beta: float,
    multiplier_modes=None,
) -> tuple[EstimateReport, list[EstimateReport]]:
    """Aggregate and per-power bounds for the analytic nonlinearity pairing.

    Per power n the bound is n^{r+3/2} C_W^{n-1} ||A^{1/4}u||^2 ||u||^{n-1};
    the aggregate compares |<T F(u), W u>| against Ftilde(||u||) ||A^{1/4}u||^2.
    The powers u^n are exact convolutions over the growing support, evaluated
    without FFTs.
    """
    from .models import ftilde_eval

    grid = u.grid
    d, K = grid.d, grid.cutoff
    um = oracle.gather_modes(u, K)
    modes = oracle.mode_list(d, K).astype(np.float64)
    if multiplier_modes is None:
        multiplier_modes = 1j * modes[:, 0]  # d/dx_1, the default first-order symbol
    gnorm = gevrey_norm(u, r, beta)
    quarter2 = gevrey_quarter_norm(u, r, beta) ** 2
    cw = cwien(r, d)

    per_term = []
    agg_pairing = 0.0 + 0.0j
    acc, acc_list = um, oracle.mode_list(d, K)
    for n, a_n in enumerate(series.coeffs, start=1):
        if n > 1:
            acc, acc_list = oracle.convolve_product(acc, acc_list, um, oracle.mode_list(d, K), d, K)
        term_modes = multiplier_modes * acc[0]
        pairing = oracle.weighted_pairing(term_modes[None], um, d, K, r, beta)
        bound = n ** (r + 1.5) * cw ** (n - 1) * quarter2 * gnorm ** (n - 1)
        per_term.append(
            EstimateReport(
                lhs=abs(pairing),
                rhs_without_c=bound,
                ratio=abs(pairing) / bound if bound > 0 else 0.0,
                meta={"n": n},
            )
        )
        agg_pairing += a_n * pairing
    agg_bound = ftilde_eval(series, r, d, gnorm).value * quarter2
    agg = EstimateReport(
        lhs=abs(agg_pairing),
        rhs_without_c=agg_bound,
        ratio=abs(agg_pairing) / agg_bound if agg_bound > 0 else 0.0,
    )
    return agg, per_term


# ---------------------------------------------------------------------------
# wavenumber lemmas


@dataclass(frozen=True)
class LemmaReport:
    checked: int
    violations: int
    worst_margin: float


def verify_wavenumber_lemmas(
    shell_max: int = 16, r: float = 2.0, n_tuples: int = 200, seed: int = 0
) -> dict[str, LemmaReport]:
    """Exhaustive lattice checks of the elementary inequalities.

    Over all nonzero 2D modes h, j with |h|, |j| <= shell_max and k = h + j
    nonzero: |k|^r <= 2^{r-1}(|h|^r + |j|^r) and |j| <= 2 |h| |k|.  Plus the
    power-mean bound (x1+...+xn)^r <= n^r (x1^r+...+xn^r) on random tuples.
    """
    rng = np.arange(-shell_max, shell_max + 1)
    hx, hy = np.meshgrid(rng, rng, indexing="ij")
    modes = np.stack([hx.ravel(), hy.ravel()], axis=1)
    modes = modes[np.any(modes != 0, axis=1)]
    normh = np.sqrt(np.sum(modes**2, axis=1).astype(np.float64))

    hn = normh[:, None]
    jn = normh[None, :]
    dots = modes @ modes.T
    kn2 = hn**2 + 2.0 * dots + jn**2
    nonzero_k = kn2 > 0.5
    kn = np.sqrt(np.where(nonzero_k, kn2, 1.0))

    lhs_split = kn**r
    rhs_split = 2.0 ** (r - 1.0) * (hn**r + jn**r)
    split_bad = nonzero_k & (lhs_split > rhs_split * (1 + 1e-12))
    split_margin = float(np.min(np.where(nonzero_k, rhs_split - lhs_split, np.inf)))

    lhs_tri = jn * np.ones_like(kn)
    rhs_tri = 2.0 * hn * kn
    tri_bad = nonzero_k & (lhs_tri > rhs_tri * (1 + 1e-12))
    tri_margin = float(np.min(np.where(nonzero_k, rhs_tri - lhs_tri, np.inf)))

    checked = int(np.sum(nonzero_k))
    out = {
        "split": LemmaReport(checked, int(np.sum(split_bad)), split_margin),
        "triangle_product": LemmaReport(checked, int(np.sum(tri_bad)), tri_margin),
    }

    gen = np.random.default_rng(seed)
    bad = 0
    worst = math.inf
    for _ in range(n_tuples):
        n = int(gen.integers(2, 7))
        x = gen.uniform(0.0, 10.0, n)
        lhs = float(np.sum(x)) ** r
        rhs = float(n**r * np.sum(x**r))
        worst = min(worst, rhs - lhs)
        if lhs > rhs * (1 + 1e-12):
            bad += 1
    out["power_mean"] = LemmaReport(n_tuples, bad, worst)
    return out


# ---------------------------------------------------------------------------
# empirical constants


@dataclass
class ConstantMeasurement:
    model: str
    c_emp: float
    max_ratio: float
    ratios: list[float]
    seed: int
    degenerate: bool
    safety_factor: float = SAFETY_FACTOR


def _complexified_field(grid: GridSpec, components: int, seed: int, beta_decay: float):
    from .models import random_gevrey_field

    return random_gevrey_field(
        grid, components, seed, beta_decay, hermitian=False, div_free=components == grid.d
    )


def sample_ratio(
    model: str,
    grid: GridSpec,
    r: float,
    beta: float,
    seed: int,
    beta_decay: float = 1.0,
    series: AnalyticSeries | None = None,
) -> float:
    if model == "euler":
        u = _complexified_field(grid, grid.d, seed, beta_decay)
        return verify_euler_estimate(u, r, beta).ratio
    if model == "sqg":
        eta = _complexified_field(grid, 1, seed, beta_decay)
        return verify_sqg_estimate(eta, r, beta).ratio
    if model in ("mhd", "boussinesq"):
        a = _complexified_field(grid, grid.d, seed, beta_decay)
        b = _complexified_field(grid, grid.d, seed + 104729, beta_decay)
        return verify_pair_advection_estimate(a, b, r, beta).ratio
    if model == "analytic":
        u = _complexified_field(grid, 1, seed, beta_decay)
        agg, _ = verify_analytic_estimate(u, series or AnalyticSeries((0.0, 1.0)), r, beta)
        return agg.ratio
    raise ConfigurationError(f"no estimate defined for model {model!r}")


def empirical_constant(
    model: str,
    grid: GridSpec,
    r: float,
    beta: float,
    n_samples: int = 100,
    seed: int = 0,
    beta_decay: float = 1.0,
    series: AnalyticSeries | None = None,
) -> ConstantMeasurement:
    """Measured instantiation of the generic constant: max ensemble ratio x 1.1."""
    if n_samples < 100:
        raise ConfigurationError("ensemble must have at least 100 members")
    ratios = [
        sample_ratio(model, grid, r, beta, seed * 1_000_003 + i, beta_decay, series)
        for i in range(n_samples)
    ]
    max_ratio = max(ratios)
    degenerate = max_ratio <= DEGENERATE_LHS
    c_emp = 1.0 if degenerate else SAFETY_FACTOR * max_ratio
    return ConstantMeasurement(
        model=model,
        c_emp=c_emp,
        max_ratio=max_ratio,
        ratios=ratios,
        seed=seed,
        degenerate=degenerate,
    )
