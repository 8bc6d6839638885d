"""Gevrey, Wiener, and Sobolev norms on spectral fields.

The Gevrey norm with exponent r and radius beta is

    ||f||_beta = ( (2pi)^d sum_k |k|^{2r} e^{2 beta |k|} |fhat(k)|^2 )^{1/2},

summed over components.  All Sobolev norms are defined spectrally through the
same weight with beta = 0, which removes any equivalence constant.  Weights
with beta*|k| beyond ~300 are evaluated in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import WeightOverflowError
from .grid import GridSpec, SpectralField, wavenumber_norm
from .errors import RadiusExhaustedError

_LOG_DIRECT_LIMIT = 300.0
_LOG_DBL_MAX = math.log(np.finfo(np.float64).max)


@dataclass(frozen=True)
class GevreyParams:
    """Sobolev exponent, initial radius, shrink rate, and constant policy.

    `constant_policy` is either an explicit float for the generic constant C
    or the string "empirical", in which case `empirical_c` must carry the
    measured value before a certified radius can be formed.
    """

    r: float
    beta0: float
    delta: float | None = None
    constant_policy: float | str = 1.0
    empirical_c: float | None = None

    def __post_init__(self):
        if self.beta0 <= 0:
            raise ValueError(f"beta0 must be positive, got {self.beta0}")
        if self.delta is not None and self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if isinstance(self.constant_policy, str) and self.constant_policy != "empirical":
            raise ValueError(f"unknown constant policy {self.constant_policy!r}")

    def require_r(self, d: int):
        if self.r <= (d + 1) / 2:
            raise ValueError(f"need r > (d+1)/2 = {(d + 1) / 2}, got r={self.r}")

    def constant(self) -> float:
        if self.constant_policy == "empirical":
            if self.empirical_c is None:
                raise ValueError("empirical constant policy selected but no value measured")
            return float(self.empirical_c)
        return float(self.constant_policy)

    def replace(self, **kw) -> "GevreyParams":
        from dataclasses import replace

        return replace(self, **kw)


@dataclass(frozen=True)
class NormReport:
    l2: float
    sobolev_r: float
    gevrey: float
    gevrey_quarter: float
    wiener: float
    beta_effective: float

    def to_dict(self) -> dict:
        return {
            "l2": self.l2,
            "sobolev_r": self.sobolev_r,
            "gevrey": self.gevrey,
            "gevrey_quarter": self.gevrey_quarter,
            "wiener": self.wiener,
            "beta_effective": self.beta_effective,
        }


def _weighted_l2(f: SpectralField, order: float, beta: float) -> float:
    """|| |k|^order e^{beta |k|} f ||, stable against weight overflow."""
    kn = wavenumber_norm(f.grid)
    amp2 = np.sum(np.abs(f.coeffs) ** 2, axis=0)
    support = amp2 > 0.0
    if order != 0:
        support &= kn > 0.0
    if not np.any(support):
        return 0.0
    kvals = kn[support]
    avals = amp2[support]
    top = beta * float(np.max(kvals))
    prefac = f.grid.d * math.log(2.0 * math.pi)
    if top <= _LOG_DIRECT_LIMIT:
        weight = np.exp(2.0 * beta * kvals)
        if order != 0:
            weight = weight * kvals ** (2.0 * order)
        total = float(np.sum(avals * weight))
        return math.sqrt((2.0 * math.pi) ** f.grid.d * total)
    # log-domain accumulation
    with np.errstate(divide="ignore"):
        logk = np.where(kvals > 0, np.log(np.where(kvals > 0, kvals, 1.0)), 0.0)
    log_terms = 2.0 * beta * kvals + 2.0 * order * logk + np.log(avals)
    m = float(np.max(log_terms))
    log_total = m + math.log(float(np.sum(np.exp(log_terms - m))))
    log_norm = 0.5 * (log_total + prefac)
    if log_norm > _LOG_DBL_MAX:
        k_bad = float(kvals[int(np.argmax(log_terms))])
        raise WeightOverflowError(
            f"Gevrey weight overflows the double range at |k|={k_bad:g} "
            f"(beta={beta:g}, order={order:g})",
            k_magnitude=k_bad,
        )
    return math.exp(log_norm)


def gevrey_norm(f: SpectralField, r: float, beta: float) -> float:
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    return _weighted_l2(f, r, beta)


def gevrey_quarter_norm(f: SpectralField, r: float, beta: float) -> float:
    """||A^{1/4} f||_beta, the half-derivative-boosted Gevrey norm."""
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    return _weighted_l2(f, r + 0.5, beta)


def sobolev_norm(f: SpectralField, s: float) -> float:
    return _weighted_l2(f, s, 0.0)


def l2_norm(f: SpectralField) -> float:
    return _weighted_l2(f, 0.0, 0.0)


def wiener_norm(f: SpectralField) -> float:
    """sum_k |fhat(k)| with the Euclidean length over components."""
    return float(np.sum(np.sqrt(np.sum(np.abs(f.coeffs) ** 2, axis=0))))


def weighted_wiener_norm(f: SpectralField, beta: float, half_powers: int = 1) -> float:
    """sum_k |k|^{half_powers/2} e^{beta |k|} |fhat(k)|."""
    kn = wavenumber_norm(f.grid)
    amp = np.sqrt(np.sum(np.abs(f.coeffs) ** 2, axis=0))
    weight = np.where(kn > 0, np.where(kn > 0, kn, 1.0) ** (0.5 * half_powers), 0.0)
    if half_powers == 0:
        weight = np.ones_like(kn)
    return float(np.sum(amp * weight * np.exp(beta * kn)))


def cwien(r: float, d: int) -> float:
    """Embedding constant (1/(pi 2^{d-1})) (2r-d)/(2r-1-d), for r > (d+1)/2."""
    if r <= (d + 1) / 2:
        raise ValueError(f"cwien needs r > (d+1)/2 = {(d + 1) / 2}, got r={r}")
    return (1.0 / (math.pi * 2.0 ** (d - 1))) * (2.0 * r - d) / (2.0 * r - 1.0 - d)


@dataclass(frozen=True)
class EmbeddingReport:
    lhs: float
    rhs: float
    holds: bool
    margin: float


def embedding_check(f: SpectralField, r: float, beta: float) -> EmbeddingReport:
    """Check ||A^{1/4} e^{beta A^{1/2}} f||_W <= C_W(r) ||f||_beta."""
    lhs = weighted_wiener_norm(f, beta, half_powers=1)
    rhs = cwien(r, f.grid.d) * gevrey_norm(f, r, beta)
    return EmbeddingReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs * (1 + 1e-12), margin=rhs - lhs)


@dataclass(frozen=True)
class DecayEntry:
    n: int
    lhs: float
    bound: float
    ratio: float


def derivative_decay_check(f: SpectralField, r: float, beta: float, n_max: int) -> list[DecayEntry]:
    """Check ||f||_{H^{r+n}} <= (n!/beta^n) ||f||_beta for n = 1..n_max."""
    if beta <= 0:
        raise ValueError("derivative decay needs beta > 0")
    if n_max > 6:
        raise ValueError("n_max capped at 6 (factorial growth)")
    base = gevrey_norm(f, r, beta)
    out = []
    for n in range(1, n_max + 1):
        lhs = sobolev_norm(f, r + n)
        bound = math.factorial(n) / beta**n * base
        ratio = lhs / bound if bound > 0 else 0.0
        out.append(DecayEntry(n=n, lhs=lhs, bound=bound, ratio=ratio))
    return out


def effective_beta(p: GevreyParams, s: float) -> float:
    delta = p.delta or 0.0
    if s < 0:
        raise ValueError("arclength must be >= 0")
    beta = p.beta0 - delta * s
    if beta <= 0:
        raise RadiusExhaustedError(
            f"analyticity radius exhausted: beta0 - delta*s = {beta:g} at s={s:g}"
        )
    return beta


def time_varying_norm(f: SpectralField, p: GevreyParams, s: float) -> NormReport:
    """Full norm report at the shrunk radius beta0 - delta*s."""
    beta = effective_beta(p, s)
    return NormReport(
        l2=l2_norm(f),
        sobolev_r=sobolev_norm(f, p.r),
        gevrey=gevrey_norm(f, p.r, beta),
        gevrey_quarter=gevrey_quarter_norm(f, p.r, beta),
        wiener=wiener_norm(f),
        beta_effective=beta,
    )
