"""Brute-force convolution evaluation of the nonlinear terms.

Everything here works on explicit lists of integer modes with direct
O(P^2) summation and no FFTs, so it is an independent check on the
pseudospectral path in `grid`.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .errors import ConfigurationError
from .grid import GridSpec, SpectralField


@functools.lru_cache(maxsize=None)
def mode_list(d: int, K: int) -> np.ndarray:
    """All integer modes with |k| <= K, shape (P, d), lexicographic order."""
    rng = range(-K, K + 1)
    modes = [k for k in itertools.product(rng, repeat=d) if sum(c * c for c in k) <= K * K]
    arr = np.array(modes, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@functools.lru_cache(maxsize=None)
def _index_table(d: int, K: int) -> np.ndarray:
    """Dense lookup (2K+1)^d -> position in `mode_list`, -1 outside the ball."""
    modes = mode_list(d, K)
    table = -np.ones((2 * K + 1,) * d, dtype=np.int64)
    table[tuple((modes + K).T)] = np.arange(len(modes))
    return table


def gather_modes(f: SpectralField, K: int | None = None) -> np.ndarray:
    """Coefficients at the listed modes, shape (components, P)."""
    K = f.grid.cutoff if K is None else K
    modes = mode_list(f.grid.d, K)
    idx = tuple((modes % f.grid.n).T)
    return f.coeffs[(slice(None),) + idx]


def scatter_modes(values: np.ndarray, grid: GridSpec, K: int | None = None, **flags) -> SpectralField:
    K = grid.cutoff if K is None else K
    modes = mode_list(grid.d, K)
    coeffs = np.zeros((values.shape[0],) + grid.shape, dtype=np.complex128)
    coeffs[(slice(None),) + tuple((modes % grid.n).T)] = values
    flags.setdefault("validate", False)
    return SpectralField(grid, coeffs, **flags)


def convolve_advection(
    u_modes: np.ndarray, v_modes: np.ndarray, d: int, K: int, project: bool = True
) -> np.ndarray:
    """Direct-sum coefficients of u.grad(v) on |k| <= K.

    what_m(k) = sum_{h+j=k} sum_i uhat_i(h) (i j_i) vhat_m(j), optionally
    followed by the Leray projection.  Inputs are (c, P) arrays over
    `mode_list(d, K)`.
    """
    modes = mode_list(d, K)
    table = _index_table(d, K)
    ncomp = v_modes.shape[0]
    out = np.zeros((ncomp, len(modes)), dtype=np.complex128)
    for a in range(len(modes)):
        j = modes[a]
        # uhat(h) . (i j) for every h, vectorized over the h list
        dot = np.sum(u_modes * (1j * j.astype(np.float64))[:, None], axis=0)
        targets = modes + j
        inside = np.sum(targets * targets, axis=1) <= K * K
        tidx = table[tuple((targets[inside] + K).T)]
        contrib = dot[inside]
        for m in range(ncomp):
            np.add.at(out[m], tidx, contrib * v_modes[m, a])
    # mean mode is dropped from the truncated dynamics
    zero_pos = int(np.flatnonzero(np.all(modes == 0, axis=1))[0])
    out[:, zero_pos] = 0.0
    if project:
        out = leray_modes(out, d, K)
    return out


def convolve_product(a_modes, a_list, b_modes, b_list, d: int, K_out: int):
    """Exact convolution of two mode sets, kept on |k| <= K_out.

    Returns (values, mode array).  Used for iterated powers u^n where the
    intermediate support grows beyond the Galerkin ball.
    """
    out_list = mode_list(d, K_out)
    table = _index_table(d, K_out)
    out = np.zeros((a_modes.shape[0], len(out_list)), dtype=np.complex128)
    for idx in range(len(b_list)):
        targets = a_list + b_list[idx]
        inside = np.sum(targets * targets, axis=1) <= K_out * K_out
        tidx = table[tuple((targets[inside] + K_out).T)]
        for m in range(a_modes.shape[0]):
            np.add.at(out[m], tidx, a_modes[m, inside] * b_modes[m, idx])
    return out, out_list


def power_modes(u_modes: np.ndarray, d: int, K: int, n: int, K_pair: int):
    """Exact coefficients of u^n on |k| <= K_pair, by repeated convolution."""
    if n < 1:
        raise ConfigurationError("power must be >= 1")
    base_list = mode_list(d, K)
    acc, acc_list = u_modes, base_list
    for _ in range(n - 1):
        acc, acc_list = convolve_product(acc, acc_list, u_modes, base_list, d, K_pair)
    return acc, acc_list


def leray_modes(values: np.ndarray, d: int, K: int) -> np.ndarray:
    modes = mode_list(d, K).astype(np.float64)
    ksq = np.sum(modes * modes, axis=1)
    safe = np.where(ksq > 0, ksq, 1.0)
    kdot = np.sum(modes.T * values, axis=0)
    return values - modes.T * (kdot / safe)


def riesz_velocity_modes(eta_modes: np.ndarray, K: int) -> np.ndarray:
    """2D velocity (-R2 eta, R1 eta) from a scalar, on the mode list."""
    modes = mode_list(2, K).astype(np.float64)
    kn = np.sqrt(np.sum(modes * modes, axis=1))
    safe = np.where(kn > 0, kn, 1.0)
    u1 = -1j * modes[:, 1] / safe * eta_modes[0]
    u2 = 1j * modes[:, 0] / safe * eta_modes[0]
    return np.stack([u1, u2])


def weighted_pairing(f_modes: np.ndarray, g_modes: np.ndarray, d: int, K: int, r: float, beta: float) -> complex:
    """(2pi)^d sum_k fhat(k) . conj(|k|^{2r} e^{2 beta |k|} ghat(k))."""
    modes = mode_list(d, K).astype(np.float64)
    kn = np.sqrt(np.sum(modes * modes, axis=1))
    weight = np.where(kn > 0, np.where(kn > 0, kn, 1.0) ** (2.0 * r), 0.0) * np.exp(
        2.0 * beta * kn
    )
    return complex((2.0 * np.pi) ** d * np.sum(f_modes * np.conj(g_modes) * weight))


def advect_field(u: SpectralField, v: SpectralField, project: bool = True) -> SpectralField:
    """Field-level wrapper around `convolve_advection`."""
    if u.grid != v.grid:
        raise ConfigurationError("advection operands live on different grids")
    K = u.grid.cutoff
    out = convolve_advection(
        gather_modes(u, K), gather_modes(v, K), u.grid.d, K, project=project
    )
    return scatter_modes(out, u.grid, K, mean_free=True, div_free=project)
