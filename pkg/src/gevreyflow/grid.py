"""Truncated Fourier representation of periodic fields on [0, 2pi]^d.

Fields live on an n^d lattice with integer wavenumbers in [-n/2, n/2-1] per
axis and a radial Galerkin cutoff |k| <= K.  The transform convention is

    u(x) = sum_k uhat(k) exp(i k.x),    ||u||^2 = (2pi)^d sum_k |uhat(k)|^2,

so `to_spectral` divides the forward FFT by n^d and `to_physical` multiplies
the inverse FFT by n^d.  Quadratic products are evaluated on a zero-padded
lattice of at least 3K+1 points per axis, which makes the truncated
convolution exact rather than 2/3-rule approximate.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, StateError, WeightOverflowError

#: largest exponent handed to exp() before we refuse to evaluate a weight
_EXP_LIMIT = 700.0

DIV_FREE_TOL = 1e-12
HERMITIAN_TOL = 1e-14


@dataclass(frozen=True)
class GridSpec:
    """Periodic lattice: dimension, modes per axis, and radial cutoff."""

    d: int
    n: int
    cutoff: int

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ConfigurationError(f"dimension must be 2 or 3, got {self.d}")
        if self.n < 8 or self.n % 2 != 0:
            raise ConfigurationError(f"modes per axis must be even and >= 8, got {self.n}")
        if not 1 <= self.cutoff <= self.n // 2 - 1:
            raise ConfigurationError(
                f"cutoff must satisfy 1 <= K <= n/2-1, got K={self.cutoff} with n={self.n}"
            )

    @property
    def shape(self):
        return (self.n,) * self.d


@functools.lru_cache(maxsize=None)
def wavenumber_mesh(grid: GridSpec) -> np.ndarray:
    """Integer wavenumbers, shape (d, n, ..., n), FFT layout."""
    axes = [np.fft.fftfreq(grid.n, 1.0 / grid.n).astype(np.int64) for _ in range(grid.d)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"))
    mesh.setflags(write=False)
    return mesh


@functools.lru_cache(maxsize=None)
def wavenumber_sq(grid: GridSpec) -> np.ndarray:
    ksq = np.sum(wavenumber_mesh(grid).astype(np.float64) ** 2, axis=0)
    ksq.setflags(write=False)
    return ksq


@functools.lru_cache(maxsize=None)
def wavenumber_norm(grid: GridSpec) -> np.ndarray:
    kn = np.sqrt(wavenumber_sq(grid))
    kn.setflags(write=False)
    return kn


@functools.lru_cache(maxsize=None)
def cutoff_mask(grid: GridSpec) -> np.ndarray:
    """Boolean mask of retained modes |k| <= K (integer-exact comparison)."""
    mesh = wavenumber_mesh(grid)
    ksq_int = np.sum(mesh * mesh, axis=0)
    mask = ksq_int <= grid.cutoff * grid.cutoff
    mask.setflags(write=False)
    return mask


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Immutable truncated Fourier coefficient array.

    `coeffs` has shape (components, n, ..., n).  A complexified field is one
    unconstrained complex array with `hermitian=False`; real-valued fields set
    `hermitian=True` and satisfy uhat(-k) = conj(uhat(k)).
    """

    grid: GridSpec
    coeffs: np.ndarray
    mean_free: bool = True
    div_free: bool = False
    hermitian: bool = False
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        coeffs = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if coeffs.ndim == self.grid.d:
            coeffs = coeffs[None]
        if coeffs.shape != (coeffs.shape[0],) + self.grid.shape:
            raise ConfigurationError(
                f"coefficient shape {coeffs.shape} does not match grid {self.grid.shape}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        if self.validate:
            self.check_invariants()

    @property
    def components(self) -> int:
        return self.coeffs.shape[0]

    @property
    def is_vector(self) -> bool:
        return self.components == self.grid.d

    def check_invariants(self):
        mask = cutoff_mask(self.grid)
        outside = self.coeffs[:, ~mask]
        if outside.size and np.max(np.abs(outside)) != 0.0:
            raise StateError("coefficients present beyond the Galerkin cutoff")
        zero = (0,) * self.grid.d
        if self.mean_free and np.any(self.coeffs[(slice(None),) + zero] != 0.0):
            raise StateError("mean_free field has a nonzero k=0 coefficient")
        if self.div_free:
            err = divergence_defect(self)
            if err > DIV_FREE_TOL:
                raise StateError(f"div_free field has relative divergence {err:.3e}")
        if self.hermitian:
            err = hermitian_defect(self)
            if err > HERMITIAN_TOL:
                raise StateError(f"hermitian field has symmetry defect {err:.3e}")

    def with_coeffs(self, coeffs, **flags) -> "SpectralField":
        kw = dict(
            mean_free=self.mean_free,
            div_free=self.div_free,
            hermitian=self.hermitian,
            validate=False,
        )
        kw.update(flags)
        return SpectralField(self.grid, coeffs, **kw)


def _conj_reflect(coeffs: np.ndarray, d: int) -> np.ndarray:
    """coeffs evaluated at -k, i.e. index-reversed on every spatial axis."""
    out = coeffs
    for ax in range(1, d + 1):
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


def hermitian_defect(f: SpectralField) -> float:
    return float(np.max(np.abs(_conj_reflect(f.coeffs, f.grid.d) - np.conj(f.coeffs))))


def divergence_defect(f: SpectralField) -> float:
    """max_k |k.uhat(k)| / max_k |k||uhat(k)|, zero for the zero field."""
    if not f.is_vector:
        raise ConfigurationError("divergence defined for vector fields only")
    mesh = wavenumber_mesh(f.grid)
    div = np.sum(mesh * f.coeffs, axis=0)
    scale = np.max(wavenumber_norm(f.grid) * np.sqrt(np.sum(np.abs(f.coeffs) ** 2, axis=0)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(div)) / scale)


# ---------------------------------------------------------------------------
# transforms


def to_physical(f: SpectralField) -> np.ndarray:
    """Sample u(x) = sum_k uhat(k) e^{ik.x} on the n^d lattice (complex array)."""
    axes = tuple(range(1, f.grid.d + 1))
    return np.fft.ifftn(f.coeffs, axes=axes) * float(f.grid.n**f.grid.d)


def to_spectral(values: np.ndarray, grid: GridSpec, **flags) -> SpectralField:
    """Inverse of `to_physical`; the result is truncated to |k| <= K."""
    values = np.asarray(values, dtype=np.complex128)
    if values.ndim == grid.d:
        values = values[None]
    if values.shape[1:] != grid.shape:
        raise ConfigurationError(
            f"sample array shape {values.shape} does not match grid {grid.shape}"
        )
    axes = tuple(range(1, grid.d + 1))
    coeffs = np.fft.fftn(values, axes=axes) / float(grid.n**grid.d)
    coeffs[:, ~cutoff_mask(grid)] = 0.0
    flags.setdefault("mean_free", False)
    return SpectralField(grid, coeffs, validate=False, **flags)


# ---------------------------------------------------------------------------
# multipliers


@dataclass(frozen=True, eq=False)
class MultiplierSpec:
    """Fourier multiplier m(k): fractional Laplacian powers, Gevrey weights,
    Riesz transforms, partial derivatives, or a custom symbol table."""

    kind: str
    power: float | None = None  # a_half_power exponent s
    beta: float | None = None  # exp_gevrey rate
    axis: int | None = None  # riesz / partial component (0-based)
    table: np.ndarray | None = None  # custom symbol on the full lattice

    KINDS = ("a_half_power", "exp_gevrey", "riesz", "partial", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigurationError(f"unknown multiplier kind {self.kind!r}")
        if self.kind == "a_half_power" and self.power is None:
            raise ConfigurationError("a_half_power needs an exponent")
        if self.kind == "exp_gevrey" and (self.beta is None or self.beta < 0):
            raise ConfigurationError("exp_gevrey needs beta >= 0")
        if self.kind in ("riesz", "partial") and self.axis is None:
            raise ConfigurationError(f"{self.kind} needs an axis")

    def symbol(self, grid: GridSpec) -> np.ndarray:
        kn = wavenumber_norm(grid)
        mesh = wavenumber_mesh(grid)
        zero = (0,) * grid.d
        if self.kind == "a_half_power":
            with np.errstate(divide="ignore"):
                sym = np.where(kn > 0, kn, 1.0) ** self.power
            sym[zero] = 0.0 if self.power != 0 else 1.0
            return sym.astype(np.complex128)
        if self.kind == "exp_gevrey":
            top = self.beta * grid.cutoff
            if top > _EXP_LIMIT:
                raise WeightOverflowError(
                    f"exp_gevrey weight exp({top:.1f}) overflows at |k|={grid.cutoff}",
                    k_magnitude=float(grid.cutoff),
                )
            return np.exp(self.beta * kn).astype(np.complex128)
        if self.kind == "riesz":
            safe = np.where(kn > 0, kn, 1.0)
            sym = 1j * mesh[self.axis] / safe
            sym[zero] = 0.0
            return sym
        if self.kind == "partial":
            return (1j * mesh[self.axis]).astype(np.complex128)
        table = np.asarray(self.table, dtype=np.complex128)
        if table.shape != grid.shape:
            raise ConfigurationError("custom symbol table does not match the grid")
        if table[zero] != 0.0:
            raise ConfigurationError("custom multiplier must have m(0)=0")
        return table

    @property
    def singular_at_zero(self) -> bool:
        return self.kind == "riesz" or (self.kind == "a_half_power" and self.power < 0)


def apply_multiplier(f: SpectralField, m: MultiplierSpec) -> SpectralField:
    if m.kind == "riesz" and not f.mean_free:
        raise StateError("Riesz transform requires a mean-free field")
    coeffs = f.coeffs * m.symbol(f.grid)
    hermitian = f.hermitian and m.kind in ("a_half_power", "exp_gevrey", "riesz", "partial")
    mean_free = f.mean_free or m.singular_at_zero or m.kind in ("partial", "custom")
    return SpectralField(
        f.grid, coeffs, mean_free=mean_free, div_free=False, hermitian=hermitian, validate=False
    )


def leray_project(u: SpectralField) -> SpectralField:
    """Remove the gradient part: uhat(k) <- uhat(k) - (k.uhat) k / |k|^2."""
    if not u.is_vector:
        raise TypeError("Leray projection acts on vector fields")
    mesh = wavenumber_mesh(u.grid).astype(np.float64)
    ksq = wavenumber_sq(u.grid)
    safe = np.where(ksq > 0, ksq, 1.0)
    kdotu = np.sum(mesh * u.coeffs, axis=0)
    coeffs = u.coeffs - mesh * (kdotu / safe)
    coeffs[(slice(None),) + (0,) * u.grid.d] = 0.0
    return SpectralField(
        u.grid, coeffs, mean_free=True, div_free=True, hermitian=u.hermitian, validate=False
    )


def galerkin_truncate(f: SpectralField, K: int) -> SpectralField:
    """Zero every coefficient with |k| > K.  Identity when K >= grid cutoff."""
    if K >= f.grid.cutoff:
        return f
    mesh = wavenumber_mesh(f.grid)
    keep = np.sum(mesh * mesh, axis=0) <= K * K
    coeffs = np.where(keep, f.coeffs, 0.0)
    return f.with_coeffs(coeffs)


def zero_mean(f: SpectralField) -> SpectralField:
    coeffs = f.coeffs.copy()
    coeffs[(slice(None),) + (0,) * f.grid.d] = 0.0
    return f.with_coeffs(coeffs, mean_free=True)


def symmetrize_hermitian(f: SpectralField) -> SpectralField:
    coeffs = 0.5 * (f.coeffs + np.conj(_conj_reflect(f.coeffs, f.grid.d)))
    return f.with_coeffs(coeffs, hermitian=True)


# ---------------------------------------------------------------------------
# exact quadratic products via zero padding


@functools.lru_cache(maxsize=None)
def padded_grid(grid: GridSpec) -> GridSpec:
    """Lattice large enough that products of cutoff-K fields are alias-free."""
    m = max(grid.n, 3 * grid.cutoff + 1)
    if m % 2:
        m += 1
    if m == grid.n:
        return grid
    return GridSpec(grid.d, m, grid.cutoff)


@functools.lru_cache(maxsize=None)
def _axis_map(n_src: int, n_dst: int) -> np.ndarray:
    w = np.fft.fftfreq(n_src, 1.0 / n_src).astype(np.int64)
    return w % n_dst


def embed(f: SpectralField, dst: GridSpec) -> SpectralField:
    """Place coefficients onto a finer lattice without changing the field."""
    if dst.n == f.grid.n:
        return f
    if dst.d != f.grid.d or dst.n < f.grid.n:
        raise ConfigurationError("embedding target must be a finer lattice of equal dimension")
    maps = [_axis_map(f.grid.n, dst.n) for _ in range(f.grid.d)]
    coeffs = np.zeros((f.components,) + dst.shape, dtype=np.complex128)
    coeffs[(slice(None),) + np.ix_(*maps)] = f.coeffs
    return SpectralField(
        dst,
        coeffs,
        mean_free=f.mean_free,
        div_free=f.div_free,
        hermitian=f.hermitian,
        validate=False,
    )


def restrict(f: SpectralField, dst: GridSpec) -> SpectralField:
    """Inverse of `embed`: gather the coarse-lattice modes and re-truncate."""
    if dst.n == f.grid.n:
        return galerkin_truncate(f, dst.cutoff)
    maps = [_axis_map(dst.n, f.grid.n) for _ in range(f.grid.d)]
    coeffs = f.coeffs[(slice(None),) + np.ix_(*maps)]
    coeffs = np.where(cutoff_mask(dst), coeffs, 0.0)
    return SpectralField(
        dst,
        coeffs,
        mean_free=f.mean_free,
        div_free=False,
        hermitian=f.hermitian,
        validate=False,
    )


def pointwise_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Exact (dealiased) product of two scalar truncated fields, re-truncated."""
    if f.grid != g.grid:
        raise ConfigurationError("product operands live on different grids")
    pad = padded_grid(f.grid)
    fp = to_physical(embed(f, pad))
    gp = to_physical(embed(g, pad))
    prod = to_spectral(fp * gp, pad)
    out = restrict(prod, f.grid)
    return SpectralField(
        f.grid,
        out.coeffs,
        mean_free=False,
        div_free=False,
        hermitian=f.hermitian and g.hermitian,
        validate=False,
    )


def bilinear_advect(u: SpectralField, v: SpectralField, project: bool = True) -> SpectralField:
    """Advective term u.grad(v), dealiased exactly, truncated to |k| <= K.

    `project=True` applies the Leray projection (incompressible momentum
    equations); scalar `v` is transported without projection.  Complexified
    inputs go through the same bilinear formula over complex coefficients.
    """
    if u.grid != v.grid:
        raise ConfigurationError("advection operands live on different grids")
    if not u.is_vector:
        raise ConfigurationError("advecting velocity must be a vector field")
    grid = u.grid
    pad = padded_grid(grid)
    mesh = wavenumber_mesh(pad)

    u_pad = embed(u, pad)
    v_pad = embed(v, pad)
    u_phys = to_physical(u_pad)
    out_phys = np.zeros_like(v_pad.coeffs)
    for i in range(grid.d):
        dv = v_pad.coeffs * (1j * mesh[i])
        dv_phys = np.fft.ifftn(dv, axes=tuple(range(1, grid.d + 1))) * float(pad.n**pad.d)
        out_phys = out_phys + u_phys[i] * dv_phys
    adv = to_spectral(out_phys, pad)
    result = zero_mean(restrict(adv, grid))
    hermitian = u.hermitian and v.hermitian
    if project:
        if not result.is_vector:
            raise ConfigurationError("Leray projection requested for a scalar transport term")
        result = leray_project(result)
    result = result.with_coeffs(result.coeffs, hermitian=hermitian)
    if hermitian:
        result = symmetrize_hermitian(result)
    return result


# ---------------------------------------------------------------------------
# inner products


def l2_inner(f: SpectralField, g: SpectralField) -> complex:
    """Complex L^2 pairing (2pi)^d sum_k fhat(k) . conj(ghat(k))."""
    if f.grid != g.grid or f.components != g.components:
        raise ConfigurationError("pairing operands are incompatible")
    return complex((2.0 * np.pi) ** f.grid.d * np.sum(f.coeffs * np.conj(g.coeffs)))


def l2_norm(f: SpectralField) -> float:
    return float(np.sqrt((2.0 * np.pi) ** f.grid.d * np.sum(np.abs(f.coeffs) ** 2)))
