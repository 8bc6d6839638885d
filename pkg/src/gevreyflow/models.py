"""Right-hand sides of the complexified inviscid model families.

Five families share one state container: incompressible Euler (velocity u),
2D surface quasi-geostrophic transport (scalar eta with Riesz velocity),
Boussinesq (u, eta with buoyancy g along an upward axis), MHD in Elsasser
variables (v, w), and a scalar equation with an analytic nonlinearity
du/dt = T F(u) driven by a power series F and a first-order multiplier T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, SeriesRadiusError, StateError
from .grid import (
    GridSpec,
    MultiplierSpec,
    SpectralField,
    apply_multiplier,
    bilinear_advect,
    cutoff_mask,
    galerkin_truncate,
    leray_project,
    pointwise_product,
    symmetrize_hermitian,
    to_physical,
    to_spectral,
    zero_mean,
)

MODEL_TAGS = ("euler", "sqg", "boussinesq", "mhd", "analytic")


@dataclass(frozen=True)
class AnalyticSeries:
    """Power series F(z) = sum_{n>=1} a_n z^n, truncated at n_max = len(coeffs)."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ConfigurationError("series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))

    @property
    def n_max(self) -> int:
        return len(self.coeffs)

    def radius_estimate(self) -> float:
        """Convergence radius from consecutive-term ratios (inf for sparse tails)."""
        ratios = [
            abs(self.coeffs[i] / self.coeffs[i - 1])
            for i in range(1, len(self.coeffs))
            if self.coeffs[i - 1] != 0 and self.coeffs[i] != 0
        ]
        if not ratios:
            return math.inf
        return 1.0 / max(ratios)


@dataclass(frozen=True)
class MajorantValue:
    value: float
    tail_bound: float


def majorant_eval(series: AnalyticSeries, s: float) -> MajorantValue:
    """F_M(s) = sum |a_n| s^n with a geometric bound on the truncated tail."""
    if s < 0:
        raise ValueError("majorant argument must be >= 0")
    terms = [abs(a) * s**n for n, a in enumerate(series.coeffs, start=1)]
    return MajorantValue(value=float(sum(terms)), tail_bound=_tail_bound(terms, series, s))


def ftilde_eval(series: AnalyticSeries, r: float, d: int, s: float) -> MajorantValue:
    """Majorizing rate sum |a_n| n^{r+3/2} C_W^{n-1} s^{n-1}."""
    from .norms import cwien

    if s < 0:
        raise ValueError("majorant argument must be >= 0")
    cw = cwien(r, d)
    try:
        terms = [
            abs(a) * n ** (r + 1.5) * cw ** (n - 1) * s ** (n - 1)
            for n, a in enumerate(series.coeffs, start=1)
        ]
    except OverflowError:
        raise SeriesRadiusError(
            f"majorizing series overflows at s={s:g} (radius estimate "
            f"{series.radius_estimate():.3g})"
        ) from None
    return MajorantValue(value=float(sum(terms)), tail_bound=_tail_bound(terms, series, s))


def _tail_bound(terms: list[float], series: AnalyticSeries, s: float) -> float:
    nonzero = [t for t in terms if t > 0]
    if len(nonzero) < 2:
        return 0.0
    q = max(nonzero[i] / nonzero[i - 1] for i in range(1, len(nonzero)))
    if q >= 1.0:
        raise SeriesRadiusError(
            f"partial sums diverge at s={s:g}: term ratio {q:.3g} >= 1 "
            f"(radius estimate {series.radius_estimate():.3g})"
        )
    return nonzero[-1] * q / (1.0 - q)


@dataclass(frozen=True, eq=False)
class ModelState:
    """Tagged bundle of member fields plus model parameters."""

    tag: str
    members: dict[str, SpectralField]
    g: float = 1.0  # boussinesq gravity
    e_axis: int | None = None  # boussinesq upward axis, default last
    S: float = 1.0  # mhd: rho0 * mu0
    rho0: float = 1.0
    series: AnalyticSeries | None = None
    multiplier: MultiplierSpec | None = None

    def __post_init__(self):
        if self.tag not in MODEL_TAGS:
            raise StateError(f"unknown model tag {self.tag!r}")
        expected = {
            "euler": ("u",),
            "sqg": ("eta",),
            "boussinesq": ("u", "eta"),
            "mhd": ("v", "w"),
            "analytic": ("u",),
        }[self.tag]
        if tuple(self.members) != expected:
            raise StateError(f"{self.tag} state needs members {expected}, got {tuple(self.members)}")

    @property
    def grid(self) -> GridSpec:
        return next(iter(self.members.values())).grid

    def member(self, name: str) -> SpectralField:
        return self.members[name]

    def with_members(self, members: dict[str, SpectralField]) -> "ModelState":
        return replace(self, members=members)

    def validate(self):
        grid = self.grid
        for name, f in self.members.items():
            if f.grid != grid:
                raise StateError(f"member {name} lives on a different grid")
            if not f.mean_free:
                raise StateError(f"member {name} must be mean-free")
            f.check_invariants()
        if self.tag == "sqg" and grid.d != 2:
            raise StateError("SQG is two-dimensional")
        if self.tag in ("euler", "boussinesq"):
            u = self.members["u"]
            if not (u.is_vector and u.div_free):
                raise StateError("velocity must be a divergence-free vector field")
        if self.tag == "mhd":
            for name in ("v", "w"):
                f = self.members[name]
                if not (f.is_vector and f.div_free):
                    raise StateError(f"Elsasser member {name} must be divergence-free")
            if self.S <= 0:
                raise StateError("S = rho0 * mu0 must be positive")
        if self.tag == "boussinesq" and self.g <= 0:
            raise StateError("gravity must be positive")
        if self.tag == "analytic":
            if self.series is None or self.multiplier is None:
                raise StateError("analytic state needs a series and a multiplier")
            zero = (0,) * grid.d
            if self.multiplier.symbol(grid)[zero] != 0.0:
                raise StateError("analytic multiplier must have m(0)=0")


def riesz_velocity(eta: SpectralField) -> SpectralField:
    """SQG velocity u = (-R2 eta, R1 eta); divergence-free by construction."""
    if eta.grid.d != 2 or eta.is_vector:
        raise StateError("Riesz velocity defined for 2D scalars")
    r1 = apply_multiplier(eta, MultiplierSpec("riesz", axis=0))
    r2 = apply_multiplier(eta, MultiplierSpec("riesz", axis=1))
    coeffs = np.concatenate([-r2.coeffs, r1.coeffs], axis=0)
    return SpectralField(
        eta.grid, coeffs, mean_free=True, div_free=True, hermitian=eta.hermitian, validate=False
    )


def analytic_nonlinearity(state: ModelState) -> SpectralField:
    """T applied to sum a_n u^n, powers by iterated re-truncated products."""
    u = state.members["u"]
    series = state.series
    radius = series.radius_estimate()
    if math.isfinite(radius):
        sup = float(np.max(np.abs(to_physical(u))))
        if sup > 0.9 * radius:
            raise SeriesRadiusError(
                f"field amplitude {sup:.3g} exceeds 0.9 x convergence radius {radius:.3g}"
            )
    acc = None
    power = u
    for n, a in enumerate(series.coeffs, start=1):
        if n > 1:
            power = pointwise_product(power, u)
        if a != 0.0:
            term = power.coeffs * a
            acc = term if acc is None else acc + term
    total = SpectralField(
        state.grid, acc, mean_free=False, hermitian=u.hermitian, validate=False
    )
    mult = state.multiplier or MultiplierSpec(kind="partial", axis=0)
    return zero_mean(apply_multiplier(total, mult))


def rhs(state: ModelState) -> ModelState:
    """Tendency dState/dzeta of the truncated (Galerkin) dynamics."""
    tag = state.tag
    if tag == "euler":
        u = state.members["u"]
        adv = bilinear_advect(u, u, project=True)
        return state.with_members({"u": _neg(adv)})
    if tag == "sqg":
        eta = state.members["eta"]
        u = riesz_velocity(eta)
        adv = bilinear_advect(u, eta, project=False)
        return state.with_members({"eta": _neg(adv)})
    if tag == "boussinesq":
        u, eta = state.members["u"], state.members["eta"]
        adv_u = bilinear_advect(u, u, project=True)
        buoy = leray_project(_buoyancy(eta, state.g, state.e_axis))
        du = buoy.with_coeffs(buoy.coeffs - adv_u.coeffs, hermitian=u.hermitian and eta.hermitian)
        adv_eta = bilinear_advect(u, eta, project=False)
        return state.with_members({"u": du, "eta": _neg(adv_eta)})
    if tag == "mhd":
        v, w = state.members["v"], state.members["w"]
        dv = _neg(bilinear_advect(w, v, project=True))
        dw = _neg(bilinear_advect(v, w, project=True))
        return state.with_members({"v": dv, "w": dw})
    if tag == "analytic":
        return state.with_members({"u": analytic_nonlinearity(state)})
    raise StateError(f"unknown model tag {tag!r}")


def _neg(f: SpectralField) -> SpectralField:
    return f.with_coeffs(-f.coeffs)


def _buoyancy(eta: SpectralField, g: float, e_axis: int | None) -> SpectralField:
    d = eta.grid.d
    axis = d - 1 if e_axis is None else e_axis
    coeffs = np.zeros((d,) + eta.grid.shape, dtype=np.complex128)
    coeffs[axis] = g * eta.coeffs[0]
    return SpectralField(
        eta.grid, coeffs, mean_free=eta.mean_free, hermitian=eta.hermitian, validate=False
    )


# ---------------------------------------------------------------------------
# Elsasser change of variables


def elsasser_from_primitive(u: SpectralField, b: SpectralField, S: float):
    """(u, b) -> (v, w) = (u + b/sqrt(S), u - b/sqrt(S))."""
    if S <= 0:
        raise ConfigurationError(f"S must be positive, got {S}")
    root = math.sqrt(S)
    v = u.with_coeffs(u.coeffs + b.coeffs / root, div_free=u.div_free and b.div_free)
    w = u.with_coeffs(u.coeffs - b.coeffs / root, div_free=u.div_free and b.div_free)
    return v, w


def primitive_from_elsasser(v: SpectralField, w: SpectralField, S: float):
    """(v, w) -> (u, b) = ((v+w)/2, sqrt(S) (v-w)/2)."""
    if S <= 0:
        raise ConfigurationError(f"S must be positive, got {S}")
    root = math.sqrt(S)
    u = v.with_coeffs(0.5 * (v.coeffs + w.coeffs))
    b = v.with_coeffs(0.5 * root * (v.coeffs - w.coeffs))
    return u, b


# ---------------------------------------------------------------------------
# initial data catalog


CATALOG = (
    "taylor_green_2d",
    "taylor_green_3d",
    "sqg_single_mode",
    "sqg_two_mode",
    "bouss_stratified",
    "mhd_alfven",
    "analytic_gaussian_modes",
    "random_gevrey",
)


def _lattice(grid: GridSpec):
    x = np.arange(grid.n) * 2.0 * math.pi / grid.n
    return np.meshgrid(*([x] * grid.d), indexing="ij")


def _real_vector(grid: GridSpec, components) -> SpectralField:
    f = to_spectral(np.stack(components), grid, hermitian=True)
    f = leray_project(f)
    return symmetrize_hermitian(f)


def _real_scalar(grid: GridSpec, values) -> SpectralField:
    f = zero_mean(to_spectral(values[None], grid, hermitian=True))
    return symmetrize_hermitian(f)


def taylor_green_2d(grid: GridSpec) -> SpectralField:
    if grid.d != 2:
        raise ConfigurationError("taylor_green_2d needs d=2")
    X, Y = _lattice(grid)
    return _real_vector(grid, [np.sin(X) * np.cos(Y), -np.cos(X) * np.sin(Y)])


def taylor_green_3d(grid: GridSpec) -> SpectralField:
    if grid.d != 3:
        raise ConfigurationError("taylor_green_3d needs d=3")
    X, Y, Z = _lattice(grid)
    return _real_vector(
        grid,
        [
            np.sin(X) * np.cos(Y) * np.cos(Z),
            -np.cos(X) * np.sin(Y) * np.cos(Z),
            np.zeros_like(X),
        ],
    )


def random_gevrey_field(
    grid: GridSpec,
    components: int,
    seed: int,
    beta_decay: float = 1.0,
    hermitian: bool = True,
    div_free: bool = False,
) -> SpectralField:
    """Random field with |uhat(k)| ~ e^{-beta_decay |k|} and random phases."""
    rng = np.random.default_rng(seed)
    from .grid import wavenumber_norm

    kn = wavenumber_norm(grid)
    mag = rng.uniform(0.0, 1.0, (components,) + grid.shape) * np.exp(-beta_decay * kn)
    phase = rng.uniform(0.0, 2.0 * math.pi, (components,) + grid.shape)
    coeffs = mag * np.exp(1j * phase)
    coeffs[:, ~cutoff_mask(grid)] = 0.0
    f = SpectralField(grid, coeffs, mean_free=False, validate=False)
    f = zero_mean(f)
    if hermitian:
        f = symmetrize_hermitian(f)
    if div_free:
        # projection commutes with the Hermitian symmetry, so the flag survives
        f = leray_project(f).with_coeffs(leray_project(f).coeffs, hermitian=hermitian)
    return f


def initial_data(name: str, grid: GridSpec, **kwargs) -> ModelState:
    """Build a catalog state; `random_gevrey` takes seed/beta_decay/model kwargs."""
    if name == "taylor_green_2d":
        return ModelState("euler", {"u": taylor_green_2d(grid)})
    if name == "taylor_green_3d":
        return ModelState("euler", {"u": taylor_green_3d(grid)})
    if name == "sqg_single_mode":
        X, _ = _lattice(grid)
        return ModelState("sqg", {"eta": _real_scalar(grid, np.sin(X))})
    if name == "sqg_two_mode":
        X, Y = _lattice(grid)
        return ModelState("sqg", {"eta": _real_scalar(grid, np.cos(X) + 0.5 * np.sin(2.0 * Y))})
    if name == "bouss_stratified":
        mesh = _lattice(grid)
        u = taylor_green_2d(grid) if grid.d == 2 else taylor_green_3d(grid)
        u = u.with_coeffs(0.2 * u.coeffs)
        # temperature varies across the upward axis so buoyancy is not a pure gradient
        eta = _real_scalar(grid, np.sin(mesh[0]))
        return ModelState(
            "boussinesq",
            {"u": u, "eta": eta},
            g=float(kwargs.get("g", 1.0)),
            e_axis=kwargs.get("e_axis"),
        )
    if name == "mhd_alfven":
        # one Elsasser slot empty: an exact nonlinear solution
        v = taylor_green_2d(grid) if grid.d == 2 else taylor_green_3d(grid)
        w = v.with_coeffs(np.zeros_like(v.coeffs))
        return ModelState("mhd", {"v": v, "w": w}, S=float(kwargs.get("S", 1.0)))
    if name == "analytic_gaussian_modes":
        from .grid import wavenumber_norm

        kn = wavenumber_norm(grid)
        rng = np.random.default_rng(int(kwargs.get("seed", 1)))
        phase = rng.uniform(0.0, 2.0 * math.pi, (1,) + grid.shape)
        coeffs = np.exp(-0.5 * kn**2)[None] * np.exp(1j * phase)
        coeffs[:, ~cutoff_mask(grid)] = 0.0
        f = symmetrize_hermitian(zero_mean(SpectralField(grid, coeffs, mean_free=False, validate=False)))
        amp = float(kwargs.get("amplitude", 0.05))
        f = f.with_coeffs(amp * f.coeffs / max(float(np.max(np.abs(to_physical(f)))), 1e-30))
        series = kwargs.get("series") or AnalyticSeries((0.0, 1.0))
        mult = kwargs.get("multiplier") or MultiplierSpec("partial", axis=0)
        return ModelState("analytic", {"u": f}, series=series, multiplier=mult)
    if name == "random_gevrey":
        seed = int(kwargs.get("seed", 0))
        beta_decay = float(kwargs.get("beta_decay", 1.0))
        model = kwargs.get("model", "euler")
        if model == "euler":
            u = random_gevrey_field(grid, grid.d, seed, beta_decay, div_free=True)
            return ModelState("euler", {"u": u})
        if model == "sqg":
            eta = random_gevrey_field(grid, 1, seed, beta_decay)
            return ModelState("sqg", {"eta": eta})
        if model == "boussinesq":
            u = random_gevrey_field(grid, grid.d, seed, beta_decay, div_free=True)
            eta = random_gevrey_field(grid, 1, seed + 1, beta_decay)
            return ModelState(
                "boussinesq", {"u": u, "eta": eta}, g=float(kwargs.get("g", 1.0))
            )
        if model == "mhd":
            v = random_gevrey_field(grid, grid.d, seed, beta_decay, div_free=True)
            w = random_gevrey_field(grid, grid.d, seed + 1, beta_decay, div_free=True)
            return ModelState("mhd", {"v": v, "w": w}, S=float(kwargs.get("S", 1.0)))
        if model == "analytic":
            u = random_gevrey_field(grid, 1, seed, beta_decay)
            series = kwargs.get("series") or AnalyticSeries((0.0, 1.0))
            mult = kwargs.get("multiplier") or MultiplierSpec("partial", axis=0)
            amp = float(kwargs.get("amplitude", 0.05))
            sup = max(float(np.max(np.abs(to_physical(u)))), 1e-30)
            u = u.with_coeffs(amp * u.coeffs / sup)
            return ModelState("analytic", {"u": u}, series=series, multiplier=mult)
        raise ConfigurationError(f"random_gevrey does not support model {model!r}")
    raise ConfigurationError(f"unknown catalog entry {name!r}; choose from {CATALOG}")
