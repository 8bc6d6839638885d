"""Integration of the truncated dynamics along complex-time rays.

A ray is zeta = s e^{i theta} with real arclength parameter s, so the
integrated ODE is dy/ds = e^{i theta} * f(y) where f is the tendency in
zeta.  Along each ray the Gevrey norm is tracked at the shrinking radius
beta0 - delta*s, blow-up is detected by a norm-growth factor, and the
certified radius from the a-priori estimate is compared against the
empirical blow-up arclength.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, RadiusExhaustedError, WeightOverflowError
from .grid import GridSpec, SpectralField, galerkin_truncate
from .models import ModelState, ftilde_eval, rhs
from .norms import GevreyParams, NormReport, cwien, gevrey_norm, sobolev_norm, time_varying_norm

RADIUS_GUARD = 0.999
DEFAULT_BLOWUP_FACTOR = 1e6


def worker_count() -> int:
    raw = os.environ.get("GEVREY_FLOW_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class RaySpec:
    theta: float
    ds: float
    s_max: float
    integrator: str = "rk4_fixed"  # or "rk4_doubling"
    tol: float = 1e-9

    def __post_init__(self):
        if self.ds <= 0 or self.s_max <= 0:
            raise ConfigurationError("ds and s_max must be positive")
        if self.integrator not in ("rk4_fixed", "rk4_doubling"):
            raise ConfigurationError(f"unknown integrator {self.integrator!r}")
        if self.tol <= 0:
            raise ConfigurationError("tolerance must be positive")


@dataclass(frozen=True)
class RaySample:
    s: float
    norms: dict[str, NormReport]
    combined_gevrey: float
    combined_quarter: float
    rejections: int = 0


@dataclass
class RayTrajectory:
    theta: float
    samples: list[RaySample]
    status: str  # completed | blown_up | radius_exhausted
    s_terminal: float
    states: list[np.ndarray] | None = None

    @property
    def s_values(self) -> np.ndarray:
        return np.array([smp.s for smp in self.samples])


@dataclass
class ThetaResult:
    theta: float
    s_empirical: float
    censored: bool
    status: str
    flagged: bool


@dataclass
class CertifiedRegion:
    model: str
    s_certified: float
    delta_used: float
    c_used: float
    norm0: float
    cap: float | None = None  # boussinesq 2 ln 2 / g when active
    base_radius: float | None = None
    per_theta: list[ThetaResult] = field(default_factory=list)

    @property
    def violations(self) -> list[ThetaResult]:
        return [t for t in self.per_theta if t.flagged]

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "s_certified": self.s_certified,
            "delta_used": self.delta_used,
            "c_used": self.c_used,
            "norm0": self.norm0,
            "cap": self.cap,
            "base_radius": self.base_radius,
            "per_theta": [
                {
                    "theta": t.theta,
                    "s_empirical": t.s_empirical,
                    "censored": t.censored,
                    "status": t.status,
                    "flagged": t.flagged,
                }
                for t in self.per_theta
            ],
        }


# ---------------------------------------------------------------------------
# state packing


def pack(state: ModelState) -> np.ndarray:
    return np.concatenate([f.coeffs.ravel() for f in state.members.values()])


def unpack(y: np.ndarray, template: ModelState) -> ModelState:
    members = {}
    offset = 0
    for name, f in template.members.items():
        size = f.coeffs.size
        coeffs = y[offset : offset + size].reshape(f.coeffs.shape)
        members[name] = SpectralField(
            f.grid, coeffs, mean_free=True, div_free=f.div_free, hermitian=False, validate=False
        )
        offset += size
    return template.with_members(members)


def _tendency(y: np.ndarray, template: ModelState, phase: complex) -> np.ndarray:
    return phase * pack(rhs(unpack(y, template)))


# ---------------------------------------------------------------------------
# certified regions


def initial_gevrey_norm(state: ModelState, r: float, beta: float) -> float:
    """Root-sum-square Gevrey norm over the state's members."""
    return math.sqrt(sum(gevrey_norm(f, r, beta) ** 2 for f in state.members.values()))


def certified_radius(state0: ModelState, p: GevreyParams) -> CertifiedRegion:
    """Predicted analyticity radius and matching shrink rate, no integration."""
    p.require_r(state0.grid.d)
    c = p.constant()
    m0 = initial_gevrey_norm(state0, p.r, p.beta0)
    if not math.isfinite(m0) or m0 <= 0:
        raise ConfigurationError(f"initial Gevrey norm must be finite and positive, got {m0}")
    if state0.tag == "analytic":
        rate = ftilde_eval(state0.series, p.r, state0.grid.d, m0).value
        s_cert = c * p.beta0 / rate
        delta = c * rate
        return CertifiedRegion(
            model=state0.tag, s_certified=s_cert, delta_used=delta, c_used=c, norm0=m0
        )
    cw = cwien(p.r, state0.grid.d)
    base = c * p.beta0 / (2.0**p.r * cw * m0)
    delta = c * 2.0**p.r * cw * m0
    cap = None
    s_cert = base
    if state0.tag == "boussinesq":
        cap_val = 2.0 * math.log(2.0) / state0.g
        if cap_val < base:
            cap = cap_val
            s_cert = cap_val
    return CertifiedRegion(
        model=state0.tag,
        s_certified=s_cert,
        delta_used=delta,
        c_used=c,
        norm0=m0,
        cap=cap,
        base_radius=base,
    )


def _resolved_delta(state0: ModelState, p: GevreyParams) -> float:
    if p.delta is not None:
        return p.delta
    return certified_radius(state0, p).delta_used


# ---------------------------------------------------------------------------
# ray integration


def _sample(state: ModelState, p: GevreyParams, s: float, rejections: int) -> RaySample:
    norms = {name: time_varying_norm(f, p, s) for name, f in state.members.items()}
    combined = math.sqrt(sum(n.gevrey**2 for n in norms.values()))
    quarter = math.sqrt(sum(n.gevrey_quarter**2 for n in norms.values()))
    return RaySample(
        s=s, norms=norms, combined_gevrey=combined, combined_quarter=quarter, rejections=rejections
    )


def integrate_ray(
    state0: ModelState,
    p: GevreyParams,
    ray: RaySpec,
    blowup_factor: float = DEFAULT_BLOWUP_FACTOR,
    keep_states: bool = False,
) -> RayTrajectory:
    """March the truncated dynamics along one ray with norm tracking.

    Fixed-step classical RK4 by default; `rk4_doubling` compares one full
    step against two half steps and adapts the step size.  Terminates early
    with status `blown_up` when the tracked Gevrey norm exceeds
    `blowup_factor` times its initial value or any coefficient goes
    non-finite.
    """
    delta = _resolved_delta(state0, p)
    params = p.replace(delta=delta)
    if delta > 0 and ray.s_max > RADIUS_GUARD * p.beta0 / delta:
        raise ConfigurationError(
            f"s_max={ray.s_max:g} exceeds the radius guard "
            f"{RADIUS_GUARD * p.beta0 / delta:g} (beta0/delta={p.beta0 / delta:g})"
        )
    phase = complex(math.cos(ray.theta), math.sin(ray.theta))
    template = state0
    y = pack(state0).astype(np.complex128)

    samples = [_sample(state0, params, 0.0, 0)]
    states = [y.copy()] if keep_states else None
    g0 = samples[0].combined_gevrey
    threshold = blowup_factor * max(g0, 1e-300)

    def rk4_step(yc, s, h):
        k1 = _tendency(yc, template, phase)
        k2 = _tendency(yc + 0.5 * h * k1, template, phase)
        k3 = _tendency(yc + 0.5 * h * k2, template, phase)
        k4 = _tendency(yc + h * k3, template, phase)
        return yc + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    s = 0.0
    h = ray.ds
    status = "completed"
    rejections = 0
    while s < ray.s_max - 1e-14:
        h = min(h, ray.s_max - s)
        if ray.integrator == "rk4_fixed":
            y_new = rk4_step(y, s, h)
            h_used = h
        else:
            # step doubling: accept when the full/half-half difference is small
            while True:
                full = rk4_step(y, s, h)
                half = rk4_step(rk4_step(y, s, 0.5 * h), s + 0.5 * h, 0.5 * h)
                err = float(np.max(np.abs(full - half)))
                scale = ray.tol + ray.tol * float(np.max(np.abs(y)))
                if math.isfinite(err) and (err <= scale or h < 1e-14):
                    y_new = half
                    h_used = h
                    if err > 0:
                        h = h * min(5.0, max(0.2, 0.9 * (scale / err) ** 0.2))
                    break
                rejections += 1
                h *= 0.5
        s += h_used
        y = y_new
        if not np.all(np.isfinite(y)):
            status = "blown_up"
            break
        state = unpack(y, template)
        try:
            smp = _sample(state, params, s, rejections)
        except (RadiusExhaustedError, WeightOverflowError) as exc:
            status = "radius_exhausted" if isinstance(exc, RadiusExhaustedError) else "blown_up"
            break
        samples.append(smp)
        if keep_states:
            states.append(y.copy())
        rejections = 0
        if smp.combined_gevrey > threshold:
            status = "blown_up"
            break
    return RayTrajectory(
        theta=ray.theta, samples=samples, status=status, s_terminal=s, states=states
    )


def sweep_theta(
    state0: ModelState,
    p: GevreyParams,
    n_theta: int,
    ray_template: RaySpec,
    blowup_factor: float = DEFAULT_BLOWUP_FACTOR,
) -> tuple[CertifiedRegion, list[RayTrajectory]]:
    """Integrate rays at theta_j = 2 pi j / n_theta and fill empirical radii."""
    if n_theta < 4:
        raise ConfigurationError("need at least 4 rays")
    region = certified_radius(state0, p)
    delta = p.delta if p.delta is not None else region.delta_used
    params = p.replace(delta=delta)
    s_cap = ray_template.s_max
    if delta > 0:
        s_cap = min(s_cap, RADIUS_GUARD * p.beta0 / delta)

    def run(j):
        spec = RaySpec(
            theta=2.0 * math.pi * j / n_theta,
            ds=min(ray_template.ds, s_cap),
            s_max=s_cap,
            integrator=ray_template.integrator,
            tol=ray_template.tol,
        )
        return integrate_ray(state0, params, spec, blowup_factor)

    nw = worker_count()
    if nw > 1:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            trajectories = list(pool.map(run, range(n_theta)))
    else:
        trajectories = [run(j) for j in range(n_theta)]

    for traj in trajectories:
        censored = traj.status == "completed"
        s_emp = traj.s_terminal if not censored else s_cap
        flagged = (not censored) and s_emp < region.s_certified
        region.per_theta.append(
            ThetaResult(
                theta=traj.theta,
                s_empirical=s_emp,
                censored=censored,
                status=traj.status,
                flagged=flagged,
            )
        )
    return region, trajectories


# ---------------------------------------------------------------------------
# Galerkin convergence


@dataclass(frozen=True)
class ConvergenceEntry:
    cutoff: int
    deviation: float


def galerkin_convergence(
    state0: ModelState, p: GevreyParams, ray: RaySpec, k_list: list[int]
) -> list[ConvergenceEntry]:
    """Integrate at several cutoffs and report max_s ||u_K - u_Kmax||_{H^r}.

    A numerical surrogate for the convergence of the truncated systems: for
    analytic data the deviations should decrease as the cutoff grows.
    """
    if sorted(k_list) != list(k_list) or len(set(k_list)) != len(k_list):
        raise ConfigurationError("cutoff list must be strictly increasing")
    grid = state0.grid
    if k_list[-1] > grid.cutoff:
        raise ConfigurationError("largest cutoff exceeds the grid cutoff")

    def truncated_state(K: int) -> ModelState:
        sub = GridSpec(grid.d, grid.n, K)
        members = {}
        for name, f in state0.members.items():
            cut = galerkin_truncate(f, K)
            members[name] = SpectralField(
                sub,
                cut.coeffs,
                mean_free=f.mean_free,
                div_free=f.div_free,
                hermitian=f.hermitian,
                validate=False,
            )
        return state0.with_members(members)

    kmax = k_list[-1]
    template = truncated_state(kmax)
    # integrate the reference once; compare the coarser runs one at a time so
    # at most two trajectories of saved states are alive together
    ref = integrate_ray(template, p, ray, keep_states=True)
    out = []
    for K in k_list[:-1]:
        traj = integrate_ray(truncated_state(K), p, ray, keep_states=True)
        n_common = min(len(traj.states), len(ref.states))
        dev = 0.0
        for i in range(n_common):
            diff = traj.states[i] - ref.states[i]
            ds_state = unpack(diff, template)
            dev = max(
                dev,
                math.sqrt(sum(sobolev_norm(f, p.r) ** 2 for f in ds_state.members.values())),
            )
        out.append(ConvergenceEntry(cutoff=K, deviation=dev))
    out.append(ConvergenceEntry(cutoff=kmax, deviation=0.0))
    return out


# ---------------------------------------------------------------------------
# per-step inequality report


@dataclass(frozen=True)
class BudgetRow:
    s: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class BudgetReport:
    rows: list[BudgetRow]
    max_violation: float  # max(lhs - rhs), <= 0 when the bound holds
    max_relative_violation: float


def energy_budget(
    traj: RayTrajectory, p: GevreyParams, c_value: float, s_cert: float, d: int
) -> BudgetReport:
    """Centered-difference check of the tracked-norm differential inequality.

    LHS is d/ds(G^2)/2 + delta Q^2 from the sampled norms, RHS the measured
    constant times 2^r C_W G Q^2.
    """
    if len(traj.samples) < 3:
        raise ConfigurationError("need at least three samples for finite differences")
    spacings = np.diff(traj.s_values)
    if float(np.max(spacings)) > 1e-3 * s_cert + 1e-15:
        raise ConfigurationError(
            f"sampling too coarse for finite differences: ds={float(np.max(spacings)):g} "
            f"> 1e-3 * s_cert={1e-3 * s_cert:g}"
        )
    delta = p.delta if p.delta is not None else 0.0
    cw = cwien(p.r, d)
    rows = []
    worst = -math.inf
    worst_rel = -math.inf
    for i in range(1, len(traj.samples) - 1):
        prev, cur, nxt = traj.samples[i - 1], traj.samples[i], traj.samples[i + 1]
        dG2 = (nxt.combined_gevrey**2 - prev.combined_gevrey**2) / (nxt.s - prev.s)
        lhs = 0.5 * dG2 + delta * cur.combined_quarter**2
        rhs_v = c_value * 2.0**p.r * cw * cur.combined_gevrey * cur.combined_quarter**2
        rows.append(BudgetRow(s=cur.s, lhs=lhs, rhs=rhs_v))
        worst = max(worst, lhs - rhs_v)
        scale = max(abs(rhs_v), 1e-300)
        worst_rel = max(worst_rel, (lhs - rhs_v) / scale)
    return BudgetReport(rows=rows, max_violation=worst, max_relative_violation=worst_rel)


# ---------------------------------------------------------------------------
# disk chaining


@dataclass(frozen=True)
class DiskChain:
    epsilon: float
    centers: list[float]
    radius: float
    beta_inf: float
    m_sup: float
    covers: bool
    overlap_factor: float

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "centers": self.centers,
            "radius": self.radius,
            "beta_inf": self.beta_inf,
            "m_sup": self.m_sup,
            "covers": self.covers,
            "overlap_factor": self.overlap_factor,
        }


def chain_disks(schedule: list[tuple[float, float, float]], p: GevreyParams, d: int) -> DiskChain:
    """Cover (0, T) by overlapping analyticity disks re-seeded along a real orbit.

    `schedule` rows are (t, beta(t), M(t) = ||u(t)||_{beta(t)}).  The common
    disk radius uses the worst radius and the largest norm over the schedule;
    centers sit at half-radius spacing so adjacent disks overlap.
    """
    if not schedule:
        raise ConfigurationError("empty schedule")
    betas = [row[1] for row in schedule]
    norms = [row[2] for row in schedule]
    times = [row[0] for row in schedule]
    if min(betas) <= 0:
        raise ConfigurationError("schedule radii must be positive")
    if min(norms) <= 0:
        raise ConfigurationError("schedule norms must be positive")
    beta_inf = min(betas)
    m_sup = max(norms)
    t_final = max(times)
    eps = p.constant() * beta_inf / (2.0**p.r * cwien(p.r, d) * m_sup)
    centers = []
    j = 1
    while j * eps / 2.0 <= t_final:
        centers.append(j * eps / 2.0)
        j += 1
    if not centers:
        centers = [eps / 2.0]
    covers = centers[0] - eps < 0 and centers[-1] + eps > t_final
    for a, b in zip(centers, centers[1:]):
        covers = covers and (b - a) < eps
    return DiskChain(
        epsilon=eps,
        centers=centers,
        radius=eps,
        beta_inf=beta_inf,
        m_sup=m_sup,
        covers=covers,
        overlap_factor=2.0,
    )
