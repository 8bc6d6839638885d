"""Acceptance gate: one check per release criterion, one PASS/FAIL line each.

Every expected value is produced by an independent oracle (direct convolution,
closed-form mode sums) or pinned arithmetic; tolerances are part of the
contract and must not be loosened.  Run with `pytest -v tests/test_acceptance.py`.
"""

import json
import math
import time

import numpy as np
import pytest

from gevreyflow import cli, engine, estimates, oracle
from gevreyflow.grid import GridSpec, SpectralField, bilinear_advect
from gevreyflow.models import ModelState, initial_data, random_gevrey_field
from gevreyflow.norms import GevreyParams, cwien, derivative_decay_check, gevrey_norm


def report(num: int, name: str, ok: bool, detail: str = ""):
    verdict = "PASS" if ok else "FAIL"
    print(f"[criterion {num:02d}] {verdict}  {name}  {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def test_criterion_01_oracle_equivalence():
    grid = GridSpec(d=2, n=32, cutoff=8)
    t0 = time.time()
    worst = 0.0
    for i in range(50):
        u = random_gevrey_field(grid, 2, 1000 + i, 1.0, hermitian=True, div_free=True)
        v = random_gevrey_field(grid, 2, 2000 + i, 1.0, hermitian=True, div_free=True)
        fft_path = oracle.gather_modes(bilinear_advect(u, v, project=True))
        direct = oracle.convolve_advection(
            oracle.gather_modes(u), oracle.gather_modes(v), 2, 8, project=True
        )
        scale = max(float(np.max(np.abs(direct))), 1e-30)
        worst = max(worst, float(np.max(np.abs(fft_path - direct))) / scale)
    elapsed = time.time() - t0
    report(
        1,
        "pseudospectral advection matches the convolution oracle",
        worst <= 1e-10 and elapsed < 10.0,
        f"max rel err {worst:.3e}, {elapsed:.1f}s",
    )


def test_criterion_02_complexification_identity():
    grid = GridSpec(d=2, n=32, cutoff=8)
    t0 = time.time()
    worst = 0.0
    for i in range(50):
        u1 = random_gevrey_field(grid, 2, 3000 + i, 1.0, hermitian=True, div_free=True)
        u2 = random_gevrey_field(grid, 2, 4000 + i, 1.0, hermitian=True, div_free=True)
        uc = SpectralField(grid, u1.coeffs + 1j * u2.coeffs, hermitian=False)
        single = bilinear_advect(uc, uc, project=True).coeffs
        four = (
            bilinear_advect(u1, u1, True).coeffs
            - bilinear_advect(u2, u2, True).coeffs
            + 1j * (bilinear_advect(u1, u2, True).coeffs + bilinear_advect(u2, u1, True).coeffs)
        )
        scale = max(float(np.max(np.abs(four))), 1e-30)
        worst = max(worst, float(np.max(np.abs(single - four))) / scale)
    elapsed = time.time() - t0
    report(
        2,
        "four-real-call decomposition equals the complex bilinear call",
        worst <= 1e-12 and elapsed < 5.0,
        f"max rel err {worst:.3e}, {elapsed:.1f}s",
    )


def test_criterion_03_closed_form_fixtures():
    grid = GridSpec(d=2, n=16, cutoff=5)
    u = initial_data("taylor_green_2d", grid).members["u"]
    tg = gevrey_norm(u, 2.0, 0.5)
    tg_expect = 2 * math.pi * math.sqrt(2.0) * math.exp(math.sqrt(2.0) * 0.5)
    errs = [
        abs(tg - tg_expect) / tg_expect,
        abs(cwien(2.0, 2) - 1.0 / math.pi) * math.pi,
        abs(cwien(2.5, 3) - 1.0 / (2.0 * math.pi)) * 2.0 * math.pi,
    ]
    report(
        3,
        "closed-form norm and embedding-constant fixtures",
        max(errs) <= 1e-12,
        f"max rel err {max(errs):.3e}",
    )


def test_criterion_04_real_axis_conservation():
    grid = GridSpec(d=2, n=32, cutoff=10)
    p = GevreyParams(r=2.0, beta0=0.3, delta=0.0)
    ray = engine.RaySpec(theta=0.0, ds=1e-3, s_max=1.0)
    cases = [
        ("euler TG L2", initial_data("taylor_green_2d", grid), [("u", "l2")]),
        ("sqg two-mode eta", initial_data("sqg_two_mode", grid), [("eta", "l2")]),
        (
            "mhd random elsasser",
            initial_data("random_gevrey", grid, seed=5, model="mhd"),
            [("v", "l2"), ("w", "l2")],
        ),
    ]
    details = []
    ok = True
    for label, state, tracked in cases:
        t0 = time.time()
        traj = engine.integrate_ray(state, p, ray)
        elapsed = time.time() - t0
        for member, key in tracked:
            series = [getattr(smp.norms[member], key) for smp in traj.samples]
            drift = max(abs(v - series[0]) for v in series) / max(series[0], 1e-300)
            ok = ok and drift <= 1e-8 and elapsed < 60.0
            details.append(f"{label}/{member} drift {drift:.2e} ({elapsed:.0f}s)")
    report(4, "invariants conserved along the real axis", ok, "; ".join(details))


def _empirical(model: str, d: int, r: float, beta: float, seed: int = 0, samples: int = 100):
    grid = GridSpec(d=d, n=16, cutoff=6 if d == 2 else 5)
    return estimates.empirical_constant(model, grid, r, beta, n_samples=samples, seed=seed)


def test_criterion_05_tracked_norm_monotonicity():
    t0 = time.time()
    cases = [
        ("euler", "taylor_green_2d"),
        ("sqg", "sqg_two_mode"),
        ("mhd", "mhd_alfven"),
    ]
    grid = GridSpec(d=2, n=32, cutoff=10)
    ok = True
    details = []
    for model, data in cases:
        meas = _empirical(model, 2, 2.0, 0.5)
        state = initial_data(data, grid)
        p = GevreyParams(r=2.0, beta0=0.5, constant_policy=meas.c_emp)
        region = engine.certified_radius(state, p)
        ray = engine.RaySpec(
            theta=0.0, ds=min(2e-3, region.s_certified / 50), s_max=region.s_certified
        )
        _, trajs = engine.sweep_theta(state, p, 8, ray)
        worst = 0.0
        for traj in trajs:
            vals = [smp.combined_gevrey for smp in traj.samples]
            for a, b in zip(vals, vals[1:]):
                worst = max(worst, b / a)
        ok = ok and worst <= 1.0 + 1e-8
        details.append(f"{model} worst step ratio {worst:.12f}")
    elapsed = time.time() - t0
    ok = ok and elapsed < 600.0
    report(5, "tracked norm non-increasing inside the certified region", ok,
           "; ".join(details) + f", {elapsed:.0f}s")


def test_criterion_06_boussinesq_growth_bound():
    t0 = time.time()
    grid = GridSpec(d=2, n=32, cutoff=10)
    ok = True
    details = []
    for g in (1.0, 10.0):
        state = initial_data("bouss_stratified", grid, g=g)
        p = GevreyParams(r=2.0, beta0=0.5)
        region = engine.certified_radius(state, p)
        params = p.replace(delta=region.delta_used)
        s_max = min(region.s_certified, engine.RADIUS_GUARD * p.beta0 / region.delta_used)
        worst = 0.0
        for theta in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2):
            ray = engine.RaySpec(theta=theta, ds=s_max / 200, s_max=s_max)
            traj = engine.integrate_ray(state, params, ray)
            g0 = traj.samples[0].combined_gevrey
            for smp in traj.samples:
                bound = math.sqrt(2.0) * math.exp(smp.s * g / 2.0) * g0
                worst = max(worst, smp.combined_gevrey / bound)
        ok = ok and worst <= 1.0
        details.append(f"g={g:g} max norm/bound {worst:.4f}")
    elapsed = time.time() - t0
    ok = ok and elapsed < 300.0
    report(6, "buoyant growth stays below sqrt(2) e^{sg/2}", ok,
           "; ".join(details) + f", {elapsed:.0f}s")


def test_criterion_07_region_consistency():
    t0 = time.time()
    cases = [
        ("euler", "taylor_green_2d", 2, 2.0, {}),
        ("euler", "taylor_green_3d", 3, 2.5, {}),
        ("sqg", "sqg_single_mode", 2, 2.0, {}),
        ("sqg", "sqg_two_mode", 2, 2.0, {}),
        ("boussinesq", "bouss_stratified", 2, 2.0, {"g": 2.0}),
        ("mhd", "mhd_alfven", 2, 2.0, {}),
        ("analytic", "analytic_gaussian_modes", 2, 2.0, {}),
        ("euler", "random_gevrey", 2, 2.0, {"seed": 11}),
    ]
    ok = True
    details = []
    for model, data, d, r, kwargs in cases:
        grid = GridSpec(d=d, n=32 if d == 2 else 16, cutoff=10 if d == 2 else 5)
        meas = _empirical(model, d, r, 0.5)
        state = initial_data(data, grid, **kwargs)
        p = GevreyParams(r=r, beta0=0.5, constant_policy=meas.c_emp)
        region = engine.certified_radius(state, p)
        ray = engine.RaySpec(
            theta=0.0, ds=min(2e-3, region.s_certified / 25), s_max=region.s_certified
        )
        swept, _ = engine.sweep_theta(state, p, 8, ray)
        s_emp = min(t.s_empirical for t in swept.per_theta)
        good = not swept.violations and s_emp >= region.s_certified * (1 - 1e-12)
        ok = ok and good
        details.append(f"{data}:{'ok' if good else 'VIOLATION'}")
    elapsed = time.time() - t0
    report(7, "no empirical blow-up inside any certified region", ok,
           "; ".join(details) + f", {elapsed:.0f}s")


def test_criterion_08_inequality_lab():
    t0 = time.time()
    lemmas = estimates.verify_wavenumber_lemmas(shell_max=16, r=2.0)
    violations = sum(rep.violations for rep in lemmas.values())
    grid = GridSpec(d=2, n=16, cutoff=6)
    a = estimates.empirical_constant("euler", grid, 2.0, 0.3, n_samples=500, seed=1)
    b = estimates.empirical_constant("euler", grid, 2.0, 0.3, n_samples=500, seed=2)
    spread = abs(a.c_emp - b.c_emp) / a.c_emp
    elapsed = time.time() - t0
    ok = (
        violations == 0
        and math.isfinite(a.c_emp)
        and not a.degenerate
        and spread <= 0.2
        and elapsed < 300.0
    )
    report(8, "wavenumber lemmas clean; measured constant reproducible", ok,
           f"{violations} violations, C_emp {a.c_emp:.4g} vs {b.c_emp:.4g} "
           f"(spread {spread:.1%}), {elapsed:.0f}s")


def test_criterion_09_derivative_decay():
    t0 = time.time()
    grid = GridSpec(d=2, n=16, cutoff=6)
    worst = 0.0
    for i in range(100):
        f = random_gevrey_field(grid, 1, 5000 + i, 1.0, hermitian=True, div_free=False)
        for entry in derivative_decay_check(f, 2.0, 0.5, 4):
            worst = max(worst, entry.ratio)
    elapsed = time.time() - t0
    report(9, "factorial derivative-growth bound", worst <= 1 + 1e-12 and elapsed < 30.0,
           f"max ratio {worst:.15f}, {elapsed:.1f}s")


def test_criterion_10_galerkin_convergence():
    t0 = time.time()
    grid = GridSpec(d=3, n=48, cutoff=21)
    state = initial_data("taylor_green_3d", grid)
    p = GevreyParams(r=2.0, beta0=0.3, delta=0.0)
    ray = engine.RaySpec(theta=0.0, ds=8e-3, s_max=0.4)
    entries = engine.galerkin_convergence(state, p, ray, [8, 12, 16, 21])
    devs = [e.deviation for e in entries]
    elapsed = time.time() - t0
    strictly_decreasing = all(a > b for a, b in zip(devs, devs[1:]))
    report(10, "truncation deviations strictly decreasing in the cutoff",
           strictly_decreasing and elapsed < 300.0,
           "devs " + ", ".join(f"{d:.3e}" for d in devs) + f", {elapsed:.0f}s")


def test_criterion_11_determinism(tmp_path):
    args = [
        "simulate", "--model", "euler", "--data", "random_gevrey", "--seed", "9",
        "--n", "16", "--cutoff", "5", "--r", "2", "--beta0", "0.5",
        "--sweep-theta", "4", "--ds", "0.001",
    ]
    assert cli.main(args + ["--out", str(tmp_path / "a")]) == 0
    assert cli.main(args + ["--out", str(tmp_path / "b")]) == 0
    # the manifest embeds the differing output paths; the data records are
    # the determinism surface
    files_a = sorted(p.name for p in (tmp_path / "a").iterdir() if p.name != "manifest.json")
    files_b = sorted(p.name for p in (tmp_path / "b").iterdir() if p.name != "manifest.json")
    identical = files_a == files_b and all(
        (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        for name in files_a
    )
    report(11, "seeded runs byte-identical", identical, f"{len(files_a)} files compared")
