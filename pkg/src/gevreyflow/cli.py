"""Command-line front end: configuration, dispatch, manifests, record emission.

Commands
--------
simulate          integrate rays in complex time, emit JSONL samples + summary
certify           prediction-only certified radius (no integration)
verify-estimates  inequality ensemble sweeps, CSV + measured-constant JSON
chain-disks       disk chaining along a real-time schedule, coverage JSON
catalog           list the bundled initial data

A JSON config file may supply any setting; command-line flags override file
values and the merged config is echoed into ``manifest.json`` together with
its hash and the package version.  All output files are written atomically
(temp file + rename) and identical (config, seed) pairs produce byte-identical
outputs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .errors import ConfigurationError, RadiusExhaustedError, SeriesRadiusError
from .grid import GridSpec
from .models import CATALOG, AnalyticSeries, initial_data
from .norms import GevreyParams

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2

RECORD_SCHEMA = {
    "type": "object",
    "required": ["model", "theta", "s", "beta_effective", "norms", "status"],
    "properties": {
        "model": {"type": "string"},
        "theta": {"type": "number"},
        "s": {"type": "number"},
        "beta_effective": {"type": "number"},
        "status": {"type": "string", "enum": ["running", "completed", "blown_up", "radius_exhausted"]},
        "norms": {
            "type": "object",
            "required": ["combined_gevrey", "combined_quarter", "members"],
            "properties": {
                "combined_gevrey": {"type": "number"},
                "combined_quarter": {"type": "number"},
                "members": {
                    "type": "object",
                    "additionalProperties": {
                        "type": "object",
                        "required": ["l2", "sobolev_r", "gevrey", "gevrey_quarter", "wiener"],
                    },
                },
            },
        },
    },
}


@dataclass
class RunConfig:
    """Fully seeded description of one run; every module precondition is
    checkable from these fields before any work starts."""

    model: str = "euler"
    data: str = "taylor_green_2d"
    dim: int = 2
    n: int = 32
    cutoff: int | None = None
    r: float = 2.0
    beta0: float | None = None
    delta: float | None = None
    constant: float | str = 1.0
    n_theta: int = 8
    theta: float = 0.0
    ds: float = 1e-3
    s_max: float | None = None
    integrator: str = "rk4_fixed"
    blowup_factor: float = 1e6
    seed: int = 0
    beta_decay: float = 1.0
    g: float = 1.0
    big_s: float = 1.0
    series: list | None = None
    samples: int = 100
    shell_max: int = 16
    out: str = "runs/out"

    def grid(self) -> GridSpec:
        cutoff = self.cutoff if self.cutoff is not None else self.n // 2 - 1
        return GridSpec(d=self.dim, n=self.n, cutoff=cutoff)

    def gevrey(self) -> GevreyParams:
        if self.beta0 is None:
            raise ConfigurationError("gevrey.beta0 required")
        return GevreyParams(
            r=self.r, beta0=self.beta0, delta=self.delta, constant_policy=self.constant
        )

    def state(self):
        kwargs = {}
        if self.data == "random_gevrey":
            kwargs = {"seed": self.seed, "beta_decay": self.beta_decay, "model": self.model}
        elif self.data == "bouss_stratified":
            kwargs = {"g": self.g}
        elif self.data == "analytic_gaussian_modes" and self.series is not None:
            kwargs = {"series": AnalyticSeries(tuple(self.series))}
        return initial_data(self.data, self.grid(), **kwargs)


def load_config(args: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if getattr(args, "config", None):
        base = json.loads(Path(args.config).read_text())
        unknown = set(base) - set(RunConfig.__dataclass_fields__)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    for key in RunConfig.__dataclass_fields__:
        val = getattr(args, key, None)
        if val is not None:
            base[key] = val
    return RunConfig(**base)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_manifest(outdir: Path, cfg: RunConfig, command: str) -> None:
    merged = asdict(cfg)
    blob = json.dumps(merged, sort_keys=True)
    manifest = {
        "command": command,
        "config": merged,
        "config_sha256": hashlib.sha256(blob.encode()).hexdigest(),
        "seed": cfg.seed,
        "version": __version__,
    }
    _atomic_write(outdir / "manifest.json", _dump_json(manifest))


def _resolve_empirical(cfg: RunConfig, p: GevreyParams, state) -> GevreyParams:
    """Fill in the measured constant when the policy asks for it."""
    if p.constant_policy != "empirical":
        return p
    from . import estimates

    grid = state.grid
    small = GridSpec(d=grid.d, n=min(grid.n, 16), cutoff=min(grid.cutoff, 6))
    meas = estimates.empirical_constant(
        cfg.model, small, p.r, p.beta0, n_samples=max(cfg.samples, 100), seed=cfg.seed
    )
    return p.replace(empirical_c=meas.c_emp)


def sample_record(model: str, theta: float, smp, status: str) -> dict:
    return {
        "model": model,
        "theta": theta,
        "s": smp.s,
        "beta_effective": next(iter(smp.norms.values())).beta_effective,
        "norms": {
            "combined_gevrey": smp.combined_gevrey,
            "combined_quarter": smp.combined_quarter,
            "members": {name: rep.to_dict() for name, rep in smp.norms.items()},
        },
        "status": status,
    }


def cmd_simulate(cfg: RunConfig, self_check: bool = False) -> int:
    from . import engine

    state = cfg.state()
    p = _resolve_empirical(cfg, cfg.gevrey(), state)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_manifest(outdir, cfg, "simulate")

    region = engine.certified_radius(state, p)
    delta = p.delta if p.delta is not None else region.delta_used
    s_max = cfg.s_max if cfg.s_max is not None else 2.0 * region.s_certified
    if delta > 0:
        s_max = min(s_max, engine.RADIUS_GUARD * p.beta0 / delta)
    ray = engine.RaySpec(theta=0.0, ds=cfg.ds, s_max=s_max, integrator=cfg.integrator)
    region, trajs = engine.sweep_theta(state, p, cfg.n_theta, ray, cfg.blowup_factor)

    for traj in trajs:
        lines = []
        for i, smp in enumerate(traj.samples):
            status = traj.status if i == len(traj.samples) - 1 else "running"
            rec = sample_record(cfg.model, traj.theta, smp, status)
            if self_check:
                import jsonschema

                jsonschema.validate(rec, RECORD_SCHEMA)
            lines.append(json.dumps(rec, sort_keys=True))
        tag = f"ray_{traj.theta:.6f}".replace(".", "_")
        _atomic_write(outdir / f"{tag}.jsonl", "\n".join(lines) + "\n")

    summary = region.to_dict()
    _atomic_write(outdir / "summary.json", _dump_json(summary))
    if region.violations:
        print(f"certified-region violation on {len(region.violations)} ray(s)", file=sys.stderr)
        return EXIT_VIOLATION
    print(f"s_certified={region.s_certified:.6g}  rays={cfg.n_theta}  out={outdir}")
    return EXIT_OK


def cmd_certify(cfg: RunConfig) -> int:
    from . import engine

    state = cfg.state()
    p = _resolve_empirical(cfg, cfg.gevrey(), state)
    region = engine.certified_radius(state, p)
    if not math.isfinite(region.norm0):
        raise ConfigurationError("initial Gevrey norm is not finite")
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_manifest(outdir, cfg, "certify")
    _atomic_write(outdir / "region.json", _dump_json(region.to_dict()))
    print(f"s_certified={region.s_certified:.6g}  delta={region.delta_used:.6g}")
    return EXIT_OK


def cmd_verify_estimates(cfg: RunConfig, exhaustive_lemmas: bool = False) -> int:
    from . import estimates

    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_manifest(outdir, cfg, "verify-estimates")
    p = cfg.gevrey()
    grid = cfg.grid()

    if exhaustive_lemmas:
        lemmas = estimates.verify_wavenumber_lemmas(shell_max=cfg.shell_max, r=p.r, seed=cfg.seed)
        report = {
            name: {"checked": rep.checked, "violations": rep.violations, "worst_margin": rep.worst_margin}
            for name, rep in lemmas.items()
        }
        _atomic_write(outdir / "lemmas.json", _dump_json(report))
        total = sum(rep.violations for rep in lemmas.values())
        print(f"wavenumber lemmas: {total} violations")
        return EXIT_OK if total == 0 else EXIT_VIOLATION

    meas = estimates.empirical_constant(
        cfg.model, grid, p.r, p.beta0, n_samples=cfg.samples, seed=cfg.seed,
        beta_decay=cfg.beta_decay,
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sample", "seed", "ratio"])
    for i, ratio in enumerate(meas.ratios):
        writer.writerow([i, cfg.seed * 1_000_003 + i, repr(ratio)])
    _atomic_write(outdir / "ratios.csv", buf.getvalue())
    summary = {
        "model": meas.model,
        "c_emp": meas.c_emp,
        "max_ratio": meas.max_ratio,
        "samples": len(meas.ratios),
        "seed": meas.seed,
        "degenerate": meas.degenerate,
        "safety_factor": meas.safety_factor,
    }
    _atomic_write(outdir / "c_emp.json", _dump_json(summary))
    print(f"C_emp({cfg.model}) = {meas.c_emp:.6g} over {len(meas.ratios)} samples")
    return EXIT_OK


def cmd_chain_disks(cfg: RunConfig, schedule_path: str) -> int:
    from . import engine

    rows = []
    with open(schedule_path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if row[0].strip().lower() in ("t", "time"):
                continue
            try:
                t, beta, m = (float(c) for c in row[:3])
            except (ValueError, IndexError):
                raise ConfigurationError(f"{schedule_path}:{lineno}: malformed schedule row {row!r}")
            rows.append((t, beta, m))
    chain = engine.chain_disks(rows, cfg.gevrey(), cfg.dim)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_manifest(outdir, cfg, "chain-disks")
    _atomic_write(outdir / "chain.json", _dump_json(chain.to_dict()))
    print(f"epsilon={chain.epsilon:.6g}  disks={len(chain.centers)}  covers={chain.covers}")
    return EXIT_OK


def cmd_catalog() -> int:
    for name in CATALOG:
        print(name)
    return EXIT_OK


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file; flags override its values")
    sub.add_argument("--model", choices=["euler", "sqg", "boussinesq", "mhd", "analytic"])
    sub.add_argument("--data", help="initial-data catalog name")
    sub.add_argument("--dim", type=int)
    sub.add_argument("--n", type=int)
    sub.add_argument("--cutoff", type=int)
    sub.add_argument("--r", type=float)
    sub.add_argument("--beta0", type=float)
    sub.add_argument("--delta", type=float)
    sub.add_argument("--constant", type=lambda s: s if s == "empirical" else float(s))
    sub.add_argument("--seed", type=int)
    sub.add_argument("--g", type=float)
    sub.add_argument("--beta-decay", dest="beta_decay", type=float)
    sub.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gevreyflow", description=__doc__.split("\n")[0])
    subs = parser.add_subparsers(dest="command", required=True)

    sim = subs.add_parser("simulate", help="integrate complex-time rays")
    _add_common(sim)
    sim.add_argument("--sweep-theta", dest="n_theta", type=int)
    sim.add_argument("--ds", type=float)
    sim.add_argument("--s-max", dest="s_max", type=float)
    sim.add_argument("--integrator", choices=["rk4_fixed", "rk4_doubling"])
    sim.add_argument("--blowup-factor", dest="blowup_factor", type=float)
    sim.add_argument("--self-check", action="store_true", help="re-validate records against the schema")

    cert = subs.add_parser("certify", help="certified radius, no integration")
    _add_common(cert)

    ver = subs.add_parser("verify-estimates", help="inequality ensemble sweeps")
    _add_common(ver)
    ver.add_argument("--samples", type=int)
    ver.add_argument("--shell-max", dest="shell_max", type=int)
    ver.add_argument("--exhaustive-lemmas", action="store_true")

    chain = subs.add_parser("chain-disks", help="disk chaining from a schedule CSV")
    _add_common(chain)
    chain.add_argument("schedule", help="CSV of rows t,beta,M")

    subs.add_parser("catalog", help="list bundled initial data")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "catalog":
            return cmd_catalog()
        cfg = load_config(args)
        if args.command == "simulate":
            return cmd_simulate(cfg, self_check=args.self_check)
        if args.command == "certify":
            return cmd_certify(cfg)
        if args.command == "verify-estimates":
            return cmd_verify_estimates(cfg, exhaustive_lemmas=args.exhaustive_lemmas)
        if args.command == "chain-disks":
            return cmd_chain_disks(cfg, args.schedule)
        parser.error(f"unknown command {args.command!r}")
    except (ConfigurationError, RadiusExhaustedError, SeriesRadiusError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
