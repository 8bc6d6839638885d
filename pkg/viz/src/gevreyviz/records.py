"""Readers for the documented record formats, with line-citing validation."""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np


class RecordError(ValueError):
    """A record file does not match its documented schema."""


_REQUIRED_SAMPLE_KEYS = ("model", "theta", "s", "beta_effective", "norms", "status")


def read_trajectory(path: str | Path) -> list[dict]:
    """Parse one ray's JSONL file; every record must carry the sample keys."""
    records = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordError(f"{path}:{lineno}: not valid JSON ({exc})") from None
        missing = [k for k in _REQUIRED_SAMPLE_KEYS if k not in rec]
        if missing:
            raise RecordError(f"{path}:{lineno}: record missing keys {missing}")
        if "combined_gevrey" not in rec["norms"]:
            raise RecordError(f"{path}:{lineno}: norms block missing combined_gevrey")
        records.append(rec)
    if not records:
        raise RecordError(f"{path}: empty trajectory")
    return records


def read_summary(path: str | Path) -> dict:
    summary = json.loads(Path(path).read_text())
    for key in ("s_certified", "per_theta"):
        if key not in summary:
            raise RecordError(f"{path}: summary missing {key!r}")
    for i, entry in enumerate(summary["per_theta"]):
        for key in ("theta", "s_empirical", "censored"):
            if key not in entry:
                raise RecordError(f"{path}: per_theta[{i}] missing {key!r}")
    return summary


def read_ratio_csv(path: str | Path) -> list[float]:
    ratios = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "ratio" not in reader.fieldnames:
            raise RecordError(f"{path}: CSV lacks a 'ratio' column")
        for lineno, row in enumerate(reader, start=2):
            try:
                ratios.append(float(row["ratio"]))
            except (TypeError, ValueError):
                raise RecordError(f"{path}:{lineno}: non-numeric ratio {row['ratio']!r}") from None
    if not ratios:
        raise RecordError(f"{path}: no ratio rows")
    return ratios


_GFLD_HEADER = struct.Struct("<5sBIIBB")


def read_gfld(path: str | Path):
    """Read a GFLD1 snapshot: returns (d, n, cutoff, coefficients array)."""
    raw = Path(path).read_bytes()
    if len(raw) < _GFLD_HEADER.size:
        raise RecordError(f"{path}: truncated header")
    magic, d, n, cutoff, ncomp, _flags = _GFLD_HEADER.unpack_from(raw)
    if magic != b"GFLD1":
        raise RecordError(f"{path}: bad magic {magic!r}")
    expect = ncomp * n**d
    payload = raw[_GFLD_HEADER.size :]
    data = np.frombuffer(payload[: len(payload) - len(payload) % 16], dtype="<c16")
    if data.size != expect:
        raise RecordError(f"{path}: expected {expect} coefficients, found {data.size}")
    return d, n, cutoff, data.reshape((ncomp,) + (n,) * d)
