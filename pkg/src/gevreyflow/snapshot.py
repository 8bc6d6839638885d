"""Binary field snapshots and state serialization.

Layout of a field block (all integers little-endian):

    bytes 0-4    magic "GFLD1"
    byte  5      d (uint8)
    bytes 6-9    n (uint32)
    bytes 10-13  cutoff K (uint32)
    byte  14     number of components (uint8)
    byte  15     flags bitfield: 1 = hermitian, 2 = mean_free, 4 = div_free
    bytes 16-    coefficients, complex128 little-endian, component-major then
                 row-major over the full n^d lattice

A model state is a directory holding one block per member field plus a JSON
sidecar with the tag and scalar parameters.
"""

from __future__ import annotations

import json
import os
import struct
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .grid import GridSpec, SpectralField, cutoff_mask

MAGIC = b"GFLD1"
_HEADER = struct.Struct("<5sBIIBB")

_F_HERMITIAN = 1
_F_MEAN_FREE = 2
_F_DIV_FREE = 4


def write_field(path: str | os.PathLike, f: SpectralField) -> None:
    """Write a single field block atomically (temp file + rename)."""
    flags = (
        (_F_HERMITIAN if f.hermitian else 0)
        | (_F_MEAN_FREE if f.mean_free else 0)
        | (_F_DIV_FREE if f.div_free else 0)
    )
    header = _HEADER.pack(
        MAGIC, f.grid.d, f.grid.n, f.grid.cutoff, f.coeffs.shape[0], flags
    )
    payload = np.ascontiguousarray(f.coeffs).astype("<c16", copy=False).tobytes()
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(header + payload)
    os.replace(tmp, path)


def read_field(path: str | os.PathLike) -> SpectralField:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ConfigurationError(f"{path}: truncated snapshot header")
    magic, d, n, cutoff, ncomp, flags = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ConfigurationError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    grid = GridSpec(d=d, n=n, cutoff=cutoff)
    expect = ncomp * n**d
    payload = raw[_HEADER.size :]
    data = np.frombuffer(payload[: len(payload) - len(payload) % 16], dtype="<c16")
    if data.size != expect:
        raise ConfigurationError(
            f"{path}: payload holds {data.size} coefficients, expected {expect}"
        )
    coeffs = data.reshape((ncomp,) + grid.shape).astype(np.complex128)
    coeffs[:, ~cutoff_mask(grid)] = 0.0
    return SpectralField(
        grid,
        coeffs,
        hermitian=bool(flags & _F_HERMITIAN),
        mean_free=bool(flags & _F_MEAN_FREE),
        div_free=bool(flags & _F_DIV_FREE),
    )


def write_state(directory: str | os.PathLike, state) -> None:
    """One GFLD1 block per member plus a JSON sidecar with tag and parameters."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, f in state.members.items():
        write_field(directory / f"{name}.gfld", f)
    sidecar = {
        "tag": state.tag,
        "members": list(state.members),
        "g": state.g,
        "e_axis": state.e_axis,
        "S": state.S,
        "rho0": state.rho0,
        "series": list(state.series.coeffs) if state.series is not None else None,
    }
    tmp = directory / "state.json.tmp"
    tmp.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    os.replace(tmp, directory / "state.json")


def read_state(directory: str | os.PathLike):
    from .models import AnalyticSeries, ModelState

    directory = Path(directory)
    sidecar = json.loads((directory / "state.json").read_text())
    members = {
        name: read_field(directory / f"{name}.gfld") for name in sidecar["members"]
    }
    series = (
        AnalyticSeries(tuple(sidecar["series"])) if sidecar["series"] is not None else None
    )
    return ModelState(
        tag=sidecar["tag"],
        members=members,
        g=sidecar["g"],
        e_axis=sidecar["e_axis"],
        S=sidecar["S"],
        rho0=sidecar["rho0"],
        series=series,
    )
