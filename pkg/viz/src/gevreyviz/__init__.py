"""Diagnostic figures rendered from simulation record files.

This package reads only the documented external record formats — trajectory
JSONL, sweep summary JSON, estimate CSV, and GFLD1 field snapshots — and has
no dependency on the simulation engine itself.
"""

__version__ = "0.1.0"
