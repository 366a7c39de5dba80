"""Loading of fixture files (polynomial lists and matrices, text format).

Fixture files live under the installed package by default; the directory
can be overridden per call, via the CLI flag, or with the environment
variable QUADRIC_APOLARITY_FIXTURES.  Lines starting with '#' are comments;
matrix rows separate entries with ';'.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path
from typing import List, Optional

from .poly_core import Polynomial, Ring, parse_polynomial
from .exact_linalg import PolyMatrix

ENV_VAR = "QUADRIC_APOLARITY_FIXTURES"

_DEFAULT_DIR = Path(__file__).parent / "fixtures"


def fixtures_dir(override: Optional[str] = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return _DEFAULT_DIR


def _data_lines(path: Path) -> List[str]:
    lines = []
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


def load_polynomials(name: str, ring: Ring, base: Optional[str] = None) -> List[Polynomial]:
    path = fixtures_dir(base) / name
    return [parse_polynomial(line, ring) for line in _data_lines(path)]


def load_matrix(name: str, ring: Ring, base: Optional[str] = None) -> PolyMatrix:
    path = fixtures_dir(base) / name
    rows = []
    for line in _data_lines(path):
        rows.append([parse_polynomial(cell, ring) for cell in line.split(";")])
    return PolyMatrix.from_rows(rows, ring)


def fixtures_digest(base: Optional[str] = None) -> str:
    """Stable hash over every fixture file, for drift detection in reports."""
    root = fixtures_dir(base)
    h = hashlib.sha256()
    for path in sorted(root.rglob("*.txt")):
        h.update(path.relative_to(root).as_posix().encode())
        h.update(path.read_bytes())
    return h.hexdigest()[:16]
