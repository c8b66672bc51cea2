"""Numerical tolerances shared by every module.

All thresholds live in one frozen dataclass so that a run can be reproduced
from a single JSON override file (see the ``--tol-overrides`` CLI flag).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class Tolerances:
    # hermitian core
    tol_herm: float = 1e-12
    tol_eig: float = 1e-12
    zero_tol: float = 1e-9  # relative to the largest |eigenvalue|
    tol_inv: float = 1e-10
    # polynomials / rational functions
    tol_root: float = 1e-10
    root_match_tol: float = 1e-8
    root_cluster_tol: float = 1e-3
    coef_trim_tol: float = 1e-12
    disk_boundary_tol: float = 1e-8
    tol_eval: float = 1e-10
    tol_unimod: float = 1e-9
    # problem data and the coefficient matrix
    node_sep_tol: float = 1e-8
    tol_stein: float = 1e-12
    tol_junit: float = 1e-10
    pole_tol: float = 1e-9
    mu_clearance: float = 0.1
    # boundary behaviour and classification
    class_tol: float = 1e-7
    value_tol: float = 1e-8
    divergence_threshold: float = 1e6
    radial_k_min: int = 4
    radial_k_max: int = 24
    richardson_terms: int = 6
    # degenerate case
    tol_deg: float = 1e-8

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerances()
_current = DEFAULT


def get() -> Tolerances:
    """Return the active tolerance set."""
    return _current


def set_tolerances(tol: Tolerances) -> None:
    global _current
    _current = tol


def with_overrides(overrides: dict, base: Tolerances | None = None) -> Tolerances:
    """Return ``base`` with the given fields replaced.

    Unknown keys raise ``KeyError`` so that typos in override files do not
    silently fall back to defaults.
    """
    base = base or DEFAULT
    known = {f.name: f.type for f in fields(Tolerances)}
    clean = {}
    for key, value in overrides.items():
        if key not in known:
            raise KeyError(f"unknown tolerance {key!r}")
        clean[key] = int(value) if key.startswith(("radial_k", "richardson")) else float(value)
    return replace(base, **clean)


def load_overrides(path: str | Path) -> Tolerances:
    with open(path) as fh:
        return with_overrides(json.load(fh))
