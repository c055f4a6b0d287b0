"""Parameter scans of the ball-shell configuration.

Each grid point is independent; with ``jobs > 1`` points run in worker
processes and results are merged back in grid order. A point whose
quadrature fails is recorded with its error and the scan continues.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import PartnerOverlapError
from ..measures import criterion
from .pairing import DEFAULT_TOL, ball_shell_blocks

COLUMNS = ("d_sym", "d_c", "d_t", "w_delta", "w_dt", "log_negativity", "verdict")


@dataclass
class ScanResult:
    parameter: str
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    k_max: float = 0.0
    tol: float = DEFAULT_TOL

    @property
    def columns(self) -> tuple[str, ...]:
        return (self.parameter,) + COLUMNS

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows], dtype=object if name == "verdict" else float)

    def diagnostics(self) -> dict:
        return {"k_max": self.k_max, "tol": self.tol, "point_failures": self.failures}


def evaluate_point(rb: float, db: float, mu: float, tol: float = DEFAULT_TOL, k_scale: float = 1.0) -> dict:
    """Criterion values for one ball-shell configuration."""
    ps, blocks = ball_shell_blocks(rb, db, mu, tol, k_scale)
    rep = criterion(blocks)
    return {
        "d_sym": rep.d_sym,
        "d_c": rep.d_c,
        "d_t": rep.d_t,
        "w_delta": rep.w_delta,
        "w_dt": rep.w_delta * rep.d_t,
        "log_negativity": rep.log_negativity,
        "verdict": rep.verdict,
        "nu_tilde_minus": rep.nu_tilde_minus,
        "k_max": ps.diagnostics["k_max"],
    }


def _task(args):
    rb, db, mu, tol, k_scale = args
    try:
        return evaluate_point(rb, db, mu, tol, k_scale), None
    except (PartnerOverlapError, ArithmeticError, ValueError) as exc:
        return None, repr(exc)


def _run(parameter, values, points, tol, jobs, k_scale) -> ScanResult:
    tasks = [(rb, db, mu, tol, k_scale) for rb, db, mu in points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outs = list(pool.map(_task, tasks))
    else:
        outs = [_task(t) for t in tasks]
    res = ScanResult(parameter, tol=tol)
    for v, (row, err) in zip(values, outs):
        if err is not None:
            res.failures.append({parameter: float(v), "error": err})
            continue
        res.k_max = max(res.k_max, row.pop("k_max"))
        row.pop("nu_tilde_minus")
        res.rows.append({parameter: float(v), **row})
    return res


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps}")
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise ValueError(f"invalid range ({lo}, {hi})")
    return np.linspace(lo, hi, steps)


def scan_separation(mu=0.0, d_b=0.5, gap_range=(0.0, 0.5), steps=26, tol=DEFAULT_TOL, jobs=1, k_scale=1.0) -> ScanResult:
    """Vary the gap ``R_B - R_A`` (the ball radius is 1)."""
    if gap_range[0] < 0:
        raise ValueError("R_B must not be smaller than R_A")
    gaps = _grid(*gap_range, steps)
    return _run("rb_minus_ra", gaps, [(1.0 + g, d_b, mu) for g in gaps], tol, jobs, k_scale)


def scan_mass(mu_range=(0.0, 5.0), r_b=1.0, d_b=0.5, steps=26, tol=DEFAULT_TOL, jobs=1, k_scale=1.0) -> ScanResult:
    """Vary ``mu = m R_A``."""
    if mu_range[0] < 0:
        raise ValueError("mass must be non-negative")
    if r_b < 1.0:
        raise ValueError("R_B must not be smaller than R_A")
    mus = _grid(*mu_range, steps)
    return _run("mu", mus, [(r_b, d_b, m) for m in mus], tol, jobs, k_scale)


def scan_width(d_range=(0.05, 3.0), r_b=1.0, mu=0.0, steps=30, tol=DEFAULT_TOL, jobs=1, k_scale=1.0) -> ScanResult:
    """Vary the shell width ``d_B``."""
    if d_range[0] <= 0:
        raise ValueError("shell width must be positive")
    if r_b < 1.0:
        raise ValueError("R_B must not be smaller than R_A")
    ds = _grid(*d_range, steps)
    return _run("d_b", ds, [(r_b, d, mu) for d in ds], tol, jobs, k_scale)
