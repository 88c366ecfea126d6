"""Optimisers and table builders: best mixing weight gamma and best ``s`` in
``(AB)^s B^(r-2)``, both at ``rho = 0``."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from .numerics import Scalar, format_scalar
from .patterns import Parity, rate_ABsB, s_r
from .rates import rate_mixture_rho0

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2
TABLE_RS = tuple(10**k for k in range(1, 7))
GRID_POINTS = 512


@dataclass(frozen=True)
class SweepResult:
    r: int
    argmax: Union[float, frozenset]
    max_mu: Scalar
    reference_point: Optional[Scalar]
    reference_mu: Optional[Scalar]
    method: str = "golden-section"

    @property
    def gap(self) -> Scalar:
        return 1 - self.max_mu

    @property
    def reference_gap(self) -> Optional[Scalar]:
        return None if self.reference_mu is None else 1 - self.reference_mu


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-9, max_iter: int = 500):
    """Maximise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
    x = float(lo + hi) / 2
    return x, f(x)


def gamma_grid(r: int, n_points: int = GRID_POINTS) -> tuple[np.ndarray, np.ndarray]:
    """``mu(r, 0, gamma)`` on the interior grid ``gamma = k/(n_points+1)``."""
    g = np.arange(1, n_points + 1) / (n_points + 1)
    mu = np.array([float(rate_mixture_rho0(r, x, backend="float").mu) for x in g])
    return g, mu


def _is_unimodal(values: np.ndarray) -> bool:
    diffs = np.sign(np.diff(values))
    diffs = diffs[diffs != 0]
    return int(np.count_nonzero(np.diff(diffs) != 0)) <= 1 and (len(diffs) == 0 or diffs[0] > 0 or diffs[-1] < 0)


def argmax_gamma(r: int, tol: float = 1e-9) -> SweepResult:
    """Maximise ``mu(r, 0, gamma)`` over ``gamma`` in (0, 1).

    A 512-point grid brackets the peak and golden-section search refines it.
    If the grid is not unimodal the best grid point is refined by a dense
    local grid instead and a warning is logged.
    """
    if r < 3:
        raise ValueError(f"r must be >= 3, got {r}")

    def mu(x):
        return float(rate_mixture_rho0(r, x, backend="float").mu)

    g, values = gamma_grid(r)
    k = int(np.argmax(values))
    lo = g[k - 1] if k > 0 else 0.0
    hi = g[k + 1] if k + 1 < len(g) else 1.0
    if _is_unimodal(values):
        x, best = golden_section_max(mu, lo, hi, tol)
        method = "golden-section"
    else:
        logger.warning("mu(r=%d, 0, gamma) not unimodal on the grid; using dense grid search", r)
        fine = np.linspace(lo, hi, 20001)[1:-1]
        fine_mu = [mu(x) for x in fine]
        j = int(np.argmax(fine_mu))
        x, best = float(fine[j]), fine_mu[j]
        method = "grid"
    gamma_r = 2 / math.sqrt(r)
    if gamma_r >= 1:
        return SweepResult(r, x, best, None, None, method)
    return SweepResult(r, x, best, gamma_r, mu(gamma_r), method)


def argmax_s(r: int, s_max: int | None = None) -> SweepResult:
    """Scan ``s = 1..s_max`` of the exact rate of ``(AB)^s B^(r-2)`` from even
    capital. Ties are reported as a set; rates are fractions, so ties are exact.
    """
    if r < 3:
        raise ValueError(f"r must be >= 3, got {r}")
    if s_max is None:
        s_max = 2 * (r.bit_length() - 1) + 4
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    while True:
        mus = {s: rate_ABsB(r, s, Parity.EVEN).mu for s in range(1, s_max + 1)}
        best = max(mus.values())
        arg = frozenset(s for s, m in mus.items() if m == best)
        if max(arg) < s_max or s_max == 1:
            break
        logger.warning("argmax at the edge of the scan window s_max=%d; widening", s_max)
        s_max *= 2
    ref = max(s_r(r), 1)
    return SweepResult(r, arg, best, ref, rate_ABsB(r, ref, Parity.EVEN).mu, "exact-scan")


TABLE1_COLUMNS = ("r", "argmax_gamma_mu", "1-max_gamma_mu", "gamma_r=2/sqrt(r)", "1-mu_at_gamma_r")
TABLE2_COLUMNS = ("r", "argmax_s_mu", "1-max_s_mu", "s_r=floor(log2_r)-1")


def make_table1(rs=TABLE_RS, tol: float = 1e-9) -> list[dict]:
    rows = []
    for r in rs:
        res = argmax_gamma(r, tol)
        rows.append(dict(zip(TABLE1_COLUMNS, (r, res.argmax, res.gap, res.reference_point, res.reference_gap))))
    return rows


def make_table2(rs=TABLE_RS) -> list[dict]:
    rows = []
    for r in rs:
        res = argmax_s(r)
        rows.append(dict(zip(TABLE2_COLUMNS, (r, tuple(sorted(res.argmax)), res.gap, s_r(r)))))
    return rows


def _cell(x, sig: int | None):
    if isinstance(x, tuple):
        return ",".join(str(v) for v in x)
    if isinstance(x, Fraction):
        return f"{float(x):.{sig}g}" if sig else format_scalar(x)
    if isinstance(x, float):
        return f"{x:.{sig}g}" if sig else repr(x)
    return str(x)


def table_to_csv(rows: list[dict], sig: int | None = 6) -> str:
    """CSV with a header row; numbers rounded to ``sig`` significant digits
    (``None`` keeps full precision, exact fractions as ``num/den``)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows[0].keys())
    for row in rows:
        w.writerow([_cell(v, sig) for v in row.values()])
    return buf.getvalue()


def table_to_json(rows: list[dict]) -> str:
    def enc(v):
        if isinstance(v, Fraction):
            return {"exact": format_scalar(v), "float": float(v)}
        if isinstance(v, tuple):
            return list(v)
        return v

    return json.dumps([{k: enc(v) for k, v in row.items()} for row in rows], indent=2)
