"""Parrondo's games A and B as transition matrices on capital mod ``r``.

Matrices are numpy arrays. Exact matrices use ``dtype=object`` holding
:class:`~fractions.Fraction` entries, so ``@`` and ``sum`` stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .numerics import Backend, Scalar, as_scalar, format_scalar, is_exact, power, resolve_backend


def _check_r(r: int) -> None:
    if int(r) != r or r < 3:
        raise ValueError(f"modulus r must be an integer >= 3, got {r}")


def coin_probs(r: int, rho: Scalar) -> tuple[Scalar, Scalar]:
    """Coin pair ``(p0, p1)`` that makes game B fair for modulus ``r``.

    ``p0 = rho**(r-1) / (1 + rho**(r-1))`` and ``p1 = 1 / (1 + rho)``;
    ``rho = 0`` is allowed and gives the degenerate pair ``(0, 1)``.
    """
    _check_r(r)
    if not 0 <= rho < 1:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    rho_r1 = power(rho, r - 1)
    return rho_r1 / (1 + rho_r1), 1 / (1 + rho)


@dataclass(frozen=True)
class GameParams:
    """Game parameters ``(r, rho)`` plus an optional mixing weight ``gamma``."""

    r: int
    rho: Scalar
    gamma: Optional[Scalar] = None

    def __post_init__(self):
        _check_r(self.r)
        if not 0 <= self.rho < 1:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if self.gamma is not None and not 0 < self.gamma < 1:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")

    @classmethod
    def create(cls, r: int, rho, gamma=None, backend: str = "auto") -> "GameParams":
        values = (rho,) if gamma is None else (rho, gamma)
        mode = resolve_backend(backend, r, *values)
        return cls(
            r=r,
            rho=as_scalar(rho, mode),
            gamma=None if gamma is None else as_scalar(gamma, mode),
        )

    @property
    def backend(self) -> Backend:
        exact = is_exact(self.rho) and (self.gamma is None or is_exact(self.gamma))
        return "exact" if exact else "float"

    @property
    def p0(self) -> Scalar:
        return coin_probs(self.r, self.rho)[0]

    @property
    def p1(self) -> Scalar:
        return coin_probs(self.r, self.rho)[1]

    @property
    def q0(self) -> Scalar:
        return 1 - self.p0

    @property
    def q1(self) -> Scalar:
        return 1 - self.p1

    def fairness_residual(self) -> Scalar:
        """``(1-p0)(1-p1)**(r-1) - p0 * p1**(r-1)``; zero for a fair game B."""
        p0, p1 = coin_probs(self.r, self.rho)
        return (1 - p0) * power(1 - p1, self.r - 1) - p0 * power(p1, self.r - 1)


def _zeros(n: int, exact: bool) -> np.ndarray:
    if exact:
        return np.full((n, n), Fraction(0), dtype=object)
    return np.zeros((n, n))


def cycle_matrix(up) -> np.ndarray:
    """Transition matrix of the walk on the n-cycle with up-probabilities ``up``.

    State ``i`` moves to ``i+1`` with probability ``up[i]`` and to ``i-1``
    otherwise (indices mod n).
    """
    n = len(up)
    exact = all(is_exact(p) for p in up)
    P = _zeros(n, exact)
    for i, p in enumerate(up):
        p = Fraction(p) if exact else float(p)
        P[i, (i + 1) % n] += p
        P[i, (i - 1) % n] += 1 - p
    return P


def up_probabilities(P: np.ndarray) -> list:
    """Recover the up-probabilities of a cycle transition matrix."""
    n = P.shape[0]
    return [P[i, (i + 1) % n] for i in range(n)]


def build_PA(r: int, backend: Backend = "exact") -> np.ndarray:
    _check_r(r)
    half = Fraction(1, 2) if backend == "exact" else 0.5
    return cycle_matrix([half] * r)


def build_PB(r: int, p0: Scalar, p1: Scalar) -> np.ndarray:
    _check_r(r)
    return cycle_matrix([p0] + [p1] * (r - 1))


def build_W(r: int, backend: Backend = "exact") -> np.ndarray:
    """Payoff matrix: +1 for a step up the cycle, -1 for a step down."""
    _check_r(r)
    W = _zeros(r, backend == "exact")
    one = Fraction(1) if backend == "exact" else 1.0
    for i in range(r):
        W[i, (i + 1) % r] = one
        W[i, (i - 1) % r] = -one
    return W


def mix(PA: np.ndarray, PB: np.ndarray, gamma: Scalar) -> np.ndarray:
    """Convex combination ``gamma*PA + (1-gamma)*PB``."""
    if PA.shape != PB.shape:
        raise ValueError(f"dimension mismatch: {PA.shape} vs {PB.shape}")
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    out = gamma * PA + (1 - gamma) * PB
    if out.dtype == object and not all(is_exact(x) for x in out.flat):
        out = out.astype(float)
    return out


def game_matrices(params: GameParams) -> dict[str, np.ndarray]:
    """``{"A": P_A, "B": P_B}`` in the parameters' backend."""
    backend = params.backend
    return {
        "A": build_PA(params.r, backend),
        "B": build_PB(params.r, params.p0, params.p1),
    }


def matrix_to_json(M: np.ndarray) -> list[list]:
    """Row-major nested lists; exact entries become ``"num/den"`` strings."""
    rows = []
    for row in M:
        rows.append([format_scalar(x) if is_exact(x) else float(x) for x in row])
    return rows


def matrix_from_json(rows: list[list]) -> np.ndarray:
    if any(isinstance(x, str) for row in rows for x in row):
        return np.array([[Fraction(x) for x in row] for row in rows], dtype=object)
    return np.array(rows, dtype=float)
