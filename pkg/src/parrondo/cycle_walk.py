"""Stationary distribution of the nearest-neighbour random walk on the n-cycle.

Three routes are provided:

* :func:`stationary_general` - closed form valid for any up-probabilities;
* :func:`pi0_example2` / :func:`pi0_example3` - the mass at state 0 when every
  state except 0 shares one up-probability (and, for the second, when state 0
  uses the complementary coin);
* :func:`stationary_linear_solve` - a plain linear solve, kept independent of
  the formulas above so it can serve as their oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .games import cycle_matrix
from .markov import stationary_vector
from .numerics import Scalar, is_exact, power, stable_power_ratio

Method = Literal["general-lemma", "closed-form-ex2", "closed-form-ex3", "linear-solve"]


@dataclass(frozen=True)
class CycleWalk:
    """Walk on states ``0..n-1`` arranged in a circle.

    ``up[i]`` is the probability of stepping from ``i`` to ``i+1``; the walk
    steps to ``i-1`` otherwise.
    """

    up: tuple

    def __post_init__(self):
        object.__setattr__(self, "up", tuple(self.up))
        if len(self.up) < 3:
            raise ValueError("a cycle walk needs n >= 3 states")
        for i, p in enumerate(self.up):
            if not 0 < p < 1:
                raise ValueError(f"up-probability p_{i} = {p} is not in (0, 1)")

    @property
    def n(self) -> int:
        return len(self.up)

    @property
    def exact(self) -> bool:
        return all(is_exact(p) for p in self.up)

    def matrix(self) -> np.ndarray:
        return cycle_matrix(self.up)

    @classmethod
    def from_matrix(cls, P: np.ndarray) -> "CycleWalk":
        n = P.shape[0]
        return cls(tuple(P[i, (i + 1) % n] for i in range(n)))


@dataclass(frozen=True)
class StationaryDist:
    pi: tuple
    method: Method

    @property
    def n(self) -> int:
        return len(self.pi)

    def __getitem__(self, i):
        return self.pi[i]

    def as_array(self) -> np.ndarray:
        if all(is_exact(x) for x in self.pi):
            return np.array(self.pi, dtype=object)
        return np.array(self.pi, dtype=float)


def stationary_general(walk: CycleWalk) -> StationaryDist:
    """Closed-form stationary distribution of an arbitrary cycle walk.

    With ``t_k = p_k/q_k`` the unnormalised weights are ``W_0 = 1`` and

        W_i = (q_0/q_i) * [T_i - (T_n - 1) S_i / S_n]

    where ``T_i = t_0 ... t_{i-1}`` and ``S_i = 1 + t_{i-1} S_{i-1}`` (``S_1 = 1``)
    collects the nested sums of products. Both run in O(n).
    """
    up = [Fraction(p) if walk.exact else float(p) for p in walk.up]
    down = [1 - p for p in up]
    n = walk.n
    ratio = [p / q for p, q in zip(up, down)]

    prefix = [None] * (n + 1)  # prefix[i] = t_0 ... t_{i-1}
    sums = [None] * (n + 1)  # sums[i] = 1 + sum_{j=1}^{i-1} prod_{k=j}^{i-1} t_k
    prefix[0] = 1
    prefix[1] = ratio[0]
    sums[1] = 1
    for i in range(1, n):
        prefix[i + 1] = prefix[i] * ratio[i]
        sums[i + 1] = 1 + ratio[i] * sums[i]

    flow = (prefix[n] - 1) / sums[n]
    weights = [Fraction(1) if walk.exact else 1.0]
    for i in range(1, n):
        weights.append(down[0] / down[i] * (prefix[i] - flow * sums[i]))
    total = sum(weights)
    return StationaryDist(tuple(w / total for w in weights), "general-lemma")


def stationary_linear_solve(P: np.ndarray) -> StationaryDist:
    """Stationary distribution of an irreducible chain by direct linear solve.

    Raises :class:`~parrondo.markov.ReducibleChainError` for reducible ``P``.
    """
    pi = stationary_vector(P)
    return StationaryDist(tuple(pi.tolist()), "linear-solve")


def _ordered(p: Scalar):
    """``(small/large, large)`` for the pair ``(p, 1-p)``, with ``small/large < 1``."""
    q = 1 - p
    return (q / p, p) if p > q else (p / q, q)


def pi0_example2(n: int, p: Scalar, p0: Scalar) -> Scalar:
    """Mass at state 0 when states ``1..n-1`` share up-probability ``p``.

    Evaluates ``1 / [1 - (p0-q0)/(p-q) + n (p0 p^(n-1) - q0 q^(n-1)) / (p^n - q^n)]``.
    ``p = 1/2`` is singular here; use :func:`stationary_general` instead.
    """
    _check_closed_form_args(n, p)
    if not 0 < p0 < 1:
        raise ValueError(f"p0 must lie in (0, 1), got {p0}")
    q, q0 = 1 - p, 1 - p0
    if is_exact(p) and is_exact(p0):
        tail = n * (p0 * p ** (n - 1) - q0 * q ** (n - 1)) / (p**n - q**n)
    else:
        # divide through by the dominant power so only u**k with u < 1 appears
        u, big = _ordered(float(p))
        p0, q0 = float(p0), float(q0)
        lead, other = (p0, q0) if p > q else (q0, p0)
        tail = n * (lead - other * power(u, n - 1)) / (big * -math.expm1(n * math.log(u)))
    return 1 / (1 - (p0 - q0) / (p - q) + tail)


def pi0_example3(n: int, p: Scalar) -> Scalar:
    """Mass at state 0 when state 0 uses up-probability ``q = 1-p`` and the
    rest use ``p``: ``1 / [2 + n p q (p^(n-2) - q^(n-2)) / (p^n - q^n)]``.

    With ``u = min(p,q)/max(p,q)`` the bracket is ``2 + n u R`` where
    ``R = (1-u^(n-2))/(1-u^n)``, which is what gets evaluated.
    """
    _check_closed_form_args(n, p)
    u, _ = _ordered(p)
    return 1 / (2 + n * u * stable_power_ratio(u, n - 2, n))


def _check_closed_form_args(n: int, p: Scalar) -> None:
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if p * 2 == 1:
        raise ValueError("p = 1/2 is singular for this closed form; use stationary_general")
