"""Finite Markov chain plumbing: class structure, period and an exact or
float stationary solve. This is the independent oracle for the closed forms."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np
from scipy.sparse.csgraph import connected_components

FLOAT_TOL = 1e-10


class ReducibleChainError(ValueError):
    """The chain has no unique stationary distribution on the requested states."""


def is_exact_matrix(P: np.ndarray) -> bool:
    return P.dtype == object


def support(P: np.ndarray) -> np.ndarray:
    return np.array([[x != 0 for x in row] for row in P], dtype=bool)


def strong_components(P: np.ndarray) -> list[list[int]]:
    n_comp, labels = connected_components(support(P).astype(np.int8), directed=True, connection="strong")
    comps = [[] for _ in range(n_comp)]
    for i, lab in enumerate(labels):
        comps[lab].append(i)
    return comps


def closed_classes(P: np.ndarray) -> list[list[int]]:
    """Recurrent classes: strong components with no edge leaving them."""
    adj = support(P)
    closed = []
    for comp in strong_components(P):
        members = set(comp)
        if all(j in members for i in comp for j in np.flatnonzero(adj[i])):
            closed.append(comp)
    return closed


def reachable(P: np.ndarray, starts) -> set[int]:
    adj = support(P)
    seen = set(starts)
    stack = list(starts)
    while stack:
        i = stack.pop()
        for j in np.flatnonzero(adj[i]):
            j = int(j)
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def is_irreducible(P: np.ndarray) -> bool:
    return len(strong_components(P)) == 1


def period(P: np.ndarray) -> int:
    """Period of an irreducible chain, from BFS levels."""
    if not is_irreducible(P):
        raise ReducibleChainError("period is only defined here for irreducible chains")
    adj = support(P)
    level = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for j in np.flatnonzero(adj[i]):
                j = int(j)
                if j not in level:
                    level[j] = level[i] + 1
                    nxt.append(j)
        frontier = nxt
    d = 0
    for i in range(P.shape[0]):
        for j in np.flatnonzero(adj[i]):
            d = gcd(d, level[i] + 1 - level[int(j)])
    return d


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over the rationals."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        pivot = next((k for k in range(col, n) if M[k][col] != 0), None)
        if pivot is None:
            raise ReducibleChainError("singular system: stationary distribution is not unique")
        M[col], M[pivot] = M[pivot], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for k in range(n):
            if k != col and M[k][col] != 0:
                f = M[k][col]
                M[k] = [x - f * y for x, y in zip(M[k], M[col])]
    return [M[k][n] for k in range(n)]


def stationary_vector(P: np.ndarray) -> np.ndarray:
    """Unique ``pi`` with ``pi P = pi`` and ``sum(pi) = 1`` for irreducible ``P``.

    Periodic chains are fine: irreducibility alone makes the solution unique.
    Exact (object) matrices are solved over the rationals.
    """
    n = P.shape[0]
    if P.shape != (n, n):
        raise ValueError("transition matrix must be square")
    if not is_irreducible(P):
        raise ReducibleChainError("chain is reducible: no unique stationary distribution")
    # (P^T - I) pi = 0 with the last equation replaced by normalisation
    if is_exact_matrix(P):
        A = [[Fraction(P[j, i]) - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        A[-1] = [Fraction(1)] * n
        b = [Fraction(0)] * (n - 1) + [Fraction(1)]
        return np.array(_solve_exact(A, b), dtype=object)
    A = P.T.astype(float) - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    return np.linalg.solve(A, b)


def restrict(P: np.ndarray, states) -> np.ndarray:
    idx = np.asarray(states)
    return P[np.ix_(idx, idx)]


def stationary_residual(pi, P: np.ndarray):
    """Largest ``|pi P - pi|`` entry plus ``|sum(pi) - 1|``."""
    resid = pi @ P - pi
    return max(max(abs(x) for x in resid), abs(sum(pi) - 1))
