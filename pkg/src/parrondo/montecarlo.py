"""Simulated play, strong-law checks and the doubled chain for period-2 walks.

Random numbers come from numpy's PCG64 seeded through ``SeedSequence(seed,
spawn_key=(stream,))``. Replication ``i`` of a batch uses ``stream=i``, so
batches are reproducible and their streams independent. Uniforms are drawn in
blocks of ``CHUNK`` per call; changing ``CHUNK`` changes the traces.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numba import njit

from .games import GameParams
from .markov import FLOAT_TOL, is_exact_matrix, period, restrict, stationary_vector
from .numerics import format_scalar
from .patterns import Parity, as_pattern, rate_pattern
from .rates import rate_mixture

CHUNK = 1 << 16
_A, _B = 0, 1


def default_workers() -> int:
    return int(os.environ.get("PARRONDO_THREADS", os.cpu_count() or 1))


@njit(cache=True, nogil=True)
def _play_chunk(up, gamma, pattern, offset, u_game, u_coin, capital, state):
    n = u_coin.shape[0]
    r = up.shape[1]
    d = pattern.shape[0]
    path = np.empty(n, np.int64)
    games = np.empty(n, np.int8)
    for t in range(n):
        if d > 0:
            g = pattern[(offset + t) % d]
        elif u_game[t] < gamma:
            g = 0
        else:
            g = 1
        if u_coin[t] < up[g, state]:
            capital += 1
            state += 1
            if state == r:
                state = 0
        else:
            capital -= 1
            state -= 1
            if state < 0:
                state = r - 1
        path[t] = capital
        games[t] = g
    return path, games


def checkpoints(n_steps: int) -> list[int]:
    """1, 2, 4, ... up to ``n_steps``, with ``n_steps`` itself last."""
    pts = [1 << k for k in range(n_steps.bit_length()) if 1 << k <= n_steps]
    if pts[-1] != n_steps:
        pts.append(n_steps)
    return pts


@dataclass(frozen=True)
class SimulationTrace:
    """Capital sampled at geometric checkpoints.

    ``running_rate[k]`` is ``(capital[k] - initial_capital) / checkpoints[k]``,
    the cumulative profit per game.
    """

    seed: int
    stream: Optional[int]
    params: dict
    n_steps: int
    initial_capital: int
    checkpoints: tuple
    capital: tuple
    running_rate: tuple
    game_labels: Optional[str] = None
    path: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def final_rate(self) -> float:
        return self.running_rate[-1]

    @property
    def profit(self) -> int:
        return self.capital[-1] - self.initial_capital

    def header(self) -> dict:
        return {
            "seed": self.seed,
            "stream": self.stream,
            "rng": "numpy PCG64 via SeedSequence",
            "n_steps": self.n_steps,
            "initial_capital": self.initial_capital,
            **self.params,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.header().items():
            buf.write(f"# {k}={v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "S_n", "S_n/n"])
        for n, c, rate in zip(self.checkpoints, self.capital, self.running_rate):
            w.writerow([n, c - self.initial_capital, repr(rate)])
        return buf.getvalue()

    def to_json(self) -> str:
        body = {
            **self.header(),
            "method": "monte-carlo",
            "backend": "float",
            "checkpoints": list(self.checkpoints),
            "capital": list(self.capital),
            "running_rate": list(self.running_rate),
        }
        return json.dumps(body, indent=2)


def _rng(seed: int, stream: Optional[int]) -> np.random.Generator:
    key = () if stream is None else (stream,)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _up_table(r: int, rho) -> np.ndarray:
    p0, p1 = GameParams(r, rho).p0, GameParams(r, rho).p1
    up = np.empty((2, r))
    up[_A] = 0.5
    up[_B] = float(p1)
    up[_B, 0] = float(p0)
    return up


def _simulate(r, rho, gamma, pattern, n_steps, seed, stream, initial_capital, record_games, record_path, params):
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    up = _up_table(r, rho)
    rng = _rng(seed, stream)
    pat = np.array([_A if g == "A" else _B for g in pattern], dtype=np.int8) if pattern else np.empty(0, np.int8)
    marks = checkpoints(n_steps)
    capital = int(initial_capital)
    state = capital % r
    caps, labels, paths = [], [], []
    mark_i = 0
    done = 0
    while done < n_steps:
        m = min(CHUNK, n_steps - done)
        if len(pat):
            u_game = np.empty(0)
            u_coin = rng.random(m)
        else:
            u = rng.random((2, m))
            u_game, u_coin = u[0], u[1]
        path, games = _play_chunk(up, float(gamma), pat, done % max(len(pat), 1), u_game, u_coin, capital, state)
        while mark_i < len(marks) and marks[mark_i] <= done + m:
            caps.append(int(path[marks[mark_i] - done - 1]))
            mark_i += 1
        if record_games:
            labels.append(games)
        if record_path:
            paths.append(path)
        capital = int(path[-1])
        state = capital % r
        done += m
    return SimulationTrace(
        seed=seed,
        stream=stream,
        params=params,
        n_steps=n_steps,
        initial_capital=int(initial_capital),
        checkpoints=tuple(marks),
        capital=tuple(caps),
        running_rate=tuple((c - initial_capital) / n for c, n in zip(caps, marks)),
        game_labels="".join("AB"[g] for g in np.concatenate(labels)) if record_games else None,
        path=np.concatenate([[initial_capital], *paths]) if record_path else None,
    )


def simulate_mixture(
    r: int,
    rho,
    gamma,
    n_steps: int,
    seed: int = 0,
    initial_capital: int = 0,
    *,
    stream: Optional[int] = None,
    record_games: bool = False,
    record_path: bool = False,
) -> SimulationTrace:
    """Play game A with probability ``gamma`` and game B otherwise, ``n_steps`` times.

    ``gamma`` may be 0 or 1 here (pure B or pure A). With ``record_path`` the
    trace carries the full capital path ``X_0..X_n``.
    """
    if not 0 <= gamma <= 1:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    params = {"r": r, "rho": format_scalar(rho), "gamma": format_scalar(gamma)}
    return _simulate(r, rho, gamma, "", n_steps, seed, stream, initial_capital, record_games, record_path, params)


def simulate_pattern(
    r: int,
    rho,
    pattern,
    n_steps: int,
    seed: int = 0,
    initial_capital: int = 0,
    *,
    stream: Optional[int] = None,
    record_games: bool = False,
    record_path: bool = False,
) -> SimulationTrace:
    """Play ``pattern`` cyclically for ``n_steps`` games."""
    pattern = as_pattern(pattern)
    params = {"r": r, "rho": format_scalar(rho), "pattern": str(pattern)}
    return _simulate(r, rho, 0.0, str(pattern), n_steps, seed, stream, initial_capital, record_games, record_path, params)


@dataclass(frozen=True)
class SLLNReport:
    mu_exact: float
    tolerance: float
    final_rates: tuple
    max_fail_fraction: float

    @property
    def errors(self) -> tuple:
        return tuple(abs(x - self.mu_exact) for x in self.final_rates)

    @property
    def n_within(self) -> int:
        return sum(e <= self.tolerance for e in self.errors)

    @property
    def passed(self) -> bool:
        n_fail = len(self.final_rates) - self.n_within
        return n_fail <= math.floor(self.max_fail_fraction * len(self.final_rates))

    def to_dict(self) -> dict:
        return {
            "mu_exact": self.mu_exact,
            "tolerance": self.tolerance,
            "final_rates": list(self.final_rates),
            "errors": list(self.errors),
            "n_within": self.n_within,
            "n_reps": len(self.final_rates),
            "passed": self.passed,
            "method": "monte-carlo",
            "backend": "float",
        }


def slln_check(
    r: int,
    rho,
    *,
    gamma=None,
    pattern=None,
    n_steps: int = 10**6,
    n_reps: int = 20,
    seed: int = 0,
    initial_capital: int = 0,
    max_fail_fraction: float = 0.01,
    workers: Optional[int] = None,
) -> SLLNReport:
    """Compare ``S_n/n`` over ``n_reps`` independent streams with the exact rate.

    Replications whose error exceeds ``4/sqrt(n_steps)`` count as failures;
    the check passes while failures stay within ``max_fail_fraction``.
    """
    if (gamma is None) == (pattern is None):
        raise ValueError("give exactly one of gamma or pattern")
    if gamma is not None:
        mu = rate_mixture(r, rho, gamma).mu

        def run(i):
            return simulate_mixture(r, rho, gamma, n_steps, seed, initial_capital, stream=i)

    else:
        parity = Parity.EVEN if initial_capital % 2 == 0 else Parity.ODD
        mu = rate_pattern(r, rho, pattern, parity).mu

        def run(i):
            return simulate_pattern(r, rho, pattern, n_steps, seed, initial_capital, stream=i)

    with ThreadPoolExecutor(max_workers=workers or default_workers()) as pool:
        traces = list(pool.map(run, range(n_reps)))
    return SLLNReport(float(mu), 4 / math.sqrt(n_steps), tuple(t.final_rate for t in traces), max_fail_fraction)


@dataclass(frozen=True)
class DoubledChain:
    """Chain of consecutive pairs ``(X_2k, X_2k+1)`` of a period-2 chain.

    ``sigma1`` holds the class of state 0. ``pairs1`` lists ``(i, j)`` with
    ``i`` in ``sigma1`` and ``P[i, j] > 0``; ``pairs2`` the same from
    ``sigma2``. ``pi1``/``pi2`` are full-length vectors supported on their
    class, stationary for ``P @ P``.
    """

    P: np.ndarray
    sigma1: tuple
    sigma2: tuple
    pi1: np.ndarray
    pi2: np.ndarray
    pairs1: tuple
    pairs2: tuple
    pstar1: np.ndarray
    pstar2: np.ndarray
    pistar1: np.ndarray
    pistar2: np.ndarray

    @property
    def pi(self) -> np.ndarray:
        return (self.pi1 + self.pi2) / 2

    def stationarity_residual(self, which: int = 1):
        pistar, pstar = (self.pistar1, self.pstar1) if which == 1 else (self.pistar2, self.pstar2)
        return max(abs(x) for x in pistar @ pstar - pistar)

    def two_step_mean(self, W: np.ndarray, which: int = 1):
        """``E[w(X0,X1) + w(X1,X2)]`` with ``(X0, X1)`` drawn from ``pistar``."""
        pairs, pistar, pstar = (
            (self.pairs1, self.pistar1, self.pstar1) if which == 1 else (self.pairs2, self.pistar2, self.pstar2)
        )
        total = 0
        for a, (i, j) in enumerate(pairs):
            for b, (k, _) in enumerate(pairs):
                if pstar[a, b] != 0:
                    total = total + pistar[a] * pstar[a, b] * (W[i, j] + W[j, k])
        return total


def _pair_chain(P, pairs):
    m = len(pairs)
    out = np.zeros((m, m), dtype=P.dtype)
    for a, (_, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            out[a, b] = P[j, k] * P[k, l]
    return out


def build_doubled_chain(P: np.ndarray) -> DoubledChain:
    """Split a period-2 chain into its two classes and build both pair chains.

    Raises ``ValueError`` unless ``P`` is irreducible with period exactly 2.
    """
    d = period(P)
    if d != 2:
        raise ValueError(f"doubled chain needs period 2, chain has period {d}")
    n = P.shape[0]
    # BFS 2-colouring; period 2 guarantees consistency
    colour = {0: 0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if P[i, j] != 0 and j not in colour:
                colour[j] = 1 - colour[i]
                stack.append(j)
    sigma1 = tuple(i for i in range(n) if colour[i] == 0)
    sigma2 = tuple(i for i in range(n) if colour[i] == 1)
    P2 = P @ P
    exact = is_exact_matrix(P)
    zero = P[0, 0] * 0

    def class_vector(members):
        vec = np.full(n, zero, dtype=P.dtype)
        vec[np.asarray(members)] = stationary_vector(restrict(P2, members))
        return vec

    pi1, pi2 = class_vector(sigma1), class_vector(sigma2)
    pairs1 = tuple((i, j) for i in sigma1 for j in range(n) if P[i, j] != 0)
    pairs2 = tuple((j, k) for j in sigma2 for k in range(n) if P[j, k] != 0)
    pistar1 = np.array([pi1[i] * P[i, j] for i, j in pairs1], dtype=P.dtype)
    pistar2 = np.array([pi2[j] * P[j, k] for j, k in pairs2], dtype=P.dtype)
    chain = DoubledChain(
        P, sigma1, sigma2, pi1, pi2, pairs1, pairs2,
        _pair_chain(P, pairs1), _pair_chain(P, pairs2), pistar1, pistar2,
    )
    for which in (1, 2):
        resid = chain.stationarity_residual(which)
        if (exact and resid != 0) or (not exact and resid > FLOAT_TOL):
            raise ArithmeticError(f"pair chain {which} failed its stationarity check (residual {float(resid):.3g})")
    return chain
