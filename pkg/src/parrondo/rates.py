"""Long-run rate of profit for the random mixture ``gamma A + (1-gamma) B``."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from .cycle_walk import StationaryDist, pi0_example2, pi0_example3, stationary_linear_solve
from .games import GameParams, build_PA, build_PB, build_W, mix
from .markov import FLOAT_TOL, stationary_residual
from .numerics import Backend, Scalar, as_scalar, format_scalar, is_exact, power, resolve_backend, stable_power_ratio

Method = Literal["stationary-functional", "closed-form", "pattern", "monte-carlo"]
ParityNote = Literal["any", "even-only", "odd-only", "odd-is-zero"]


@dataclass(frozen=True)
class RateReport:
    mu: Scalar
    method: Method
    backend: Backend
    parity_note: ParityNote = "any"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mu"] = format_scalar(self.mu)
        return d


def mean_profit(pi, P: np.ndarray, W: np.ndarray) -> Scalar:
    """Expected one-step payoff at stationarity, ``pi (P o W) 1``.

    ``pi`` must be stationary for ``P``; exact inputs are checked exactly.
    """
    if isinstance(pi, StationaryDist):
        pi = pi.as_array()
    pi = np.asarray(pi, dtype=object if P.dtype == object else float)
    if P.shape != W.shape or P.shape[0] != len(pi):
        raise ValueError(f"dimension mismatch: pi {len(pi)}, P {P.shape}, W {W.shape}")
    resid = stationary_residual(pi, P)
    exact = P.dtype == object and all(is_exact(x) for x in pi)
    if (exact and resid != 0) or (not exact and resid > FLOAT_TOL):
        raise ValueError(f"pi is not stationary for P (residual {float(resid):.3g})")
    return pi @ (P * W).sum(axis=1)


def mixture_coins(r: int, rho: Scalar, gamma: Scalar) -> tuple[Scalar, Scalar]:
    """Up-probabilities ``(p, p0)`` of the mixed chain away from and at state 0."""
    rho_r1 = power(rho, r - 1)
    p = gamma / 2 + (1 - gamma) / (1 + rho)
    p0 = gamma / 2 + (1 - gamma) * rho_r1 / (1 + rho_r1)
    return p, p0


def _check(r: int, rho: Scalar, gamma: Scalar) -> None:
    GameParams(r, rho, gamma)


def rate_mixture(r: int, rho, gamma, backend: str = "auto") -> RateReport:
    """Rate of profit of ``gamma A + (1-gamma) B`` through the mass at state 0:
    ``mu = pi0 (p0 - q0) + (1 - pi0) (p - q)``. The answer does not depend on
    the initial capital."""
    mode = resolve_backend(backend, r, rho, gamma)
    rho, gamma = as_scalar(rho, mode), as_scalar(gamma, mode)
    _check(r, rho, gamma)
    p, p0 = mixture_coins(r, rho, gamma)
    if not p > 0.5:
        raise ArithmeticError(f"mixed up-probability p = {p} should exceed 1/2")
    q, q0 = 1 - p, 1 - p0
    if rho == 0:
        pi0 = pi0_example3(r, p)
        mu = (p - q) * (1 - 2 * pi0)
    else:
        pi0 = pi0_example2(r, p, p0)
        mu = pi0 * (p0 - q0) + (1 - pi0) * (p - q)
    return RateReport(mu, "stationary-functional", mode)


def rate_mixture_rho0(r: int, gamma, backend: str = "auto") -> RateReport:
    """Closed-form rate at ``rho = 0``.

    Writing ``u = gamma/(2-gamma)`` and ``R = (1-u^(r-2))/(1-u^r)`` the rate is
    ``(1-gamma) r u R / (2 + r u R)``, which is the usual ratio of
    polynomials in ``gamma`` with the dominant power ``(2-gamma)^r`` divided out.
    """
    mode = resolve_backend(backend, r, gamma)
    gamma = as_scalar(gamma, mode)
    if int(r) != r or r < 3:
        raise ValueError(f"modulus r must be an integer >= 3, got {r}")
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    u = gamma / (2 - gamma)
    ur = r * u * stable_power_ratio(u, r - 2, r)
    mu = (1 - gamma) * ur / (2 + ur)
    return RateReport(mu, "closed-form", mode)


def rate_mixture_chain(r: int, rho, gamma, backend: str = "auto") -> RateReport:
    """Same rate, by building ``gamma P_A + (1-gamma) P_B`` and solving for its
    stationary distribution directly. Dense, so intended for small ``r``."""
    mode = resolve_backend(backend, r, rho, gamma)
    params = GameParams.create(r, rho, gamma, backend=mode)
    P = mix(build_PA(r, mode), build_PB(r, params.p0, params.p1), params.gamma)
    pi = stationary_linear_solve(P)
    return RateReport(mean_profit(pi, P, build_W(r, mode)), "stationary-functional", mode)


def asymptotic_gap_check(r: int) -> tuple[float, float]:
    """``(gap, ratio)`` with ``gap = 1 - mu(r, 0, gamma_r)`` at ``gamma_r = 2/sqrt(r)``
    and ``ratio = gap / (4/sqrt(r))``, which tends to 1."""
    if r < 3:
        raise ValueError(f"r must be >= 3, got {r}")
    gamma = 2 / math.sqrt(r)
    gap = 1 - rate_mixture_rho0(r, gamma, backend="float").mu
    return gap, gap / (4 / math.sqrt(r))
