"""Rate of profit for a periodic pattern of games, e.g. ``ABABB`` repeated forever."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb

import numpy as np

from .games import GameParams, build_PA, build_PB, build_W
from .markov import FLOAT_TOL, ReducibleChainError, closed_classes, reachable, restrict, stationary_vector
from .numerics import as_scalar, resolve_backend
from .rates import RateReport


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


_TOKEN = re.compile(r"\s*(?:([ABab])|(\()|(\))|\^\s*(\d+))")


@dataclass(frozen=True)
class Pattern:
    """A finite word over ``{A, B}`` played cyclically."""

    letters: str

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or set(letters) - {"A", "B"}:
            raise ValueError(f"pattern must be a nonempty word over A and B, got {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters

    def __iter__(self):
        return iter(self.letters)

    def rotate(self, k: int) -> "Pattern":
        k %= len(self)
        return Pattern(self.letters[k:] + self.letters[:k])

    @classmethod
    def ab_s_b(cls, r: int, s: int) -> "Pattern":
        """The family ``(AB)^s B^(r-2)``."""
        if s < 1 or r < 3:
            raise ValueError("need r >= 3 and s >= 1")
        return cls("AB" * s + "B" * (r - 2))

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        """Parse ``"ABABB"`` or run-length forms such as ``"(AB)^2 B^1"``.

        Parentheses nest, ``^k`` repeats the preceding letter or group and
        whitespace is ignored. Case does not matter.
        """
        pos = 0
        stack: list[list[str]] = [[]]
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse pattern {text!r} at position {pos}")
            letter, open_, close, rep = m.groups()
            pos = m.end()
            if letter:
                stack[-1].append(letter.upper())
            elif open_:
                stack.append([])
            elif close:
                if len(stack) == 1:
                    raise ValueError(f"unbalanced ')' in {text!r}")
                group = "".join(stack.pop())
                stack[-1].append(group)
            else:
                if not stack[-1]:
                    raise ValueError(f"'^' with nothing to repeat in {text!r}")
                stack[-1][-1] = stack[-1][-1] * int(rep)
            while pos < len(text) and text[pos].isspace():
                pos += 1
        if len(stack) != 1:
            raise ValueError(f"unbalanced '(' in {text!r}")
        return cls("".join(stack[0]))


def as_pattern(pattern) -> Pattern:
    return pattern if isinstance(pattern, Pattern) else Pattern.parse(pattern)


def _class_rate(members, composite, steps, drift):
    """Average profit per game on one closed class of the composite chain."""
    pi_cls = stationary_vector(restrict(composite, members))
    n = composite.shape[0]
    pi = np.full(n, pi_cls[0] * 0, dtype=composite.dtype)
    pi[np.asarray(members)] = pi_cls
    total = 0
    for P, e in zip(steps, drift):
        total = total + pi @ e
        pi = pi @ P
    return total / len(steps)


def _rates_from(starts, composite, steps, drift, exact):
    """Rates of every closed class reachable from ``starts``."""
    hit = reachable(composite, starts)
    return [_class_rate(c, composite, steps, drift) for c in closed_classes(composite) if c[0] in hit]


def _unique(rates, exact, what):
    first = rates[0]
    for mu in rates[1:]:
        if (exact and mu != first) or (not exact and abs(float(mu) - float(first)) > FLOAT_TOL):
            raise ReducibleChainError(
                f"rate depends on the initial capital beyond {what}: "
                f"found {sorted({float(m) for m in rates})}"
            )
    return first


def rate_pattern(r: int, rho, pattern, parity: Parity | str = Parity.EVEN, backend: str = "auto") -> RateReport:
    """Long-run profit per game when ``pattern`` is repeated forever.

    Capital is tracked mod ``r`` (for even ``r`` this already fixes its
    parity). The product of the one-game matrices over one period is the
    composite chain; the profit is averaged over the period at stationarity of
    each closed class reachable from the admissible starting states. For odd
    ``r`` every state is admissible, for even ``r`` the states of the given
    parity. If those classes disagree the rate is not determined by the
    parity and :class:`ReducibleChainError` is raised.
    """
    pattern = as_pattern(pattern)
    parity = Parity(parity)
    mode = resolve_backend(backend, r, rho)
    params = GameParams(r, as_scalar(rho, mode))
    exact = mode == "exact"
    mats = {"A": build_PA(r, mode), "B": build_PB(r, params.p0, params.p1)}
    W = build_W(r, mode)
    drifts = {g: (P * W).sum(axis=1) for g, P in mats.items()}
    steps = [mats[g] for g in pattern]
    drift = [drifts[g] for g in pattern]

    composite = steps[0]
    for P in steps[1:]:
        composite = composite @ P

    if r % 2:
        mu = _unique(_rates_from(range(r), composite, steps, drift, exact), exact, "nothing")
        return RateReport(mu, "pattern", mode, "any")

    rates = {}
    for par, first in ((Parity.EVEN, 0), (Parity.ODD, 1)):
        try:
            rates[par] = _unique(_rates_from(range(first, r, 2), composite, steps, drift, exact), exact, "its parity")
        except ReducibleChainError as exc:
            rates[par] = exc
    mu = rates[parity]
    if isinstance(mu, Exception):
        raise mu
    other = rates[Parity.ODD if parity is Parity.EVEN else Parity.EVEN]
    if not isinstance(other, Exception) and _same(mu, other, exact):
        note = "any"
    elif parity is Parity.EVEN:
        note = "even-only"
    else:
        note = "odd-is-zero" if mu == 0 else "odd-only"
    return RateReport(mu, "pattern", mode, note)


def _same(a, b, exact) -> bool:
    return a == b if exact else abs(float(a) - float(b)) <= FLOAT_TOL


def rate_ABsB(r: int, s: int, parity: Parity | str = Parity.EVEN) -> RateReport:
    """Closed-form rate of ``(AB)^s B^(r-2)`` at ``rho = 0``, exact for any ``r``.

    Odd ``r``: ``r/(2s+r-2) * (2^s-1)/(2^s+1)`` whatever the initial capital.
    Even ``r``: ``r/(2s+r-2) * sum_k ceil(2k/r) C(s,k) / 2^s`` from even capital
    and 0 from odd capital.
    """
    if int(r) != r or r < 3:
        raise ValueError(f"modulus r must be an integer >= 3, got {r}")
    if int(s) != s or s < 1:
        raise ValueError(f"s must be a positive integer, got {s}")
    parity = Parity(parity)
    scale = Fraction(r, 2 * s + r - 2)
    if r % 2:
        return RateReport(scale * Fraction(2**s - 1, 2**s + 1), "closed-form", "exact", "any")
    if parity is Parity.ODD:
        return RateReport(Fraction(0), "closed-form", "exact", "odd-is-zero")
    weighted = sum(-(-2 * k // r) * comb(s, k) for k in range(s + 1))
    return RateReport(scale * Fraction(weighted, 2**s), "closed-form", "exact", "even-only")


def s_r(r: int) -> int:
    """``floor(log2 r) - 1`` by integer arithmetic."""
    return r.bit_length() - 2


def asymptotic_pattern_check(r: int) -> tuple[float, float]:
    """``(gap, ratio)`` for ``gap = 1 - mu(r, 0, (AB)^s_r B^(r-2))`` from even
    capital, with ``ratio = gap / (2 s_r / r)`` tending to 1."""
    if r < 4:
        raise ValueError(f"r must be >= 4, got {r}")
    s = s_r(r)
    gap = 1 - rate_ABsB(r, s, Parity.EVEN).mu
    return float(gap), float(gap / Fraction(2 * s, r))
