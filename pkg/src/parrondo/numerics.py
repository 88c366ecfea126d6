"""Two interchangeable scalar backends.

Exact values are :class:`fractions.Fraction`; float values are plain ``float``.
Every formula downstream is written once and runs on either kind, so the
backend is picked by converting the inputs up front with :func:`as_scalar`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Literal, Union

Scalar = Union[Fraction, float]
Backend = Literal["exact", "float"]

# auto mode keeps exact fractions only while their size stays small
EXACT_MAX_R = 64


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def mode_of(*values) -> Backend:
    return "exact" if all(is_exact(v) for v in values) else "float"


def to_fraction(x) -> Fraction:
    """Convert to an exact fraction; floats go through their shortest repr,
    so ``0.2`` becomes ``1/5`` rather than its binary expansion."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot represent {x!r} exactly")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def as_scalar(x, backend: Backend) -> Scalar:
    if backend == "exact":
        return to_fraction(x)
    if isinstance(x, str):
        return float(Fraction(x.strip()))
    return float(x)


def resolve_backend(backend: str, r: int | None = None, *values) -> Backend:
    """Pick the backend for a computation.

    ``auto`` selects exact arithmetic when every value is rational and
    ``r <= EXACT_MAX_R``; ``exact`` and ``float`` are honoured as given.
    """
    if backend in ("exact", "float"):
        return backend
    if backend != "auto":
        raise ValueError(f"unknown backend {backend!r}; expected auto, exact or float")
    if r is not None and r > EXACT_MAX_R:
        return "float"
    return mode_of(*values)


def stable_power_ratio(u: Scalar, a: int, b: int) -> Scalar:
    """Return ``(1 - u**a) / (1 - u**b)`` for ``u`` in ``[0, 1)``.

    In float mode the powers go through ``expm1(k*log(u))`` so exponents in
    the millions neither underflow nor lose the small differences near
    ``u = 1``. Fractions are evaluated directly.
    """
    if a < 0 or b < 0:
        raise ValueError("exponents must be non-negative")
    if not 0 <= u < 1:
        raise ValueError(f"u must lie in [0, 1), got {u}")
    if b == 0:
        raise ZeroDivisionError("1 - u**0 is zero")
    if a == b:
        return Fraction(1) if is_exact(u) else 1.0
    if is_exact(u):
        u = Fraction(u)
        return (1 - u**a) / (1 - u**b)
    u = float(u)
    if u == 0.0:
        return 0.0 if a == 0 else 1.0
    log_u = math.log(u)
    return math.expm1(a * log_u) / math.expm1(b * log_u)


def power(u: Scalar, k: int) -> Scalar:
    """``u**k`` that underflows to 0.0 quietly in float mode."""
    if is_exact(u):
        return Fraction(u) ** k
    if u == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(u))


def format_scalar(x: Scalar, digits: int = 17) -> str:
    """Fractions print as ``num/den``; floats with ``digits`` significant digits."""
    if is_exact(x):
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"
    return f"{x:.{digits}g}"


def parse_scalar(text: str) -> Fraction:
    """Parse ``"1/3"``, ``"0.25"`` or ``"2"`` into an exact fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed number {text!r}") from exc
