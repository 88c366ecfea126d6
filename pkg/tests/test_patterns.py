from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

from parrondo.games import coin_probs

from parrondo.markov import ReducibleChainError
from parrondo.patterns import (
    Parity,
    Pattern,
    _unique,
    asymptotic_pattern_check,
    rate_ABsB,
    rate_pattern,
    s_r,
)


@pytest.mark.parametrize(
    "rho, pattern, mu",
    [
        (F(1, 3), "AABB", F(4, 163)),
        (F(1, 3), "ABABB", F(3613392, 47747645)),
        (F(0), "AABB", F(1, 8)),
        (F(0), "ABABB", F(9, 25)),
    ],
)
def test_known_rates(rho, pattern, mu):
    report = rate_pattern(3, rho, pattern)
    assert report.mu == mu
    assert report.parity_note == "any"


def test_known_rates_float():
    assert rate_pattern(3, 1 / 3, "ABABB").mu == pytest.approx(0.0756769, abs=5e-8)


def test_r3_rho_polynomial_aabb():
    for rho in (F(1, 5), F(1, 2), F(2, 3)):
        expected = 3 * (1 - rho) ** 3 * (1 + rho) / (8 * (3 + 6 * rho + 7 * rho**2 + 6 * rho**3 + 3 * rho**4))
        assert rate_pattern(3, rho, "AABB").mu == expected


@pytest.mark.parametrize("k", range(5))
def test_cyclic_invariance_odd_r(k):
    base = Pattern("ABABB")
    for r, rho in ((3, F(1, 3)), (5, F(1, 4)), (7, F(0))):
        assert rate_pattern(r, rho, base.rotate(k)).mu == rate_pattern(r, rho, base).mu


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_single_games_fair(r):
    assert rate_pattern(r, F(1, 3), "A").mu == 0
    assert rate_pattern(r, F(1, 3), "B").mu == 0
    assert rate_pattern(r, F(2, 5), "BBA").mu != 0


@pytest.mark.parametrize("r", range(3, 9))
@pytest.mark.parametrize("s", [1, 2, 3])
def test_closed_form_matches_general(r, s):
    pattern = Pattern.ab_s_b(r, s)
    for parity in Parity:
        closed = rate_ABsB(r, s, parity)
        general = rate_pattern(r, F(0), pattern, parity)
        assert closed.mu == general.mu
    if r % 2 == 0:
        assert rate_pattern(r, F(0), pattern, "odd").parity_note == "odd-is-zero"
        assert rate_pattern(r, F(0), pattern, "even").parity_note == "even-only"


def test_rate_ABsB_examples():
    assert rate_ABsB(3, 2).mu == F(9, 25)
    assert 1 - rate_ABsB(10, 2, "even").mu == F(3, 8)
    assert float(1 - rate_ABsB(100, 5, "even").mu) == pytest.approx(0.103009, rel=5e-6)
    odd = rate_ABsB(4, 1, "odd")
    assert odd.mu == 0 and odd.parity_note == "odd-is-zero"


def test_ceiling_terms_when_s_exceeds_half_r():
    # k > r/2 makes ceil(2k/r) = 2; check against the general evaluator
    for r, s in ((4, 3), (4, 4), (6, 4)):
        assert rate_ABsB(r, s).mu == rate_pattern(r, F(0), Pattern.ab_s_b(r, s)).mu


def test_float_backend():
    got = rate_pattern(4, 0.0, Pattern.ab_s_b(4, 2), "even", backend="float")
    assert got.backend == "float"
    assert got.mu == pytest.approx(0.5, abs=1e-12)


def test_disagreeing_classes_are_reported():
    with pytest.raises(ReducibleChainError, match="initial capital"):
        _unique([F(1, 3), F(1, 4)], True, "its parity")
    assert _unique([F(1, 3), F(1, 3)], True, "nothing") == F(1, 3)
    assert _unique([0.25, 0.25 + 1e-14], False, "nothing") == 0.25


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_every_short_pattern_has_a_rate_at_rho_zero(r):
    for d in range(1, 6):
        for word in product("AB", repeat=d):
            rate_pattern(r, F(0), "".join(word), "even")


def cesaro_rate(r, rho, pattern, start, periods=4000):
    """Average drift along the propagated distribution from a point mass."""
    p0, p1 = (float(x) for x in coin_probs(r, rho))
    up = {"A": np.full(r, 0.5), "B": np.array([p0] + [p1] * (r - 1))}
    dist = np.zeros(r)
    dist[start % r] = 1.0
    total = 0.0
    for _ in range(periods):
        for g in pattern:
            total += dist @ (2 * up[g] - 1)
            dist = np.roll(dist * up[g], 1) + np.roll(dist * (1 - up[g]), -1)
    return total / (periods * len(pattern))


@pytest.mark.parametrize(
    "r, rho, pattern, start",
    [(3, F(1, 3), "ABB", 0), (4, F(1, 2), "AABAB", 1), (5, F(0), "ABBAB", 2), (6, F(0), "ABABBBBB", 0), (6, F(1, 4), "BAB", 3)],
)
def test_against_cesaro_oracle(r, rho, pattern, start):
    parity = "even" if start % 2 == 0 else "odd"
    exact = rate_pattern(r, rho, pattern, parity).mu
    assert float(exact) == pytest.approx(cesaro_rate(r, rho, pattern, start), abs=1e-3)


def test_s_r():
    assert [s_r(r) for r in (3, 4, 10, 100, 1000, 10**6)] == [0, 1, 2, 5, 8, 18]


def test_asymptotic_pattern():
    gap, _ = asymptotic_pattern_check(1000)
    assert gap == pytest.approx(0.0176590, rel=5e-6)
    gap, _ = asymptotic_pattern_check(10**6)
    assert gap == pytest.approx(0.0000378134, rel=5e-6)
    _, ratio = asymptotic_pattern_check(2**20)
    assert abs(ratio - 1) <= 0.1


@pytest.mark.parametrize("r", [99, 999])
def test_unimodal_in_s_odd_r(r):
    mus = [rate_ABsB(r, s).mu for s in range(1, 40)]
    peak = mus.index(max(mus))
    assert all(a < b for a, b in zip(mus[:peak], mus[1 : peak + 1]))
    assert all(a > b for a, b in zip(mus[peak:], mus[peak + 1 :]))


@pytest.mark.parametrize(
    "text, letters",
    [
        ("ABABB", "ABABB"),
        ("ababb", "ABABB"),
        ("(AB)^2 B^1", "ABABB"),
        ("(AB)^2B", "ABABB"),
        ("A^3 B^2", "AAABB"),
        ("((AB)^2 B)^2", "ABABBABABB"),
        (" A B ", "AB"),
    ],
)
def test_parse(text, letters):
    assert str(Pattern.parse(text)) == letters


@pytest.mark.parametrize("text", ["", "ABC", "(AB", "AB)", "^2", "A^"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        Pattern.parse(text)


def test_domain():
    with pytest.raises(ValueError):
        rate_ABsB(3, 0)
    with pytest.raises(ValueError):
        rate_pattern(2, F(0), "AB")
