from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parrondo.cycle_walk import (
    CycleWalk,
    pi0_example2,
    pi0_example3,
    stationary_general,
    stationary_linear_solve,
)
from parrondo.games import build_PA, build_PB, cycle_matrix, mix
from parrondo.markov import ReducibleChainError, stationary_residual


def test_uniform_when_doubly_stochastic():
    dist = stationary_general(CycleWalk([F(2, 7)] * 5))
    assert dist.pi == (F(1, 5),) * 5
    assert dist.method == "general-lemma"


@pytest.mark.parametrize(
    "up",
    [
        (F(1, 10), F(3, 4), F(3, 4)),
        (F(1, 3), F(2, 3), F(1, 2), F(1, 4)),
    ],
)
def test_general_matches_linear_solve(up):
    walk = CycleWalk(up)
    assert stationary_general(walk).pi == stationary_linear_solve(walk.matrix()).pi


def test_frozen_values():
    # from 3x3 elimination by hand: pi = (5, 2, 6)/13
    assert stationary_general(CycleWalk((F(1, 10), F(3, 4), F(3, 4)))).pi == (F(5, 13), F(2, 13), F(6, 13))


def test_linear_solve_small_cases():
    swap = np.array([[F(0), F(1)], [F(1), F(0)]], dtype=object)
    assert stationary_linear_solve(swap).pi == (F(1, 2), F(1, 2))
    assert stationary_linear_solve(build_PA(3)).pi == (F(1, 3),) * 3
    P = mix(build_PA(3), build_PB(3, F(1, 10), F(3, 4)), F(1, 2))
    assert stationary_linear_solve(P).pi == stationary_general(CycleWalk.from_matrix(P)).pi


def test_linear_solve_rejects_reducible():
    P = np.array([[F(1), F(0)], [F(0), F(1)]], dtype=object)
    with pytest.raises(ReducibleChainError):
        stationary_linear_solve(P)


def test_walk_domain():
    with pytest.raises(ValueError):
        CycleWalk((F(1, 2), F(1), F(1, 2)))
    with pytest.raises(ValueError):
        CycleWalk((F(1, 2), F(1, 2)))


def test_pi0_example2():
    assert pi0_example2(6, F(2, 3), F(2, 3)) == F(1, 6)
    walk = CycleWalk((F(3, 10), F(5, 8), F(5, 8)))
    assert pi0_example2(3, F(5, 8), F(3, 10)) == stationary_general(walk)[0]
    P = cycle_matrix([F(1, 5)] + [F(2, 3)] * 3)
    assert pi0_example2(4, F(2, 3), F(1, 5)) == stationary_linear_solve(P)[0]
    assert pi0_example2(4, 2 / 3, 0.2) == pytest.approx(float(stationary_linear_solve(P)[0]), rel=1e-13)


def test_pi0_example3():
    assert pi0_example3(3, F(3, 4)) == stationary_general(CycleWalk((F(1, 4), F(3, 4), F(3, 4))))[0]
    P = cycle_matrix([F(1, 10)] + [F(9, 10)] * 3)
    assert pi0_example3(4, F(9, 10)) == stationary_linear_solve(P)[0]
    assert pi0_example3(4, 0.9) == pytest.approx(float(stationary_linear_solve(P)[0]), rel=1e-13)


def test_pi0_example3_limit():
    p, n = 1 - 1e-8, 10**4
    q = 1 - p
    assert pi0_example3(n, p) == pytest.approx(p / (2 * p + n * q), rel=1e-3)


@pytest.mark.parametrize("func, args", [(pi0_example2, (5, F(1, 2), F(1, 3))), (pi0_example3, (5, F(1, 2)))])
def test_closed_forms_reject_half(func, args):
    with pytest.raises(ValueError, match="1/2"):
        func(*args)


@pytest.mark.parametrize("p", [F(1, 5), F(3, 7), F(4, 5)])
def test_closed_forms_below_half(p):
    # p < 1/2 goes through the mirrored ratio form
    n = 7
    walk = CycleWalk([F(1, 3)] + [p] * (n - 1))
    assert pi0_example2(n, p, F(1, 3)) == stationary_general(walk)[0]
    assert pi0_example2(n, float(p), 1 / 3) == pytest.approx(float(stationary_general(walk)[0]), rel=1e-12)
    walk3 = CycleWalk([1 - p] + [p] * (n - 1))
    assert pi0_example3(n, float(p)) == pytest.approx(float(stationary_general(walk3)[0]), rel=1e-12)


probs = st.fractions(min_value=F(1, 50), max_value=F(49, 50), max_denominator=50)


@settings(max_examples=60, deadline=None)
@given(st.lists(probs, min_size=3, max_size=12))
def test_lemma_against_oracle(up):
    walk = CycleWalk(up)
    dist = stationary_general(walk)
    assert dist.pi == stationary_linear_solve(walk.matrix()).pi
    pi, n = dist.pi, walk.n
    flows = {pi[i - 1] * up[i - 1] - pi[i % n] * (1 - up[i % n]) for i in range(1, n + 1)}
    assert len(flows) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.05, 0.95), min_size=3, max_size=12))
def test_float_residual(up):
    walk = CycleWalk(up)
    P = walk.matrix()
    for dist in (stationary_general(walk), stationary_linear_solve(P)):
        assert stationary_residual(dist.as_array(), P) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), probs, probs)
def test_closed_forms_agree_with_lemma(n, p, p0):
    if p == F(1, 2):
        return
    assert pi0_example2(n, p, p0) == stationary_general(CycleWalk([p0] + [p] * (n - 1)))[0]
    assert pi0_example3(n, p) == stationary_general(CycleWalk([1 - p] + [p] * (n - 1)))[0]
