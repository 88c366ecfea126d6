from fractions import Fraction as F

import numpy as np
import pytest

from parrondo.games import (
    GameParams,
    build_PA,
    build_PB,
    build_W,
    coin_probs,
    matrix_from_json,
    matrix_to_json,
    mix,
)


@pytest.mark.parametrize(
    "r, rho, expected",
    [
        (3, F(1, 3), (F(1, 10), F(3, 4))),
        (3, F(0), (F(0), F(1))),
        (5, F(1, 2), (F(1, 17), F(2, 3))),
    ],
)
def test_coin_probs(r, rho, expected):
    p0, p1 = coin_probs(r, rho)
    assert (p0, p1) == expected
    # fairness by brute multiplication
    lose, win = 1 - p0, p0
    for _ in range(r - 1):
        lose *= 1 - p1
        win *= p1
    assert lose == win


@pytest.mark.parametrize("r", [3, 4, 7, 12])
@pytest.mark.parametrize("rho", [F(1, 10), F(1, 3), F(9, 10)])
def test_fairness_and_ordering(r, rho):
    params = GameParams(r, rho)
    assert params.fairness_residual() == 0
    assert params.p0 < F(1, 2) < params.p1
    fl = GameParams(r, float(rho))
    scale = float(params.p0 * params.p1 ** (r - 1))
    assert abs(fl.fairness_residual()) <= 1e-12 * scale


@pytest.mark.parametrize("bad", [(2, F(1, 3)), (3, F(1)), (3, F(-1, 2))])
def test_coin_probs_domain(bad):
    with pytest.raises(ValueError):
        coin_probs(*bad)


def test_gameparams_gamma_domain():
    with pytest.raises(ValueError):
        GameParams(3, F(1, 3), F(1))


def test_matrix_rows():
    assert list(build_PA(3)[0]) == [0, F(1, 2), F(1, 2)]
    assert list(build_PB(3, F(1, 10), F(3, 4))[0]) == [0, F(1, 10), F(9, 10)]
    W = build_W(4)
    assert W[0, 3] == -1 and W[3, 0] == 1


@pytest.mark.parametrize("r", [3, 4, 5, 10])
def test_structure(r):
    PA, PB, W = build_PA(r), build_PB(r, *coin_probs(r, F(1, 3))), build_W(r)
    for P in (PA, PB):
        assert all(sum(row) == 1 for row in P)
        assert all(0 <= x <= 1 for x in P.flat)
    assert set(W.flat) <= {-1, 0, 1}
    assert ((W != 0) == (PA != 0)).all()
    assert (W == -W.T).all()


def test_mix():
    PA, PB = build_PA(3), build_PB(3, F(1, 10), F(3, 4))
    assert (mix(PB, PB, F(2, 7)) == PB).all()
    M = mix(PA, PB, F(1, 2))
    assert M[0, 1] == F(3, 10)
    assert all(sum(row) == 1 for row in M)
    with pytest.raises(ValueError):
        mix(PA, build_PA(4), F(1, 2))
    with pytest.raises(ValueError):
        mix(PA, PB, F(0))


@pytest.mark.parametrize("gamma", [F(1, 4), F(2, 5)])
def test_mix_rho_zero(gamma):
    r = 5
    M = mix(build_PA(r), build_PB(r, *coin_probs(r, F(0))), gamma)
    assert M[0, 1] == gamma / 2
    assert all(M[i, i + 1] == 1 - gamma / 2 for i in range(1, r - 1))


def test_json_roundtrip():
    M = build_PB(3, F(1, 10), F(3, 4))
    rows = matrix_to_json(M)
    assert rows[0] == ["0/1", "1/10", "9/10"]
    assert (matrix_from_json(rows) == M).all()
    fl = build_PA(3, "float")
    assert np.allclose(matrix_from_json(matrix_to_json(fl)), fl)
