from fractions import Fraction

import pytest

F = Fraction


@pytest.fixture
def third():
    return Fraction(1, 3)
