import cmath
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from k3fix.cyclotomic import Cyc6, conj, inv, mul, root_of_unity, to_complex

XI = Cyc6(0, 1)
ONE = Cyc6(1)

bounded = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
cyc = st.builds(Cyc6, bounded, bounded)


def as_complex(x):
    re, im = to_complex(x)
    return complex(re, im)


def test_xi_squared_is_xi_minus_one():
    assert mul(XI, XI) == Cyc6(-1, 1)


def test_identity_multiplication():
    x = Cyc6(Fraction(3, 7), -2)
    assert mul(ONE, x) == x


def test_xi_has_order_six():
    assert XI ** 6 == ONE
    assert all(XI ** k != ONE for k in range(1, 6))


def test_inverse_examples():
    assert inv(XI) == Cyc6(1, -1)
    assert inv(ONE) == ONE
    x = Cyc6(2, -1)
    assert mul(x, inv(x)) == ONE
    assert inv(x) == Cyc6(Fraction(1, 3), Fraction(1, 3))


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        inv(Cyc6())


def test_conj_examples():
    assert conj(XI) == Cyc6(1, -1)
    assert conj(Cyc6(Fraction(5, 2))) == Cyc6(Fraction(5, 2))


@pytest.mark.parametrize(
    "n,k,expected",
    [(6, 3, Cyc6(-1)), (3, 1, Cyc6(-1, 1)), (6, 7, XI), (1, 5, ONE), (2, 1, Cyc6(-1))],
)
def test_root_of_unity(n, k, expected):
    assert root_of_unity(n, k) == expected


@pytest.mark.parametrize("n", [4, 5, 0, 12])
def test_root_of_unity_rejects_bad_order(n):
    with pytest.raises(ValueError):
        root_of_unity(n, 1)


def test_to_complex_examples():
    assert to_complex(XI) == pytest.approx((0.5, 3 ** 0.5 / 2), abs=1e-15)
    assert to_complex(ONE) == (1.0, 0.0)
    assert to_complex(Cyc6(2, -1)) == pytest.approx((1.5, -(3 ** 0.5) / 2), abs=1e-15)


def test_json_round_trip():
    x = Cyc6(Fraction(-4, 6), Fraction(7, 3))
    data = json.loads(json.dumps(x.to_json()))
    assert data == {"a": [-2, 3], "b": [7, 3]}
    assert Cyc6.from_json(data) == x


@given(cyc, cyc, cyc)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(cyc)
def test_inverse_round_trip(x):
    if x:
        assert x * x.inv() == ONE


@given(cyc, cyc)
def test_conj_is_involutive_homomorphism(x, y):
    assert conj(conj(x)) == x
    assert conj(x * y) == conj(x) * conj(y)
    assert conj(x + y) == conj(x) + conj(y)


@given(cyc, cyc)
def test_complex_embedding_is_multiplicative(x, y):
    lhs = as_complex(x * y)
    rhs = as_complex(x) * as_complex(y)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


@given(cyc)
def test_conj_matches_complex_conjugate(x):
    assert cmath.isclose(as_complex(conj(x)), as_complex(x).conjugate(), rel_tol=1e-12, abs_tol=1e-9)
