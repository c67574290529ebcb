import cmath
import random
from fractions import Fraction

import pytest

from k3fix.cyclotomic import Cyc6
from k3fix.lefschetz import (
    GENUS_EXCLUSION,
    Bounds,
    FixedLocus3,
    FixedLocus6,
    curve_term,
    enumerate_loci,
    exclusion_reason,
    expected_trace,
    holomorphic_sum,
    integer_identity,
    point_term,
    verify_holomorphic,
)
from k3fix.localact import P01, P22, P25, P34


def root(order):
    return cmath.exp(2j * cmath.pi / order)


def numeric_point(order, k, kp):
    z = root(order)
    return 1 / ((1 - z ** k) * (1 - z ** kp))


def numeric_curve(g, order):
    z = root(order)
    return (1 - g) / (1 - z) - z * (2 * g - 2) / (1 - z) ** 2


def close(x: Cyc6, w: complex, tol=1e-12):
    re, im = x.to_complex()
    return abs(complex(re, im) - w) <= tol


# exact values frozen after checking them against numeric_point / numeric_curve
@pytest.mark.parametrize(
    "t,exact",
    [
        (P25, Cyc6(Fraction(2, 3), Fraction(-1, 3))),
        (P34, Cyc6(Fraction(1, 3), Fraction(-1, 6))),
        (P22, Cyc6(Fraction(1, 3), Fraction(-1, 3))),
    ],
)
def test_point_terms(t, exact):
    assert close(exact, numeric_point(t.order, *t.exponents))
    assert point_term(t) == exact


def test_point_term_rejects_curve_points():
    with pytest.raises(ValueError):
        point_term(P01)


@pytest.mark.parametrize(
    "g,exact", [(1, Cyc6(0)), (0, Cyc6(-2, 1)), (2, Cyc6(2, -1)), (5, Cyc6(8, -4))]
)
def test_curve_terms_order6(g, exact):
    assert close(exact, numeric_curve(g, 6))
    assert curve_term(g, 6) == exact


@pytest.mark.parametrize("g", range(6))
@pytest.mark.parametrize("order", [2, 3, 6])
def test_curve_terms_match_numeric(g, order):
    assert close(curve_term(g, order), numeric_curve(g, order))


def test_expected_traces():
    assert expected_trace(6) == Cyc6(2, -1)
    assert expected_trace(3) == Cyc6(1, -1)
    assert close(expected_trace(3), 1 + root(3) ** 2)


def test_holomorphic_sum_examples():
    genus_one = FixedLocus6(p25=3, genus_list=(1,))
    assert holomorphic_sum(genus_one) == Cyc6(2, -1) == 1 + Cyc6(0, 1).conj()
    assert holomorphic_sum(FixedLocus6()) == 0
    assert holomorphic_sum(FixedLocus6(p34=12, rational_curves=1)) == Cyc6(2, -1)


def test_holomorphic_sum_is_additive():
    a = FixedLocus6(4, 1, 0)
    b = FixedLocus6(2, 3, 1)
    merged = FixedLocus6(6, 4, 1)
    assert holomorphic_sum(merged) == holomorphic_sum(a) + holomorphic_sum(b)


def test_verify_examples():
    assert not verify_holomorphic(FixedLocus6(p34=1))
    assert verify_holomorphic(FixedLocus3(n=0, k=2, g=5), 3)
    assert verify_holomorphic(FixedLocus3(n=3, k=0, g=None))
    assert not verify_holomorphic(FixedLocus3(n=2, k=0, g=None))


def test_order_mismatch_rejected():
    with pytest.raises(ValueError):
        holomorphic_sum(FixedLocus6(), 3)
    with pytest.raises(ValueError):
        holomorphic_sum(FixedLocus3(1, 0), 6)


def test_locus_validation():
    with pytest.raises(ValueError):
        FixedLocus6(genus_list=(1, 1))
    with pytest.raises(ValueError):
        FixedLocus6(genus_list=(0,))
    with pytest.raises(ValueError):
        FixedLocus3(n=1, k=1, g=None)


def test_enumerate_points_only():
    points = [(x.p34, x.p25) for x in enumerate_loci(Bounds(12, 9, 3, 1))
              if x.rational_curves == 0 and not x.genus_list]
    assert sorted(points) == [(0, 3), (2, 2), (4, 1), (6, 0)]


def test_enumerate_zero_bounds_is_empty():
    assert enumerate_loci(Bounds(0, 0, 0, 0)) == []


def test_enumerate_contains_table_maximum():
    assert FixedLocus6(12, 0, 1) in enumerate_loci()


def test_enumerate_genus_one():
    loci = [x for x in enumerate_loci() if x.genus_list == (1,)]
    assert FixedLocus6(0, 3, 0, (1,)) in loci
    assert all(integer_identity(x) for x in loci)


def test_enumerate_flags_higher_genus():
    loci = enumerate_loci(Bounds(12, 9, 3, 3))
    high = [x for x in loci if x.genus_list and x.genus_list[0] >= 2]
    assert FixedLocus6(0, 0, 0, (2,)) in high
    assert all(exclusion_reason(x) == GENUS_EXCLUSION for x in high)
    assert all(exclusion_reason(x) is None for x in loci if x not in high)


def test_enumeration_is_deterministic_and_complete():
    bounds = Bounds(12, 9, 3, 2)
    loci = enumerate_loci(bounds)
    assert loci == enumerate_loci(bounds)
    brute = {
        FixedLocus6(a, b, l, gl)
        for a in range(13) for b in range(10) for l in range(4)
        for gl in [(), (1,), (2,)]
        if integer_identity(FixedLocus6(a, b, l, gl))
    }
    assert set(loci) == brute
    assert all(verify_holomorphic(x) for x in loci)


def test_integer_and_exact_identity_agree_on_random_profiles():
    rng = random.Random(7)
    agree_true = 0
    for _ in range(10_000):
        genus = rng.choice([(), (), (1,), (rng.randint(1, 4),)])
        x = FixedLocus6(rng.randint(0, 14), rng.randint(0, 10), rng.randint(0, 4), genus)
        assert integer_identity(x) == verify_holomorphic(x)
        agree_true += integer_identity(x)
    assert agree_true > 0
