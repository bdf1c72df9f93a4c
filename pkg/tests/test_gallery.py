"""The example systems: loop shifts, products, and the satellite map."""

from fractions import Fraction

import pytest

from dynlab.core import threshold_grid
from dynlab.errors import NotCoprime, NotEnoughOrbits
from dynlab.expansive import (
    expansive_on_per,
    gamma_set,
    measure_expansive_holds,
    strong_measure_expansive_holds,
)
from dynlab.gallery import (
    build_myex,
    build_product_truncation,
    build_random_system,
    build_xpq,
)
from dynlab.recurrence import spectral_decomposition
from dynlab.symbolic import periodic_point_count

from helpers import random_metric  # noqa: F401  (re-exported for other tests)


def test_two_loop_shift_shapes():
    x32 = build_xpq(3, 2)
    assert x32.alphabet == (0, 1, 2, 3)
    assert x32.edges == frozenset(
        {(0, 1), (1, 2), (2, 0), (0, 3), (3, 0)})
    assert periodic_point_count(x32, 2) == 2  # just the short loop
    tiny = build_xpq(2, 1)
    assert tiny.alphabet == (0, 1)
    assert (0, 0) in tiny.edges  # length-1 loop: a fixed point
    assert periodic_point_count(tiny, 1) == 1
    with pytest.raises(NotCoprime):
        build_xpq(4, 2)


def test_loop_length_semigroup_is_the_periodic_spectrum():
    x32 = build_xpq(3, 2)
    semigroup = {a * 3 + b * 2 for a in range(8) for b in range(8)} - {0}
    for n in range(1, 13):
        assert (periodic_point_count(x32, n) > 0) == (n in semigroup)


def test_product_truncation_spectrum():
    single = build_product_truncation([2, 3], 1)
    assert periodic_point_count(single, 1) == 0
    assert periodic_point_count(single, 2) > 0
    prod = build_product_truncation([2, 3, 5], 2)
    counts = [periodic_point_count(prod, n) for n in range(1, 8)]
    assert counts == [0, 0, 9, 0, 25, 15, 0]
    # cross-check: the trace of a product power is the product of traces
    factors = [build_xpq(3, 2), build_xpq(5, 3)]
    for n in range(1, 8):
        assert counts[n - 1] == (periodic_point_count(factors[0], n)
                                 * periodic_point_count(factors[1], n))
    triple = build_product_truncation([2, 3, 5, 7], 3)
    assert len(triple.alphabet) == 4 * 7 * 11
    assert periodic_point_count(triple, 1) == 0
    # least period of the triple, read off the factor traces
    per_factor = [build_xpq(3, 2), build_xpq(5, 3), build_xpq(7, 5)]
    first = next(n for n in range(1, 40)
                 if all(periodic_point_count(f, n) > 0 for f in per_factor))
    assert first == 5  # grows past the two-factor minimum of 3


def test_product_truncation_validation():
    with pytest.raises(ValueError):
        build_product_truncation([2, 4, 5], 2)  # 4 is not prime
    with pytest.raises(ValueError):
        build_product_truncation([3, 2, 5], 2)  # not increasing
    with pytest.raises(ValueError):
        build_product_truncation([2, 3], 2)  # not enough primes
    with pytest.raises(NotCoprime):
        build_xpq(6, 3)


def test_satellite_instance_layout():
    inst = build_myex(5, 2)
    sys = inst.system  # metric axioms were re-verified during assembly
    assert sys.n == 25 + 1 + 2
    assert sys.invertible
    assert inst.anchors == ("(0,0)", "(1/5,2/5)")
    assert inst.orbits == (("q(1,0)",), ("q(2,0)", "q(2,1)"))
    assert sys.apply("q(1,0)") == "q(1,0)"
    assert sys.apply("q(2,0)") == "q(2,1)"
    assert sys.apply("q(2,1)") == "q(2,0)"
    # satellite sits at its offset from the anchor, exactly
    assert sys.d("q(2,0)", "(1/5,2/5)") == Fraction(1, 2)
    with pytest.raises(NotEnoughOrbits):
        build_myex(5, 6)
    with pytest.raises(NotEnoughOrbits):
        build_myex(2, 3)  # the 1/2-lattice has two orbits


def test_satellite_membership_threshold_is_exactly_one_over_k():
    inst = build_myex(5, 3)
    sys = inst.system
    for k in (1, 2, 3):
        anchor, sat = inst.anchors[k - 1], inst.orbits[k - 1][0]
        for delta in threshold_grid(sys).positive:
            member = sat in gamma_set(sys, anchor, delta).members
            assert member == (delta >= Fraction(1, k))


def test_satellites_degrade_expansiveness_on_periodic_points():
    sys = build_myex(5, 3).system
    for delta in threshold_grid(sys).positive:
        assert expansive_on_per(sys, delta) == (delta < Fraction(1, 3))


def test_strong_counterexample_is_the_last_satellite_orbit():
    inst = build_myex(5, 3)
    sys = inst.system
    ok, counter = strong_measure_expansive_holds(sys, Fraction(1, 3))
    assert not ok
    x, measure = counter
    assert x == inst.anchors[2]
    support = tuple(p for p, w in zip(sys.points, measure.weights) if w > 0)
    assert support == inst.orbits[2]
    assert all(measure.weights[sys.index[p]] == Fraction(1, 2)
               for p in support)
    assert measure_expansive_holds(sys, Fraction(1, 3)) == (True, "vacuous")


def test_satellite_report_flags_the_degradation():
    inst = build_myex(5, 2)
    dec = spectral_decomposition(inst.system)
    assert dec.report.invertible
    assert Fraction(1, 2) in dec.report.strong_fails_at
    assert dec.report.strong_constant < Fraction(1, 2)
    assert all(dec.verify(inst.system).values())


def test_random_generator_contract():
    a = build_random_system(42, 6, invertible=True)
    b = build_random_system(42, 6, invertible=True)
    assert a.points == b.points and a.dist == b.dist and a.fmap == b.fmap
    assert a.invertible
    one = build_random_system(0, 1)
    assert one.n == 1 and one.fmap == (0,)
    # builder re-verifies the metric axioms for every seed we touch
    for seed in range(30):
        build_random_system(seed, 5, invertible=(seed % 2 == 0))
    with pytest.raises(ValueError):
        build_random_system(1, 0)