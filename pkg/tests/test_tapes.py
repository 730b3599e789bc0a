from fractions import Fraction

import numpy as np
import pytest

from itmpc.errors import ConfigurationError
from itmpc.tapes import Odometer, RandomTape, enumerate_tapes, exact_distribution


def test_seeded_tapes_are_reproducible_and_independent():
    a = RandomTape.seeded(7, 1)
    b = RandomTape.seeded(7, 1)
    c = RandomTape.seeded(7, 2)
    xs = [a.below(1000) for _ in range(20)]
    assert xs == [b.below(1000) for _ in range(20)]
    assert xs != [c.below(1000) for _ in range(20)]


def test_bits_width():
    t = RandomTape.seeded(0)
    for L in (1, 7, 64, 65, 1000):
        assert 0 <= t.bits(L) < 1 << L


def test_bernoulli_rate():
    t = RandomTape.seeded(3)
    p = Fraction(1, 5)
    n = 200_000
    ones = bin(t.bernoulli(n, p)).count("1")
    sd = (n * 0.2 * 0.8) ** 0.5
    assert abs(ones - n * 0.2) < 4 * sd


def test_bernoulli_edge_probabilities():
    t = RandomTape.seeded(3)
    assert t.bernoulli(50, Fraction(0)) == 0
    assert t.bernoulli(50, Fraction(1)) == (1 << 50) - 1


def test_exhaustive_enumerates_every_assignment_with_exact_mass():
    def run(tapes):
        return (tapes[1].below(3), tapes[2].bits(2))
    dist = exact_distribution(run, 2)
    assert len(dist) == 12
    assert set(dist.values()) == {Fraction(1, 12)}
    assert sum(dist.values()) == 1


def test_exhaustive_bernoulli_is_exact():
    dist = exact_distribution(lambda t: t[1].bernoulli(1, Fraction(1, 3)), 1)
    assert dist == {0: Fraction(2, 3), 1: Fraction(1, 3)}


def test_adaptive_draw_schedule():
    # The second draw's radix depends on the first draw.
    def run(tapes):
        a = tapes[1].below(2)
        return (a, tapes[1].below(2 + a))
    dist = exact_distribution(run, 1)
    assert dist == {(0, 0): Fraction(1, 4), (0, 1): Fraction(1, 4),
                    (1, 0): Fraction(1, 6), (1, 1): Fraction(1, 6), (1, 2): Fraction(1, 6)}


def test_partial_exhaustion_conditions_on_seeded_tapes():
    seen = set()
    count = 0
    for a in enumerate_tapes(2, exhaustive=[2], seed=5):
        seen.add(a.tapes[1].bits(8))
        a.tapes[2].bits(3)
        count += 1
    assert count == 8
    assert len(seen) == 1


def test_limit_is_enforced():
    with pytest.raises(ConfigurationError):
        for a in enumerate_tapes(1, limit=1 << 10):
            a.tapes[1].bits(11)


def test_odometer_probability_of_first_path():
    odo = Odometer()
    odo.draw(2)
    odo.draw(5)
    assert odo.probability() == Fraction(1, 10)
