"""Seeded property checks: 10 seeds x 100 cases each."""

import json
import random
from fractions import Fraction

import pytest

from twisted_vw import qseries, sduality
from twisted_vw.coefficients import CycNum, euler_phi
from twisted_vw.qseries import SeriesContext
from twisted_vw.sduality import BasisSet, basis_vector
from twisted_vw.verification_agent import random_series

SEEDS = range(10)
CASES_PER_SEED = 100

RING = SeriesContext(6, 3, 4)
THIRDS = SeriesContext(3, 3, 3)


def nonzero_series(rng, ctx):
    while True:
        series = random_series(rng, ctx)
        if not series.is_zero():
            return series


@pytest.mark.parametrize("seed", SEEDS)
def test_ring_laws(seed):
    rng = random.Random(seed)
    for _ in range(CASES_PER_SEED):
        a, b, c = (random_series(rng, RING) for _ in range(3))
        assert qseries.series_equal((a + b) * c, a * c + b * c)
        assert qseries.series_equal(a * b, b * a)
        assert qseries.series_equal((a * b) * c, a * (b * c))


@pytest.mark.parametrize("seed", SEEDS)
def test_substitution_is_multiplicative(seed):
    rng = random.Random(1000 + seed)
    for _ in range(CASES_PER_SEED):
        a, b = random_series(rng, RING), random_series(rng, RING)
        image = qseries.substitute(a * b, 6, 3, 2, 1)
        assert qseries.series_equal(image, qseries.substitute(a, 6, 3, 2, 1) * qseries.substitute(b, 6, 3, 2, 1))


@pytest.mark.parametrize("seed", SEEDS)
def test_t_transform_is_multiplicative_of_order_3(seed):
    rng = random.Random(2000 + seed)
    for _ in range(CASES_PER_SEED):
        a, b = random_series(rng, THIRDS), random_series(rng, THIRDS)
        product = qseries.t_transform(a) * qseries.t_transform(b)
        assert qseries.series_equal(qseries.t_transform(a * b), product)
        assert qseries.t_transform(qseries.t_transform(qseries.t_transform(a))) == a


@pytest.mark.parametrize("seed", SEEDS)
def test_inverse(seed):
    rng = random.Random(3000 + seed)
    for _ in range(CASES_PER_SEED):
        a = nonzero_series(rng, RING)
        product = a * qseries.invert(a)
        assert qseries.series_equal(product, qseries.one(RING.with_trunc(product.trunc_order)))


@pytest.mark.parametrize("seed", SEEDS)
def test_s_squares_to_identity_on_random_vectors(seed):
    rng = random.Random(4000 + seed)
    for _ in range(CASES_PER_SEED):
        k3 = basis_vector(BasisSet.K3_RANK2, [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3)])
        twice = sduality.s_transform(sduality.s_transform(k3))
        assert sduality.first_difference(twice, k3.shift_weight(-24)) is None
        assert sduality.t_transform_basis(sduality.t_transform_basis(k3)) == k3

        p2 = basis_vector(BasisSet.P2, [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2)])
        twice = sduality.s_transform(sduality.s_transform(p2))
        assert sduality.first_difference(twice, p2.shift_weight(3)) is None


FIELD_ORDERS = (2, 3, 5, 7)


def random_cyc(rng, order):
    return CycNum(order, tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(euler_phi(order))))


@pytest.mark.parametrize("order", FIELD_ORDERS)
@pytest.mark.parametrize("seed", SEEDS)
def test_cyclotomic_field_axioms(order, seed):
    rng = random.Random(5000 + 10 * order + seed)
    one = CycNum.one(order)
    for _ in range(CASES_PER_SEED):
        x, y, z = (random_cyc(rng, order) for _ in range(3))
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        if not x.is_zero():
            assert x * x.inverse() == one
            assert (y / x) * x == y


@pytest.mark.parametrize("order", (1, 3, 5))
@pytest.mark.parametrize("seed", SEEDS)
def test_series_json_round_trip(order, seed):
    rng = random.Random(6000 + 10 * order + seed)
    ctx = SeriesContext(2 * order, order, Fraction(7, 2))
    for _ in range(CASES_PER_SEED):
        series = random_series(rng, ctx)
        text = json.dumps(qseries.to_json(series))
        assert qseries.from_json(json.loads(text)) == series
