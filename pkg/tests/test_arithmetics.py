from fractions import Fraction

import numpy as np
import pytest

from twisted_vw import arithmetics
from twisted_vw.errors import InvalidGerbeDataError
from tests.helpers import load_yaml, rat

HURWITZ = load_yaml("hurwitz_numbers.yaml")
CENSUS = load_yaml("gerbe_census.yaml")


@pytest.mark.parametrize("delta,expected", HURWITZ)
def test_hurwitz_class_number(delta, expected):
    assert arithmetics.hurwitz_class_number(delta) == rat(expected)


@pytest.mark.parametrize("delta,expected", HURWITZ)
def test_hurwitz_class_number_by_reduction(delta, expected):
    assert arithmetics.hurwitz_class_number_by_reduction(delta) == rat(expected)


def test_hurwitz_oracles_agree_up_to_200():
    for delta in range(1, 201):
        assert arithmetics.hurwitz_class_number(delta) == arithmetics.hurwitz_class_number_by_reduction(delta), delta


@pytest.mark.parametrize("delta", [0, -4])
def test_hurwitz_needs_positive_discriminant(delta):
    with pytest.raises(ValueError):
        arithmetics.hurwitz_class_number(delta)
    with pytest.raises(ValueError):
        arithmetics.hurwitz_class_number_by_reduction(delta)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (4, 3), (6, 4), (12, 6)])
def test_sigma0(n, count):
    assert arithmetics.sigma0(n) == count


def test_legendre_epsilon():
    assert arithmetics.legendre_epsilon(1, 3) == -1
    assert arithmetics.legendre_epsilon(2, 3) == 1
    with pytest.raises(InvalidGerbeDataError):
        arithmetics.legendre_epsilon(1, 2)
    with pytest.raises(ValueError):
        arithmetics.legendre_epsilon(3, 3)


def test_k3_lattice_is_even_unimodular_of_signature_3_19():
    checks = arithmetics.lattice_checks()
    assert checks["determinant"] == -1
    assert checks["unimodular"]
    assert checks["even"]
    assert checks["symmetric"]
    assert checks["signature"] == (3, 19)


def test_e8_gram_matrix():
    gram = arithmetics.e8_gram()
    assert gram.shape == (8, 8)
    assert int(round(np.linalg.det(gram.astype(float)))) == 1


def test_block_distributions_mod_4():
    assert arithmetics.block_distribution(arithmetics.hyperbolic_plane(), 2, 4) == [3, 0, 1, 0]
    assert arithmetics.block_distribution(-arithmetics.e8_gram(), 2, 4) == [136, 0, 120, 0]


def test_class_census_by_block_convolution():
    assert arithmetics.quadratic_form_distribution(2) == [2 ** 21 + 2 ** 10, 0, 2 ** 21 - 2 ** 10, 0]
    assert arithmetics.k3_class_census_bruteforce() == (1, 2098175, 2096128)


def test_full_enumeration_agrees_with_convolution():
    assert arithmetics.k3_class_census_full(workers=2) == arithmetics.k3_class_census_bruteforce()


@pytest.mark.parametrize("r,rho,n_trivial,n_ess,n_opt", CENSUS)
def test_gerbe_census(r, rho, n_trivial, n_ess, n_opt):
    census = arithmetics.gerbe_census(rho, r)
    assert (census.n_trivial, census.n_ess_nontrivial, census.n_optimal) == (n_trivial, n_ess, n_opt)
    assert census.total == r ** 22


def test_gerbe_census_even_odd_split_for_rank_2():
    census = arithmetics.gerbe_census(11, 2)
    assert (census.n_even, census.n_odd) == (2098175, 2096128)
    assert census.to_dict()["n_optimal"] == 4192256
    assert arithmetics.gerbe_census(11, 3).n_even is None


@pytest.mark.parametrize("rho", [21, 23, -1])
def test_gerbe_census_rejects_unrealized_picard_numbers(rho):
    with pytest.raises(InvalidGerbeDataError):
        arithmetics.gerbe_census(rho, 2)


def test_gerbe_census_rejects_composite_rank():
    with pytest.raises(InvalidGerbeDataError):
        arithmetics.gerbe_census(11, 4)


@pytest.mark.parametrize("m,r", [(1, 2), (1, 3), (2, 3), (1, 5), (2, 5), (4, 5)])
def test_gauss_sums(m, r):
    assert arithmetics.gauss_sum_value(m, r).rational_value() == arithmetics.gauss_sum_expected(m, r)
    assert arithmetics.gauss_sum_check(m, r)


def test_gauss_sum_rank_2_is_2_to_the_11():
    assert arithmetics.gauss_sum_value(1, 2).rational_value() == Fraction(2048)
    with pytest.raises(ValueError):
        arithmetics.gauss_sum_value(2, 2)
