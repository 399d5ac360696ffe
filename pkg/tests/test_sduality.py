from fractions import Fraction
from unittest.mock import patch

import pytest

from twisted_vw import partitions, qseries, sduality
from twisted_vw.errors import InternalInconsistencyError
from twisted_vw.sduality import BasisSet, Sqrt2Scalar, basis_vector
from twisted_vw.verification_agent import corrupted_k3_rules


def test_sqrt2_arithmetic():
    root = Sqrt2Scalar(0, 1)
    assert root * root == Sqrt2Scalar.of(2)
    assert sduality.INV_SQRT2 * root == Sqrt2Scalar.of(1)
    assert (Sqrt2Scalar(1, 1) / Sqrt2Scalar(1, 1)) == Sqrt2Scalar.of(1)
    assert Sqrt2Scalar(1, 1).inverse() == Sqrt2Scalar(-1, 1)
    assert Sqrt2Scalar(1, 0).rational_value() == 1
    assert Sqrt2Scalar(0, 1).rational_value() is None
    with pytest.raises(ZeroDivisionError):
        Sqrt2Scalar().inverse()


def test_sqrt2_text():
    assert str(Sqrt2Scalar(Fraction(1, 2))) == "1/2"
    assert str(Sqrt2Scalar(0, -1)) == "-1*sqrt2"
    assert str(Sqrt2Scalar(3, Fraction(1, 4))) == "3 + 1/4*sqrt2"


@pytest.mark.parametrize("basis_set", [BasisSet.K3_RANK2, BasisSet.P2])
def test_s_matrices_are_involutions(basis_set):
    assert sduality.rules_square_to_identity(basis_set)


def test_corrupted_rules_break_the_involution():
    assert not sduality.rules_square_to_identity(BasisSet.K3_RANK2, corrupted_k3_rules())


def test_s_transform_of_su2_k3():
    su2 = basis_vector(BasisSet.K3_RANK2, (Fraction(1, 4), Fraction(1, 2), Fraction(1, 2)))
    image = sduality.s_transform(su2).scale(2 ** 11)
    expected = basis_vector(BasisSet.K3_RANK2, (Fraction(1, 4), 2 ** 21, 2 ** 10), -12)
    assert sduality.first_difference(image, expected) is None
    assert image.weights() == [Fraction(-12)]


def test_first_difference_names_weight_and_symbol():
    left = basis_vector(BasisSet.K3_RANK2, (0, 1, 0), -12)
    right = basis_vector(BasisSet.K3_RANK2, (0, 2, 0), -12)
    assert sduality.first_difference(left, right) == "coefficient of tau^-12 G(q^1/2): 1 != 2"


def test_t_transform_swaps_the_half_period_series():
    e = basis_vector(BasisSet.K3_RANK2, (1, 2, 3))
    image = sduality.t_transform_basis(e)
    assert image.coordinates() == tuple(Sqrt2Scalar.of(c) for c in (1, 3, 2))
    assert sduality.t_transform_basis(image) == e
    with pytest.raises(ValueError):
        sduality.t_transform_basis(basis_vector(BasisSet.P2, (1, 0)))


def test_t_transform_matches_the_series():
    # q -> e^(2 pi i) q fixes G(q^2) and sends q^(1/2) to -q^(1/2)
    e = basis_vector(BasisSet.K3_RANK2, (1, 2, 3))
    expanded = sduality.expand_k3(e, 4)
    assert qseries.t_transform(expanded) == sduality.expand_k3(sduality.t_transform_basis(e), 4)


def test_expand_k3_needs_rational_coordinates():
    e = basis_vector(BasisSet.K3_RANK2, (sduality.INV_SQRT2, 0, 0))
    with pytest.raises(ValueError):
        sduality.expand_k3(e, 3)


def test_decompose_p2():
    p = qseries.VARIABLE_INVERSE_Q
    f0 = partitions.f0_holomorphic(6, p)
    f1 = partitions.f1_holomorphic(6, p)
    assert sduality.decompose_p2(qseries.linear_combination([(3, f0), (-2, f1)])) == (3, -2)
    assert sduality.decompose_p2(partitions.z_su2z2_p2(1, 6)) == (Fraction(1, 2), Fraction(-1, 2))


def test_decompose_p2_rejects_series_outside_the_span():
    # keeping the divisor term leaves Z_0 outside span(f0, f1)
    series = partitions.z_su2_p2(0, 6, drop_divisor_term=False)
    with pytest.raises(InternalInconsistencyError):
        sduality.decompose_p2(series)


def test_expand_p2_round_trip():
    e = basis_vector(BasisSet.P2, (Fraction(1, 2), Fraction(1, 2)))
    assert sduality.decompose_p2(sduality.expand_p2(e, 6)) == (Fraction(1, 2), Fraction(1, 2))


def test_p2_s_transform_factor():
    su2 = basis_vector(BasisSet.P2, (1, 0))
    image = sduality.s_transform(su2)
    minus_root_two = Sqrt2Scalar(0, -1)
    expected = basis_vector(BasisSet.P2, (Fraction(1, 2), Fraction(1, 2)), Fraction(3, 2)).scale(minus_root_two)
    assert sduality.first_difference(image, expected) is None


def test_su2_k3_sduality_check():
    result = sduality.verify_su2_k3_sduality(4)
    assert result.passed, result.detail


def test_su2_k3_sduality_check_with_corrupted_rules():
    result = sduality.verify_su2_k3_sduality(4, corrupted_k3_rules())
    assert not result.passed
    assert "coefficient of tau^-12 G(q^1/2): 1048576 != 2097152" in result.detail


def test_even_odd_transform_check():
    result = sduality.verify_even_odd_transforms(4)
    assert result.passed, result.detail


def test_p2_sduality_check_reports_the_normalization():
    result = sduality.verify_p2_sduality(8)
    assert result.passed, result.detail
    assert "-1*sqrt2" in result.detail
    assert "ratio to the stated 2^(-3/2) normalization: -4" in result.detail
    assert "convention: S acts on (f0, f1) by -(1/sqrt 2) [[1, 1], [1, -1]]" in result.detail
    assert "divisor term dropped" in result.detail


@pytest.mark.parametrize("r,rho", [(2, 0), (2, 11), (2, 22)] + [(3, rho) for rho in (0, 1, 11, 20, 22)])
def test_gerbe_sum_check(r, rho):
    result = sduality.verify_k3_gerbe_sum(r, rho, 3)
    assert result.passed, result.detail
    assert result.check_id == f"k3_gerbe_sum_r{r}_rho{rho}"


@pytest.mark.parametrize("rho", [0, 1, 20, 22])
def test_picard_independence_check(rho):
    result = sduality.verify_picard_independence(2, rho, 4)
    assert result.passed, result.detail
    assert result.check_id == f"k3_picard_independence_r2_rho{rho}"
    assert "difference to rho=11 is the twisted term" in result.detail


def test_picard_independence_check_catches_a_wrong_weight():
    real = partitions.picard_difference

    def off_by_one(r, rho, base_rho, prec=partitions.DEFAULT_PRECISION):
        return real(r, rho + 1, base_rho, prec)

    with patch("twisted_vw.partitions.picard_difference", side_effect=off_by_one):
        result = sduality.verify_picard_independence(2, 0, 4)
    assert not result.passed
    assert "first discrepancy at exponent 3/2" in result.detail


@pytest.mark.parametrize("r", [2, 3, 5])
def test_cyclotomic_collapse(r):
    result = sduality.verify_cyclotomic_collapse(r, 3)
    assert result.passed, result.detail


def test_reference_expansions():
    result = sduality.verify_reference_expansions()
    assert result.passed, result.detail
