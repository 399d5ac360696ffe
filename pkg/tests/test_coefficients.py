from fractions import Fraction

import pytest

from twisted_vw.coefficients import CycNum, cyc_is_rational, cyc_root_of_unity, cyc_sum, embed, euler_phi
from twisted_vw.errors import UnsupportedOrderError


@pytest.mark.parametrize("order,phi", [(1, 1), (2, 1), (3, 2), (5, 4), (7, 6)])
def test_euler_phi_supported_orders(order, phi):
    assert euler_phi(order) == phi


@pytest.mark.parametrize("order", [4, 6, 9, 0, -3])
def test_euler_phi_rejects_other_orders(order):
    with pytest.raises(UnsupportedOrderError):
        euler_phi(order)


def test_cube_roots_of_unity_sum_to_zero():
    total = cyc_sum((cyc_root_of_unity(3, j) for j in range(3)), 3)
    assert total.is_zero()


def test_top_power_is_reduced_to_canonical_form():
    zeta = cyc_root_of_unity(5, 1)
    assert zeta ** 4 == cyc_root_of_unity(5, 4)
    assert cyc_root_of_unity(5, 4).coords == (-1, -1, -1, -1)
    assert zeta ** 5 == CycNum.one(5)
    assert cyc_root_of_unity(5, 7) == cyc_root_of_unity(5, 2)


def test_inverse_and_division():
    x = CycNum(3, (1, 2))
    assert x * x.inverse() == CycNum.one(3)
    assert (x / x) == CycNum.one(3)
    assert x ** -2 * x ** 2 == CycNum.one(3)
    with pytest.raises(ZeroDivisionError):
        CycNum.zero(5).inverse()


def test_conjugate_and_norm():
    zeta = cyc_root_of_unity(3, 1)
    assert zeta.conjugate(2) == cyc_root_of_unity(3, 2)
    assert zeta.norm() == 1
    assert (zeta + 1).norm() == 1
    assert CycNum.from_rational(5, 2).norm() == 16


def test_rational_detection():
    assert cyc_is_rational(CycNum.from_rational(3, Fraction(7, 2))) == Fraction(7, 2)
    assert cyc_is_rational(cyc_root_of_unity(3, 1)) is None
    # zeta + zeta^2 = -1
    assert (cyc_root_of_unity(3, 1) + cyc_root_of_unity(3, 2)).rational_value() == -1


def test_mixing_orders_is_rejected():
    with pytest.raises(UnsupportedOrderError):
        CycNum.one(3) + CycNum.one(5)
    with pytest.raises(UnsupportedOrderError):
        embed(5, cyc_root_of_unity(3, 1))
    assert embed(5, CycNum.from_rational(3, 4)) == CycNum.from_rational(5, 4)


def test_wrong_coordinate_count():
    with pytest.raises(ValueError):
        CycNum(3, (1, 2, 3))


def test_json_encoding():
    x = CycNum(5, (Fraction(1, 2), 0, -3, Fraction(7, 9)))
    assert x.to_json() == {"order": 5, "coords": ["1/2", "0", "-3", "7/9"]}
    assert CycNum.from_json(x.to_json()) == x


@pytest.mark.parametrize("order", [2, 3, 5, 7])
def test_power_sums_of_roots_of_unity(order):
    for j in range(order):
        total = cyc_sum((cyc_root_of_unity(order, j * k) for k in range(order)), order)
        if j == 0:
            assert total == CycNum.from_rational(order, order)
        else:
            assert total.is_zero(), (order, j)
