from fractions import Fraction
from unittest.mock import patch

import pytest

from twisted_vw import partitions, qseries
from twisted_vw.errors import InternalInconsistencyError, InvalidGerbeDataError, SeriesPrecisionError
from twisted_vw.qseries import SeriesContext
from twisted_vw.surface_kind import C1Parity, DetTag
from twisted_vw.vw_table import PROVISIONAL, THEOREM, VWTable
from tests.helpers import coefficients, load_yaml, rat

EXPANSIONS = load_yaml("k3_expansions.yaml")

BUILDERS = {
    "g": lambda case: qseries.g_series(SeriesContext(1, 1, rat(case["precision"]))),
    "k3_su": lambda case: partitions.z_k3_trivial_gerbe(case["rank"], rat(case["precision"])),
    "k3_surzr": lambda case: partitions.z_k3_surzr(case["rank"], case["picard"], rat(case["precision"])),
    "k3_ess": lambda case: partitions.z_ess_trivial(case["rank"], rat(case["precision"])),
    "k3_opt": lambda case: partitions.z_optimal(case["rank"], rat(case["precision"])),
}


@pytest.mark.parametrize("case", EXPANSIONS, ids=[case["name"] for case in EXPANSIONS])
def test_k3_expansions(case):
    series = BUILDERS[case["builder"]](case)
    exact_through = rat(case["exact_through"])
    actual = {exp: value for exp, value in coefficients(series).items() if exp <= exact_through}
    expected = {rat(exp): rat(value) for exp, value in case["terms"]}
    assert actual == expected


def test_prediction_is_the_rho_11_series():
    assert qseries.series_equal(partitions.z_k3_vw_prediction(6), partitions.z_k3_surzr(2, 11, 6))


@pytest.mark.parametrize("rho", [0, 1, 20, 22])
def test_surzr_constant_term(rho):
    series = partitions.z_k3_surzr(2, rho, 3)
    assert qseries.rational_coefficient(series, 0) == Fraction(1, 4)


def test_surzr_for_odd_rank():
    series = partitions.z_k3_surzr(3, 1, 3)
    assert qseries.rational_coefficient(series, 0) == Fraction(1, 9)
    assert series.ramification == 6
    assert series.cyc_order == 3


def test_surzr_reports_disagreement_between_constructions():
    real = partitions.z_optimal

    def doubled(r, prec=partitions.DEFAULT_PRECISION):
        return qseries.scale(real(r, prec), 2)

    with patch("twisted_vw.partitions.z_optimal", side_effect=doubled):
        with pytest.raises(InternalInconsistencyError) as raised:
            partitions.z_k3_surzr(2, 11, 3)
    assert raised.value.discrepancy.exponent == Fraction(3, 2)
    assert "r=2, rho=11" in str(raised.value)


def test_surzr_rejects_picard_21():
    with pytest.raises(InvalidGerbeDataError):
        partitions.z_k3_surzr(2, 21, 3)


@pytest.mark.parametrize("prec", [0, "-1/2"])
def test_k3_builders_need_positive_precision(prec):
    with pytest.raises(SeriesPrecisionError):
        partitions.z_ess_trivial(2, prec)


def test_complex_structure_free_matches_rho_11_for_rank_2():
    assert qseries.series_equal(
        partitions.z_k3_complex_structure_free(2, 4),
        partitions.z_k3_surzr(2, 11, 4),
    )


def test_complex_structure_free_for_rank_3():
    series = partitions.z_k3_complex_structure_free(3, 3)
    assert series == partitions.complex_structure_free_closed_form(3, 3)
    assert qseries.rational_coefficient(series, 0) == Fraction(1, 9)


def test_even_odd_split_of_optimal_series():
    both = qseries.add(partitions.z_even(5), partitions.z_odd(5))
    assert qseries.series_equal(both, qseries.scale(partitions.z_optimal(2, 5), 2))
    # odd half-integral exponents vanish in Z_even
    assert all(exp.denominator == 1 for exp, _ in coefficients(partitions.z_even(5)).items())
    assert partitions.z_even(5) == partitions.z_ess_trivial(2, 5)


def test_twisted_optimal_series_for_odd_rank_is_cyclotomic():
    series = partitions.z_optimal_twisted_sign(3, 1, 3)
    assert series.cyc_order == 3
    with pytest.raises(ValueError):
        partitions.z_optimal_twisted_sign(3, 3, 3)


def test_vector_bundles_on_p2_even():
    series = partitions.z_vb_p2(C1Parity.EVEN, 6)
    assert series.variable == qseries.VARIABLE_INVERSE_Q
    assert coefficients(series) == {Fraction(1): 1, Fraction(3): 3, Fraction(5): 3}


def test_vector_bundles_on_p2_odd():
    series = partitions.z_vb_p2(C1Parity.ODD, 3)
    assert coefficients(series) == {
        Fraction(-3): 1,
        Fraction(-2): 3,
        Fraction(-1): 3,
        Fraction(0): 6,
        Fraction(1): 3,
        Fraction(2): 9,
    }


def test_vector_bundles_on_p2_check_parity_of_c1():
    with pytest.raises(ValueError):
        partitions.z_vb_p2(C1Parity.EVEN, 3, c1=1)


def test_p222_components_match_p2():
    assert partitions.z_vb_p222(0, 0, 8) == partitions.z_vb_p2(C1Parity.EVEN, 8)
    assert partitions.z_vb_p222(0, 1, 8) == partitions.z_vb_p2(C1Parity.ODD, 8)
    assert partitions.z_vb_p222(2, 1, 8) == partitions.z_vb_p2(C1Parity.EVEN, 8, c1=2)
    with pytest.raises(ValueError):
        partitions.z_vb_p222(1, 0, 8)
    with pytest.raises(ValueError):
        partitions.z_vb_p222(0, 2, 8)


def test_su2_on_p2_is_the_holomorphic_basis():
    p = qseries.VARIABLE_INVERSE_Q
    assert partitions.z_su2_p2(0, 8) == partitions.f0_holomorphic(8, p)
    assert partitions.z_su2_p2(1, 8) == partitions.f1_holomorphic(8, p)
    with pytest.raises(ValueError):
        partitions.z_su2_p2(2, 8)


def test_su2z2_on_p2():
    p = qseries.VARIABLE_INVERSE_Q
    f0, f1 = partitions.f0_holomorphic(8, p), partitions.f1_holomorphic(8, p)
    half = Fraction(1, 2)
    assert partitions.z_su2z2_p2(0, 8) == qseries.linear_combination([(half, f0), (half, f1)])
    assert partitions.z_su2z2_p2(1, 8) == qseries.linear_combination([(half, f0), (-half, f1)])


def test_holomorphic_parts():
    assert coefficients(partitions.f0_holomorphic(3)) == {Fraction(1): Fraction(3, 2), Fraction(2): 3}
    f1 = coefficients(partitions.f1_holomorphic(2))
    assert f1 == {Fraction(3, 4): 1, Fraction(7, 4): 3}


def test_essentially_trivial_table_rank_2():
    table = partitions.vw_essentially_trivial(2, 5)
    assert [row.value for row in table.sorted_rows()] == [0, 0, 24, 3200, 176256, 5930496]
    assert table.det_tag is DetTag.GERBE_LINE_BUNDLE


def test_essentially_trivial_table_odd_rank():
    table = partitions.vw_essentially_trivial(3, 5)
    assert [(row.c2, row.value) for row in table.sorted_rows()] == [(0, 0), (2, 0), (3, 24), (5, 5930496)]
    stated = partitions.vw_essentially_trivial(3, 5, as_stated=True)
    provisional = {row.c2: row.value for row in stated.rows if row.provenance == PROVISIONAL}
    assert provisional == {1: 0, 4: 3200}


def test_odd_rank_rows_by_residue():
    stated = partitions.vw_essentially_trivial(3, 5, as_stated=True)
    rows = {row.c2: (row.value, row.provenance) for row in stated.sorted_rows()}
    assert rows[3] == (24, THEOREM)  # c2 = 3k: chi(Hilb^(9k-8))
    assert rows[4] == (3200, PROVISIONAL)  # c2 = 3k+1: chi(Hilb^(9k-6))
    assert rows[5] == (5930496, THEOREM)  # c2 = 3k+2: chi(Hilb^7), not chi(Hilb^8)
    assert rows[5][0] != qseries.hilbert_euler(8)


def test_odd_rank_trusted_rows_match_the_series():
    series = coefficients(partitions.z_ess_trivial(3, 7))
    table = partitions.vw_essentially_trivial(3, 6)
    assert [row.c2 for row in table.sorted_rows()] == [0, 2, 3, 5, 6]
    for row in table.rows:
        assert series.get(row.c2, 0) == row.value
    # residue 1 as listed differs from the series coefficient chi(Hilb^4)
    assert series[Fraction(4)] == qseries.hilbert_euler(4) != 3200


@pytest.mark.parametrize("rho", [0, 1, 11, 20, 22])
def test_surzr_gerbe_sum_for_rank_3(rho):
    series = partitions.z_k3_surzr(3, rho, 3)
    assert qseries.rational_coefficient(series, 0) == Fraction(1, 9)


@pytest.mark.parametrize("rho", [0, 1, 20, 22])
def test_picard_number_only_moves_the_twisted_term(rho):
    difference = qseries.sub(partitions.z_k3_surzr(2, rho, 4), partitions.z_k3_surzr(2, 11, 4))
    expected = partitions.picard_difference(2, rho, 11, 4)
    assert qseries.series_equal(difference, expected)
    weight = Fraction(2) ** (rho - 1) - 2 ** 10
    # q^2 G(-q^(1/2)) = -q^(3/2) + 24 q^2 - 324 q^(5/2) + ...
    assert coefficients(difference)[Fraction(3, 2)] == -weight
    assert coefficients(difference)[Fraction(2)] == 24 * weight


def test_picard_difference_vanishes_at_the_base():
    assert partitions.picard_difference(3, 11, 11, 3).is_zero()


def test_optimal_table():
    table = partitions.vw_optimal_table(2, 3)
    assert {row.c2: row.value for row in table.rows} == {
        Fraction(3, 2): Fraction(1, 2),
        Fraction(2): 12,
        Fraction(5, 2): 162,
        Fraction(3): 1600,
    }
    assert table.fractional_c2


def test_table_agrees_with_series():
    series = partitions.z_ess_trivial(2, 6)
    from_series = partitions.table_from_series(series, 2, DetTag.GERBE_LINE_BUNDLE)
    table = partitions.vw_essentially_trivial(2, 5)
    for row in from_series.rows:
        assert table.value_at(row.c2) == row.value
    rebuilt = partitions.series_from_table(table, partitions.k3_context(2, 6))
    assert rebuilt == series


def test_series_from_table_skips_provisional_rows():
    table = partitions.vw_essentially_trivial(3, 5, as_stated=True)
    ctx = SeriesContext(1, 1, 6)
    assert Fraction(4) not in coefficients(partitions.series_from_table(table, ctx))
    assert coefficients(partitions.series_from_table(table, ctx, include_provisional=True))[Fraction(4)] == 3200


def test_table_json_round_trip_and_validation():
    table = partitions.vw_optimal_table(3, 4)
    assert VWTable.from_json(table.to_json()).rows == table.sorted_rows()
    assert table.to_json()["rows"][0]["provenance"] == THEOREM
    with pytest.raises(ValueError):
        table.add_row(Fraction(1, 2), 1)
    with pytest.raises(ValueError):
        table.add_row(table.rows[0].c2, 1)
