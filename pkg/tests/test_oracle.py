import pytest
from hypothesis import given, strategies as st

from artsha.oracle import (BudgetError, count_X, count_Y, direct_sums_check, discriminant,
                           fiber_discriminant_formula, identity_suite, point_count_check,
                           predicted_X, predicted_Y, resultant, sextic_discriminant_formula,
                           squarefree_check)

# brute-force counts over F_{q^k}, k = 1, 2, 3
COUNTS = {
    (7, "X"): (8, 50, 386), (7, "Y"): (2, 100, 422),
    (11, "X"): (12, 342, 1332), (11, "Y"): (2, 244, 1322),
    (13, "X"): (14, 170, 1418), (13, "Y"): (28, 340, 1900),
}


@pytest.mark.parametrize("q", [7, 11, 13])
def test_frozen_counts(q):
    for k in (1, 2, 3):
        assert count_X(q, 1, k).count == COUNTS[q, "X"][k - 1]
        assert count_Y(q, 1, k).count == COUNTS[q, "Y"][k - 1]


def test_pairs_enumeration_matches_histogram():
    assert count_X(7, 1, 1, method="pairs").count == 8
    assert count_X(7, 1, 2, method="pairs").count == count_X(7, 1, 2).count


def test_hyperelliptic_model_matches():
    for k in (1, 2):
        assert count_Y(7, 2, k, model="hyperelliptic").count == count_Y(7, 2, k).count


@pytest.mark.parametrize("q,a", [(7, 1), (7, 2), (11, 1), (13, 1)])
def test_trace_formulas(q, a):
    rep = point_count_check(q, a, k_max=3, budget=10 ** 7)
    assert rep.ok
    assert all(r["rounding_gap"] < 0.1 for r in rep.rows)


def test_weil_bound():
    for k in (1, 2, 3):
        assert count_X(7, 2, k).weil_ok() and count_Y(7, 2, k).weil_ok()
    assert count_X(7, 2, 1).genus == 48


def test_predictions_are_integral():
    assert predicted_X(7, 1, 1).count == 8
    assert predicted_Y(7, 1, 2).count == 100


def test_budget_refuses():
    with pytest.raises(BudgetError):
        count_X(7, 1, 3, budget=500)
    rep = point_count_check(7, 1, k_max=3, budget=500)
    assert ("X", 3) in rep.skipped


def test_direct_sums():
    r1 = direct_sums_check(7, 1)
    assert r1.gauss_checked == r1.kloosterman_checked == 12
    r2 = direct_sums_check(7, 2, budget=10 ** 6)
    assert r2.skipped == 0 and r2.gauss_checked == 54


def test_identity_suite_counts():
    rep = identity_suite(7, 1)
    assert set(rep.checked) == {"Ga1", "Ga2", "Ga3", "Ga4", "Ga5", "Kl1", "Kl2", "Kl2_lift",
                                "Kl3", "Kl4"}
    assert all(v == 12 for v in rep.checked.values())
    assert identity_suite(11, 1).prime is None


def test_squarefree():
    for q, a in [(7, 1), (7, 2), (11, 1)]:
        assert squarefree_check(q, a).squarefree


def test_resultant_small():
    # Res(x − 2, x − 5) = (2 − 5)
    assert abs(resultant([-2, 1], [-5, 1])) == 3
    # disc(x² + bx + c) = b² − 4c
    assert discriminant([3, 5, 1]) == 25 - 12


@given(st.integers(-20, 20).filter(bool), st.integers(-20, 20),
       st.integers(-20, 20).filter(bool))
def test_sextic_discriminant_identity(al, be, ga):
    assert discriminant([ga, 0, 0, be, 0, 0, al]) == sextic_discriminant_formula(al, be, ga)


@given(st.integers(-30, 30))
def test_fiber_discriminant(w):
    assert discriminant([w * w - 4, 0, 0, 2 * w, 0, 0, 1]) == fiber_discriminant_formula(w)
