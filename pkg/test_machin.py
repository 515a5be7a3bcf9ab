#!/usr/bin/env python
"""
Tests for Machin-like formula generation
"""

import pytest
from gmpy2 import mpq

from services.mpnum import MPReal, rational_floor, is_integer
from services.machin import (
    ArctanTerm, MachinFormula, b1k_two_step, b1k_digit_estimate, eta_general, two_term_formula,
    expand_formula, formula_prefix, split_arctan, split_term,
    formula_to_json, formula_from_json, save_formula, load_formula,
    known_formula, known_formula_names,
)
from services.radicals import compute_Ak
from services.series import arctan_emi1, emi_order
from services.validate import check_product_relation
from utils.precisionHandler import DomainError, BudgetExceededError
from utils.piConfig import get_config_manager

B_6_4 = -(int("11757386816817535293027775284419412676"
              "7991915008537018836932014293678271636885792397"))


def betas(formula):
    return [t.beta for t in formula.terms]


def test_b1k_small_depths():
    assert b1k_two_step(2, 2) == -7
    assert b1k_two_step(5, 3) == -239
    assert b1k_two_step(10, 4) == mpq(-147153121, 1758719)


def test_b1k_rejects_bad_input():
    with pytest.raises(DomainError):
        b1k_two_step(10, 1)
    with pytest.raises(DomainError):
        b1k_two_step(1, 3)


def test_eta_classical_cases():
    assert eta_general(2, 2) == -7
    assert eta_general(5, 4) == -239
    assert eta_general(28, 22) == mpq(98646395734210062276153190241239,
                                      1744507482180328366854565127)


def test_eta_agrees_with_two_step():
    for k in range(2, 11):
        A = compute_Ak(k)
        assert eta_general(A, 2 ** (k - 1)) == b1k_two_step(A, k)


def test_eta_needs_positive_phi():
    with pytest.raises(DomainError):
        eta_general(5, 0)


def test_two_term_formula_is_valid():
    formula = two_term_formula(mpq(28), 22)
    assert len(formula) == 2
    assert check_product_relation(formula).is_valid


def test_expansion_of_hermann_and_machin():
    hermann, state = expand_formula(2, 0)
    assert [(t.coeff, t.beta) for t in hermann.terms] == [(2, 2), (1, -7)]
    assert state.terminated
    machin, state = expand_formula(3, 0)
    assert [(t.coeff, t.beta) for t in machin.terms] == [(4, 5), (1, -239)]
    assert state.terminated


def test_seven_term_expansion():
    formula, state = expand_formula(4, 5)
    assert state.A_k == 10
    assert state.terminated
    assert [t.coeff for t in formula.terms] == [8, 1, 1, 1, 1, 1, 1]
    assert betas(formula) == [
        10, -84, -21342, -991268848, -193018008592515208050,
        -197967899896401851763240424238758988350338, B_6_4,
    ]
    assert len(str(abs(B_6_4))) == 84
    assert check_product_relation(formula).is_valid


def test_expansion_stops_when_beta_is_an_integer():
    formula, state = expand_formula(4, 9)
    assert len(formula) == 7
    assert len(state.B_list) == 6


def test_expansion_intermediate_values():
    _, state = expand_formula(4, 5)
    assert rational_floor(state.B_list[1]) == -21342
    assert state.B_list[2] == mpq(-263843055464261, 266167)


@pytest.mark.parametrize("k", range(2, 15))
def test_expansion_properties_up_to_depth_14(k):
    formula, state = expand_formula(k, 8)
    assert state.terminated or len(state.B_list) == 9
    for B, following in zip(state.B_list, state.B_list[1:]):
        f = rational_floor(B)
        assert following == (1 + f * B) / (f - B)
        assert abs(following) > B * B / 4
    assert check_product_relation(formula).is_valid


def test_truncated_expansion_is_still_an_identity():
    formula, state = expand_formula(6, 2)
    assert not state.terminated
    assert not is_integer(formula.terms[-1].beta)
    assert check_product_relation(formula).is_valid


def test_floor_terms_grow_quickly():
    formula, _ = expand_formula(5, 4)
    sizes = [len(str(abs(rational_floor(b)))) for b in betas(formula)[1:-1]]
    assert all(later > earlier for earlier, later in zip(sizes, sizes[1:]))


def test_expansion_arguments():
    with pytest.raises(DomainError):
        expand_formula(1, 3)
    with pytest.raises(DomainError):
        expand_formula(4, -1)


def test_deep_expansion_is_refused():
    assert b1k_digit_estimate(85445659, 27) > 500_000_000
    with pytest.raises(BudgetExceededError):
        expand_formula(27, 1)
    with pytest.raises(BudgetExceededError):
        formula_prefix(27, 2)


def test_expansion_budget_comes_from_config():
    get_config_manager().settings.alpha_digit_budget = 100
    with pytest.raises(BudgetExceededError):
        expand_formula(8, 1)
    get_config_manager().settings.alpha_digit_budget = 10_000_000
    formula, _ = expand_formula(8, 1)
    assert len(formula) == 3


def test_formula_prefix():
    prefix = formula_prefix(4, 3)
    assert betas(prefix) == [10, -84, -21342]
    single = formula_prefix(27, 1)
    assert betas(single) == [85445659]
    assert single.terms[0].coeff == 2 ** 26


def test_split_arctan_values():
    assert split_arctan(mpq(7, 2)) == (3, mpq(-1, 23))
    assert split_arctan(mpq(5)) == (5, 0)
    floor_b, residual = split_arctan(mpq(-147153121, 1758719))
    assert floor_b == -84
    _, state = expand_formula(4, 1)
    assert 1 / residual == state.B_list[1]


def test_split_arctan_rejects_unit_interval():
    with pytest.raises(DomainError):
        split_arctan(mpq(1, 2))
    with pytest.raises(DomainError):
        split_arctan(mpq(0))


def test_split_arctan_numerically():
    z = mpq(2513489, 2)
    floor_z, residual = split_arctan(z)

    def atan(value):
        x = MPReal.from_rational(value, 45)
        return arctan_emi1(x, emi_order(x, 45))

    difference = atan(1 / z) - atan(1 / mpq(floor_z)) - atan(residual)
    assert abs(difference.to_rational()) < mpq(1, 10**40)


def test_split_term_keeps_the_identity():
    formula, _ = expand_formula(4, 2)
    split = split_term(formula, len(formula) - 1)
    longer, _ = expand_formula(4, 3)
    assert split.terms == longer.terms
    assert check_product_relation(split).is_valid


def test_split_term_of_integer_beta_is_unchanged():
    formula = known_formula("machin")
    assert split_term(formula, 1).terms == formula.terms


def test_arctan_term_rejects_zero_beta():
    with pytest.raises(DomainError):
        ArctanTerm(1, 0)


def test_json_round_trip(tmp_path):
    formula = known_formula("wetherfield_rational")
    assert formula_from_json(formula_to_json(formula)) == formula
    path = str(tmp_path / "formula.json")
    save_formula(formula, path)
    assert load_formula(path) == formula


def test_json_errors():
    with pytest.raises(DomainError):
        formula_from_json("{not json")
    with pytest.raises(DomainError):
        formula_from_json('{"terms": [{"coeff": "1", "beta_num": "3", "beta_den": "0"}]}')


def test_catalogue():
    assert "machin" in known_formula_names()
    assert betas(known_formula("Machin")) == [5, 239]
    with pytest.raises(DomainError):
        known_formula("nonexistent")


def test_formula_string():
    formula = MachinFormula([ArctanTerm(4, 5), ArctanTerm(-1, 239)])
    assert str(formula) == "pi/4 = 4*arctan(1/5) + -1*arctan(1/239)"
