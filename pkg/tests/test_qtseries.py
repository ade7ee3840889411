import pytest
from hypothesis import given, strategies as st

from ladderalg.qtseries import (LaurentQT, Window, F_N_closed, F_closed, F_plus, format_series,
                                functional_equation_check, jacobi_triple_check, overpartition_product,
                                phi_n, pochhammer, remark_identity_check, residual, theta_kernel)


def test_window_validation():
    with pytest.raises(ValueError):
        Window(-1)
    with pytest.raises(ValueError):
        Window(3, 2, 1)
    assert Window(4, -1, 1).contains(4, -1)
    assert not Window(4, -1, 1).contains(5, 0)


def test_window_meet_q_only_acts_as_scalar():
    assert Window(5).meet(Window(8, -2, 3)) == Window(5, -2, 3)
    with pytest.raises(ValueError):
        Window(5, 0, 1).meet(Window(5, 3, 4))


def test_pochhammer_examples():
    assert pochhammer(0, "plus", 10).q_list() == [1] + [0] * 10
    assert pochhammer(2, "plus", 10).q_list()[:5] == [1, 1, 1, 1, 0]
    assert pochhammer(2, "minus", 10).q_list()[:5] == [1, -1, -1, 1, 0]


def test_theta_kernel_low_terms():
    th = theta_kernel(Window(6, -3, 3))
    assert th.coeff(0, 0) == 1
    assert th.coeff(1, -1) == 1
    assert th.coeff(3, -2) == 1
    assert th.coeff(0, 1) == 1 and th.coeff(1, 2) == 1 and th.coeff(3, 3) == 1
    assert len(th) == 7


def test_overpartition_product():
    assert overpartition_product(5).q_list() == [1, 2, 4, 8, 14, 24]
    assert overpartition_product(1, 3).q_list() == [1, 3]
    assert overpartition_product(0, 7).q_list() == [1]
    # OEIS A015128
    assert overpartition_product(10).q_list() == [1, 2, 4, 8, 14, 24, 40, 64, 100, 154, 232]


def test_F_closed_columns():
    f = F_closed(Window(5, -3, 3))
    assert f.q_list(0) == [1, 2, 4, 8, 14, 24]
    for n in range(-2, 4):
        assert f.min_q(n) == n * (n - 1) // 2
        assert f.coeff(n * (n - 1) // 2, n) == 1
    assert F_closed(Window(3, -1, 1), "tri3").coeff(1, 0) == 3
    with pytest.raises(ValueError):
        F_closed(Window(3), "hex")


def test_phi_n_values():
    assert phi_n(0, 6).q_list() == [1, 0, 0, 0, 0, 0, 0]
    assert phi_n(1, 6).q_list() == [1, 2, 2, 2, 2, 2, 2]
    assert phi_n(2, 6).q_list() == [0, 1, 2, 4, 6, 8, 10]
    with pytest.raises(ValueError):
        phi_n(-1, 4)


def test_F_plus_columns_are_phi():
    f = F_plus(Window(10, 0, 4))
    for n in range(5):
        assert f.q_list(n) == phi_n(n, 10).q_list()
    with pytest.raises(ValueError):
        F_plus(Window(3, -1, 2))


def test_F_N_first_equals_F_plus_and_stabilises():
    win = Window(8, 0, 3)
    assert F_N_closed(1, win) == F_plus(win)
    target = Window(8, -2, 3)
    assert F_N_closed(12, target) == F_closed(target)
    assert F_N_closed(2, target) != F_closed(target)
    with pytest.raises(ValueError):
        F_N_closed(0, target)


def test_F_N_two_frozen():
    f2 = F_N_closed(2, Window(6, -1, 2))
    assert f2.q_list(-1) == [0, 1, 0, 0, 0, 0, 0]
    assert f2.q_list(0) == [1, 2, 2, 2, 2, 2, 2]
    assert f2.q_list(1) == [1, 2, 4, 6, 8, 10, 12]


def test_identity_checks_pass():
    assert functional_equation_check(12, 5).passed
    assert jacobi_triple_check(20, 5).passed
    assert remark_identity_check(30).passed
    assert remark_identity_check(0).passed


def test_residual_and_format():
    w = Window(3, 0, 1)
    a = LaurentQT({(0, 0): 1, (1, 1): 2}, w)
    b = LaurentQT({(0, 0): 1}, w)
    assert residual(a, b, w) == {(1, 1): 2}
    assert format_series(a) == "1 + 2*qt"
    assert format_series(LaurentQT({}, w)) == "0"
    assert format_series(LaurentQT({(-1, 0): -1, (0, 0): 3, (1, 0): -1}, Window(1))) == "-q^-1 + 3 - q"


def test_json_and_csv_roundtrip():
    f = F_closed(Window(4, -1, 1))
    assert LaurentQT.from_json(f.to_json()) == f
    assert f.to_csv().splitlines()[0] == "t,q,c"


def test_truncation_drops_out_of_window_terms():
    s = LaurentQT({(7, 0): 3, (1, 5): 1, (2, 0): 4}, Window(5, 0, 2))
    assert s.terms() == [(0, 2, 4)]
    with pytest.raises(ValueError):
        LaurentQT({})


# ---------------------------------------------------------------- properties

WIN = Window(8, -3, 3)
coeff = st.integers(-20, 20)
series = st.dictionaries(st.tuples(st.integers(-2, 8), st.integers(-3, 3)), coeff, max_size=12).map(
    lambda d: LaurentQT(d, WIN))
POS = Window(8, 0, 3)
nonneg_series = st.dictionaries(st.tuples(st.integers(0, 8), st.integers(0, 3)), coeff, max_size=12).map(
    lambda d: LaurentQT(d, POS))


@given(series, series, series)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a - a == LaurentQT({}, WIN)


@given(nonneg_series, nonneg_series, nonneg_series)
def test_multiplication_laws(a, b, c):
    # nonnegative exponents in both variables: truncation commutes with products
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * LaurentQT.one(POS) == a


@given(nonneg_series, st.integers(0, 3))
def test_substitution_is_a_ring_map_on_nonnegative_charge(a, k):
    b = theta_kernel(POS)
    assert (a * b).subs_t(k) == a.subs_t(k) * b.subs_t(k)


@given(series)
def test_json_roundtrip_property(a):
    assert LaurentQT.from_json(a.to_json()) == a
