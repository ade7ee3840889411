import pytest
from hypothesis import given, strategies as st

from ladderalg import semiinf as S
from ladderalg.qtseries import F_N_closed, F_closed, F_plus, Window, phi_n


def test_charge_energy_examples():
    assert (S.charge(S.VACUUM), S.energy(S.VACUUM)) == (0, 0)
    d = S.DiracSet((2,), (-1,))
    assert (S.charge(d), S.energy(d)) == (0, 3)
    d = S.DiracSet((0, 1), ())
    assert (S.charge(d), S.energy(d)) == (2, 1)


def test_dirac_set_validation():
    with pytest.raises(ValueError):
        S.DiracSet((-1,), ())
    with pytest.raises(ValueError):
        S.DiracSet((), (0,))
    assert S.DiracSet((3, 1, 1), ()) == S.DiracSet((1, 3), ())


def test_membership_and_floor():
    d = S.DiracSet((1,), (-3, -1))
    assert -4 in d and -2 in d and 1 in d
    assert -3 not in d and -1 not in d and 0 not in d
    assert d.floor == -3
    assert d.members(-5) == [-5, -4, -2, 1]
    assert S.DiracSet.from_members([-5, -4, -2, 1], -5) == d


def test_shift_vacuum_examples():
    assert S.shift(S.VACUUM, 1) == S.DiracSet((0,), ())
    two = S.shift(S.VACUUM, 2)
    assert two == S.DiracSet((0, 1), ())
    assert (S.charge(two), S.energy(two)) == (2, 1)
    assert S.shift(S.VACUUM, -1) == S.DiracSet((), (-1,))


def test_runs_split_tail():
    assert S.runs(S.VACUUM) == (-1, [])
    # {... -3, -2} tail, then {0, 1}, then {4}
    d = S.DiracSet((0, 1, 4), (-1,))
    assert S.runs(d) == (-2, [2, 1])
    # column 0 joins the tail
    assert S.runs(S.DiracSet((0, 2, 3), ())) == (0, [2])


def test_run_choice_counts():
    assert [S.run_choice_count("square", ell) for ell in (1, 2, 7)] == [2, 2, 2]
    assert [S.run_choice_count("tri3", ell) for ell in (1, 2, 7)] == [3, 3, 3]
    assert S.run_choice_count("square", 4, True) == 1
    assert S.run_choice_count("tri3", 4, True) == 1
    with pytest.raises(ValueError):
        S.run_choice_count("square", 0)
    with pytest.raises(ValueError):
        S.run_choice_count("hexagon", 2)


def test_multiplicity():
    assert S.multiplicity("square", S.DiracSet((0, 2, 4), ())) == 4
    assert S.multiplicity("tri3", S.DiracSet((0, 2, 4), ())) == 9


def test_dirac_sets_enumeration_order_and_count():
    sets = list(S.dirac_sets(3, (0, 0)))
    # charge-0 sets with energy <= 3: vacuum, {0}/{-1}, {1}/{-1}, {0}/{-2}, {2}/{-1}, {1}/{-2}, {0}/{-3}
    assert len(sets) == 7
    assert sets[0] == S.VACUUM
    assert [S.energy(d) for d in sets] == sorted(S.energy(d) for d in sets)


def test_brute_statsum_columns():
    b = S.brute_statsum("square", 5, (-1, 1))
    assert b.q_list(0) == [1, 2, 4, 8, 14, 24]
    # full sum: every charge column is the overpartition series shifted by n(n-1)/2
    assert b.q_list(1) == [1, 2, 4, 8, 14, 24]
    assert b.q_list(-1) == [0, 1, 2, 4, 8, 14]
    t = S.brute_statsum("tri3", 4, (-1, 1))
    assert t.q_list(1) == [1, 3, 6, 15, 27]


def test_floor_one_columns_are_phi():
    b = S.brute_statsum_floor("square", 1, 6, (0, 2))
    assert b.q_list(1) == phi_n(1, 6).q_list() == [1, 2, 2, 2, 2, 2, 2]
    assert b.q_list(2) == phi_n(2, 6).q_list()
    t = S.brute_statsum_floor("tri3", 1, 4, (0, 1))
    assert t.q_list(1) == [1, 3, 3, 3, 3]


def test_floor_oracle():
    win = Window(8, 0, 3)
    assert S.brute_statsum_floor("square", 1, 8, (0, 3)) == F_plus(win)
    w2 = Window(8, -2, 3)
    assert S.brute_statsum_floor("square", 2, 8, (-2, 3)) == F_N_closed(2, w2)
    # deep floors are invisible inside the energy window
    assert S.brute_statsum_floor("square", 10, 8, (-2, 3)) == S.brute_statsum("square", 8, (-2, 3))
    with pytest.raises(ValueError):
        S.brute_statsum_floor("square", 0, 4, (0, 1))


def test_sector_json_sorted():
    rows = S.sector_json(S.sector_counts("square", 2, (-1, 1)))
    assert rows == sorted(rows, key=lambda r: (r["C"], r["U"]))
    assert {"C": 0, "U": 0, "count": 1} in rows


def test_brute_matches_closed_small():
    assert S.brute_statsum("square", 8, (-3, 3)) == F_closed(Window(8, -3, 3))
    assert S.brute_statsum("tri3", 6, (-2, 2)) == F_closed(Window(6, -2, 2), "tri3")


# ---------------------------------------------------------------- properties

dirac = st.builds(
    S.DiracSet,
    st.lists(st.integers(0, 6), max_size=4).map(tuple),
    st.lists(st.integers(-6, -1), max_size=4).map(tuple),
)


@given(dirac, st.integers(-4, 4))
def test_shift_inverse(d, N):
    assert S.shift(S.shift(d, N), -N) == d


@given(dirac, st.integers(-4, 4))
def test_shift_law(d, N):
    e = S.shift(d, N)
    assert S.charge(e) == S.charge(d) + N
    assert S.energy(e) == S.shifted_energy(S.energy(d), S.charge(d), N)


@given(dirac, st.integers(-3, 3), st.integers(-3, 3))
def test_shift_composes(d, a, b):
    assert S.shift(S.shift(d, a), b) == S.shift(d, a + b)


@given(dirac)
def test_multiplicity_is_product_over_isolated_runs(d):
    _, lengths = S.runs(d)
    assert S.multiplicity("square", d) == 2 ** len(lengths)
    assert S.multiplicity("tri3", d) == 3 ** len(lengths)
