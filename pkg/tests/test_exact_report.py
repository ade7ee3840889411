from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ladderalg.exact import (PRIMES, IntegerEchelon, ModPEchelon, RankMismatch, certified_rank,
                             columns_to_rows, rank_mod_p, rank_rational)
from ladderalg.report import Check, Report


def test_ranks_small():
    rows = [{0: 1, 1: 2}, {0: 2, 1: 4}, {1: Fraction(1, 3)}]
    assert rank_rational(rows) == 2
    assert certified_rank(rows) == (2, {"Q": 2, f"F_{PRIMES[0]}": 2, f"F_{PRIMES[1]}": 2})
    assert rank_rational([]) == 0


def test_rank_mismatch_detected():
    rows = [{0: PRIMES[0]}]
    assert rank_rational(rows) == 1 and rank_mod_p(rows, PRIMES[0]) == 0
    with pytest.raises(RankMismatch):
        certified_rank(rows)


def test_reduce_gives_remainder():
    ech = IntegerEchelon()
    assert ech.add({0: 2, 1: 1})
    assert not ech.add({0: 4, 1: 2})
    rem = ech.reduce({0: 1, 2: 5})
    assert rem == {1: Fraction(-1, 2), 2: Fraction(5)}
    assert ech.reduce({0: 6, 1: 3}) == {}


def test_columns_to_rows():
    assert columns_to_rows([{0: 1}, {0: 2, 1: 3}]) == [{0: 1, 1: 2}, {1: 3}]


matrices = st.lists(st.dictionaries(st.integers(0, 5), st.integers(-6, 6), max_size=5), max_size=7)


@given(matrices)
def test_rank_transpose_invariant(rows):
    assert rank_rational(rows) == rank_rational(columns_to_rows(rows))


@given(matrices)
def test_small_entries_certify(rows):
    # entries far below the primes: ranks over Q and both fields agree
    r, ranks = certified_rank(rows)
    assert set(ranks.values()) == {r}
    ech = ModPEchelon(PRIMES[1])
    for row in rows:
        ech.add(row)
    assert ech.rank == r


def test_report_statuses():
    rep = Report("demo")
    rep.add("good", True)
    rep.add("expected bad", False, 1, 2, known_issue="documented")
    rep.add("unexpected good", True, known_issue="documented")
    assert rep.passed
    assert [c.status for c in rep.checks] == ["PASS", "XFAIL", "XPASS"]
    assert len(rep.known_failures()) == 1 and not rep.failures()
    rep.equal("bad", [1], [2])
    assert not rep.passed and rep.failures()[0].label == "bad"
    lines = rep.lines()
    assert lines[0] == "[PASS] demo: good"
    assert "        known issue: documented" in lines
    js = rep.to_json()
    assert js["checks"][1]["known_issue"] == "documented" and js["passed"] is False


def test_report_extend_prefix():
    a, b = Report("a"), Report("b")
    b.add("x", True)
    b.notes.append("n")
    a.extend(b)
    a.extend(b, "custom")
    assert [c.label for c in a.checks] == ["b: x", "custom: x"]
    assert a.notes == ["b: n", "custom: n"]


def test_check_json_converts_values():
    c = Check("c", True, {(1, 2): Fraction(1, 2)}, (1, "a"))
    assert c.to_json() == {"label": "c", "ok": True, "lhs": {"(1, 2)": "1/2"}, "rhs": [1, "a"]}
