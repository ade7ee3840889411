import random

import pytest
from hypothesis import given, strategies as st

from ladderalg import lattice as L
from ladderalg.qtseries import LaurentQT, Window


def laurent(d):
    top = max([0] + list(d))
    return LaurentQT({(q, 0): c for q, c in d.items()}, Window(top))


def test_model_sizes():
    m = L.build_model("twisted_square", 3)
    assert (len(m.vertices), len(m.edges)) == (6, 7)
    m = L.build_model("cyclic_tri3", 1)
    assert (len(m.vertices), len(m.edges)) == (3, 3)
    m = L.build_model("mleg", 1, 3)
    assert (len(m.vertices), len(m.edges)) == (3, 2)
    assert m.edges == ((0, 1), (1, 2))


def test_build_model_errors():
    with pytest.raises(ValueError):
        L.build_model("hexagon", 3)
    with pytest.raises(ValueError):
        L.build_model("square", 0)
    with pytest.raises(ValueError):
        L.build_model("mleg", 2)
    with pytest.raises(ValueError):
        L.build_model("square", 2, 3)


def test_column_ranges():
    assert L.column_range("twisted_square", 3) == [-1, 0, 1]
    assert L.column_range("twisted_square", 4) == [-2, -1, 0, 1]
    assert L.column_range("cyclic_tri3", 3) == [1, 2, 3]


def test_independence_counts_examples():
    assert L.independence_counts(L.build_model("twisted_square", 3)) == [1, 6, 8, 2]
    assert L.independence_counts(L.build_model("cyclic_tri3", 1)) == [1, 3]
    assert L.independence_counts(L.build_model("mleg", 1, 2)) == [1, 2]
    # hard squares on a 2 x n strip: Pell-like totals 3, 7, 17, 41
    assert [sum(L.independence_counts(L.build_model("square", n))) for n in range(1, 5)] == [3, 7, 17, 41]


def test_euler_examples():
    assert [L.euler_char(L.build_model("cyclic_tri3", n)) for n in range(1, 5)] == [-2, -2, 4, 4]
    assert L.euler_char(L.build_model("cyclic_tri3", 12)) == 64
    assert [L.euler_char(L.build_model("mleg", 1, m)) for m in range(1, 10)] == [0, -1, -1, 0, 1, 1, 0, -1, -1]


@pytest.mark.parametrize("kind,m", [("twisted_square", None), ("square", None), ("cyclic_tri3", None),
                                    ("mleg", 3), ("mleg", 4)])
def test_transfer_agrees_with_bitmask(kind, m):
    for n in range(1, 7 if kind != "mleg" else 5):
        model = L.build_model(kind, n, m)
        f = L.weight_system_f(model)
        assert L._table(model, f, "transfer") == L._table(model, f, "exhaustive")


def test_weight_system_f():
    def vals(n):
        model = L.build_model("cyclic_tri3", n)
        w = L.weight_system_f(model)
        return [w[(c, 0)] for c in model.columns]
    assert vals(1) == [0]
    assert vals(3) == [-1, 0, 1]
    assert vals(4) == [-2, -1, 0, 1]


def test_column_weights_length():
    with pytest.raises(ValueError):
        L.column_weights(L.build_model("mleg", 2, 2), [0])


def test_weight_table_tri3():
    m1 = L.build_model("cyclic_tri3", 1)
    t1 = L.weight_table(m1, L.weight_system_f(m1))
    assert t1.cells == {(0, 0): 1, (0, 1): 3}
    m3 = L.build_model("cyclic_tri3", 3)
    t3 = L.weight_table(m3, L.weight_system_f(m3))
    assert [g.terms() for g in t3.columns()] == [
        [(0, 0, 1)],
        [(0, -1, 3), (0, 0, 3), (0, 1, 3)],
        [(0, -1, 3), (0, 0, 9), (0, 1, 3)],
        [(0, 0, 3)],
    ]
    assert t3.g(2) == laurent({1: 3, 0: 9, -1: 3})
    assert t3.alternating_sum().terms() == [(0, 0, 4)]
    assert t3.to_csv() == "weight,0,1,2,3\n1,,3,3,\n0,1,3,9,3\n-1,,3,3,\n"


def test_graded_euler_prop9_value():
    m = L.build_model("mleg", 3, 3)
    assert L.graded_euler(m, L.weight_system_f(m)) == laurent({1: -1, 0: 3, -1: -1})


def test_disjoint_union_multiplies_euler():
    a, b = L.build_model("mleg", 2, 3), L.build_model("cyclic_tri3", 2)
    assert L.euler_char(L.disjoint_union(a, b)) == L.euler_char(a) * L.euler_char(b)


# ---------------------------------------------------------------- properties

@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10_000))
def test_mirror_symmetry_of_f_grading(m, n, seed):
    model = L.build_model("mleg", n, m)
    rng = random.Random(seed)
    w = [rng.randint(-3, 3) for _ in range(n)]
    e1 = L.graded_euler(model, L.column_weights(model, w))
    e2 = L.graded_euler(model, L.column_weights(model, w[::-1]))
    # both diagonals are present, so reversing the columns is a graph automorphism
    assert e1 == e2


@given(st.integers(1, 5), st.integers(-3, 3))
def test_uniform_shift_scales_by_size(n, c):
    model = L.build_model("cyclic_tri3", n)
    f = L.weight_system_f(model)
    shifted = {v: w + c for v, w in f.items()}
    t0, t1 = L._table(model, f), L._table(model, shifted)
    assert t1 == {(w + c * size, size): k for (w, size), k in t0.items()}


@given(st.integers(1, 6))
def test_counts_sum_matches_enumeration(n):
    model = L.build_model("twisted_square", n)
    masks = list(L.independent_sets(model))
    assert len(masks) == sum(L.independence_counts(model))
    assert all(model.is_independent(mk) for mk in masks)
