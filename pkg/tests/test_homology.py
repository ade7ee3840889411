from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ladderalg import homology as H
from ladderalg import lattice as L
from ladderalg.algebra import Element, x, y

FROZEN = {
    1: ([1, 2], [0, 1]),
    2: ([1, 4, 2], [0, 1, 0]),
    3: ([1, 6, 8, 2], [0, 0, 1, 0]),
    4: ([1, 8, 18, 12, 2], [0, 0, 1, 0, 0]),
    5: ([1, 10, 32, 38, 16, 2], [0, 0, 0, 1, 0, 0]),
    6: ([1, 12, 50, 88, 66, 20, 2], [0, 0, 0, 1, 0, 0, 0]),
}


def test_k1_by_hand():
    c = H.build_deformed_complex(1)
    assert c.dims() == [1, 2]
    assert c.labels == [["1"], ["x[0]", "y[0]"]]
    assert c.matrix(0) == [[Fraction(1)], [Fraction(1)]]
    assert all(not col for col in c.D[1])
    assert H.cohomology(c).h == [0, 1]


@pytest.mark.parametrize("n", sorted(FROZEN))
def test_deformed_cohomology_frozen(n):
    co = H.cohomology(H.build_deformed_complex(n))
    assert (co.dims, co.h) == FROZEN[n]
    assert co.passed and co.total == 1


def test_odd_euler_sign():
    for k in range(0, 4):
        co = H.cohomology(H.build_deformed_complex(2 * k + 1))
        assert co.euler == (-1) ** (k + 1)
        assert co.support == [k + 1]


def test_rewrite_complex_matches_echelon():
    a = H.cohomology(H.build_deformed_complex(5, "echelon"))
    b = H.cohomology(H.build_deformed_complex(5, "rewrite"))
    assert (a.dims, a.h) == (b.dims, b.h) and b.passed


def test_deformed_complex_needs_index_zero():
    with pytest.raises(ValueError):
        H.build_deformed_complex(0)


def test_fermion_complex_euler_bridge():
    for model in [L.build_model("cyclic_tri3", n) for n in range(1, 5)] + [L.build_model("mleg", 1, m) for m in (1, 4, 7)]:
        co = H.cohomology(H.build_fermion_complex(model))
        assert co.euler == L.euler_char(model)
        assert co.passed
    assert H.cohomology(H.build_fermion_complex(L.build_model("cyclic_tri3", 3))).h == [0, 0, 4, 0]
    # single vertex: d(1) = v, everything cancels
    assert H.cohomology(H.build_fermion_complex(L.build_model("mleg", 1, 1))).h == [0, 0]


def test_representatives():
    assert H.h_representative(1) == y(0)
    assert H.h_representative(3) == x(-1) * y(1)
    assert H.h_representative(5) == y(-2) * y(0) * y(2)
    assert str(H.h_representative(7)) == "x[-3] x[-1] y[1] y[3]"
    assert H.h_representative(3, "bar") == y(-1) * x(1)
    with pytest.raises(ValueError):
        H.h_representative(4)
    with pytest.raises(ValueError):
        H.h_representative(3, "tilde")


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_representative_is_class_in_odd_window(k):
    n = 2 * k + 1
    cls = H.class_check(H.h_representative(n), H.build_deformed_complex(n))
    assert cls["nonzero"] and cls["is_cocycle"] and not cls["is_coboundary"]
    assert cls["degree"] == k + 1


def test_representative_in_even_windows():
    # small even windows still carry it; from K_6 on the boundary term survives
    for n in (2, 4):
        cls = H.class_check(H.h_representative(n - 1), H.build_deformed_complex(n))
        assert cls["is_cocycle"] and not cls["is_coboundary"]
    cls = H.class_check(H.h_representative(5), H.build_deformed_complex(6))
    assert not cls["is_cocycle"]
    d = H.quotient_for(6).normal_form((x(0) + y(0)) * H.h_representative(5))
    assert str(d) == "x[-3] y[0] y[1] y[2]"


def test_constant_is_not_a_cocycle():
    for n in (1, 3, 4):
        cls = H.class_check(Element.parse("1"), H.build_deformed_complex(n))
        assert cls["nonzero"] and not cls["is_cocycle"]


def test_k5_example():
    rep = H.k5_example()
    assert rep.passed and len(rep.checks) == 2


def test_prop4_report_known_issue_only_on_even():
    assert H.prop4_report(5).passed and not H.prop4_report(5).known_failures()
    six = H.prop4_report(6)
    assert six.passed
    assert [c.label for c in six.known_failures()] == ["h_5 nonzero cocycle"]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_split_complexes(k):
    pieces = H.split_complexes(k)
    assert len(pieces) == 9
    pattern = H._expected_pattern(k)
    for key, sc in pieces.items():
        assert sc.well_defined and sc.complex.d_squared_zero()
        co = H.cohomology(sc.complex)
        assert abs(co.euler) <= 1
        assert co.total == (0 if pattern[key] is None else 1)
    rep = H.lemma3_report(k)
    assert rep.passed and not rep.failures()
    assert len(rep.known_failures()) == 4
    assert H.box_box_isomorphism(k).passed


def test_split_degree_of_classes():
    pieces = H.split_complexes(2)
    assert H.cohomology(pieces[("y", "y")].complex).support == [3]
    assert H.cohomology(pieces[("box", "box")].complex).support == [2]
    with pytest.raises(ValueError):
        H.split_complexes(0)


def test_report_json_shape():
    js = H.cohomology(H.build_deformed_complex(3)).to_json()
    assert js["dims"] == [1, 6, 8, 2] and js["h"] == [0, 0, 1, 0] and js["euler"] == 1
    assert {"label", "ok"} <= set(js["checks"][0])


@settings(max_examples=25)
@given(st.integers(1, 5), st.integers(0, 10_000))
def test_d_squared_on_random_vectors(n, seed):
    import random
    c = H.build_deformed_complex(n)
    rng = random.Random(seed)
    d = rng.randrange(len(c.bases))
    v = {j: Fraction(rng.randint(-4, 4)) for j in range(len(c.bases[d])) if rng.random() < 0.5}
    v = {j: a for j, a in v.items() if a}
    assert c.apply(d + 1, c.apply(d, v)) == {}
