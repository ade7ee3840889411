"""Fock module of the CAR modes phi, phi* and the commuting odd modes o.

A basis vector is ``o_{j1} ... o_{jr} phi_{a1} ... phi_{ap} phi*_{b1} ... phi*_{bq} |0>``
with ``a1 < ... < ap <= 0``, ``b1 < ... < bq <= -1`` and the o's a multiset of
negative odd integers.  ``phi_i`` for ``i >= 1`` and ``phi*_j`` for ``j >= 0`` kill
``|0>``; the only nonzero anticommutator is ``[phi_i, phi*_j]_+ = delta_{i+j}``.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .qtseries import LaurentQT, Window
from .report import Report


@dataclass(frozen=True, order=True)
class FockVector:
    phi: tuple[int, ...] = ()
    phistar: tuple[int, ...] = ()
    o: tuple[int, ...] = ()

    def __post_init__(self):
        if list(self.phi) != sorted(set(self.phi)) or any(i > 0 for i in self.phi):
            raise ValueError(f"phi indices must be distinct, ascending and <= 0: {self.phi}")
        if list(self.phistar) != sorted(set(self.phistar)) or any(j > -1 for j in self.phistar):
            raise ValueError(f"phi* indices must be distinct, ascending and <= -1: {self.phistar}")
        if list(self.o) != sorted(self.o) or any(j >= 0 or j % 2 == 0 for j in self.o):
            raise ValueError(f"o indices must be negative odd, ascending: {self.o}")

    @property
    def s(self) -> int:
        return len(self.phi) - len(self.phistar)

    @property
    def w(self) -> int:
        return -sum(self.phi) - sum(self.phistar) - sum(self.o)

    def __str__(self) -> str:
        parts = []
        for j, mult in sorted(Counter(self.o).items()):
            parts.append(f"o[{j}]" + (f"^{mult}" if mult > 1 else ""))
        parts += [f"phi[{i}]" for i in self.phi]
        parts += [f"phi*[{j}]" for j in self.phistar]
        return " ".join(parts + ["|0>"])

    @classmethod
    def parse(cls, s: str) -> "FockVector":
        phi, phistar, o = [], [], []
        for tok in s.split():
            if tok == "|0>":
                continue
            m = re.fullmatch(r"(o|phi\*?)\[(-?\d+)\](?:\^(\d+))?", tok)
            if not m:
                raise ValueError(f"bad token {tok!r}")
            name, idx, mult = m.group(1), int(m.group(2)), int(m.group(3) or 1)
            {"o": o, "phi": phi, "phi*": phistar}[name].extend([idx] * mult)
        return cls(tuple(phi), tuple(phistar), tuple(sorted(o)))


VACUUM = FockVector()


class FockElement:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[FockVector, object] | None = None):
        self.terms: dict[FockVector, Fraction] = {}
        for v, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[v] = c

    @classmethod
    def basis(cls, v: FockVector) -> "FockElement":
        return cls({v: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, FockElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "FockElement") -> "FockElement":
        out = defaultdict(Fraction, self.terms)
        for v, c in other.terms.items():
            out[v] += c
        return FockElement(out)

    def __neg__(self) -> "FockElement":
        return FockElement({v: -c for v, c in self.terms.items()})

    def __sub__(self, other: "FockElement") -> "FockElement":
        return self + (-other)

    def scale(self, c) -> "FockElement":
        c = Fraction(c)
        return FockElement({v: c * x for v, x in self.terms.items()})

    def grades(self) -> set[tuple[int, int]]:
        return {(v.s, v.w) for v in self.terms}

    def to_json(self) -> list[dict]:
        return [{"vector": str(v), "coeff": str(c)} for v, c in sorted(self.terms.items())]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{v}" for v, c in sorted(self.terms.items()))

    __repr__ = __str__


def vacuum() -> FockElement:
    return FockElement.basis(VACUUM)


def _as_element(e) -> FockElement:
    return FockElement.basis(e) if isinstance(e, FockVector) else e


# ---------------------------------------------------------------- single modes


def _phi_on(i: int, v: FockVector) -> tuple[int, FockVector | None]:
    if i <= 0:
        if i in v.phi:
            return 0, None
        below = sum(1 for a in v.phi if a < i)
        return (-1) ** below, FockVector(tuple(sorted(v.phi + (i,))), v.phistar, v.o)
    # annihilator: anticommute through the phi block, contract with phi*_{-i}
    if -i not in v.phistar:
        return 0, None
    pos = v.phistar.index(-i)
    rest = tuple(b for b in v.phistar if b != -i)
    return (-1) ** (len(v.phi) + pos), FockVector(v.phi, rest, v.o)


def _phistar_on(j: int, v: FockVector) -> tuple[int, FockVector | None]:
    if j <= -1:
        if j in v.phistar:
            return 0, None
        below = sum(1 for b in v.phistar if b < j)
        return (-1) ** (len(v.phi) + below), FockVector(v.phi, tuple(sorted(v.phistar + (j,))), v.o)
    if -j not in v.phi:
        return 0, None
    pos = v.phi.index(-j)
    rest = tuple(a for a in v.phi if a != -j)
    return (-1) ** pos, FockVector(rest, v.phistar, v.o)


def _check_o(j: int) -> None:
    if j >= 0 or j % 2 == 0:
        raise ValueError(f"o modes are indexed by negative odd integers, got {j}")


def _lift(single, idx: int, e) -> FockElement:
    e = _as_element(e)
    out: dict[FockVector, Fraction] = defaultdict(Fraction)
    for v, c in e.terms.items():
        sign, w = single(idx, v)
        if sign:
            out[w] += sign * c
    return FockElement(out)


def apply_phi(i: int, e) -> FockElement:
    return _lift(_phi_on, i, e)


def apply_phi_star(j: int, e) -> FockElement:
    return _lift(_phistar_on, j, e)


def apply_o(j: int, e) -> FockElement:
    _check_o(j)
    e = _as_element(e)
    return FockElement({FockVector(v.phi, v.phistar, tuple(sorted(v.o + (j,)))): c for v, c in e.terms.items()})


def _psi_terms(i: int, v: FockVector) -> Iterator[int]:
    """Odd ``j < 0`` with ``o_j phi_{i-j} v`` possibly nonzero: ``phi_{i-j}`` is a
    creator for ``i <= j <= -1`` or contracts with one of the phi* modes."""
    js = set(range(-1, i - 1, -1)) if i <= -1 else set()
    for b in v.phistar:
        js.add(i + b)  # phi_{-b} hits phi*_b
    return (j for j in sorted(js) if j < 0 and j % 2)


def apply_psi(i: int, e) -> FockElement:
    """``psi_i = sum_{j odd < 0} o_j phi_{i-j}``; finite on every vector."""
    e = _as_element(e)
    out: dict[FockVector, Fraction] = defaultdict(Fraction)
    for v, c in e.terms.items():
        for j in _psi_terms(i, v):
            sign, w = _phi_on(i - j, v)
            if sign:
                w = FockVector(w.phi, w.phistar, tuple(sorted(w.o + (j,))))
                out[w] += sign * c
    return FockElement(out)


# ---------------------------------------------------------------- basis and character


def _distinct_parts(values: list[int], budget: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Subsets of ``values`` (each costing ``-value``) within budget."""
    def rec(start, chosen, cost):
        yield tuple(sorted(chosen)), cost
        for k in range(start, len(values)):
            c = cost - values[k]
            if c <= budget:
                yield from rec(k + 1, chosen + [values[k]], c)
    yield from rec(0, [], 0)


def _odd_multisets(budget: int) -> Iterator[tuple[tuple[int, ...], int]]:
    def rec(max_part, chosen, cost):
        yield tuple(sorted(-p for p in chosen)), cost
        for p in range(min(max_part, budget - cost), 0, -1):
            if p % 2:
                yield from rec(p, chosen + [p], cost + p)
    yield from rec(budget, [], 0)


def basis(w_max: int, s_range: tuple[int, int] | None = None) -> list[FockVector]:
    """All basis vectors with ``w <= w_max`` (and ``s`` in range), sorted by (w, s, vector)."""
    out = []
    phis = list(_distinct_parts(list(range(0, -w_max - 1, -1)), w_max))
    stars = list(_distinct_parts(list(range(-1, -w_max - 1, -1)), w_max))
    os = list(_odd_multisets(w_max))
    for p, cp in phis:
        for q, cq in stars:
            if cp + cq > w_max:
                continue
            s = len(p) - len(q)
            if s_range is not None and not s_range[0] <= s <= s_range[1]:
                continue
            for o, co in os:
                if cp + cq + co <= w_max:
                    out.append(FockVector(p, q, o))
    out.sort(key=lambda v: (v.w, v.s, v))
    return out


def character(w_max: int, s_range: tuple[int, int]) -> LaurentQT:
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for v in basis(w_max, s_range):
        counts[(v.w, v.s)] += 1
    return LaurentQT(counts, Window(w_max, *s_range))


def character_product(w_max: int, s_range: tuple[int, int]) -> LaurentQT:
    """``prod_{j>=0}(1+q^j t) prod_{k>=1}(1+q^k/t) prod_{m odd} 1/(1-q^m)``."""
    win = Window(w_max, s_range[0] - w_max - 1, s_range[1] + w_max + 1)
    acc = LaurentQT.one(win)
    for j in range(0, w_max + 1):
        acc = acc * LaurentQT({(0, 0): 1, (j, 1): 1}, win)
    for k in range(1, w_max + 1):
        acc = acc * LaurentQT({(0, 0): 1, (k, -1): 1}, win)
    for m in range(1, w_max + 1, 2):
        acc = acc * LaurentQT({(m * a, 0): 1 for a in range(w_max // m + 1)}, win)
    return LaurentQT(dict(acc.items()), Window(w_max, *s_range))


# ---------------------------------------------------------------- checks


def mode_relation(s: int, kind: str, e) -> FockElement:
    """``sum_i phi_i psi_{s-i}`` (plain) or ``sum_i (-1)^i phi_i psi_{s-i}`` applied to ``e``."""
    if kind not in ("plain", "alternating"):
        raise ValueError(f"kind must be plain or alternating, got {kind!r}")
    if kind == "alternating" and s % 2 == 0:
        raise ValueError("alternating relations exist for odd s only")
    e = _as_element(e)
    total = FockElement()
    for v, c in e.terms.items():
        M = max((-b for b in v.phistar), default=0)
        # psi_m v vanishes for m > max(M - 1, -1); phi_i then needs i <= max(M, 0)
        for i in range(s - M - 2, max(M, 0) + 2):
            term = apply_phi(i, apply_psi(s - i, FockElement.basis(v)))
            if kind == "alternating" and i % 2:
                term = -term
            total = total + term.scale(c)
    return total


def mode_relation_check(s: int, kind: str, w_max: int) -> Report:
    rep = Report(f"mode relation {kind} s={s}")
    bad = [str(v) for v in basis(w_max) if not mode_relation(s, kind, v).is_zero()]
    rep.equal(f"zero on all {len(basis(w_max))} vectors with w <= {w_max}", bad, [])
    return rep


def car_check(w_max: int = 8, index_bound: int = 4) -> Report:
    """Anticommutators of phi and phi* as operator identities on the truncated basis."""
    rep = Report(f"CAR on w <= {w_max}")
    vecs = basis(w_max)
    rng = range(-index_bound, index_bound + 1)
    fails = {"phi phi": 0, "phi* phi*": 0, "phi phi*": 0}
    for v in vecs:
        e = FockElement.basis(v)
        phi_e = {i: apply_phi(i, e) for i in rng}
        star_e = {j: apply_phi_star(j, e) for j in rng}
        for i in rng:
            for j in rng:
                if not (apply_phi(i, phi_e[j]) + apply_phi(j, phi_e[i])).is_zero():
                    fails["phi phi"] += 1
                if not (apply_phi_star(i, star_e[j]) + apply_phi_star(j, star_e[i])).is_zero():
                    fails["phi* phi*"] += 1
                anti = apply_phi(i, star_e[j]) + apply_phi_star(j, phi_e[i])
                if anti != (e if i + j == 0 else FockElement()):
                    fails["phi phi*"] += 1
    for name, n in fails.items():
        rep.equal(f"[{name}]_+ identity on {len(vecs)} vectors, |i|,|j| <= {index_bound}", n, 0)
    return rep


def prop2_report(w_max: int = 10, s_range: tuple[int, int] = (-3, 3)) -> Report:
    from .qtseries import F_closed

    rep = Report("Fock character")
    win = Window(w_max, *s_range)
    ch = character(w_max, s_range)
    rep.equal("basis count = F(t, q)", ch, F_closed(win, "square"))
    rep.equal("basis count = fermion x odd-boson product", ch, character_product(w_max, s_range))
    return rep
