"""Dirac sets and brute-force statistical sums of semi-infinite configurations.

A Dirac set ``Omega`` contains every sufficiently negative integer and finitely
many nonnegative ones; it is stored as ``omega_e = Omega ∩ Z>=0`` and
``omega_p = Z<0 \\ Omega``.  Occupied columns of a semi-infinite configuration
are the elements of ``Omega``; the infinite run extending to ``-inf`` is the
tail, whose row is fixed.

Each finite run of consecutive occupied columns can be labelled with rows in
as many ways as there are walks of its length in the model's row-transition
graph; the run that merges with the tail is forced.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .qtseries import LaurentQT, Window

# allowed row transitions between occupied adjacent columns (column i -> i+1)
TRANSITIONS: dict[str, dict[str, tuple[str, ...]]] = {
    # cross-row edges x_i - y_j for |i - j| <= 1: a run keeps its row
    "square_twisted": {"x": ("x",), "y": ("y",)},
    # the complement of the cyclic triangular edge list: x -> z -> y -> x
    "tri3_cyclic": {"x": ("z",), "y": ("x",), "z": ("y",)},
}
MODEL_ALIASES = {"square": "square_twisted", "twisted_square": "square_twisted",
                 "tri3": "tri3_cyclic", "cyclic_tri3": "tri3_cyclic"}


def _kind(model_kind: str) -> str:
    kind = MODEL_ALIASES.get(model_kind, model_kind)
    if kind not in TRANSITIONS:
        raise ValueError(f"unknown model kind {model_kind!r}")
    return kind


@dataclass(frozen=True, order=True)
class DiracSet:
    omega_e: tuple[int, ...] = ()
    omega_p: tuple[int, ...] = ()

    def __post_init__(self):
        e, p = tuple(sorted(set(self.omega_e))), tuple(sorted(set(self.omega_p)))
        if any(x < 0 for x in e) or any(x >= 0 for x in p):
            raise ValueError("omega_e must be >= 0 and omega_p < 0")
        object.__setattr__(self, "omega_e", e)
        object.__setattr__(self, "omega_p", p)

    @classmethod
    def from_members(cls, members, floor: int) -> "DiracSet":
        """Build from the elements of ``Omega`` that are ``>= floor``; every
        integer below ``floor`` is taken to be in ``Omega``."""
        members = set(members)
        e = [x for x in members if x >= 0]
        p = [x for x in range(floor, 0) if x not in members]
        return cls(tuple(e), tuple(p))

    @property
    def floor(self) -> int:
        """Every integer strictly below this bound lies in ``Omega``."""
        return min(self.omega_p, default=0)

    def members(self, lo: int) -> list[int]:
        """Elements of ``Omega`` that are ``>= lo`` (``lo <= floor``)."""
        holes = set(self.omega_p)
        return [x for x in range(lo, 0) if x not in holes] + list(self.omega_e)

    def __contains__(self, x: int) -> bool:
        return x in self.omega_e if x >= 0 else x not in self.omega_p


VACUUM = DiracSet()


def charge(d: DiracSet) -> int:
    return len(d.omega_e) - len(d.omega_p)


def energy(d: DiracSet) -> int:
    return sum(d.omega_e) - sum(d.omega_p)


def shift(d: DiracSet, N: int) -> DiracSet:
    """``Omega -> Omega + N``."""
    lo = d.floor - abs(N) - 1
    return DiracSet.from_members([x + N for x in d.members(lo)], lo + N)


def shifted_energy(U: int, C: int, N: int) -> int:
    """Energy after shifting by ``N``: ``U + N C + N(N-1)/2``."""
    return U + N * C + N * (N - 1) // 2


def runs(d: DiracSet) -> tuple[int, list[int]]:
    """Split ``Omega`` into the tail and finite maximal runs.

    Returns ``(tail_top, finite_lengths)``: the tail is ``(-inf, tail_top]``.
    """
    lo = d.floor - 1
    cols = d.members(lo)
    tail_top = lo
    i = 1
    while i < len(cols) and cols[i] == tail_top + 1:
        tail_top += 1
        i += 1
    lengths = []
    while i < len(cols):
        start = cols[i]
        j = i
        while j + 1 < len(cols) and cols[j + 1] == cols[j] + 1:
            j += 1
        lengths.append(cols[j] - start + 1)
        i = j + 1
    return tail_top, lengths


@lru_cache(maxsize=None)
def run_choice_count(model_kind: str, run_length: int, attached_to_tail: bool = False) -> int:
    """Row labellings of a run: walks with ``run_length`` vertices in the
    transition graph, or 1 for a run forced by the tail."""
    kind = _kind(model_kind)
    if run_length < 1:
        raise ValueError("run_length must be >= 1")
    if attached_to_tail:
        return 1
    trans = TRANSITIONS[kind]
    walks = {r: 1 for r in trans}
    for _ in range(run_length - 1):
        nxt: dict[str, int] = defaultdict(int)
        for r, c in walks.items():
            for s in trans[r]:
                nxt[s] += c
        walks = nxt
    return sum(walks.values())


def multiplicity(model_kind: str, d: DiracSet) -> int:
    _, lengths = runs(d)
    out = 1
    for ell in lengths:
        out *= run_choice_count(model_kind, ell, False)
    return out


def _strict_subsets(values: range, budget: int) -> Iterator[tuple[int, ...]]:
    """Subsets of positive ``values`` (ascending) with sum ``<= budget``."""
    vals = [v for v in values if v <= budget]

    def rec(i: int, left: int, acc: tuple[int, ...]):
        yield acc
        for j in range(i, len(vals)):
            v = vals[j]
            if v > left:
                break
            yield from rec(j + 1, left - v, acc + (v,))

    yield from rec(0, budget, ())


def dirac_sets(U_max: int, C_range: tuple[int, int] | None = None,
               hole_floor: int | None = None) -> Iterator[DiracSet]:
    """All Dirac sets with energy ``<= U_max`` in ``(U, C, omega_e, omega_p)`` order.

    ``hole_floor = N`` keeps only sets containing every integer ``<= -N``
    (holes confined to ``[-N+1, -1]``).
    """
    found = []
    for p_abs in _strict_subsets(range(1, U_max + 1), U_max):
        if hole_floor is not None and p_abs and max(p_abs) > hole_floor - 1:
            continue
        left = U_max - sum(p_abs)
        for e_pos in _strict_subsets(range(1, U_max + 1), left):
            for has_zero in (False, True):
                e = ((0,) if has_zero else ()) + e_pos
                d = DiracSet(e, tuple(-x for x in p_abs))
                C = charge(d)
                if C_range is not None and not (C_range[0] <= C <= C_range[1]):
                    continue
                found.append((energy(d), C, d.omega_e, d.omega_p, d))
    found.sort(key=lambda r: r[:4])
    for *_, d in found:
        yield d


def sector_counts(model_kind: str, U_max: int, C_range: tuple[int, int],
                  hole_floor: int | None = None) -> dict[tuple[int, int], int]:
    """``(C, U) -> weighted configuration count``."""
    _kind(model_kind)
    out: dict[tuple[int, int], int] = defaultdict(int)
    for d in dirac_sets(U_max, C_range, hole_floor):
        out[(charge(d), energy(d))] += multiplicity(model_kind, d)
    return dict(out)


def brute_statsum(model_kind: str, U_max: int, C_range: tuple[int, int]) -> LaurentQT:
    """``sum t^C q^U`` over semi-infinite configurations with a fixed tail."""
    counts = sector_counts(model_kind, U_max, C_range)
    return LaurentQT({(U, C): c for (C, U), c in counts.items()}, Window(U_max, *C_range))


def brute_statsum_floor(model_kind: str, floor_N: int, U_max: int, C_range: tuple[int, int]) -> LaurentQT:
    """As :func:`brute_statsum` over Dirac sets containing all of ``Z <= -floor_N``."""
    if floor_N < 1:
        raise ValueError("floor_N must be >= 1")
    counts = sector_counts(model_kind, U_max, C_range, hole_floor=floor_N)
    return LaurentQT({(U, C): c for (C, U), c in counts.items()}, Window(U_max, *C_range))


def sector_json(counts: dict[tuple[int, int], int]) -> list[dict]:
    return [{"C": C, "U": U, "count": c} for (C, U), c in sorted(counts.items())]
