"""Exact sparse linear algebra: fraction-free integer elimination over Q and
independent Gaussian elimination over two word-sized prime fields.

Rows are ``dict[column, coefficient]``; columns are integers and the pivot of a
row is its smallest column, so callers control pivot preference by how they
number columns.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

PRIMES = (2_147_483_647, 2_147_483_629)


class RankMismatch(ArithmeticError):
    """Ranks over Q and over the certification primes disagree."""


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: v // g for k, v in row.items()}
    return row


def _integer_row(row: Mapping[int, object]) -> dict[int, int]:
    if all(isinstance(v, int) for v in row.values()):
        return {k: v for k, v in row.items() if v}
    fr = {k: Fraction(v) for k, v in row.items() if v}
    den = 1
    for v in fr.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return {k: int(v * den) for k, v in fr.items()}


class IntegerEchelon:
    """Incremental fraction-free row echelon form over Q.

    Pivot rows are kept primitive (content 1, positive leading entry).
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce_int(self, row: dict[int, int]) -> dict[int, int]:
        # top-reduction: only the leading column is eliminated
        pivots = self.pivots
        while row:
            c = min(row)
            if c not in pivots:
                return row
            prow = pivots[c]
            a, b = prow[c], row[c]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: v * fa for k, v in row.items()}
            for k, v in prow.items():
                nv = new.get(k, 0) - fb * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = _primitive(new) if new else new
        return row

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert a row; returns True when it raised the rank."""
        r = _integer_row(row)
        if not r:
            return False
        r = self._reduce_int(_primitive(r))
        if not r:
            return False
        self.pivots[min(r)] = r
        return True

    def reduce(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        """Remainder of ``vec`` against the pivots, over Q (no pivot column survives)."""
        out = {k: Fraction(v) for k, v in vec.items() if v}
        pivots = self.pivots
        while True:
            cands = [c for c in out if c in pivots]
            if not cands:
                return out
            c = min(cands)
            prow = pivots[c]
            f = out[c] / prow[c]
            for k, v in prow.items():
                nv = out.get(k, 0) - f * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)


class ModPEchelon:
    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: Mapping[int, object]) -> bool:
        p = self.p
        r = {}
        for k, v in row.items():
            if isinstance(v, Fraction):
                v = v.numerator * pow(v.denominator, -1, p)
            v %= p
            if v:
                r[k] = v
        pivots = self.pivots
        while r:
            c = min(r)
            if c not in pivots:
                break
            f = r[c]
            for k, v in pivots[c].items():
                nv = (r.get(k, 0) - f * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if not r:
            return False
        c = min(r)
        inv = pow(r[c], -1, p)
        pivots[c] = {k: v * inv % p for k, v in r.items()}
        return True


def rank_rational(rows: Iterable[Mapping[int, object]]) -> int:
    ech = IntegerEchelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def rank_mod_p(rows: Iterable[Mapping[int, object]], p: int) -> int:
    ech = ModPEchelon(p)
    for r in rows:
        ech.add(r)
    return ech.rank


def certified_rank(rows: list[Mapping[int, object]]) -> tuple[int, dict[str, int]]:
    """Rank over Q, checked against both certification primes."""
    ranks = {"Q": rank_rational(rows)}
    for p in PRIMES:
        ranks[f"F_{p}"] = rank_mod_p(rows, p)
    if len(set(ranks.values())) != 1:
        raise RankMismatch(f"rank disagreement: {ranks}")
    return ranks["Q"], ranks


def columns_to_rows(cols: list[Mapping[int, object]]) -> list[dict[int, object]]:
    """Transpose a list of sparse columns into sparse rows (rank is unchanged)."""
    rows: dict[int, dict[int, object]] = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
    return list(rows.values())
