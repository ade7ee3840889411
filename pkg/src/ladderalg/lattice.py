"""Finite ladder graphs, their independent sets, and (graded) Euler characteristics.

Vertices are ``(column, row)`` pairs ordered by column then row; bit ``k`` of a
configuration mask is the ``k``-th vertex in that order.  All edges join
vertices in the same or adjacent columns, which is what the column transfer
enumeration relies on.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .qtseries import LaurentQT, Window

KINDS = ("twisted_square", "square", "cyclic_tri3", "mleg")
EXHAUSTIVE_LIMIT = 24


def column_range(kind: str, n: int) -> list[int]:
    """Column labels: centred for the square ladders, ``1..n`` otherwise."""
    if kind in ("twisted_square", "square"):
        k = n // 2
        return list(range(-k, k + 1)) if n % 2 else list(range(-k, k))
    return list(range(1, n + 1))


@dataclass(frozen=True)
class LatticeModel:
    kind: str
    n: int
    m: int | None
    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]  # pairs of vertex positions, a < b
    _nbr: tuple[int, ...] = field(repr=False, compare=False, default=())

    @property
    def columns(self) -> list[int]:
        return sorted({c for c, _ in self.vertices})

    @property
    def rows(self) -> list[int]:
        return sorted({r for _, r in self.vertices})

    def index(self, vertex: tuple[int, int]) -> int:
        return self.vertices.index(vertex)

    def neighbour_mask(self, v: int) -> int:
        return self._nbr[v]

    def is_independent(self, mask: int) -> bool:
        return all(not (mask >> a & 1 and mask >> b & 1) for a, b in self.edges)

    def column_position(self, vertex: tuple[int, int]) -> int:
        """1-based position of the vertex's column."""
        return self.columns.index(vertex[0]) + 1


def _make(kind: str, n: int, m: int | None, vertices, edge_pairs) -> LatticeModel:
    verts = tuple(sorted(vertices))
    pos = {v: i for i, v in enumerate(verts)}
    edges = set()
    for u, v in edge_pairs:
        if u not in pos or v not in pos:
            continue
        if u == v:
            raise ValueError(f"self-loop at {u}")
        a, b = sorted((pos[u], pos[v]))
        edges.add((a, b))
    nbr = [0] * len(verts)
    for a, b in edges:
        nbr[a] |= 1 << b
        nbr[b] |= 1 << a
    return LatticeModel(kind, n, m, verts, tuple(sorted(edges)), tuple(nbr))


def build_model(kind: str, n: int, m: int | None = None) -> LatticeModel:
    if kind not in KINDS:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {KINDS}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if kind != "mleg" and m is not None:
        raise ValueError(f"m is only meaningful for mleg, got m={m} for {kind}")
    cols = column_range(kind, n)
    if kind == "twisted_square":
        X, Y = 0, 1
        verts = [(i, r) for i in cols for r in (X, Y)]
        pairs = [((i, X), (j, Y)) for i in cols for j in cols if abs(i - j) <= 1]
        return _make(kind, n, None, verts, pairs)
    if kind == "square":
        X, Y = 0, 1
        verts = [(i, r) for i in cols for r in (X, Y)]
        pairs = []
        for i in cols:
            pairs += [((i, X), (i, Y)), ((i, X), (i + 1, X)), ((i, Y), (i + 1, Y))]
        return _make(kind, n, None, verts, pairs)
    if kind == "cyclic_tri3":
        X, Y, Z = 0, 1, 2
        verts = [(i, r) for i in cols for r in (X, Y, Z)]
        pairs = []
        for i in cols:
            pairs += [
                ((i, X), (i, Y)), ((i, X), (i + 1, Y)),
                ((i, Y), (i, Z)), ((i, Y), (i + 1, Z)),
                ((i, Z), (i, X)), ((i, Z), (i + 1, X)),
                ((i, X), (i + 1, X)), ((i, Y), (i + 1, Y)), ((i, Z), (i + 1, Z)),
            ]
        return _make(kind, n, None, verts, pairs)
    # mleg
    if m is None or m < 1:
        raise ValueError(f"mleg needs m >= 1, got {m}")
    verts = [(i, r) for i in cols for r in range(1, m + 1)]
    pairs = []
    for i in cols:
        for r in range(1, m + 1):
            # in-column path plus both diagonals to the next column, no same-row edge
            pairs += [((i, r), (i, r + 1)), ((i, r), (i + 1, r + 1)), ((i, r + 1), (i + 1, r))]
    return _make(kind, n, m, verts, pairs)


def disjoint_union(a: LatticeModel, b: LatticeModel) -> LatticeModel:
    """Union with ``b`` placed to the right of ``a`` with a one-column gap."""
    off = max(a.columns) - min(b.columns) + 2
    verts = list(a.vertices) + [(c + off, r) for c, r in b.vertices]
    pairs = [(a.vertices[x], a.vertices[y]) for x, y in a.edges]
    pairs += [((b.vertices[x][0] + off, b.vertices[x][1]), (b.vertices[y][0] + off, b.vertices[y][1])) for x, y in b.edges]
    return _make("union", a.n + b.n + 1, None, verts, pairs)


# ---------------------------------------------------------------------------
# enumeration

def independent_sets(model: LatticeModel):
    """Yield every independent vertex mask by include/exclude branching."""
    nv = len(model.vertices)
    nbr = model._nbr

    def rec(v: int, mask: int, banned: int):
        if v == nv:
            yield mask
            return
        yield from rec(v + 1, mask, banned)
        if not banned >> v & 1:
            yield from rec(v + 1, mask | 1 << v, banned | nbr[v])

    yield from rec(0, 0, 0)


def _weight_of(model: LatticeModel, weights: Mapping[tuple[int, int], int], mask: int) -> int:
    return sum(weights[model.vertices[v]] for v in range(len(model.vertices)) if mask >> v & 1)


def _exhaustive_table(model: LatticeModel, weights) -> dict[tuple[int, int], int]:
    table: dict[tuple[int, int], int] = defaultdict(int)
    for mask in independent_sets(model):
        w = _weight_of(model, weights, mask) if weights else 0
        table[(w, mask.bit_count())] += 1
    return dict(table)


def transfer_enumeration(model: LatticeModel, weights: Mapping | None = None,
                         max_particles: int | None = None) -> dict[tuple[int, int], int]:
    """Column-by-column dynamic programme for the ``(weight, size) -> count`` table.

    State is the occupied subset of the current column; memory is one
    polynomial per admissible column state.
    """
    cols = model.columns
    by_col = [[v for v, (c, _) in enumerate(model.vertices) if c == col] for col in cols]
    col_of = {v: k for k, vs in enumerate(by_col) for v in vs}
    for a, b in model.edges:
        if abs(col_of[a] - col_of[b]) > 1:
            raise ValueError("transfer enumeration needs edges within adjacent columns")

    def states(k: int):
        vs = by_col[k]
        out = []
        for sub in range(1 << len(vs)):
            mask = 0
            for j, v in enumerate(vs):
                if sub >> j & 1:
                    mask |= 1 << v
            if model.is_independent(mask):
                w = _weight_of(model, weights, mask) if weights else 0
                out.append((mask, w, mask.bit_count()))
        return out

    cur: dict[int, dict[tuple[int, int], int]] = {}
    for mask, w, size in states(0):
        if max_particles is None or size <= max_particles:
            cur[mask] = {(w, size): 1}
    for k in range(1, len(cols)):
        nxt: dict[int, dict[tuple[int, int], int]] = {}
        new_states = states(k)
        for prev_mask, poly in cur.items():
            for mask, w, size in new_states:
                if not model.is_independent(prev_mask | mask):
                    continue
                acc = nxt.setdefault(mask, defaultdict(int))
                for (pw, ps), c in poly.items():
                    if max_particles is None or ps + size <= max_particles:
                        acc[(pw + w, ps + size)] += c
        cur = nxt
    total: dict[tuple[int, int], int] = defaultdict(int)
    for poly in cur.values():
        for key, c in poly.items():
            total[key] += c
    return dict(total)


def _table(model: LatticeModel, weights=None, method: str = "auto") -> dict[tuple[int, int], int]:
    if method == "auto":
        method = "exhaustive" if len(model.vertices) <= EXHAUSTIVE_LIMIT else "transfer"
    if method == "exhaustive":
        return _exhaustive_table(model, weights)
    if method == "transfer":
        return transfer_enumeration(model, weights)
    raise ValueError(f"unknown method {method!r}")


def independence_counts(model: LatticeModel, method: str = "auto") -> list[int]:
    """``N_l`` = number of independent sets of size ``l``, for ``l = 0..max``."""
    table = _table(model, None, method)
    top = max(size for _, size in table)
    counts = [0] * (top + 1)
    for (_, size), c in table.items():
        counts[size] += c
    return counts


def euler_char(model: LatticeModel, method: str = "auto") -> int:
    return sum((-1) ** l * c for l, c in enumerate(independence_counts(model, method)))


# ---------------------------------------------------------------------------
# weight systems

def column_weights(model: LatticeModel, by_position: Sequence[int]) -> dict[tuple[int, int], int]:
    """Weight system constant on columns; ``by_position[i]`` is column ``i+1``."""
    cols = model.columns
    if len(by_position) != len(cols):
        raise ValueError(f"need {len(cols)} column weights, got {len(by_position)}")
    w = dict(zip(cols, by_position))
    return {v: w[v[0]] for v in model.vertices}


def weight_system_f(model: LatticeModel) -> dict[tuple[int, int], int]:
    """Centred column weights ``i - 1 - floor(n/2)`` for column ``i = 1..n``."""
    n = len(model.columns)
    return column_weights(model, [i - 1 - n // 2 for i in range(1, n + 1)])


def graded_euler(model: LatticeModel, weights: Mapping[tuple[int, int], int], method: str = "auto") -> LaurentQT:
    """``sum over configurations of (-1)^size q^(total weight)`` as a q-only Laurent polynomial."""
    table = _table(model, weights, method)
    coeffs: dict[tuple[int, int], int] = defaultdict(int)
    for (w, size), c in table.items():
        coeffs[(w, 0)] += (-1) ** size * c
    top = max([0] + [q for (q, _), c in coeffs.items() if c])
    return LaurentQT(coeffs, Window(top))


@dataclass
class WeightTable:
    cells: dict[tuple[int, int], int]  # (weight, particle count) -> count
    max_particles: int

    @property
    def weights(self) -> list[int]:
        return sorted({w for w, _ in self.cells}, reverse=True)

    def g(self, j: int) -> LaurentQT:
        """Laurent polynomial of the ``j``-particle column."""
        col = {(w, 0): c for (w, jj), c in self.cells.items() if jj == j}
        top = max([0] + [w for w, _ in col])
        return LaurentQT(col, Window(top))

    def columns(self) -> list[LaurentQT]:
        return [self.g(j) for j in range(self.max_particles + 1)]

    def alternating_sum(self) -> LaurentQT:
        total = None
        for j, g in enumerate(self.columns()):
            term = g * ((-1) ** j)
            total = term if total is None else _add_laurent(total, term)
        return total

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["weight"] + [str(j) for j in range(self.max_particles + 1)])
        for w in self.weights:
            wr.writerow([w] + [self.cells.get((w, j), "") for j in range(self.max_particles + 1)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "max_particles": self.max_particles,
            "rows": [
                {"weight": w, "cells": [self.cells.get((w, j)) for j in range(self.max_particles + 1)]}
                for w in self.weights
            ],
        }


def _add_laurent(a: LaurentQT, b: LaurentQT) -> LaurentQT:
    win = Window(max(a.window.q_max, b.window.q_max))
    return a.restrict(win) + b.restrict(win)


def weight_table(model: LatticeModel, weights: Mapping[tuple[int, int], int], method: str = "auto") -> WeightTable:
    cells = _table(model, weights, method)
    cols = len(model.columns)
    return WeightTable(cells, max(cols, max(j for _, j in cells)))
