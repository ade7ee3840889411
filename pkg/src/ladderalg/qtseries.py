"""Truncated bivariate Laurent series in ``q`` and ``t`` with exact integer
coefficients, plus the closed-form q-series the package verifies.

A series carries a :class:`Window`.  Terms with ``q > q_max`` or ``t`` outside
``[t_min, t_max]`` are dropped; negative ``q`` exponents are kept (they only
occur in finite Laurent polynomials such as graded Euler characteristics).

Truncation rule used throughout: an infinite product ``prod_m (...)`` whose
``m``-th factor starts at ``q^m`` is cut at ``m > q_order``; a coefficient of a
truncated product is exact whenever every factor has nonnegative
``q``-valuation, because no dropped term can contribute to a retained one.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .report import Report


@dataclass(frozen=True)
class Window:
    q_max: int
    t_min: int = 0
    t_max: int = 0

    def __post_init__(self):
        if self.q_max < 0:
            raise ValueError(f"q_max must be >= 0, got {self.q_max}")
        if self.t_min > self.t_max:
            raise ValueError(f"t_min > t_max ({self.t_min} > {self.t_max})")

    @property
    def q_only(self) -> bool:
        return self.t_min == 0 and self.t_max == 0

    def contains(self, q: int, t: int) -> bool:
        return q <= self.q_max and self.t_min <= t <= self.t_max

    def meet(self, other: "Window") -> "Window":
        """Window of a product: q-only windows act as scalars in ``t``."""
        q_max = min(self.q_max, other.q_max)
        if self.q_only:
            return Window(q_max, other.t_min, other.t_max)
        if other.q_only:
            return Window(q_max, self.t_min, self.t_max)
        lo, hi = max(self.t_min, other.t_min), min(self.t_max, other.t_max)
        if lo > hi:
            raise ValueError("disjoint t-windows")
        return Window(q_max, lo, hi)

    def to_json(self) -> dict:
        return {"q_max": self.q_max, "t_min": self.t_min, "t_max": self.t_max}


class LaurentQT:
    """Sparse exact series ``sum c[q, t] q^q t^t`` restricted to a window."""

    __slots__ = ("_c", "window")

    def __init__(self, coeffs: Mapping[tuple[int, int], int] | None = None, window: Window | None = None):
        if window is None:
            raise ValueError("a window is required")
        self.window = window
        self._c: dict[tuple[int, int], int] = {}
        if coeffs:
            for (q, t), c in coeffs.items():
                if c and window.contains(q, t):
                    self._c[(q, t)] = int(c)

    # -- construction -----------------------------------------------------
    @classmethod
    def one(cls, window: Window) -> "LaurentQT":
        return cls({(0, 0): 1}, window)

    @classmethod
    def monomial(cls, q: int, t: int, window: Window, c: int = 1) -> "LaurentQT":
        return cls({(q, t): c}, window)

    @classmethod
    def from_q_list(cls, coeffs: Iterable[int], q_order: int, t: int = 0) -> "LaurentQT":
        win = Window(q_order, min(t, 0), max(t, 0))
        return cls({(q, t): c for q, c in enumerate(coeffs)}, win)

    # -- access -----------------------------------------------------------
    def coeff(self, q: int, t: int = 0) -> int:
        return self._c.get((q, t), 0)

    def items(self):
        return self._c.items()

    def terms(self) -> list[tuple[int, int, int]]:
        """``(t, q, c)`` triples sorted by ``(t, q)``."""
        return sorted((t, q, c) for (q, t), c in self._c.items())

    def column(self, t: int) -> dict[int, int]:
        return {q: c for (q, tt), c in self._c.items() if tt == t}

    def q_list(self, t: int = 0, start: int = 0) -> list[int]:
        return [self.coeff(q, t) for q in range(start, self.window.q_max + 1)]

    def min_q(self, t: int) -> int | None:
        qs = [q for (q, tt) in self._c if tt == t]
        return min(qs) if qs else None

    def is_zero(self) -> bool:
        return not self._c

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self._c == ({(0, 0): other} if other else {})
        if not isinstance(other, LaurentQT):
            return NotImplemented
        return self.window == other.window and self._c == other._c

    def __hash__(self):
        return hash((self.window, frozenset(self._c.items())))

    def __repr__(self) -> str:
        return f"LaurentQT({format_series(self)}, {self.window})"

    # -- arithmetic -------------------------------------------------------
    def restrict(self, window: Window) -> "LaurentQT":
        return LaurentQT(self._c, window)

    def __neg__(self) -> "LaurentQT":
        return LaurentQT({k: -c for k, c in self._c.items()}, self.window)

    def __add__(self, other) -> "LaurentQT":
        if isinstance(other, int):
            other = LaurentQT({(0, 0): other}, self.window)
        win = self.window.meet(other.window)
        out = defaultdict(int, {k: c for k, c in self._c.items()})
        for k, c in other._c.items():
            out[k] += c
        return LaurentQT(out, win)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentQT":
        return self + (-other if isinstance(other, LaurentQT) else -int(other))

    def __rsub__(self, other) -> "LaurentQT":
        return (-self) + other

    def __mul__(self, other) -> "LaurentQT":
        if isinstance(other, int):
            return LaurentQT({k: c * other for k, c in self._c.items()}, self.window)
        win = self.window.meet(other.window)
        out: dict[tuple[int, int], int] = defaultdict(int)
        q_max, t_lo, t_hi = win.q_max, win.t_min, win.t_max
        right = list(other._c.items())
        for (q1, t1), c1 in self._c.items():
            for (q2, t2), c2 in right:
                q, t = q1 + q2, t1 + t2
                if q <= q_max and t_lo <= t <= t_hi:
                    out[(q, t)] += c1 * c2
        return LaurentQT(out, win)

    __rmul__ = __mul__

    def shift(self, dq: int, dt: int = 0) -> "LaurentQT":
        """Multiply by ``q^dq t^dt``; exact for ``dq >= 0`` inside the window."""
        return LaurentQT({(q + dq, t + dt): c for (q, t), c in self._c.items()}, self.window)

    def subs_t(self, a: int) -> "LaurentQT":
        """Substitute ``t -> q^a t``.  Exact when ``a * t >= 0`` on the support."""
        return LaurentQT({(q + a * t, t): c for (q, t), c in self._c.items()}, self.window)

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "terms": [{"q": q, "t": t, "c": str(c)} for t, q, c in self.terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentQT":
        win = Window(**data["window"])
        return cls({(d["q"], d["t"]): int(d["c"]) for d in data["terms"]}, win)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "q", "c"])
        for t, q, c in self.terms():
            w.writerow([t, q, c])
        return buf.getvalue()


def format_series(s: LaurentQT, max_terms: int = 12) -> str:
    parts = []
    for t, q, c in s.terms()[:max_terms]:
        mono = "".join(
            [f"q^{q}" if q not in (0, 1) else ("q" if q == 1 else ""),
             f"t^{t}" if t not in (0, 1) else ("t" if t == 1 else "")]
        )
        if not mono:
            parts.append(str(c))
        else:
            parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
    if len(s) > max_terms:
        parts.append("...")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def residual(a: LaurentQT, b: LaurentQT, window: Window) -> dict[tuple[int, int], int]:
    """Nonzero coefficient differences ``a - b`` at points of ``window``."""
    diff: dict[tuple[int, int], int] = {}
    keys = {k for k in a._c if window.contains(*k)} | {k for k in b._c if window.contains(*k)}
    for k in keys:
        d = a._c.get(k, 0) - b._c.get(k, 0)
        if d:
            diff[k] = d
    return diff


# ---------------------------------------------------------------------------
# dense q-only helpers (lists indexed by q exponent, length order + 1)

def _mul_dense(a: list[int], b: list[int], order: int) -> list[int]:
    out = [0] * (order + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), order + 1 - i)):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def _mul_binomial(a: list[int], c: int, m: int) -> list[int]:
    """``a * (1 + c q^m)`` truncated to ``len(a)``."""
    out = list(a)
    for i in range(len(a) - 1, m - 1, -1):
        out[i] += c * a[i - m]
    return out


def _div_one_minus(a: list[int], m: int) -> list[int]:
    """``a / (1 - q^m)`` as the geometric series ``a * sum_j q^{mj}``."""
    out = list(a)
    for i in range(m, len(a)):
        out[i] += out[i - m]
    return out


def _pochhammer_dense(n: int, sign: int, order: int) -> list[int]:
    out = [1] + [0] * order
    for m in range(1, n + 1):
        if m > order:
            break
        out = _mul_binomial(out, sign, m)
    return out


def _prefactor_dense(n: int, order: int) -> list[int]:
    """``(q)_n^+ / (q)_n``."""
    out = _pochhammer_dense(n, +1, order)
    for m in range(1, min(n, order) + 1):
        out = _div_one_minus(out, m)
    return out


def _overpartition_dense(order: int, run_factor: int) -> list[int]:
    out = [1] + [0] * order
    for m in range(1, order + 1):
        out = _mul_binomial(out, run_factor - 1, m)
        out = _div_one_minus(out, m)
    return out


def _euler_inverse_dense(order: int, step: int = 1, start: int = 1) -> list[int]:
    """``prod_{m = start, start+step, ...} 1/(1 - q^m)``."""
    out = [1] + [0] * order
    for m in range(start, order + 1, step):
        out = _div_one_minus(out, m)
    return out


# ---------------------------------------------------------------------------
# public q-series operations

def pochhammer(n: int, variant: str, q_order: int) -> LaurentQT:
    """``(q)_n^+ = prod (1+q^m)`` or ``(q)_n = prod (1-q^m)`` for ``m = 1..n``.

    The degree is ``n(n+1)/2``, so truncation is exact once ``q_order`` reaches it.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if q_order < 0:
        raise ValueError("q_order must be >= 0")
    if variant not in ("plus", "minus"):
        raise ValueError(f"variant must be 'plus' or 'minus', got {variant!r}")
    return LaurentQT.from_q_list(_pochhammer_dense(n, 1 if variant == "plus" else -1, q_order), q_order)


def theta_kernel(window: Window) -> LaurentQT:
    """``sum_n q^{n(n-1)/2} t^n`` inside ``window``."""
    return LaurentQT(
        {(n * (n - 1) // 2, n): 1 for n in range(window.t_min, window.t_max + 1)}, window
    )


def overpartition_product(q_order: int, run_factor: int = 2) -> LaurentQT:
    """``prod_{m>=1} (1 + (run_factor-1) q^m) / (1 - q^m)`` to ``q_order``."""
    if run_factor < 1:
        raise ValueError(f"run_factor must be >= 1, got {run_factor}")
    if q_order < 0:
        raise ValueError("q_order must be >= 0")
    return LaurentQT.from_q_list(_overpartition_dense(q_order, run_factor), q_order)


MODEL_RUN_FACTOR = {"square": 2, "tri3": 3}


def F_closed(window: Window, model: str = "square") -> LaurentQT:
    """Closed-form statistical sum: overpartition product times the theta kernel."""
    try:
        k = MODEL_RUN_FACTOR[model]
    except KeyError:
        raise ValueError(f"unknown model {model!r}") from None
    return overpartition_product(window.q_max, k) * theta_kernel(window)


def phi_n(n: int, q_order: int) -> LaurentQT:
    """``((q)_n^+ / (q)_n) q^{n(n-1)/2}``, the charge-``n`` column of ``F_plus``."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    base = n * (n - 1) // 2
    dense = _prefactor_dense(n, q_order)
    return LaurentQT({(q + base, 0): c for q, c in enumerate(dense)}, Window(q_order))


def F_plus(window: Window) -> LaurentQT:
    if window.t_min < 0:
        raise ValueError("F_plus has no negative-charge terms; need t_min >= 0")
    out: dict[tuple[int, int], int] = {}
    for n in range(window.t_min, window.t_max + 1):
        for (q, _), c in phi_n(n, window.q_max).items():
            out[(q, n)] = c
    return LaurentQT(out, window)


def F_N_closed(N: int, window: Window) -> LaurentQT:
    """``sum_{n >= 1-N} ((q)^+_{n+N-1} / (q)_{n+N-1}) q^{n(n-1)/2} t^n``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    out: dict[tuple[int, int], int] = {}
    for n in range(max(window.t_min, 1 - N), window.t_max + 1):
        base = n * (n - 1) // 2
        if base > window.q_max:
            continue
        dense = _prefactor_dense(n + N - 1, window.q_max - base)
        for q, c in enumerate(dense):
            if c:
                out[(q + base, n)] = c
    return LaurentQT(out, window)


# ---------------------------------------------------------------------------
# identity checks

def functional_equation_check(q_order: int, t_max: int) -> Report:
    """``F+(t) = F+(qt) + t (F+(qt) + q F+(q^2 t))`` and the coefficient recurrence.

    Substitutions ``t -> q^a t`` with ``a > 0`` only raise ``q`` exponents on a
    series with ``t >= 0``, so every coefficient of the window is exact.
    """
    rep = Report("functional_equation")
    win = Window(q_order, 0, t_max)
    f = F_plus(win)
    f1, f2 = f.subs_t(1), f.subs_t(2)
    rhs = f1 + (f1 + f2.shift(1)).shift(0, 1)
    res = residual(f, rhs, win)
    rep.add(f"functional equation residuals (q<={q_order}, 0<=t<={t_max})", not res, res, {})
    rep.equal("phi_0 = 1", phi_n(0, q_order).q_list(), [1] + [0] * q_order)
    one_minus = LaurentQT({(0, 0): 1}, Window(q_order))
    for n in range(1, t_max + 1):
        lhs = (one_minus - LaurentQT.monomial(n, 0, Window(q_order))) * phi_n(n, q_order)
        rhs_n = (one_minus + LaurentQT.monomial(n, 0, Window(q_order))) * phi_n(n - 1, q_order)
        rhs_n = rhs_n.shift(n - 1)
        rep.equal(f"(1-q^{n}) phi_{n} = q^{n-1} (1+q^{n}) phi_{n-1}", lhs.q_list(), rhs_n.q_list())
    return rep


def jacobi_triple_check(q_order: int, t_range: int) -> Report:
    """``prod_{j>=0}(1+q^j t) prod_{k>=1}(1+q^k/t) = (q)_inf^{-1} sum q^{n(n-1)/2} t^n``.

    The left side is expanded on a t-window wide enough that no partial product
    loses a term of ``q``-degree ``<= q_order`` (charge ``a`` needs ``q >= a(a-1)/2``).
    """
    rep = Report("jacobi_triple")
    wide = 1
    while wide * (wide - 1) // 2 <= q_order:
        wide += 1
    big = Window(q_order, -wide - 1, wide + 1)
    lhs = LaurentQT.one(big)
    for j in range(0, q_order + 1):
        lhs = lhs * LaurentQT({(0, 0): 1, (j, 1): 1}, big)
    for k in range(1, q_order + 1):
        lhs = lhs * LaurentQT({(0, 0): 1, (k, -1): 1}, big)
    target = Window(q_order, -t_range, t_range)
    euler = LaurentQT.from_q_list(_euler_inverse_dense(q_order), q_order)
    rhs = euler * theta_kernel(target)
    res = residual(lhs.restrict(target), rhs, target)
    rep.add(f"triple product residuals (q<={q_order}, |t|<={t_range})", not res, res, {})
    return rep


def remark_identity_check(q_order: int) -> Report:
    """Overpartitions as odd parts times partitions, and as squared partitions
    times ``prod (1 - q^{2k})``."""
    rep = Report("remark_identity")
    over = _overpartition_dense(q_order, 2)
    part = _euler_inverse_dense(q_order)
    odd = _euler_inverse_dense(q_order, step=2, start=1)
    middle = _mul_dense(part, odd, q_order)
    right = _mul_dense(part, part, q_order)
    for k in range(1, q_order // 2 + 1):
        right = _mul_binomial(right, -1, 2 * k)
    rep.equal(f"prod (1+q^m)/(1-q^m) = prod 1/(1-q^m) prod 1/(1-q^(2k+1)) to q^{q_order}", over, middle)
    rep.equal(f"prod (1+q^m)/(1-q^m) = (prod 1/(1-q^m))^2 prod (1-q^(2k)) to q^{q_order}", over, right)
    return rep
