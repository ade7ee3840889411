"""Named verification targets: each builds a :class:`Report` comparing an
enumeration oracle against a closed form or a structural identity."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import algebra, fock, homology, lattice, qtseries, semiinf
from .qtseries import LaurentQT, Window
from .report import Report

CAPS = {"n": 9, "w": 12, "q": 60}


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str = "verify"
    target: str | None = None
    model: str | None = None
    n: int | None = None
    m: int | None = None
    N: int | None = None
    q_max: int | None = None
    t_min: int | None = None
    t_max: int | None = None
    w_max: int | None = None
    fmt: str = "text"
    seed: int = 0
    threads: int = 1
    force: bool = False
    out: str | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def check_caps(self) -> None:
        if self.force:
            return
        if self.n is not None and self.n > CAPS["n"]:
            raise CapExceeded(f"--n {self.n} exceeds cap {CAPS['n']} (use --force)")
        if self.w_max is not None and self.w_max > CAPS["w"]:
            raise CapExceeded(f"--wmax {self.w_max} exceeds cap {CAPS['w']} (use --force)")
        if self.q_max is not None and self.q_max > CAPS["q"]:
            raise CapExceeded(f"--qmax {self.q_max} exceeds cap {CAPS['q']} (use --force)")

    def q(self, default: int) -> int:
        return default if self.q_max is None else self.q_max

    def t_window(self, lo: int, hi: int) -> tuple[int, int]:
        return (lo if self.t_min is None else self.t_min, hi if self.t_max is None else self.t_max)


# ---------------------------------------------------------------- series targets


def verify_prop1(cfg: RunConfig = RunConfig()) -> Report:
    q = cfg.q(12)
    t_lo, t_hi = cfg.t_window(-4, 4)
    win = Window(q, t_lo, t_hi)
    rep = Report("prop1")
    brute = semiinf.brute_statsum("square", q, (t_lo, t_hi))
    rep.equal(f"brute statsum = F (q<={q}, t in [{t_lo},{t_hi}])", brute, qtseries.F_closed(win, "square"))
    lows = {n: (brute.min_q(n), brute.coeff(n * (n - 1) // 2, n)) for n in range(t_lo, t_hi + 1)
            if n * (n - 1) // 2 <= q}
    rep.add("column t^n starts at q^{n(n-1)/2} with coefficient 1",
            all(v == (n * (n - 1) // 2, 1) for n, v in lows.items()), lows)
    bad = []
    for d in semiinf.dirac_sets(6):
        U, C = semiinf.energy(d), semiinf.charge(d)
        for N in range(-3, 4):
            s = semiinf.shift(d, N)
            if (semiinf.charge(s), semiinf.energy(s)) != (C + N, semiinf.shifted_energy(U, C, N)):
                bad.append((d, N))
    rep.equal("shift law C+N, U+NC+N(N-1)/2 on all sets with U<=6, |N|<=3", bad, [])
    return rep


def _phi_by_recurrence(n: int, q_order: int) -> LaurentQT:
    """phi_n forced by ``(1-q^n) phi_n = q^{n-1}(1+q^n) phi_{n-1}`` from ``phi_0 = 1``."""
    win = Window(q_order)
    cur = LaurentQT.one(win)
    for k in range(1, n + 1):
        num = (cur + cur.shift(k)).shift(k - 1)
        # divide by (1 - q^k): coefficientwise running sum with step k
        c = num.q_list(0, 0)
        for i in range(k, q_order + 1):
            c[i] += c[i - k]
        cur = LaurentQT.from_q_list(c, q_order)
    return cur


def verify_lemma1(cfg: RunConfig = RunConfig()) -> Report:
    q = cfg.q(20)
    n_max = cfg.n if cfg.n is not None else 8
    rep = Report("lemma1")
    brute = semiinf.brute_statsum_floor("square", 1, q, (0, n_max))
    for n in range(n_max + 1):
        closed = qtseries.phi_n(n, q).q_list()
        col = brute.q_list(n)
        rec = _phi_by_recurrence(n, q).q_list()
        rep.add(f"phi_{n}: closed = brute column = recurrence", closed == col == rec, closed, col)
    rep.extend(qtseries.functional_equation_check(q, n_max))
    return rep


def verify_fN(cfg: RunConfig = RunConfig()) -> Report:
    q = cfg.q(10)
    t_lo, t_hi = cfg.t_window(-2, 4)
    win = Window(q, t_lo, t_hi)
    rep = Report("F_N")
    for N in range(1, 4):
        rep.equal(f"F_{N} closed = brute sum with all of Z<=-{N} occupied",
                  qtseries.F_N_closed(N, win), semiinf.brute_statsum_floor("square", N, q, (t_lo, t_hi)))
    n0 = q + 1
    F = qtseries.F_closed(win, "square")
    rep.add(f"F_N = F for N >= {n0}", all(qtseries.F_N_closed(N, win) == F for N in range(n0, n0 + 3)))
    rep.add(f"F_{n0 - 1} != F (stabilisation is not earlier)", qtseries.F_N_closed(n0 - 1, win) != F)
    mono = True
    prev = None
    for N in range(1, n0 + 2):
        cur = qtseries.F_N_closed(N, win)
        if prev is not None and any(cur.coeff(a, b) < c for (a, b), c in prev.items()):
            mono = False
        prev = cur
    rep.add("F_N coefficients nondecreasing in N", mono)
    rep.equal("F_1 = F_plus", qtseries.F_N_closed(1, Window(q, 0, t_hi)), qtseries.F_plus(Window(q, 0, t_hi)))
    return rep


def verify_prop2(cfg: RunConfig = RunConfig()) -> Report:
    w = cfg.w_max if cfg.w_max is not None else 10
    t_lo, t_hi = cfg.t_window(-3, 3)
    rep = Report("prop2")
    rep.extend(fock.prop2_report(w, (t_lo, t_hi)))
    rep.extend(qtseries.jacobi_triple_check(cfg.q(30), 5))
    rep.extend(qtseries.remark_identity_check(cfg.q(30)))
    return rep


def verify_jacobi(cfg: RunConfig = RunConfig()) -> Report:
    _, t_hi = cfg.t_window(-5, 5)
    return qtseries.jacobi_triple_check(cfg.q(30), t_hi)


def verify_remark(cfg: RunConfig = RunConfig()) -> Report:
    return qtseries.remark_identity_check(cfg.q(30))


def verify_prop3(cfg: RunConfig = RunConfig()) -> Report:
    t_lo, t_hi = cfg.t_window(-3, 3)
    rep = Report("prop3")
    rep.extend(algebra.upsilon_report(Window(cfg.q(10), t_lo, t_hi)))
    return rep


def verify_prop7(cfg: RunConfig = RunConfig()) -> Report:
    q = cfg.q(10)
    t_lo, t_hi = cfg.t_window(-3, 3)
    rep = Report("prop7")
    rep.equal(f"brute tri3 statsum = F^ (q<={q}, t in [{t_lo},{t_hi}])",
              semiinf.brute_statsum("tri3", q, (t_lo, t_hi)), qtseries.F_closed(Window(q, t_lo, t_hi), "tri3"))
    return rep


# ---------------------------------------------------------------- algebra targets


def random_element(space: algebra.MonomialSpace, rng: random.Random, degree: int, terms: int = 4) -> algebra.Element:
    masks = list(space.masks(degree))
    out = {}
    for mask in rng.sample(masks, min(terms, len(masks))):
        out[space.monomial(mask)] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return algebra.Element(out)


def normal_form_idempotence(n: int, samples: int, seed: int) -> tuple[int, int]:
    """Returns ``(failures, samples)``; also checks linearity on pairs."""
    gq = homology.quotient_for(n)
    sp = gq.space
    rng = random.Random(seed * 1000 + n)
    bad = 0
    for _ in range(samples):
        d = rng.randint(0, len(gq.dims) - 1)
        e = random_element(sp, rng, d)
        f = random_element(sp, rng, d)
        ne = gq.normal_form(e)
        if gq.normal_form(ne) != ne:
            bad += 1
        elif gq.normal_form(e + f.scale(3)) != ne + gq.normal_form(f).scale(3):
            bad += 1
    return bad, samples


def verify_lemma2(cfg: RunConfig = RunConfig()) -> Report:
    n_max = cfg.n if cfg.n is not None else 7
    samples = cfg.extra.get("samples", 200)
    rep = Report("lemma2")
    for n in range(1, n_max + 1):
        win = algebra.window_for(n)
        method = "echelon" if n <= 7 else "rewrite"
        sub = algebra.lemma2_check(win, method)
        rep.extend(sub, f"n={n}")
        fer = algebra.cached_quotient("fermion_twisted", win).dims if n <= 7 else None
        counts = lattice.independence_counts(lattice.build_model("twisted_square", n))
        dims = algebra.cached_quotient("deformed_square", win, method).dims
        rep.equal(f"n={n}: deformed dims = fermion dims = independence counts",
                  (dims, fer if fer is not None else counts), (counts, counts))
        bad, total = normal_form_idempotence(n, samples, cfg.seed)
        rep.equal(f"n={n}: normal form idempotent and linear on {total} random elements", bad, 0)
    if n_max <= 7:
        gq = algebra.cached_quotient("deformed_square", algebra.window_for(7), "rewrite")
        rep.equal("n=7: rewriting dims = echelon dims", gq.dims,
                  algebra.cached_quotient("deformed_square", algebra.window_for(7)).dims)
    for n in (8, 9):
        if n > n_max:
            gq = algebra.cached_quotient("deformed_square", algebra.window_for(n), "rewrite")
            rep.extend(gq.groebner_report(), f"n={n}")
            counts = lattice.independence_counts(lattice.build_model("twisted_square", n))
            rep.equal(f"n={n}: standard monomial counts = independence counts", gq.dims, counts)
    nf = algebra.cached_quotient("deformed_square", (-2, 2)).normal_form(algebra.x(0) * algebra.y(1))
    rep.equal("x0 y1 in [-2,2] -> -x2 y-1", nf, -(algebra.x(2) * algebra.y(-1)))
    for k in (1, 2, 3):
        gq = algebra.cached_quotient("deformed_square", (-k - 1, k + 1), "echelon" if k <= 2 else "rewrite")
        rep.equal(f"x-{k} y-{k - 1} in [-{k + 1},{k + 1}] -> -x{2 - k} y-{k + 1}",
                  gq.normal_form(algebra.x(-k) * algebra.y(-k + 1)),
                  -(algebra.x(-k + 2) * algebra.y(-k - 1)))
    for n in range(1, 5):
        rep.extend(algebra.tri3_dimension_report(n))
    return rep


def verify_prop4(cfg: RunConfig = RunConfig()) -> Report:
    n_max = cfg.n if cfg.n is not None else 9
    rep = Report("prop4")
    for n in range(1, n_max + 1):
        rep.extend(homology.prop4_report(n))
    rep.extend(homology.k5_example())
    return rep


def verify_lemma3(cfg: RunConfig = RunConfig()) -> Report:
    k_max = cfg.n if cfg.n is not None else 3
    rep = Report("lemma3")
    for k in range(1, k_max + 1):
        rep.extend(homology.lemma3_report(k))
    return rep


# ---------------------------------------------------------------- lattice targets


def verify_prop5(cfg: RunConfig = RunConfig()) -> Report:
    n_max = cfg.n if cfg.n is not None else 8
    rep = Report("prop5")
    for n in range(1, n_max + 1):
        model = lattice.build_model("cyclic_tri3", n)
        expected = (-2) ** ((n + 1) // 2)
        tr = lattice.euler_char(model, "transfer")
        rep.equal(f"E_{n} (transfer) = (-2)^{(n + 1) // 2}", tr, expected)
        if n <= 6:
            rep.equal(f"E_{n} exhaustive = transfer", lattice.euler_char(model, "exhaustive"), tr)
    for n in range(3, n_max + 1):
        e = [lattice.euler_char(lattice.build_model("cyclic_tri3", j)) for j in (1, n - 2, n)]
        rep.equal(f"E_{n} = E_1 E_{n - 2}", e[2], e[0] * e[1])
    return rep


def verify_prop6(cfg: RunConfig = RunConfig()) -> Report:
    n_max = cfg.n if cfg.n is not None else 6
    rep = Report("prop6")
    for n in range(1, n_max + 1):
        model = lattice.build_model("cyclic_tri3", n)
        g = lattice.graded_euler(model, lattice.weight_system_f(model))
        e = lattice.euler_char(model)
        rep.equal(f"graded Euler of n={n} with f is the constant {e}", g.terms(), [(0, 0, e)])
    tab = lattice.weight_table(lattice.build_model("cyclic_tri3", 3),
                               lattice.weight_system_f(lattice.build_model("cyclic_tri3", 3)))
    target = {(1, 0): 3, (0, 0): 9, (-1, 0): 3}
    cols = [j for j, g in enumerate(tab.columns()) if dict(g.items()) == target]
    rep.add("n=3 table has a column 3q + 9 + 3q^-1", bool(cols), cols)
    rep.notes.append(f"3q + 9 + 3q^-1 is the {cols[0] if cols else '?'}-particle column")
    t1 = lattice.weight_table(lattice.build_model("cyclic_tri3", 1),
                              lattice.weight_system_f(lattice.build_model("cyclic_tri3", 1)))
    rep.equal("n=1 table: g^0 = 1, g^1 = 3", [dict(g.items()) for g in t1.columns()], [{(0, 0): 1}, {(0, 0): 3}])
    return rep


def _mleg_euler(m: int, n: int) -> int:
    return lattice.euler_char(lattice.build_model("mleg", n, m))


def verify_prop8(cfg: RunConfig = RunConfig()) -> Report:
    rep = Report("prop8")
    rep.equal("E~_1^m for m = 1, 2, 3", [_mleg_euler(m, 1) for m in (1, 2, 3)], [0, -1, -1])
    for m in range(1, 6):
        base = _mleg_euler(m, 1)
        got = [_mleg_euler(m, n) for n in range(1, 7)]
        rep.equal(f"m={m}: E~_n = (E~_1)^floor((n+1)/2), n <= 6", got,
                  [base ** ((n + 1) // 2) for n in range(1, 7)])
    for m in range(4, 10):
        rep.equal(f"E~_1^{m} = -E~_1^{m - 3}", _mleg_euler(m, 1), -_mleg_euler(m - 3, 1))
    return rep


def verify_prop9(cfg: RunConfig = RunConfig()) -> Report:
    rep = Report("prop9")
    model = lattice.build_model("mleg", 3, 3)
    g = lattice.graded_euler(model, lattice.weight_system_f(model))
    rep.equal("E_q^f(3 legs, 3 columns) = 3 - q - q^-1", sorted(g.items()), [((-1, 0), -1), ((0, 0), 3), ((1, 0), -1)])
    rep.add("differs from E~_3^3", g.terms() != [(0, 0, _mleg_euler(3, 3))], _mleg_euler(3, 3))
    for n in (1, 2):
        mod = lattice.build_model("mleg", n, 3)
        gn = lattice.graded_euler(mod, lattice.weight_system_f(mod))
        rep.equal(f"n={n}: E_q^f = E~_{n}^3", gn.terms(), [(0, 0, _mleg_euler(3, n))])
    return rep


def sample_theta(n_columns: int, rng: random.Random) -> list[int]:
    """Column weights uniform in [-5, 5] with the first column pinned to 0."""
    return [0] + [rng.randint(-5, 5) for _ in range(n_columns - 1)]


def verify_prop10(cfg: RunConfig = RunConfig()) -> Report:
    samples = cfg.extra.get("samples", 50)
    rng = random.Random(cfg.seed)
    rep = Report("prop10")
    for n in range(1, 5):
        model = lattice.build_model("mleg", n, 4)
        bad = []
        for _ in range(samples):
            w = sample_theta(n, rng)
            g = lattice.graded_euler(model, lattice.column_weights(model, w))
            if not g.is_zero():
                bad.append(w)
        rep.equal(f"n={n}: E_q^o = 0 for {samples} sampled o (seed {cfg.seed})", bad, [])
        rep.equal(f"n={n}: zero weights give E~ = 0", _mleg_euler(4, n), 0)
    return rep


# ---------------------------------------------------------------- structure


def verify_structure(cfg: RunConfig = RunConfig()) -> Report:
    rep = Report("structure")
    n_max = cfg.n if cfg.n is not None else 9
    for n in range(1, n_max + 1):
        cc = homology.build_deformed_complex(n)
        co = homology.cohomology(cc)
        rep.add(f"K_{n}: d^2 = 0, ranks certified", co.passed, co.rank_certificates)
    for kind in algebra.KINDS:
        for n in range(1, 5 if "tri3" in kind else 8):
            gq = algebra.cached_quotient(kind, algebra.window_for(n))
            rep.add(f"{kind} n={n}: quotient ranks agree over Q and both primes",
                    all(len(set(r.values())) == 1 for r in gq.ranks.values()))
    models = [lattice.build_model("cyclic_tri3", n) for n in range(1, 7)]
    models += [lattice.build_model("twisted_square", n) for n in range(1, 8)]
    models += [lattice.build_model("mleg", n, m) for m in range(1, 6) for n in range(1, 4)]
    for model in models:
        cc = homology.build_fermion_complex(model)
        co = homology.cohomology(cc)
        rep.add(f"{cc.name}: d^2 = 0, ranks certified, euler = lattice euler",
                co.passed and co.euler == lattice.euler_char(model), co.euler, lattice.euler_char(model))
    w = cfg.w_max if cfg.w_max is not None else 8
    rep.extend(fock.car_check(w, 4))
    bad = []
    for s in range(-6, 7):
        kinds = ["plain"] + (["alternating"] if s % 2 else [])
        for kind in kinds:
            if not fock.mode_relation_check(s, kind, w).passed:
                bad.append((s, kind))
    rep.equal(f"mode relations vanish for |s| <= 6 on w <= {w}", bad, [])
    return rep


TARGETS = {
    "prop1": verify_prop1,
    "lemma1": verify_lemma1,
    "fN": verify_fN,
    "prop2": verify_prop2,
    "prop3": verify_prop3,
    "prop4": verify_prop4,
    "lemma2": verify_lemma2,
    "lemma3": verify_lemma3,
    "prop5": verify_prop5,
    "prop6": verify_prop6,
    "prop7": verify_prop7,
    "prop8": verify_prop8,
    "prop9": verify_prop9,
    "prop10": verify_prop10,
    "jacobi": verify_jacobi,
    "remark": verify_remark,
    "structure": verify_structure,
}


def _run_default(args: tuple[str, int]) -> Report:
    name, seed = args
    return TARGETS[name](RunConfig(target=name, seed=seed))


def run_target(name: str, cfg: RunConfig | None = None) -> Report | list[Report]:
    cfg = cfg or RunConfig(target=name)
    cfg.check_caps()
    if name == "all":
        names = list(TARGETS)
        if cfg.threads > 1:
            with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
                return list(pool.map(_run_default, [(t, cfg.seed) for t in names]))
        return [_run_default((t, cfg.seed)) for t in names]
    if name not in TARGETS:
        raise KeyError(f"unknown target {name!r}; expected one of {sorted(TARGETS) + ['all']}")
    return TARGETS[name](cfg)
