"""Command line: ``ladderalg verify TARGET`` and ``ladderalg emit COMMAND``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on usage
errors (unknown names, caps exceeded without ``--force``).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import algebra, fock, homology, lattice, qtseries, semiinf
from .qtseries import Window, format_series
from .report import Report
from .verify import TARGETS, CapExceeded, RunConfig, run_target

SCHEMA = 1
EMIT_COMMANDS = ("statsum", "euler", "table", "dims", "cohomology", "character")
LATTICE_ALIASES = {"tri3": "cyclic_tri3", "twisted": "twisted_square"}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model or relation kind")
    common.add_argument("--n", type=int, help="number of columns (or top index for loops)")
    common.add_argument("--m", type=int, help="rows of the m-leg ladder")
    common.add_argument("--N", type=int, dest="N", help="extreme-vector index / floor of F_N")
    common.add_argument("--qmax", type=int, dest="q_max")
    common.add_argument("--tmin", type=int, dest="t_min")
    common.add_argument("--tmax", type=int, dest="t_max")
    common.add_argument("--t", type=int, dest="t_sym", help="shorthand for --tmin -T --tmax T")
    common.add_argument("--wmax", type=int, dest="w_max")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text", dest="fmt")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--force", action="store_true", help="override size caps")
    common.add_argument("--out", help="write output to FILE")

    p = argparse.ArgumentParser(prog="ladderalg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a verification target")
    v.add_argument("target", choices=sorted(TARGETS) + ["all"])
    e = sub.add_parser("emit", parents=[common], help="print a table, series or report")
    e.add_argument("what", choices=EMIT_COMMANDS)
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    t_min, t_max = ns.t_min, ns.t_max
    if ns.t_sym is not None:
        t_min, t_max = -ns.t_sym, ns.t_sym
    return RunConfig(command=ns.command, target=getattr(ns, "target", None), model=ns.model, n=ns.n,
                     m=ns.m, N=ns.N, q_max=ns.q_max, t_min=t_min, t_max=t_max, w_max=ns.w_max,
                     fmt=ns.fmt, seed=ns.seed, threads=ns.threads, force=ns.force, out=ns.out)


def _dump(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, indent=2) + "\n"


# ---------------------------------------------------------------- verify


def _verify(cfg: RunConfig) -> tuple[str, int]:
    res = run_target(cfg.target, cfg)
    reports: list[Report] = res if isinstance(res, list) else [res]
    ok = all(r.passed for r in reports)
    if cfg.fmt == "json":
        return _dump({"command": "verify", "target": cfg.target, "passed": ok,
                      "reports": [r.to_json() for r in reports]}), 0 if ok else 1
    lines = [f"# schema {SCHEMA}: verify {cfg.target}"]
    for r in reports:
        lines.extend(r.lines())
    n_fail = sum(len(r.failures()) for r in reports)
    n_known = sum(len(r.known_failures()) for r in reports)
    n_checks = sum(len(r.checks) for r in reports)
    lines.append(f"{'OK' if ok else 'FAILED'}: {n_checks} checks, {n_fail} failures, {n_known} known issues")
    return "\n".join(lines) + "\n", 0 if ok else 1


# ---------------------------------------------------------------- emit


def _lattice_model(cfg: RunConfig) -> lattice.LatticeModel:
    kind = LATTICE_ALIASES.get(cfg.model or "cyclic_tri3", cfg.model or "cyclic_tri3")
    return lattice.build_model(kind, cfg.n or 1, cfg.m if kind == "mleg" else None)


def _series_out(cfg: RunConfig, name: str, s, extra: dict | None = None) -> str:
    if cfg.fmt == "json":
        return _dump({"command": name, **(extra or {}), "series": s.to_json()})
    if cfg.fmt == "csv":
        return f"# schema {SCHEMA}: {name}\n" + s.to_csv()
    text = [f"# schema {SCHEMA}: {name}"]
    text += [f"{k}: {v}" for k, v in (extra or {}).items() if not isinstance(v, (list, dict))]
    for t in range(s.window.t_min, s.window.t_max + 1):
        col = s.column(t)
        if col:
            text.append(f"t^{t}: " + " ".join(f"{c}q^{q}" for q, c in sorted(col.items())))
    return "\n".join(text) + "\n"


def _emit_statsum(cfg: RunConfig) -> str:
    model = cfg.model or "square"
    if model not in ("square", "tri3"):
        raise ValueError("statsum models: square, tri3")
    q = cfg.q(10)
    t_lo, t_hi = cfg.t_window(-3, 3)
    if cfg.N is not None:
        counts = semiinf.sector_counts(model, q, (t_lo, t_hi), hole_floor=cfg.N)
        closed = qtseries.F_N_closed(cfg.N, Window(q, t_lo, t_hi)) if model == "square" else None
    else:
        counts = semiinf.sector_counts(model, q, (t_lo, t_hi))
        closed = qtseries.F_closed(Window(q, t_lo, t_hi), model)
    s = qtseries.LaurentQT({(U, C): c for (C, U), c in counts.items()}, Window(q, t_lo, t_hi))
    extra = {"model": model, "floor": cfg.N, "matches_closed_form": None if closed is None else s == closed}
    if cfg.fmt == "json":
        extra["sectors"] = semiinf.sector_json(counts)
    return _series_out(cfg, "statsum", s, extra)


def _emit_euler(cfg: RunConfig) -> str:
    model = _lattice_model(cfg)
    counts = lattice.independence_counts(model)
    g = lattice.graded_euler(model, lattice.weight_system_f(model))
    data = {"command": "euler", "model": model.kind, "n": model.n, "m": model.m,
            "independence_counts": counts, "euler": lattice.euler_char(model),
            "graded_euler_f": [{"q": q, "c": c} for (q, _), c in sorted(g.items())]}
    if cfg.fmt == "json":
        return _dump(data)
    if cfg.fmt == "csv":
        return f"# schema {SCHEMA}: euler\nsize,count\n" + "".join(f"{i},{c}\n" for i, c in enumerate(counts))
    return (f"# schema {SCHEMA}: euler\nmodel: {model.kind} n={model.n} m={model.m}\n"
            f"independence counts: {counts}\neuler: {data['euler']}\n"
            f"graded euler (f): {format_series(g, 50)}\n")


def _emit_table(cfg: RunConfig) -> str:
    model = _lattice_model(cfg)
    tab = lattice.weight_table(model, lattice.weight_system_f(model))
    if cfg.fmt == "csv":
        return f"# schema {SCHEMA}: table {model.kind} n={model.n}\n" + tab.to_csv()
    if cfg.fmt == "json":
        return _dump({"command": "table", "model": model.kind, "n": model.n, "m": model.m, **tab.to_json()})
    cols = tab.max_particles + 1
    lines = [f"# schema {SCHEMA}: table {model.kind} n={model.n}", "weight | " + " ".join(f"{j:>5}" for j in range(cols))]
    for w in tab.weights:
        lines.append(f"{w:>6} | " + " ".join(f"{tab.cells.get((w, j), ''):>5}" for j in range(cols)))
    return "\n".join(lines) + "\n"


def _emit_dims(cfg: RunConfig) -> str:
    kind = cfg.model or "deformed_square"
    n = cfg.n or 1
    if kind in algebra.KINDS:
        gq = algebra.cached_quotient(kind, algebra.window_for(n), "echelon" if n <= 7 else "rewrite")
        data = {"command": "dims", **gq.to_json()}
    else:
        model = _lattice_model(cfg)
        data = {"command": "dims", "kind": model.kind, "n": model.n,
                "dims": lattice.independence_counts(model)}
        data["total"] = sum(data["dims"])
    if cfg.fmt == "json":
        return _dump(data)
    if cfg.fmt == "csv":
        return f"# schema {SCHEMA}: dims\ndegree,dim\n" + "".join(f"{d},{v}\n" for d, v in enumerate(data["dims"]))
    return f"# schema {SCHEMA}: dims {data['kind']} n={n}\ndims: {tuple(data['dims'])}\ntotal: {data['total']}\n"


def _emit_cohomology(cfg: RunConfig) -> str:
    kind = cfg.model or "deformed_square"
    if kind == "deformed_square":
        cc = homology.build_deformed_complex(cfg.n or 1)
    else:
        cc = homology.build_fermion_complex(_lattice_model(cfg))
    co = homology.cohomology(cc)
    if cfg.fmt == "json":
        return _dump({"command": "cohomology", **co.to_json()})
    if cfg.fmt == "csv":
        return (f"# schema {SCHEMA}: cohomology {co.name}\ndegree,dim,rank,kernel,h\n"
                + "".join(f"{d},{co.dims[d]},{co.ranks[d]},{co.kernels[d]},{co.h[d]}\n" for d in range(len(co.dims))))
    return (f"# schema {SCHEMA}: cohomology {co.name}\ndims: {co.dims}\nh: {co.h}\neuler: {co.euler}\n"
            + "".join(f"[{'PASS' if c.ok else 'FAIL'}] {c.label}\n" for c in co.checks))


def _emit_character(cfg: RunConfig) -> str:
    if cfg.model == "fock":
        w = cfg.w_max if cfg.w_max is not None else 8
        t_lo, t_hi = cfg.t_window(-3, 3)
        return _series_out(cfg, "character", fock.character(w, (t_lo, t_hi)), {"module": "fock", "w_max": w})
    N = cfg.N if cfg.N is not None else 0
    t_lo, t_hi = cfg.t_window(-3, 3)
    s = algebra.upsilon_character(N, Window(cfg.q(8), t_lo, t_hi))
    return _series_out(cfg, "character", s, {"module": "extreme_vector", "N": N})


EMITTERS = {"statsum": _emit_statsum, "euler": _emit_euler, "table": _emit_table, "dims": _emit_dims,
            "cohomology": _emit_cohomology, "character": _emit_character}


def main(argv: Sequence[str] | None = None) -> int:
    ns = _parser().parse_args(argv)
    cfg = _config(ns)
    try:
        cfg.check_caps()
        if ns.command == "verify":
            text, status = _verify(cfg)
        else:
            text, status = EMITTERS[ns.what](cfg), 0
    except (CapExceeded, ValueError, KeyError) as exc:
        print(f"ladderalg: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
