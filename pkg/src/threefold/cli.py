"""Command-line interface: ``threefold <command> ...``.

Exit codes: 0 success, 2 usage or unknown name, 3 verification failure,
4 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import catalog, seifert
from .complex import (
    ComplexError,
    SimplicialComplex,
    build_complex,
    f_vector,
    format_tri,
    read_tri,
    verify_closed_3_manifold,
)
from .flips import ReduceParams, reduce_with_log
from .homology import homology, parse_homology
from .ledger import known_names, rows_for, tables

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_INTERNAL = 0, 2, 3, 4

log = logging.getLogger("threefold")


class Failure(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class Output:
    def __init__(self, machine: bool, stream=None):
        self.machine = machine
        self.stream = stream or sys.stdout

    def line(self, text: str = "") -> None:
        if not self.machine:
            print(text, file=self.stream)

    def record(self, kind: str, name: str, K: SimplicialComplex | None = None, *, homology_groups=None,
               orientable=None, geometry=None, notes=()) -> None:
        if not self.machine:
            return
        rec = {
            "kind": kind,
            "name": name,
            "f_vector": list(f_vector(K)) if K is not None else None,
            "homology": homology_groups.as_record() if homology_groups is not None else None,
            "orientable": orientable,
            "geometry": geometry,
            "notes": list(notes),
        }
        print(json.dumps(rec, ensure_ascii=False), file=self.stream)


def _fmt_f(K) -> str:
    return "(" + ",".join(map(str, f_vector(K))) + ")"


def _load_complex(arg: str) -> tuple[str, SimplicialComplex]:
    """A .tri path, or else a catalog name."""
    p = Path(arg)
    if p.exists():
        try:
            return p.name, read_tri(p)
        except ComplexError as exc:
            raise Failure(f"{arg}: {exc}", EXIT_USAGE)
    return arg, _build(arg).complex


def _build(name: str) -> catalog.Built:
    try:
        return catalog.build(name)
    except catalog.UnknownName as exc:
        raise Failure(str(exc), EXIT_USAGE)
    except ValueError as exc:
        if isinstance(exc, ComplexError):
            raise
        raise Failure(str(exc), EXIT_USAGE)


# ---------------------------------------------------------------- commands

def cmd_build(args, out: Output) -> int:
    b = _build(args.name)
    K = b.complex
    rep = verify_closed_3_manifold(K)
    H = homology(K)
    if args.output:
        Path(args.output).write_text(format_tri(K, [b.name, "f-vector " + _fmt_f(K)]), encoding="utf-8")
    out.line(f"{b.name}: f-vector {_fmt_f(K)}")
    out.line(f"orientable: {'yes' if rep.orientable else 'no'}")
    out.line(f"homology: {H}")
    for n in b.notes:
        out.line(f"note: {n}")
    if args.output:
        out.line(f"wrote {args.output}")
    out.record("build", b.name, K, homology_groups=H, orientable=rep.orientable, notes=b.notes)
    if not rep.ok:
        out.line(str(rep))
        return EXIT_VERIFY
    if b.homology is not None and H != parse_homology(b.homology):
        out.line(f"expected homology {b.homology}")
        return EXIT_VERIFY
    return EXIT_OK


def _reduce_job(facets, params: ReduceParams):
    res = reduce_with_log(build_complex(facets), params)
    return params.seed, sorted(res.complex.facets), [r.as_record() for r in res.log], res.rounds


def cmd_reduce(args, out: Output) -> int:
    name, K = _load_complex(args.file)
    rep = verify_closed_3_manifold(K)
    if not rep.ok:
        out.line(str(rep))
        out.record("reduce", name, K, notes=[str(rep)])
        return EXIT_VERIFY
    heat = Fraction(args.heat)
    seeds = [args.seed + i for i in range(max(1, args.race))]
    jobs = [ReduceParams(seed=s, max_rounds=args.rounds, heat=heat, stall_limit=args.stall) for s in seeds]
    facets = sorted(K.facets)
    if len(jobs) == 1:
        results = [_reduce_job(facets, jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=min(len(jobs), args.workers or len(jobs))) as ex:
            results = list(ex.map(_reduce_job, [facets] * len(jobs), jobs))
    outcomes = []
    for seed, fac, rec, rounds in results:
        R = build_complex(fac)
        outcomes.append((f_vector(R)[0], seed, R, rec, rounds))
    outcomes.sort(key=lambda t: (t[0], t[1]))
    f0, seed, R, rec, rounds = outcomes[0]
    target = Path(args.output) if args.output else Path(Path(args.file).stem + "_reduced.tri")
    target.write_text(format_tri(R, [f"reduced from {name}", f"seed {seed}, rounds {rounds}",
                                     "f-vector " + _fmt_f(R)]), encoding="utf-8")
    log_path = target.with_suffix(target.suffix + ".log")
    with log_path.open("w", encoding="utf-8") as fh:
        for r in rec:
            fh.write(json.dumps(r) + "\n")
    if len(outcomes) > 1:
        for o in sorted(outcomes, key=lambda t: t[1]):
            out.line(f"seed {o[1]}: f-vector {_fmt_f(o[2])}")
    out.line(f"{name}: {_fmt_f(K)} -> {_fmt_f(R)} (seed {seed}, {rounds} rounds)")
    out.line(f"wrote {target} and {log_path}")
    out.record("reduce", name, R, orientable=rep.orientable, notes=[f"seed {seed}", f"rounds {rounds}"])
    return EXIT_OK


def spherical_or_known_name(si: seifert.SeifertInvariants) -> str | None:
    si = seifert.normalize(si)
    geo = seifert.geometry(si)
    known = known_names().get(si)
    if geo in (seifert.Geometry.S3, seifert.Geometry.S2xR):
        name = seifert.recognize_spherical(si)
        if ("family" in name or name.startswith("generalized")) and known:
            return known
        canon = seifert.canonical_name(name)
        return name if canon == name else f"{name} = {canon}"
    if known is None and si.orientable:
        known = known_names().get(seifert.reverse_orientation(si))
    return known


def cmd_classify(args, out: Output) -> int:
    try:
        raw = seifert.parse(args.fibration)
        si = seifert.normalize(raw)
    except seifert.SeifertSyntaxError as exc:
        print(f"error: {exc}\n{exc.caret()}", file=sys.stderr)
        return EXIT_USAGE
    except seifert.SeifertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    e = seifert.euler_number(si)
    chi = seifert.orbifold_euler_characteristic(si)
    geo = seifert.geometry(si)
    name = spherical_or_known_name(si)
    small = seifert.is_small(si)
    out.line(f"normalized: {si}")
    out.line(f"e: {e}")
    out.line(f"chi: {chi}")
    out.line(f"geometry: {geo}" + (f"; name: {name}" if name else ""))
    out.line(f"small: {'yes' if small else 'no'}")
    out.record("classify", str(si), geometry=str(geo), orientable=si.orientable,
               notes=[f"e={e}", f"chi={chi}", f"small={small}"] + ([f"name={name}"] if name else []))
    return EXIT_OK


def cmd_homology(args, out: Output) -> int:
    name, K = _load_complex(args.target)
    H = homology(K)
    out.line(f"{name}: {H}")
    out.record("homology", name, K, homology_groups=H)
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    name, K = _load_complex(args.target)
    rep = verify_closed_3_manifold(K)
    out.line(f"{name}: {rep}")
    out.record("verify", name, K, orientable=rep.orientable, notes=[] if rep.ok else [str(rep)])
    return EXIT_OK if rep.ok else EXIT_VERIFY


# ----------------------------------------------------------- verify-tables

def _check_row_build(row, record_chase: bool) -> list[str]:
    problems = []
    b = catalog.build(row.build)
    K = b.complex
    rep = verify_closed_3_manifold(K)
    if not rep.ok:
        problems.append("not a manifold")
    if row.orientable is not None and rep.orientable != row.orientable:
        problems.append("orientability")
    if row.homology is not None and homology(K) != parse_homology(row.homology):
        problems.append(f"homology {homology(K)} != {row.homology}")
    if record_chase and row.record is not None:
        R = reduce_with_log(K, ReduceParams(seed=0)).complex
        gap = f_vector(R)[0] - row.record[0]
        log.info("%s: reduced to %s, record %s (distance %d)", row.name, _fmt_f(R), row.record, gap)
        if gap > 0:
            problems.append(f"record chase: f0 {f_vector(R)[0]} vs {row.record[0]}")
    return problems


def _check_row_geometry(row) -> list[str]:
    problems = []
    for s in row.all_fibrations():
        g = seifert.geometry(seifert.parse(s))
        if str(g) != row.geometry:
            problems.append(f"{s} has geometry {g}")
    return problems


def _check_gluings(row) -> list[str]:
    from .constructions import VertexAutomorphism, klein_bottle_8_20, mapping_torus, parse_cycles

    K = klein_bottle_8_20()
    problems = []
    for g in row.gluings:
        M = mapping_torus(K, VertexAutomorphism.from_cycles(K, parse_cycles(g)))
        if homology(M) != parse_homology(row.homology):
            problems.append(f"gluing {g}")
    return problems


def _table1_sweep() -> list[str]:
    seen = set()
    count = 0
    for si in seifert.sweep(max_alpha=6, max_b=3, max_g=2):
        seen.add(seifert.geometry(si))
        count += 1
    six = {seifert.Geometry.S2xR, seifert.Geometry.E3, seifert.Geometry.H2xR,
           seifert.Geometry.S3, seifert.Geometry.NIL, seifert.Geometry.SL2}
    log.info("table 1 sweep: %d fibrations", count)
    return [] if seen == six else [f"geometries reached: {sorted(map(str, seen))}"]


def _lens_examples() -> list[str]:
    problems = []
    if seifert.lens_homotopy_equivalent(5, 1, 2):
        problems.append("L(5,1) ~ L(5,2)")
    if not seifert.lens_homotopy_equivalent(7, 1, 2) or seifert.lens_homeomorphic(7, 1, 2):
        problems.append("L(7,1) vs L(7,2)")
    return problems


def cmd_verify_tables(args, out: Output) -> int:
    wanted = [str(args.table)] if args.table is not None else ["1"] + tables()
    failures = 0
    checks = []
    if "1" in wanted:
        checks.append(("1", "six-geometry sweep", _table1_sweep))
    for t in wanted:
        if t == "1":
            continue
        rows = rows_for(t)
        if not rows:
            raise Failure(f"no ledger rows for table {t}; tables are 1, {', '.join(tables())}", EXIT_USAGE)
        for row in rows:
            if row.gluings:
                checks.append((t, row.display + " gluings", lambda row=row: _check_gluings(row)))
            elif row.build:
                checks.append((t, row.display, lambda row=row: _check_row_build(row, args.record_chase)))
            if row.geometry and row.all_fibrations():
                checks.append((t, row.display + " geometry", lambda row=row: _check_row_geometry(row)))
            if not row.build and not row.gluings and not row.all_fibrations():
                out.line(f"[REF ] table {t:<10} {row.display}: reference data only")
        if t == "4":
            checks.append((t, "lens equivalences", _lens_examples))
    for t, label, fn in checks:
        problems = fn()
        ok = not problems
        failures += not ok
        out.line(f"[{'PASS' if ok else 'FAIL'}] table {t:<10} {label}" + ("" if ok else ": " + "; ".join(problems)))
        out.record("verify-tables", label, notes=[f"table {t}", "pass" if ok else "fail"] + problems)
    out.line(f"{len(checks) - failures}/{len(checks)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


# ------------------------------------------------------------------- main

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="threefold", description="Triangulated 3-manifolds and Seifert invariants.")
    p.add_argument("--machine", action="store_true", help="emit one JSON record per result line")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a catalog manifold")
    b.add_argument("name", help="e.g. S2xS1, RP3, L(5,2), P(3), G6, B1, Sigma2_x_S1")
    b.add_argument("-o", "--output", help="write the triangulation as .tri")
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("reduce", help="shrink a triangulation with bistellar flips")
    r.add_argument("file", help=".tri file or catalog name")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--rounds", type=int, default=ReduceParams.max_rounds)
    r.add_argument("--heat", default=str(ReduceParams.heat), help="rational in [0,1), e.g. 1/2")
    r.add_argument("--stall", type=int, default=ReduceParams.stall_limit, help="rounds without progress before reheating")
    r.add_argument("--race", type=int, default=1, metavar="K", help="run K seeds and keep the best")
    r.add_argument("--workers", type=int, default=None)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)

    c = sub.add_parser("classify", help="classify a Seifert fibration string")
    c.add_argument("fibration", help='e.g. "{Oo,0|-1;(2,1),(3,1),(5,1)}"')
    c.set_defaults(func=cmd_classify)

    t = sub.add_parser("verify-tables", help="replay the manifold tables")
    t.add_argument("--table", help="1..8, nil or h2xr")
    t.add_argument("--record-chase", action="store_true", help="also reduce and compare with record f-vectors")
    t.set_defaults(func=cmd_verify_tables)

    h = sub.add_parser("homology", help="integer homology of a .tri file or catalog name")
    h.add_argument("target")
    h.set_defaults(func=cmd_homology)

    v = sub.add_parser("verify", help="check the closed 3-manifold property")
    v.add_argument("target")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Output(args.machine)
    try:
        if args.command == "reduce":
            try:
                Fraction(args.heat)
                ReduceParams(max_rounds=args.rounds, heat=Fraction(args.heat), stall_limit=args.stall)
            except (ValueError, ZeroDivisionError) as exc:
                parser.error(f"bad reduce parameters: {exc}")
        return args.func(args, out)
    except Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ComplexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
