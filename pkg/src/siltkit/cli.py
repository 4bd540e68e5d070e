"""Command-line interface: ``siltkit silt|verify|tors``."""

from __future__ import annotations

import argparse
import json
import sys

from . import fp
from .algebra import build_algebra, load_spec
from .complexes import k0_class
from .errors import SiltkitError
from .homs import cartan_pairing, duality_defect, euler_form, happel_defect
from .silting import check_poset, enumerate_d_silt, to_dot, to_json
from .torsion import (build_engine, check_semidistributive, lattice, lattice_to_json,
                      lattice_violations, sublattice, verify_bijection,
                      verify_characterizations, verify_triangle)


def _config(args) -> dict:
    return {"spec": args.spec, "d": args.d, "prime": args.prime, "seed": args.seed,
            "bfs_cap": args.bfs_cap, "pool_cap": args.pool_cap, "format": args.format}


def _load(args):
    spec = load_spec(args.spec)
    if args.prime is not None:
        spec.p = args.prime
    if not fp.is_prime(spec.p):
        raise SiltkitError(f"{spec.p} is not prime")
    if args.d is None:
        args.d = spec.d or 2
    if args.d < 2:
        raise SiltkitError("d must be at least 2")
    if args.prime is None:
        args.prime = spec.p
    return build_algebra(spec)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(args, msg: str) -> None:
    # keep stdout clean for machine formats
    stream = sys.stdout if (args.out or args.format == "text") else sys.stderr
    print(msg, file=stream)


def cmd_silt(args) -> int:
    alg = _load(args)
    P = enumerate_d_silt(alg, args.d, cap=args.bfs_cap, seed=args.seed)
    if args.format == "dot":
        _emit(args, to_dot(P))
    elif args.format == "json":
        doc = json.loads(to_json(P))
        doc["config"] = _config(args)
        _emit(args, json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        lines = [f"{i}: {M.label()}" for i, M in enumerate(P.elements)]
        lines += [f"{a} -> {b}" for a, b in P.covers]
        _emit(args, "\n".join(lines) + "\n")
    _note(args, f"{len(P)} elements")
    bad = check_poset(P)
    for v in bad:
        print(f"violation: {v}", file=sys.stderr)
    return 1 if bad else 0


def _suite_duality(alg, engine, d) -> dict:
    members = engine.pool.members
    bad = []
    pairs = 0
    for X in members:
        for Y in members:
            pairs += 1
            if duality_defect(X, Y, d):
                bad.append(f"duality defect at ({X.label()}, {Y.label()})")
            if happel_defect(X, Y):
                bad.append(f"Happel defect at ({X.label()}, {Y.label()})")
            if euler_form(X, Y) != cartan_pairing(alg, k0_class(X), k0_class(Y)):
                bad.append(f"Euler form mismatch at ({X.label()}, {Y.label()})")
    return {"pairs": pairs, "violations": bad}


def _suite_lattice(engine) -> dict:
    bad = []
    tables = engine.tables
    L = lattice(tables, [tp.T for tp in engine.tors], "tors")
    bad += [f"tors: {v}" for v in lattice_violations(L)]
    Lc = lattice(tables, [cp.Y for cp in engine.cotors], "cotors")
    bad += [f"cotors: {v}" for v in lattice_violations(Lc)]
    pos = [k for k, tp in enumerate(engine.tors) if tp.flags["positive"]]
    witness = None
    try:
        S = sublattice(L, pos)
        S.kind = "p-tors"
        witness = check_semidistributive(S)
    except SiltkitError as e:
        bad.append(f"p-tors: {e}")
    s_cls = [k for k, tp in enumerate(engine.tors) if tp.flags["s_torsion"]]
    try:
        sublattice(L, s_cls)
        s_closed = True
    except SiltkitError:
        s_closed = False
    return {"tors": len(L), "cotors": len(Lc), "positive": len(pos),
            "semidistributive": witness is None,
            "witness": None if witness is None else list(witness),
            "s_torsion_closed": s_closed, "violations": bad}


def _suite_triangle(engine, P, seed) -> dict:
    r = verify_triangle(engine, P, seed=seed)
    bad = r["violations"] + verify_bijection(engine) + verify_characterizations(engine)
    return {"silting": len(P), "violations": bad}


def cmd_verify(args) -> int:
    alg = _load(args)
    engine = build_engine(alg, args.d, pool_cap=args.pool_cap, seed=args.seed)
    which = ["triangle", "duality", "lattice"] if args.which == "all" else [args.which]
    report = {"config": _config(args), "which": args.which, "suites": {}}
    if "triangle" in which:
        P = enumerate_d_silt(alg, args.d, cap=args.bfs_cap, seed=args.seed)
        report["suites"]["triangle"] = _suite_triangle(engine, P, args.seed)
    if "duality" in which:
        report["suites"]["duality"] = _suite_duality(alg, engine, args.d)
    if "lattice" in which:
        report["suites"]["lattice"] = _suite_lattice(engine)
    ok = all(not s["violations"] for s in report["suites"].values())
    report["status"] = "PASS" if ok else "FAIL"
    if args.format == "json":
        _emit(args, json.dumps(report, sort_keys=True, indent=1) + "\n")
    else:
        lines = []
        for name, s in report["suites"].items():
            lines.append(f"{name}: {'PASS' if not s['violations'] else 'FAIL'}")
            lines += [f"  {v}" for v in s["violations"]]
        lines.append(report["status"])
        _emit(args, "\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_tors(args) -> int:
    alg = _load(args)
    engine = build_engine(alg, args.d, pool_cap=args.pool_cap, seed=args.seed)
    tables = engine.tables
    full = lattice(tables, [tp.T for tp in engine.tors], "tors")
    bad = lattice_violations(full)
    if args.kind == "tors":
        keep = list(range(len(engine.tors)))
    else:
        keep = [k for k, tp in enumerate(engine.tors) if tp.flags["positive"]]
    L = sublattice(full, keep)
    L.kind = args.kind
    witness = check_semidistributive(L)
    flags = [engine.tors[k].flags for k in keep]
    if args.format == "json":
        doc = json.loads(lattice_to_json(engine.pool, L, flags, witness))
        doc["config"] = _config(args)
        _emit(args, json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        lines = [f"{i}: {{{', '.join(engine.pool.labels(m))}}}" for i, m in enumerate(L.elements)]
        lines += [f"{a} -> {b}" for a, b in L.covers]
        lines.append("semidistributive" if witness is None else f"not semidistributive: {witness}")
        _emit(args, "\n".join(lines) + "\n")
    _note(args, f"{len(L)} {args.kind} classes")
    for v in bad:
        print(f"violation: {v}", file=sys.stderr)
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siltkit", description="d-term silting and torsion classes")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="AlgebraSpec file")
    common.add_argument("--d", type=int, default=None, help="window length (default from spec, else 2)")
    common.add_argument("--prime", type=int, default=None, help="field size (default from spec)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--bfs-cap", type=int, default=2000)
    common.add_argument("--pool-cap", type=int, default=40)
    common.add_argument("--format", choices=["dot", "json", "text"], default="text")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    sub = ap.add_subparsers(dest="cmd", required=True)
    sub.add_parser("silt", parents=[common], help="enumerate d-silt and its Hasse diagram")
    v = sub.add_parser("verify", parents=[common], help="run invariant suites")
    v.add_argument("--which", choices=["triangle", "duality", "lattice", "all"], default="all")
    t = sub.add_parser("tors", parents=[common], help="export the torsion-class lattice")
    t.add_argument("--kind", choices=["p-tors", "tors"], default="p-tors")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fn = {"silt": cmd_silt, "verify": cmd_verify, "tors": cmd_tors}[args.cmd]
    try:
        return fn(args)
    except SiltkitError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
