"""Command-line interface.

Subcommands: generate, check, count, canon, encode, hardness, verify,
stats, export-dimacs. Formulas travel in catalog files ("n m | ..." per
line, "-" for stdin); reports come out as text, json, or csv.
"""

import argparse
import csv
import json
import os
import sys
import time

from . import __version__
from . import catalog as ct
from . import encode as en
from . import factor as fc
from . import formula as fm
from . import genesis as gn
from . import hitting as ht
from . import iso
from . import refutation as rf
from . import satgate


def _read_entries(path):
    if path == "-":
        return ct.load(sys.stdin)
    return ct.load(path)


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def _emit(rows, fields, fmt, out):
    """rows: list of dicts. Values None render as '?' in text and csv."""
    if fmt == "json":
        json.dump(rows, out, indent=2, default=str)
        out.write("\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=fields, extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k))
                        for k in fields})
    else:
        for r in rows:
            parts = []
            for k in fields:
                v = r.get(k)
                if v is None:
                    v = "?"
                elif isinstance(v, bool):
                    v = "yes" if v else "no"
                parts.append("%s=%s" % (k, v))
            out.write("  ".join(parts) + "\n")


def _maybe(fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except fm.FormulaError:
        return None


def cmd_generate(args):
    t0 = time.time()
    run = gn.generate_full(args.vars, args.clauses, args.cls, jobs=args.jobs,
                           prune_high=not args.no_prune_high,
                           prune_low=not args.no_prune_low,
                           prune_factor=(None if not args.no_prune_factor
                                         else False),
                           capacity_prune=args.capacity_prune,
                           dedup=args.dedup)
    wall = time.time() - t0
    out, close = _open_out(args.out)
    ct.save(out, run.formulas, n=args.vars,
            comment="%s n=%d m=%d count=%d" % (
                args.cls, args.vars, args.clauses, len(run.formulas)))
    if close:
        out.close()
    if args.manifest:
        manifest = {"task": {"vars": args.vars, "clauses": args.clauses,
                             "class": args.cls, "jobs": args.jobs,
                             "dedup": args.dedup},
                    "count": len(run.formulas),
                    "stats": run.stats,
                    "wall_time": round(wall, 3),
                    "version": __version__}
        with open(args.manifest, "w") as fp:
            json.dump(manifest, fp, indent=2)
            fp.write("\n")
    print("%d formulas (%.1fs)" % (len(run.formulas), wall), file=sys.stderr)
    return 0


def cmd_check(args):
    rows = []
    for i, (n, f) in enumerate(_read_entries(args.file)):
        hit = ht.is_hitting(f)
        if hit:
            unsat = ht.is_unsat_hitting(f)
        else:
            unsat = _maybe(lambda: fm.count_models(f) == 0)
        row = {
            "index": i, "n": n, "m": len(f),
            "key": iso.canonical_key(f),
            "hitting": hit, "unsat": unsat,
            "mu": _maybe(ht.is_mu, f),
            "saturated": _maybe(ht.is_saturated_mu, f),
            "regular": ht.is_regular(f),
            "deficiency": ht.deficiency(f),
            "singular_vars": len(ht.singular_variables(f)),
            "irreducible": _maybe(fc.is_irreducible, f),
            "strongly_irreducible": _maybe(fc.is_strongly_irreducible, f),
            "aut": iso.automorphism_group_order(f),
            "orbits": len(iso.variable_orbits(f)),
        }
        rows.append(row)
    fields = ["index", "n", "m", "hitting", "unsat", "mu", "saturated",
              "regular", "deficiency", "singular_vars", "irreducible",
              "strongly_irreducible", "aut", "orbits", "key"]
    out, close = _open_out(args.out)
    _emit(rows, fields, args.format, out)
    if close:
        out.close()
    return 0


def cmd_count(args):
    rows = []
    for i, (n, f) in enumerate(_read_entries(args.file)):
        if ht.is_hitting(f):
            models = ht.count_models_hitting(f, n)
            method = "hitting"
        else:
            models = _maybe(fm.count_models, f, range(1, n + 1))
            method = "bruteforce" if models is not None else "too-large"
        rows.append({"index": i, "n": n, "m": len(f), "models": models,
                     "unsat": None if models is None else models == 0,
                     "method": method})
    out, close = _open_out(args.out)
    _emit(rows, ["index", "n", "m", "models", "unsat", "method"],
          args.format, out)
    if close:
        out.close()
    return 0


def cmd_canon(args):
    entries = _read_entries(args.file)
    seen = set()
    out, close = _open_out(args.out)
    for n, f in entries:
        key = iso.canonical_key(f)
        if args.dedup and key in seen:
            continue
        seen.add(key)
        g = iso.canonical_form(f)
        if args.format == "json":
            out.write(json.dumps({"key": key, "n": n,
                                  "formula": ct.format_entry(g, n)}) + "\n")
        else:
            out.write("%s %s\n" % (key, ct.format_entry(g, n)))
    if close:
        out.close()
    return 0


def cmd_encode(args):
    entries = _read_entries(args.file)
    if len(entries) != 1:
        print("encode expects exactly one formula, got %d" % len(entries),
              file=sys.stderr)
        return 2
    n, f = entries[0]
    enc = en.Encoding(f, args.steps, reuse=args.reuse,
                      reuse_all_positions=args.reuse_all,
                      symmetry=args.symmetry, ordering=args.ordering)
    out, close = _open_out(args.out)
    out.write("c refutation encoding: m=%d steps=%d flags=%s\n"
              % (enc.m, enc.s, enc.flags))
    if args.varmap:
        for key, v in sorted(enc.pool.items(), key=lambda kv: kv[1]):
            out.write("c var %d = %s\n" % (v, "/".join(map(str, key))))
    out.write("p cnf %d %d\n" % (enc.nvars, len(enc.clauses)))
    for c in enc.clauses:
        out.write(" ".join(map(str, c)) + " 0\n")
    if close:
        out.close()
    return 0


def cmd_hardness(args):
    rows = []
    witness_dir = args.witness
    if witness_dir:
        os.makedirs(witness_dir, exist_ok=True)
    status = 0
    for i, (n, f) in enumerate(_read_entries(args.file)):
        rec = en.hardness(f, solver=args.solver,
                          reuse=not args.no_reuse,
                          reuse_all_positions=args.reuse_all,
                          symmetry=not args.no_symmetry,
                          ordering=args.ordering,
                          max_steps=args.max_steps,
                          max_conflicts=args.budget,
                          timeout=args.timeout)
        sat_time = rec.probes[-1]["time"] if rec.probes else 0.0
        unsat_time = rec.probes[-2]["time"] if len(rec.probes) > 1 else 0.0
        cls = _classify(f)
        rows.append({"key": rec.formula_key, "n": n, "m": len(f),
                     "class": cls, "h": rec.h, "engine": rec.engine,
                     "sat_time": round(sat_time, 4),
                     "unsat_time": round(unsat_time, 4),
                     "copies": iso.count_labeled_copies(f, n)})
        if rec.h is None:
            status = 1
        elif witness_dir:
            path = os.path.join(witness_dir, "%03d.proof" % i)
            with open(path, "w") as fp:
                fp.write(rec.witness.to_text())
    out, close = _open_out(args.out)
    _emit(rows, ["key", "n", "m", "class", "h", "engine", "sat_time",
                 "unsat_time", "copies"], args.format, out)
    if close:
        out.close()
    return status


def _classify(f):
    if not ht.is_hitting(f):
        return "mu" if _maybe(ht.is_mu, f) else "cnf"
    if not ht.is_unsat_hitting(f):
        return "hitting"
    if not ht.is_regular(f):
        return "uh"
    if _maybe(fc.is_irreducible, f):
        return "iuh"
    return "ruh"


def cmd_verify(args):
    entries = _read_entries(args.formula)
    if args.index is not None:
        if not 0 <= args.index < len(entries):
            print("index %d out of range, catalog has %d formulas"
                  % (args.index, len(entries)), file=sys.stderr)
            return 2
        entries = entries[args.index:args.index + 1]
    if len(entries) != 1:
        print("verify expects exactly one formula, got %d (use --index)"
              % len(entries), file=sys.stderr)
        return 2
    n, f = entries[0]
    with open(args.proof) as fp:
        text = fp.read()
    try:
        dag = rf.RefutationDag.from_text(text)
        dag.validate(axioms=f)
    except rf.ProofError as e:
        print("invalid: %s" % e)
        return 1
    print("valid  length=%d  read_once=%s"
          % (len(dag), "yes" if dag.is_read_once() else "no"))
    return 0


def cmd_stats(args):
    cells = {}
    for n, f in _read_entries(args.file):
        cells.setdefault((n, len(f)), []).append(f)
    rows = []
    status = 0
    for (n, m), formulas in sorted(cells.items()):
        hs = []
        copies = []
        for f in formulas:
            rec = en.hardness(f, solver=args.solver,
                              max_conflicts=args.budget,
                              timeout=args.timeout)
            if rec.h is None:
                status = 1
            hs.append(rec.h)
            copies.append(iso.count_labeled_copies(f, n))
        known = [h for h in hs if h is not None]
        max_h = max(known) if known else None
        weighted = None
        if known and len(known) == len(hs):
            weighted = sum(h * c for h, c in zip(hs, copies)) / sum(copies)
        rows.append({"n": n, "m": m, "total": len(formulas),
                     "max_h": max_h,
                     "attaining": sum(1 for h in hs if h == max_h)
                     if max_h is not None else None,
                     "avg_h_weighted": round(weighted, 3)
                     if weighted is not None else None,
                     "unresolved": sum(1 for h in hs if h is None)})
    out, close = _open_out(args.out)
    _emit(rows, ["n", "m", "total", "max_h", "attaining", "avg_h_weighted",
                 "unresolved"], args.format, out)
    if close:
        out.close()
    return status


def cmd_export_dimacs(args):
    entries = _read_entries(args.file)
    if args.dir:
        os.makedirs(args.dir, exist_ok=True)
        for i, (n, f) in enumerate(entries):
            text, _ = fm.to_dimacs(f, n)
            with open(os.path.join(args.dir, "%04d.cnf" % i), "w") as fp:
                fp.write(text)
        print("%d files in %s" % (len(entries), args.dir), file=sys.stderr)
        return 0
    if len(entries) != 1:
        print("without --dir, export-dimacs expects exactly one formula",
              file=sys.stderr)
        return 2
    n, f = entries[0]
    text, _ = fm.to_dimacs(f, n)
    out, close = _open_out(args.out)
    out.write(text)
    if close:
        out.close()
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="hitkit",
        description="generate, classify and measure hitting formulas")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes for generation")
    p.add_argument("--budget", type=int, default=None,
                   help="conflict budget per solver call (builtin engine)")
    p.add_argument("--timeout", type=float, default=None,
                   help="time limit per solver call, seconds")
    p.add_argument("--solver", default=None,
                   help="'builtin' or an external solver command"
                        " (default: vsat if found, else builtin)")
    p.add_argument("--format", choices=("text", "json", "csv"),
                   default="text", help="report format")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="enumerate formulas of a class")
    g.add_argument("--vars", type=int, required=True)
    g.add_argument("--clauses", type=int, required=True)
    g.add_argument("--class", dest="cls", choices=gn.KINDS, default="iuh")
    g.add_argument("--out", default="-")
    g.add_argument("--manifest", default=None, help="write run metadata JSON")
    g.add_argument("--dedup", choices=("orbit", "seen"), default="orbit")
    g.add_argument("--no-prune-high", action="store_true")
    g.add_argument("--no-prune-low", action="store_true")
    g.add_argument("--no-prune-factor", action="store_true")
    g.add_argument("--capacity-prune", action="store_true")
    g.set_defaults(fn=cmd_generate)

    c = sub.add_parser("check", help="classify each formula")
    c.add_argument("file", nargs="?", default="-")
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_check)

    c = sub.add_parser("count", help="exact model count per formula")
    c.add_argument("file", nargs="?", default="-")
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_count)

    c = sub.add_parser("canon", help="canonical form and key per formula")
    c.add_argument("file", nargs="?", default="-")
    c.add_argument("--out", default="-")
    c.add_argument("--dedup", action="store_true",
                   help="drop isomorphic duplicates")
    c.set_defaults(fn=cmd_canon)

    c = sub.add_parser("encode",
                       help="DIMACS encoding of 'has an s-step refutation'")
    c.add_argument("file", nargs="?", default="-")
    c.add_argument("--steps", type=int, required=True)
    c.add_argument("--reuse", action="store_true")
    c.add_argument("--reuse-all", action="store_true")
    c.add_argument("--symmetry", action="store_true")
    c.add_argument("--ordering", action="store_true")
    c.add_argument("--varmap", action="store_true",
                   help="comment lines naming each variable")
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_encode)

    c = sub.add_parser("hardness", help="shortest-refutation length")
    c.add_argument("file", nargs="?", default="-")
    c.add_argument("--no-reuse", action="store_true")
    c.add_argument("--reuse-all", action="store_true")
    c.add_argument("--no-symmetry", action="store_true")
    c.add_argument("--ordering", action="store_true")
    c.add_argument("--max-steps", type=int, default=None)
    c.add_argument("--witness", default=None,
                   help="directory for witness proofs")
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_hardness)

    c = sub.add_parser("verify", help="check a refutation against a formula")
    c.add_argument("formula")
    c.add_argument("proof")
    c.add_argument("--index", type=int, default=None,
                   help="row of the catalog to check, for multi-formula files")
    c.set_defaults(fn=cmd_verify)

    c = sub.add_parser("stats", help="per-cell hardness summary of a catalog")
    c.add_argument("file", nargs="?", default="-")
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_stats)

    c = sub.add_parser("export-dimacs", help="formulas as DIMACS files")
    c.add_argument("file", nargs="?", default="-")
    c.add_argument("--dir", default=None)
    c.add_argument("--out", default="-")
    c.set_defaults(fn=cmd_export_dimacs)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (fm.FormulaError, en.EncodingError, rf.ProofError,
            satgate.SolverError, ValueError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
