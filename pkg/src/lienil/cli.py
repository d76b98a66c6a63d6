"""Command-line front end.

Exit codes: 0 success, 1 a verified property failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from lienil.algebra import (
    AlgebraError,
    NotSplitLocalError,
    PeirceRefusedError,
    TooLargeError,
    conjugate,
    peirce_decompose,
    restrict_to_image,
    triangularize_local,
)
from lienil.bounds import (
    ENUMERATION_LIMIT,
    CompositionVector,
    composition_count,
    balanced_composition,
    deficiency,
    equality_region,
    floor_bound,
    m_bruteforce,
    m_closed_form,
)
from lienil.chain import (
    ChainError,
    bound_check,
    complement_sensitivity_experiment,
    compute_chain,
    direct_bound_check,
    verify_chain,
)
from lienil.extremal import type_algebra_dimension, type_generators
from lienil.fields import FieldError, FieldSpec
from lienil.fuzz import fuzz
from lienil.io import AlgebraDocument, DocumentError

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


def _load(path: str) -> AlgebraDocument:
    try:
        return AlgebraDocument.load(path)
    except DocumentError as exc:
        raise InputError(f"{path}: {exc}") from None


def _analyze_factor(r):
    """Bound report for a local factor, triangularizing when possible."""
    if r.in_constant_diagonal_upper():
        return bound_check(r)
    try:
        u = triangularize_local(r)
    except NotSplitLocalError:
        return direct_bound_check(r)
    return bound_check(conjugate(r, u))


def cmd_analyze(args) -> int:
    doc = _load(args.input)
    r = doc.to_algebra()
    notes = []
    if r.in_constant_diagonal_upper():
        report = bound_check(r)
    elif args.triangularize:
        try:
            u = triangularize_local(r)
            report = bound_check(conjugate(r, u))
            notes.append("triangularized by a change of basis")
        except NotSplitLocalError as exc:
            report = direct_bound_check(r)
            notes.append(f"{exc}; used the direct check")
    else:
        report = direct_bound_check(r)
    report.notes[:0] = notes
    out = report.to_json()
    out["label"] = doc.label
    if args.peirce:
        try:
            factors = peirce_decompose(r)
            out["peirce"] = [
                {"rank": f.rank, "corner_dim": f.corner.dim,
                 "report": _analyze_factor(restrict_to_image(r, f.idempotent)).to_json()}
                for f in factors
            ]
            if sum(f.rank for f in factors) != r.n:
                report.notes.append("factor ranks do not sum to n")
        except PeirceRefusedError as exc:
            out["peirce"] = {"refused": str(exc)}
        except (TooLargeError, FieldError) as exc:
            out["peirce"] = {"skipped": str(exc)}
    _emit(json.dumps(out, indent=1), args.output)
    bad = report.violations()
    for f in out.get("peirce", []) if isinstance(out.get("peirce"), list) else []:
        if not f["report"]["all_passed"]:
            bad.append("peirce factor")
    if bad:
        print(f"BOUND VIOLATION ({', '.join(bad)}): a proven bound failed, so the input or the code is wrong", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_mtable(args) -> int:
    if args.lmax < 1 or args.nmax < 1:
        raise InputError("--lmax and --nmax must be positive")
    if args.check_bruteforce:
        worst = max(composition_count(ell, args.nmax) for ell in range(1, args.lmax + 1))
        if worst > ENUMERATION_LIMIT:
            raise InputError(f"brute-force check needs {worst} compositions, over the limit {ENUMERATION_LIMIT}")
    lines = ["l\\n\t" + "\t".join(str(n) for n in range(1, args.nmax + 1))]
    mismatches = []
    for ell in range(1, args.lmax + 1):
        cells = []
        for n in range(1, args.nmax + 1):
            v = m_closed_form(ell, n)
            if args.check_bruteforce:
                try:
                    b, _ = m_bruteforce(ell, n)
                except ValueError as exc:
                    raise InputError(str(exc)) from None
                if b != v:
                    mismatches.append((ell, n, v, b))
            cells.append(str(v))
        lines.append(f"{ell}\t" + "\t".join(cells))
    _emit("\n".join(lines), args.output)
    if mismatches:
        for ell, n, v, b in mismatches:
            print(f"MISMATCH M({ell},{n}): closed form {v}, brute force {b}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_region(args) -> int:
    if args.lmax < 1 or args.nmax < 1:
        raise InputError("--lmax and --nmax must be positive")
    lines = ["l\tn\tr\tD\tpredicate\tdirect\tM\tfloor"]
    disagree = 0
    for ell in range(1, args.lmax + 1):
        for n in range(ell, args.nmax + 1):
            r = n % ell
            pred = equality_region(ell, n)
            m, fb = m_closed_form(ell, n), floor_bound(ell, n)
            direct = m == fb
            disagree += pred != direct
            lines.append("\t".join([str(ell), str(n), str(r), str(deficiency(r, ell)),
                                    "equality" if pred else "strict", "equality" if direct else "strict",
                                    str(m), str(fb)]))
    _emit("\n".join(lines), args.output)
    if disagree:
        print(f"{disagree} cell(s) where the predicate disagrees with the direct test", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_construct(args) -> int:
    try:
        field = FieldSpec.parse(args.field)
    except FieldError as exc:
        raise InputError(str(exc)) from None
    try:
        if args.type is not None:
            k = CompositionVector.parse(args.type)
        else:
            ell, n = args.balanced
            k = balanced_composition(ell, n)
        gens = type_generators(field, k)
        expected = type_algebra_dimension(k)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    doc = AlgebraDocument(field, k.n, gens, label=f"type {','.join(map(str, k.parts))}")
    _emit(doc.dumps(), args.output)
    print(f"type {k.parts}: {len(gens)} generators, dimension {expected}", file=sys.stderr)
    return EXIT_OK


def cmd_fuzz(args) -> int:
    try:
        field = FieldSpec.parse(args.field)
    except FieldError as exc:
        raise InputError(str(exc)) from None
    try:
        summary = fuzz(args.n, field, args.trials, args.seed, args.density, args.jobs)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(json.dumps(summary.to_json(), indent=1), args.output)
    if summary.violations:
        if args.dump_dir:
            d = Path(args.dump_dir)
            d.mkdir(parents=True, exist_ok=True)
            for t in summary.violations:
                (d / f"violation_{args.seed}_{t.index}.json").write_text(json.dumps(t.document, indent=1))
        print(f"{len(summary.violations)} BOUND VIOLATION(S): reproducer documents are in the report",
              file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_chain(args) -> int:
    doc = _load(args.input)
    r = doc.to_algebra()
    if not r.in_constant_diagonal_upper():
        try:
            r = conjugate(r, triangularize_local(r))
        except NotSplitLocalError as exc:
            raise InputError(f"chain needs a triangularizable local algebra: {exc}") from None
    if args.strategy == "det":
        trace = compute_chain(r)
    else:
        trace = compute_chain(r, seed=args.seed)
    report = verify_chain(trace)
    out = {"trace": trace.to_json(), "checks": report.to_json()}
    if args.strategy == "seeded" and args.trials > 1:
        out["sensitivity"] = complement_sensitivity_experiment(r, args.trials, args.seed).to_json()
    _emit(json.dumps(out, indent=1), args.output)
    return EXIT_OK if report.all_passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lienil", description="Lie nilpotent matrix algebras: bounds, chains, fuzzing")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="bound report for an algebra document")
    p.add_argument("--input", required=True)
    p.add_argument("--peirce", action="store_true", help="split along central idempotents (tiny GF(p) only)")
    p.add_argument("--triangularize", action="store_true", help="conjugate split local input into triangular form")
    p.add_argument("--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mtable", help="table of M(l, n)")
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--check-bruteforce", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_mtable)

    p = sub.add_parser("region", help="where M(l, n) meets the floor bound")
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("construct", help="emit a type algebra document")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--type", help="comma-separated positive parts, e.g. 2,3")
    g.add_argument("--balanced", type=int, nargs=2, metavar=("L", "N"))
    p.add_argument("--field", default="q")
    p.add_argument("--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("fuzz", help="random bound checks inside the constant-diagonal triangular matrices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", default="gf2")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dump-dir")
    p.add_argument("--output")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("chain", help="dump the annihilator chain of an algebra")
    p.add_argument("--input", required=True)
    p.add_argument("--strategy", choices=["det", "seeded"], default="det")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_chain)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ChainError, AlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
