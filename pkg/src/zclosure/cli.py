"""Command-line front end.

Reads generator matrices (from a JSON document or a named fixture), runs the
closure computation and prints the result as a human table or JSON. All
scalars are serialized as exact strings.

Input document:
    {
      "field": [c0, c1, ..., 1],      # optional: defining polynomial of a
                                      # number field (rational coefficient
                                      # strings, low degree first, monic)
      "generators": [ [[entry, ...], ...], ... ]
    }
where an entry is a rational string "p/q" (or "p"), or, when "field" is
present, a list of coordinate strings in the power basis. Generators over a
number field are embedded into GL(n*deg, Q) via the regular representation
of the field before the closure is computed.

Exit codes: 0 success, 2 parse error, 3 budget or resource limit exhausted
(partial trace still printed), 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from gmpy2 import mpq

from .closure import ClosureConfig, ClosureContext, zariski_closure
from .errors import (
    BudgetExhaustedError,
    InvariantViolationError,
    ParseError,
    ResourceLimitError,
    ZClosureError,
)
from .field import QQ, NumberField, Poly, rat
from .fixtures import fixture, fixture_names
from .linalg import MatrixF
from .membership import member

ENV_PREFIX = "ZCLOSURE_"


def _env_default(name, cast, fallback):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise ParseError(f"bad value for {ENV_PREFIX}{name}: {raw!r}")


def _parse_rational(s):
    try:
        return mpq(str(s))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational entry {s!r}: {e}")


def _regular_representation(a):
    """Multiplication-by-a matrix on the power basis, columns convention."""
    K = a.field
    d = K.degree
    cols = []
    basis_pow = K.one()
    for j in range(d):
        img = a * basis_pow
        cols.append([mpq(c) for c in img.coords])
        basis_pow = basis_pow * K.gen()
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _embed_matrix(m, K):
    """Blow an n x n matrix over K up to (n*deg) x (n*deg) over Q."""
    d = K.degree
    n = m.rows
    big = [[mpq(0)] * (n * d) for _ in range(n * d)]
    for i in range(n):
        for j in range(n):
            block = _regular_representation(m.entries[i][j])
            for bi in range(d):
                for bj in range(d):
                    big[i * d + bi][j * d + bj] = block[bi][bj]
    return MatrixF(QQ, big)


def parse_input_document(doc):
    """InputDocument -> list of rational generator matrices."""
    if not isinstance(doc, dict) or "generators" not in doc:
        raise ParseError("input document must contain a 'generators' list")
    K = None
    if doc.get("field"):
        coeffs = [_parse_rational(c) for c in doc["field"]]
        if len(coeffs) < 3 or coeffs[-1] != 1:
            raise ParseError(
                "field polynomial must be monic of degree at least 2"
            )
        try:
            K = NumberField(Poly(QQ, coeffs))
        except ZClosureError as e:
            raise ParseError(f"bad field polynomial: {e}")
    gens_raw = doc["generators"]
    if not gens_raw:
        raise ParseError("need at least one generator")
    mats = []
    n = None
    for rows in gens_raw:
        if n is None:
            n = len(rows)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ParseError("generators must be square matrices of equal size")
        if K is None:
            mats.append(
                MatrixF(QQ, [[_parse_rational(e) for e in r] for r in rows])
            )
        else:
            ent = []
            for r in rows:
                row = []
                for e in r:
                    if isinstance(e, list):
                        row.append(K.element([_parse_rational(c) for c in e]))
                    else:
                        row.append(K.coerce(_parse_rational(e)))
                ent.append(row)
            mats.append(MatrixF(K, ent))
    if K is not None:
        mats = [_embed_matrix(m, K) for m in mats]
    return mats


def _load_generators(args):
    if args.fixture:
        return fixture(args.fixture)
    if not args.input:
        raise ParseError("one of --input or --fixture is required")
    try:
        with open(args.input) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {args.input}: {e}")
    except json.JSONDecodeError as e:
        raise ParseError(f"bad JSON in {args.input}: {e}")
    return parse_input_document(doc)


def _mat_to_strings(m):
    return [[str(e) for e in row] for row in m.entries]


def _trace_doc(trace):
    return {
        "rounds": trace.rounds,
        "dim_history": list(trace.dim_history),
        "bfs_lengths": trace.bfs_lengths,
        "multrel_calls": trace.multrel_calls,
        "multrel_time": trace.multrel_time,
        "membership_calls": trace.membership_calls,
        "membership_time": trace.membership_time,
        "max_field_degree": trace.max_field_degree,
        "total_time": trace.total_time,
    }


def output_document(group, trace):
    return {
        "n": group.n,
        "lie_dim": group.lie_algebra.dim,
        "lie_basis": [
            _mat_to_strings(m) for m in group.lie_algebra.basis_matrices()
        ],
        "component_count": len(group.components),
        "component_reps": [_mat_to_strings(m) for m in group.components],
        "certified": group.certified,
        "trace": _trace_doc(trace),
    }


def _print_human(doc, out):
    print(f"n                : {doc['n']}", file=out)
    print(f"Lie dimension    : {doc['lie_dim']}", file=out)
    print(f"components       : {doc['component_count']}", file=out)
    print(f"certified        : {doc['certified']}", file=out)
    if not doc["certified"]:
        print(
            "warning: relation lattices were not all certified complete; "
            "the Lie algebra may be too small",
            file=out,
        )
    t = doc["trace"]
    print("trace:", file=out)
    print(f"  rounds          : {t['rounds']}", file=out)
    print(f"  dim history     : {t['dim_history']}", file=out)
    print(f"  bfs length      : {t['bfs_lengths']}", file=out)
    print(
        f"  multrel         : {t['multrel_calls']} calls, "
        f"{t['multrel_time']:.2f} s",
        file=out,
    )
    print(
        f"  membership      : {t['membership_calls']} calls, "
        f"{t['membership_time']:.2f} s",
        file=out,
    )
    print(f"  max field degree: {t['max_field_degree']}", file=out)
    print(f"  total time      : {t['total_time']:.2f} s", file=out)
    print("Lie algebra basis:", file=out)
    for m in doc["lie_basis"]:
        for row in m:
            print("   " + "  ".join(row), file=out)
        print(file=out)
    print("component representatives:", file=out)
    for m in doc["component_reps"]:
        for row in m:
            print("   " + "  ".join(row), file=out)
        print(file=out)


def _config_from_args(args):
    return ClosureConfig(
        max_field_degree=args.max_field_degree,
        max_bfs_length=args.max_bfs_length,
        time_budget=args.time_budget,
        seed=args.seed,
    )


def _add_common(p):
    p.add_argument("--input", help="path to a JSON input document")
    p.add_argument(
        "--fixture",
        choices=fixture_names(),
        help="named built-in generator set",
    )
    p.add_argument("--json", action="store_true", help="emit JSON output")
    p.add_argument(
        "--max-field-degree",
        type=int,
        default=_env_default("MAX_FIELD_DEGREE", int, 64),
    )
    p.add_argument(
        "--max-bfs-length",
        type=int,
        default=_env_default("MAX_BFS_LENGTH", int, 20),
    )
    p.add_argument(
        "--time-budget",
        type=float,
        default=_env_default("TIME_BUDGET", float, None),
    )
    p.add_argument("--seed", type=int, default=_env_default("SEED", int, 0))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zclosure",
        description="Exact Zariski closure of a finitely generated matrix group",
    )
    sub = parser.add_subparsers(dest="command")
    runp = sub.add_parser("run", help="compute the closure of the generators")
    _add_common(runp)
    memp = sub.add_parser(
        "member", help="test an element against the closure of the generators"
    )
    _add_common(memp)
    memp.add_argument(
        "--element",
        required=True,
        help="path to a JSON matrix (list of rows of rational strings)",
    )
    return parser


def _run(args, out):
    gens = _load_generators(args)
    group, trace = zariski_closure(gens, _config_from_args(args))
    doc = output_document(group, trace)
    if args.json:
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        _print_human(doc, out)
    return 0


def _member(args, out):
    gens = _load_generators(args)
    group, trace = zariski_closure(gens, _config_from_args(args))
    try:
        with open(args.element) as fh:
            rows = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read element: {e}")
    g = MatrixF(QQ, [[_parse_rational(e) for e in r] for r in rows])
    verdict = member(group, g)
    doc = {
        "member": verdict.member,
        "component_index": verdict.component_index,
    }
    if args.json:
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        print(f"member          : {verdict.member}", file=out)
        print(f"component index : {verdict.component_index}", file=out)
    return 0


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] not in ("run", "member", "-h", "--help"):
        argv = ["run"] + argv
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return 2
    try:
        if args.command == "run":
            return _run(args, sys.stdout)
        return _member(args, sys.stdout)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except BudgetExhaustedError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        if e.trace is not None:
            json.dump({"trace": _trace_doc(e.trace)}, sys.stderr, indent=2)
            sys.stderr.write("\n")
        return 3
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 3
    except InvariantViolationError as e:
        print(f"internal invariant violation: {e}", file=sys.stderr)
        return 4
    except ZClosureError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
