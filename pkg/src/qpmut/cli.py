"""Command-line interface.

Every subcommand reads one JSON document (stdin or --input), writes
normalized JSON to stdout, and reports failures as {"error", "detail"} on
stderr.  Exit codes: 0 success, 2 precondition violation, 3 budget or
truncation exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .errors import BudgetError, PreconditionError, QpmutError
from .explore import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_QUIVERS,
    acyclic_cluster_type,
    graded_equivalence_search,
    is_mutation_acyclic,
    mutation_class,
)
from .graded import algebra_from_cut, left_mutate, qp_from_algebra, right_mutate
from .paths import build_preprojective, truncated_quotient_dimension
from .qp import QP, dwz_mutate, is_rigid, jacobi_finite, reduce_qp
from .quiver import fz_mutate
from .surface import flip, quiver_from_triangulation

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3


def _read_input(args) -> dict:
    if getattr(args, "input", None):
        with open(args.input) as fh:
            return json.load(fh)
    return json.load(sys.stdin)


def _emit(obj, stdout) -> None:
    stdout.write(jsonio.canonical_bytes(obj).decode() + "\n")


def _cmd_mutate(args, stdout):
    obj = _read_input(args)
    kind = args.kind
    if kind == "fz":
        q = jsonio.quiver_from_json(obj)
        _emit(jsonio.quiver_to_json(fz_mutate(q, args.vertex)), stdout)
    elif kind == "dwz":
        qp = jsonio.qp_from_json(obj)
        _emit(jsonio.qp_to_json(dwz_mutate(qp, args.vertex)), stdout)
    elif kind in ("left", "right"):
        g = jsonio.graded_from_json(obj)
        op = left_mutate if kind == "left" else right_mutate
        _emit(jsonio.graded_to_json(op(g, args.vertex)), stdout)
    else:
        raise PreconditionError(f"unknown mutation kind {kind!r}")


def _cmd_reduce(args, stdout):
    qp = jsonio.qp_from_json(_read_input(args))
    reduced, report = reduce_qp(qp)
    _emit({"qp": jsonio.qp_to_json(reduced), "report": jsonio.report_to_json(report)}, stdout)


def _cmd_jacobian_dim(args, stdout):
    qp = jsonio.qp_from_json(_read_input(args))
    _emit(jacobi_finite(qp, args.bound).to_json(), stdout)


def _cmd_rigid(args, stdout):
    qp = jsonio.qp_from_json(_read_input(args))
    _emit(is_rigid(qp, args.bound).to_json(), stdout)


def _cmd_from_algebra(args, stdout):
    alg = jsonio.algebra_from_json(_read_input(args))
    _emit(jsonio.graded_to_json(qp_from_algebra(alg)), stdout)


def _cmd_to_algebra(args, stdout):
    g = jsonio.graded_from_json(_read_input(args))
    _emit(jsonio.algebra_to_json(algebra_from_cut(g)), stdout)


def _cmd_preprojective(args, stdout):
    q = jsonio.quiver_from_json(_read_input(args))
    doubled, relations = build_preprojective(q)
    out = jsonio.quiver_to_json(doubled)
    out["relations"] = [
        [{"coeff": jsonio.frac_str(c), "path": list(p)} for p, c in sorted(r.terms)]
        for r in relations
    ]
    if args.bound:
        out["dimension"] = truncated_quotient_dimension(doubled, relations, args.bound).to_json()
    _emit(out, stdout)


def _cmd_surface_quiver(args, stdout):
    t = jsonio.triangulation_from_json(_read_input(args))
    _emit(jsonio.qp_to_json(quiver_from_triangulation(t)), stdout)


def _cmd_flip(args, stdout):
    t = jsonio.triangulation_from_json(_read_input(args))
    _emit(jsonio.triangulation_to_json(flip(t, args.arc)), stdout)


def _cmd_mutation_class(args, stdout):
    q = jsonio.quiver_from_json(_read_input(args))
    mc = mutation_class(
        q,
        max_quivers=args.max_quivers,
        max_depth=args.max_depth,
        up_to_iso=not args.labeled,
        dump_path=args.dump,
    )
    by_key: dict[str, list] = {k: [] for k in mc.members}
    for src, v, dst in mc.edges:
        by_key[src].append([v, dst])
    for key in sorted(mc.members):
        _emit(
            {
                "key": key,
                "quiver": jsonio.quiver_to_json(mc.members[key]),
                "edges": sorted(by_key[key]),
            },
            stdout,
        )
    if mc.truncated:
        raise BudgetError("mutation class truncated by budget")


def _cmd_mutation_acyclic(args, stdout):
    q = jsonio.quiver_from_json(_read_input(args))
    hunt = is_mutation_acyclic(q, max_quivers=args.max_quivers, max_depth=args.max_depth)
    if hunt.found:
        _emit(
            {
                "found": True,
                "path": list(hunt.path),
                "quiver": jsonio.quiver_to_json(hunt.quiver),
            },
            stdout,
        )
    else:
        _emit({"found": False, "depth": hunt.depth, "states": hunt.states}, stdout)


def _cmd_cluster_type(args, stdout):
    obj = _read_input(args)
    kind, state = jsonio.state_from_json(obj)
    if kind not in ("qp", "graded"):
        raise PreconditionError("cluster-type needs a QP or graded QP")
    cert = acyclic_cluster_type(state, rigidity_bound=args.bound,
                                max_quivers=args.max_quivers, max_depth=args.max_depth)
    out = {"certified": cert.certified}
    if cert.type_quiver is not None:
        out["type"] = jsonio.quiver_to_json(cert.type_quiver)
        out["path"] = list(cert.mutation_path)
    if cert.reason:
        out["reason"] = cert.reason
    _emit(out, stdout)


def _cmd_search_equiv(args, stdout):
    obj = _read_input(args)
    if not isinstance(obj, dict) or "g1" not in obj or "g2" not in obj:
        raise PreconditionError('search-equiv input must be {"g1":..., "g2":...}')
    g1 = jsonio.graded_from_json(obj["g1"])
    g2 = jsonio.graded_from_json(obj["g2"])
    res = graded_equivalence_search(g1, g2, max_depth=args.depth, max_states=args.max_states)
    if res.found:
        _emit({"found": True, "sequence": [list(m) for m in res.sequence]}, stdout)
    else:
        _emit({"found": False, "depth": res.depth, "states": res.states}, stdout)


def _cmd_serve(args, stdout):
    from .service import serve

    serve(args.port, static_dir=args.static, announce=stdout)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpmut", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **extra):
        sp = sub.add_parser(name)
        sp.add_argument("--input", help="read JSON from file instead of stdin")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("mutate", _cmd_mutate)
    sp.add_argument("--kind", required=True, choices=["fz", "dwz", "left", "right"])
    sp.add_argument("--vertex", required=True, type=int)

    add("reduce", _cmd_reduce)

    sp = add("jacobian-dim", _cmd_jacobian_dim)
    sp.add_argument("--bound", required=True, type=int)

    sp = add("rigid", _cmd_rigid)
    sp.add_argument("--bound", required=True, type=int)

    add("from-algebra", _cmd_from_algebra)
    add("to-algebra", _cmd_to_algebra)

    sp = add("preprojective", _cmd_preprojective)
    sp.add_argument("--bound", type=int, default=0,
                    help="also report the truncated quotient dimension")

    add("surface-quiver", _cmd_surface_quiver)

    sp = add("flip", _cmd_flip)
    sp.add_argument("--arc", required=True)

    sp = add("mutation-class", _cmd_mutation_class)
    sp.add_argument("--max-quivers", type=int, default=DEFAULT_MAX_QUIVERS)
    sp.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    sp.add_argument("--labeled", action="store_true",
                    help="dedup on labeled quivers instead of isomorphism classes")
    sp.add_argument("--dump", help="stream/resume NDJSON class dump at this path")

    sp = add("mutation-acyclic", _cmd_mutation_acyclic)
    sp.add_argument("--max-quivers", type=int, default=DEFAULT_MAX_QUIVERS)
    sp.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)

    sp = add("cluster-type", _cmd_cluster_type)
    sp.add_argument("--bound", type=int, default=8)
    sp.add_argument("--max-quivers", type=int, default=DEFAULT_MAX_QUIVERS)
    sp.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)

    sp = add("search-equiv", _cmd_search_equiv)
    sp.add_argument("--depth", type=int, default=8)
    sp.add_argument("--max-states", type=int, default=DEFAULT_MAX_QUIVERS)

    sp = add("serve", _cmd_serve)
    sp.add_argument("--port", type=int, default=8642)
    sp.add_argument("--static", help="serve this directory at / (for the web UI)")

    return p


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.fn(args, stdout)
        return EXIT_OK
    except BudgetError as exc:
        stderr.write(json.dumps({"error": exc.code, "detail": str(exc)}) + "\n")
        return EXIT_BUDGET
    except QpmutError as exc:
        stderr.write(json.dumps({"error": exc.code, "detail": str(exc)}) + "\n")
        return EXIT_PRECONDITION
    except json.JSONDecodeError as exc:
        stderr.write(json.dumps({"error": "malformed_input", "detail": str(exc)}) + "\n")
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
