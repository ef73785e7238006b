"""Command-line interface: audit, nf, reduce, build, verify.

Exit codes: 0 all verdicts pass / run complete, 1 usage or schema error,
2 a fail verdict, 3 undecided verdicts or deferred requirements.
"""

from __future__ import annotations

import argparse
import sys

from . import graphs, hcf
from .engine import Budget, run_schedule, verify_certificate_report
from .groups import UndecidedError
from .normal_forms import parse_word, syllable_length
from .problem import ProblemError, canonical_text, emit_certificate, load_certificate, parse_problem

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_FAIL = 2
EXIT_UNDECIDED = 3


def _parse_bounds(text):
    parts = [int(p) for p in text.split(",")]
    if len(parts) not in (3, 4):
        raise argparse.ArgumentTypeError("bounds are n,rho,r or n,rho,r,pieces")
    names = ["tuple_size_max", "point_radius", "witness_radius", "covering_piece_max"]
    return hcf.AuditBounds(**dict(zip(names, parts)))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hightrans",
        description="normal forms, core-freeness audits and certified "
                    "construction of highly transitive actions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="core-freeness and faithfulness audits")
    p.add_argument("problem")
    p.add_argument("--bounds", type=_parse_bounds, default=None)

    p = sub.add_parser("nf", help="normal-form a word")
    p.add_argument("problem")
    p.add_argument("group")
    p.add_argument("word")

    p = sub.add_parser("reduce", help="reduce a graph of groups to one edge")
    p.add_argument("problem")
    p.add_argument("--edge", default=None)
    p.add_argument("--bounds", type=_parse_bounds, default=None)

    p = sub.add_parser("build", help="run the engine and emit a certificate")
    p.add_argument("problem")
    p.add_argument("--budget", type=int, default=None, help="number of schedule steps")
    p.add_argument("--edge", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--seedless", action="store_true",
                   help="assert determinism by running twice and comparing bytes")

    p = sub.add_parser("verify", help="re-check a certificate file")
    p.add_argument("problem")
    p.add_argument("certificate")
    return parser


def _load(path):
    try:
        return parse_problem(path)
    except ProblemError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _status_exit(statuses):
    if "fail" in statuses:
        return EXIT_FAIL
    if "undecided" in statuses:
        return EXIT_UNDECIDED
    return EXIT_PASS


def cmd_audit(args):
    problem = _load(args.problem)
    bounds = args.bounds or problem.bounds
    statuses = []
    for name in sorted(problem.embeddings):
        emb = problem.embeddings[name]
        hv = hcf.audit_hcf(emb, bounds)
        sv = hcf.certify_structural(emb, bounds)
        cv = hcf.audit_highly_faithful(hcf.CosetDomain(emb), bounds)
        statuses.extend([hv.status, sv.status, cv.status])
        print(f"audit {name}: hcf={hv.status} structural={sv.status} coset-action={cv.status}")
        for verdict, tag in ((hv, "hcf"), (cv, "coset-action")):
            if verdict.failed and "covering" in verdict.evidence:
                print(f"  {tag} counterexample: {verdict.evidence['covering']}")
    return _status_exit(statuses)


def cmd_nf(args):
    problem = _load(args.problem)
    if args.group not in problem.groups:
        print(f"error: unknown group {args.group!r}", file=sys.stderr)
        return EXIT_USAGE
    handle = problem.groups[args.group]
    try:
        elt = parse_word(handle, args.word)
    except UndecidedError as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(str(elt))
    if handle.kind in ("amalgam", "hnn"):
        print(f"syllables: {syllable_length(elt)}")
    return EXIT_PASS


def cmd_reduce(args):
    problem = _load(args.problem)
    if problem.graph is None:
        print("error: the problem file has no graph section", file=sys.stderr)
        return EXIT_USAGE
    graph = problem.graph
    edge = args.edge or graphs.choose_reduction_edge(graph)
    try:
        reduced = graphs.reduce_edge(graph, edge)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"reduce {graph.name} at edge {edge}: {reduced.kind} problem, "
          f"group {reduced.gamma.name}")
    if reduced.kind == "hnn":
        print(f"  base: {reduced.gamma.base.name} ({reduced.gamma.base.kind})")
    else:
        print(f"  left: {reduced.gamma.left.name}, right: {reduced.gamma.right.name}")
    bounds = args.bounds or problem.bounds
    report = graphs.validate_main_hypotheses(graph, bounds)
    for vid, entry in sorted(report["vertices"].items()):
        print(f"  vertex {vid} ({entry['group']}): "
              f"{'infinite' if entry['infinite'] else 'FINITE'} -> {entry['status']}")
    for eid, entry in sorted(report["edges"].items()):
        for tag in ("source", "range"):
            e = entry[tag]
            print(f"  edge {eid}.{tag} ({e['embedding']}): hcf={e['hcf'].status} "
                  f"structural={e['structural'].status}")
    print(f"hypotheses: {report['overall']}")
    return _status_exit([report["overall"]])


def _resolve_build_group(problem, edge):
    if problem.graph is not None:
        chosen = edge or graphs.choose_reduction_edge(problem.graph)
        return graphs.reduce_edge(problem.graph, chosen).gamma, {"edge": chosen}
    if problem.target is not None:
        gamma = problem.groups[problem.target]
        return gamma, {"target": problem.target}
    print("error: the problem file has neither graph nor target", file=sys.stderr)
    raise SystemExit(EXIT_USAGE)


def cmd_build(args):
    problem = _load(args.problem)
    gamma, source = _resolve_build_group(problem, args.edge)
    steps = args.budget if args.budget is not None else problem.budget.steps
    budget = Budget(steps=steps, witness_radius=problem.budget.witness_radius)
    cert = run_schedule(gamma, budget, problem.digest())
    cert["source"] = source
    if args.seedless:
        gamma2, _ = _resolve_build_group(problem, args.edge)
        cert2 = run_schedule(gamma2, budget, problem.digest())
        cert2["source"] = source
        if canonical_text(cert) != canonical_text(cert2):
            print("error: double run produced different certificates", file=sys.stderr)
            return EXIT_FAIL
        print("determinism: double run byte-identical")
    print(f"build {gamma.name}: {len(cert['steps'])} discharged, "
          f"{len(cert['deferred'])} deferred")
    for item in cert["deferred"]:
        print(f"  deferred #{item['index']}: {item['diagnostic']}")
    if args.out:
        emit_certificate(cert, args.out)
        print(f"certificate written to {args.out}")
    return EXIT_PASS if not cert["deferred"] else EXIT_UNDECIDED


def cmd_verify(args):
    problem = _load(args.problem)
    try:
        cert = load_certificate(args.certificate)
    except (OSError, ValueError) as exc:
        print(f"error: cannot load certificate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cert.get("problem") != problem.digest():
        print("verify: FAIL (certificate was issued for a different problem)")
        return EXIT_FAIL
    source = cert.get("source", {})
    if "edge" in source:
        if problem.graph is None:
            print("verify: FAIL (certificate references a graph reduction)")
            return EXIT_FAIL
        gamma = graphs.reduce_edge(problem.graph, source["edge"]).gamma
    elif "target" in source:
        gamma = problem.groups.get(source["target"])
        if gamma is None:
            print("verify: FAIL (certificate references an unknown target)")
            return EXIT_FAIL
    else:
        gamma, _ = _resolve_build_group(problem, None)
    ok, reason = verify_certificate_report(gamma, cert)
    print(f"verify: {'OK' if ok else 'FAIL'} ({reason})")
    return EXIT_PASS if ok else EXIT_FAIL


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {
        "audit": cmd_audit,
        "nf": cmd_nf,
        "reduce": cmd_reduce,
        "build": cmd_build,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
