"""Command-line front end: ``abduce solve|oracle|reduce|check``.

Exit codes: 10 yes, 20 no, 0 success, 3 check failed, 2 parse error,
1 usage error, 4 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import checks, oracle, reductions, solver
from .core import AbductionInstance, InstanceError, Ordering, OrderingError
from .io import ParseError, parse_instance, serialize_instance
from .sat import NotDefiniteHorn

EXIT_YES, EXIT_NO, EXIT_OK = 10, 20, 0
EXIT_USAGE, EXIT_PARSE, EXIT_CHECK, EXIT_CAP = 1, 2, 3, 4

QUERIES = ("exists", "verify", "relevant", "necessary", "dispensable", "enumerate")
TRANSFORMS = ("f", "gc", "i", "first-of-first", "dh-replicate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abduce", description="Propositional abduction solver and reduction toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def query_options(p):
        p.add_argument("file")
        p.add_argument("--ordering", choices=[o.value for o in Ordering], default="none")
        p.add_argument("--query", choices=QUERIES, required=True)
        p.add_argument("--set", dest="candidate", help="comma-separated candidate for verify")
        p.add_argument("--var", help="variable for relevant/necessary/dispensable")
        p.add_argument("--json", action="store_true")

    solve = sub.add_parser("solve", help="answer a query with the solver")
    query_options(solve)
    solve.add_argument("--max-subsets", type=int, default=solver.DEFAULT_MAX_SUBSETS)
    solve.add_argument("--max-solutions", type=int, default=solver.DEFAULT_MAX_SOLUTIONS)

    orc = sub.add_parser("oracle", help="answer a query by brute force")
    query_options(orc)
    orc.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)

    red = sub.add_parser("reduce", help="apply a reduction")
    red.add_argument("file")
    red.add_argument("--transform", choices=TRANSFORMS, required=True)
    red.add_argument("--c", type=int, help="target class for gc")
    red.add_argument("--var", help="target hypothesis for first-of-first")
    red.add_argument("--variant", choices=reductions.VARIANTS, help="default: from the instance shape")
    red.add_argument("-o", "--output", default="-")

    chk = sub.add_parser("check", help="run a lemma check through the oracle")
    chk.add_argument("file")
    chk.add_argument("--lemma", choices=list(checks.LEMMAS), required=True)
    chk.add_argument("--json", action="store_true")
    return parser


def _load(path: str) -> AbductionInstance:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text)


def _var(instance: AbductionInstance, token: str | None, required: bool) -> int | None:
    if token is None:
        if required:
            raise UsageError("this query needs --var")
        return None
    try:
        v = instance.lookup(token)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    if v not in instance.variables:
        raise UsageError(f"unknown variable {token!r}")
    return v


def _candidate(instance: AbductionInstance, text: str | None):
    if text is None:
        return instance.candidate
    return frozenset(_var(instance, t.strip(), True) for t in text.split(",") if t.strip())


def _label(instance: AbductionInstance, v: int):
    return instance.names.get(v, v)


def _listing(instance: AbductionInstance, s) -> list | None:
    if s is None:
        return None
    return [_label(instance, v) for v in sorted(s)]


def _text_set(instance: AbductionInstance, s) -> str:
    return "{" + ", ".join(instance.render(s)) + "}"


def _oracle_result(instance, ordering, query, var, candidate, cap) -> solver.QueryResult:
    report = oracle.brute_minimal(instance, ordering, cap)
    ans = oracle.oracle_answer(instance, ordering, query, var, candidate, report=report)
    minimal = solver.canonical_order(report.minimal[ordering])
    witness = None
    if query == "exists" and report.solutions:
        witness = solver.canonical_order(report.solutions)[0]
    elif query == "relevant" and ans:
        witness = next(s for s in minimal if var in s)
    elif query in ("necessary", "dispensable") and report.solutions:
        witness = next((s for s in minimal if var not in s), None)
    return solver.QueryResult(ans, witness, solver.Stats(0, report.counters["subsets"]))


def _enumerate(args, instance, ordering) -> int:
    if args.command == "solve":
        found, stats = solver.enumerate_with_stats(instance, ordering, args.max_solutions, args.max_subsets)
    else:
        report = oracle.brute_minimal(instance, ordering, args.cap)
        found = solver.canonical_order(report.minimal[ordering])
        stats = solver.Stats(0, report.counters["subsets"])
    if args.json:
        print(json.dumps({
            "answer": bool(found),
            "witness": _listing(instance, found[0]) if found else None,
            "stats": stats.as_dict(),
            "explanations": [_listing(instance, s) for s in found],
        }))
    else:
        print(f"explanations: {len(found)}")
        for s in found:
            print(_text_set(instance, s))
    return EXIT_OK


def _query(args) -> int:
    instance = _load(args.file)
    ordering = Ordering(args.ordering)
    if ordering is Ordering.PENALTY and instance.weights is None:
        raise UsageError("penalty ordering needs w lines in the instance")
    if args.query == "enumerate":
        return _enumerate(args, instance, ordering)
    var = _var(instance, args.var, args.query in solver.QUERY_KINDS)
    candidate = _candidate(instance, args.candidate) if args.query == "verify" else None
    if args.query == "verify" and candidate is None:
        raise UsageError("verify needs --set or a candidate line in the file")
    if args.command == "solve":
        result = solver.answer(instance, ordering, args.query, var, candidate, args.max_subsets)
    else:
        result = _oracle_result(instance, ordering, args.query, var, candidate, args.cap)
    if args.json:
        print(json.dumps({
            "answer": result.answer,
            "witness": _listing(instance, result.witness),
            "stats": result.stats.as_dict(),
        }))
    else:
        print("yes" if result.answer else "no")
        if result.witness is not None:
            print("witness: " + _text_set(instance, result.witness))
    return EXIT_YES if result.answer else EXIT_NO


def _default_variant(instance: AbductionInstance) -> str:
    if instance.hypotheses.m > 1:
        return "prio"
    return "verify" if instance.candidate is not None else "plain"


def _reduce(args) -> int:
    instance = _load(args.file)
    variant = args.variant or _default_variant(instance)
    comments = [f"transform {args.transform}"]
    if args.transform == "gc":
        if args.c is None:
            raise UsageError("gc needs --c")
        output = reductions.transform_gc(instance, args.c, variant)
        comments[0] += f" c={args.c}"
    else:
        if args.transform == "f":
            record = reductions.transform_f(instance, variant)
        elif args.transform == "i":
            record = reductions.transform_i(instance, variant)
        elif args.transform == "first-of-first":
            record = reductions.transform_first_of_first(instance, _var(instance, args.var, True))
        else:
            record = reductions.transform_dh_replicate(instance)
        output = record.output
        comments += record.map_comments()
    text = serialize_instance(output, names=True, comments=comments)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.output}: {len(output.H)} hypotheses, {len(output.theory)} clauses")
    return EXIT_OK


def _check(args) -> int:
    instance = _load(args.file)
    report = checks.run_lemma(args.lemma, instance)
    if args.json:
        print(json.dumps({
            "answer": report.passed,
            "witness": None,
            "stats": {"engine_calls": 0, "subsets": 0},
            "transcript": report.transcript,
        }))
    else:
        for line in report.transcript:
            print(line)
        print(f"{args.lemma}: {'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_CHECK


def run_command(argv) -> int:
    """Run one command line and return its exit code."""
    handlers = {"solve": _query, "oracle": _query, "reduce": _reduce, "check": _check}
    try:
        args = build_parser().parse_args(argv)
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"abduce: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, InstanceError) as exc:
        print(f"abduce: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except solver.CapExceeded as exc:
        print(f"abduce: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (solver.QueryError, reductions.ReductionError, NotDefiniteHorn, OrderingError) as exc:
        print(f"abduce: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
