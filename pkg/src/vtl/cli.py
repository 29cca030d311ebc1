"""Command-line front end: ``python -m vtl <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Iterable, TextIO

from .algebra import (
    ClassNonUniformError,
    ClassTable,
    Element,
    NumericElement,
    class_decompose,
    element_eval,
    markov_trace,
)
from ._kernels import through_strands_rows
from .diagram import Diagram, DiagramError, enumerate_diagrams, rows_for
from .exactfield import PoleError, parse_rational
from .projector import (
    TRACE_VARIANTS,
    f_explicit,
    f_kernel,
    f_recursive,
    f_simplified,
    trace_closed_form,
)
from .verify import RANGE_SUITES, SUITES, check_relations, check_trace, excluded_points, run_suite

FORMS = ("explicit", "recursive", "simplified", "kernel")
# largest n each construction accepts; products above these do not fit a laptop
FORM_CAPS = {"explicit": 8, "recursive": 7, "simplified": 7, "kernel": 12}
ENUMERATE_CAP = 8


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # one-line diagnostics instead of usage dumps
        raise CliError(message)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"n must be >= 1, got {n}")
    return n


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    default_format = os.environ.get("VTL_FORMAT", "text")
    if default_format not in ("text", "json"):
        default_format = "text"

    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=default_format)
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")

    p = _Parser(prog="vtl", description="Projectors in the virtual Temperley-Lieb algebra.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("emit", parents=[common], help="print f_n")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--form", choices=FORMS, default="explicit")
    s.add_argument("--expand", action="store_true", help="emit every diagram, not the class table")

    s = sub.add_parser("read", parents=[common], help="load an emitted JSON document")
    s.add_argument("--input", "-i", default="-")

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--suite", action="append", choices=sorted(SUITES) + sorted(RANGE_SUITES) + ["all"])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--force", action="store_true", help="lift the per-suite size caps")

    s = sub.add_parser("trace", parents=[common], help="trace of f_n against the closed forms")
    s.add_argument("--n", type=_positive, required=True)

    s = sub.add_parser("eval", parents=[common], help="f_n at a rational value of d")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--d", type=_rational, required=True, help="value of d as p/q")
    s.add_argument("--form", choices=("explicit", "recursive", "simplified"), default="explicit")
    s.add_argument("--expand", action="store_true")

    s = sub.add_parser("enumerate", parents=[common], help="list basis diagrams")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--k", type=int, default=None, help="only diagrams with k through strands")

    s = sub.add_parser("relations", parents=[common], help="check the defining relations")
    s.add_argument("--n", type=_positive, required=True)
    return p


# ---------------------------------------------------------------- writers


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _element_lines(x) -> Iterable[str]:
    for dia, c in x.sorted_items():
        yield f"{c}\t{dia}"


def _stream_expanded_table(t: ClassTable, fmt: str, out: TextIO) -> None:
    """Write a class table as a full element without building it in memory."""
    n = t.n
    rows = rows_for(n)
    ts = through_strands_rows(rows, n)
    coeff_of = {n - 2 * l: c for l, c in t.coeff.items()}
    enc = (lambda c: c.to_json()) if t.point is None else str
    text = {k: (str(c) if fmt == "text" else _dump(enc(c))) for k, c in coeff_of.items()}
    if fmt == "json":
        out.write('{"n":%d,' % n)
        if t.point is not None:
            out.write('"point":%s,' % _dump(str(t.point)))
        out.write('"terms":[')
    first = True
    for row, k in zip(rows.tolist(), ts.tolist()):
        if not coeff_of[k]:
            continue
        if fmt == "text":
            out.write(f"{text[k]}\t{Diagram._trusted(n, tuple(row))}\n")
        else:
            out.write(("" if first else ",") + '{"partner":%s,"coeff":%s}' % (_dump(row), text[k]))
        first = False
    if fmt == "json":
        out.write("]}\n")


def _numeric_json(x: NumericElement) -> dict:
    return {
        "n": x.n,
        "point": str(x.point),
        "terms": [{"partner": list(d.partner), "coeff": str(c)} for d, c in x.sorted_items()],
    }


def _write_element(x, fmt: str, out: TextIO, expand: bool, name: str = "f") -> None:
    if fmt == "json":
        doc = _numeric_json(x) if isinstance(x, NumericElement) else x.to_json()
        out.write(_dump(doc) + "\n")
        return
    if not expand:
        try:
            out.write(class_decompose(x).render(name) + "\n")
            return
        except ClassNonUniformError:
            pass
    for line in _element_lines(x):
        out.write(line + "\n")


def _write_table(t: ClassTable, fmt: str, out: TextIO, name: str = "f") -> None:
    if fmt == "json":
        out.write(_dump(t.to_json()) + "\n")
    else:
        out.write(t.render(name) + "\n")


def _write_reports(reports, fmt: str, out: TextIO) -> None:
    if fmt == "json":
        out.write(_dump([r.to_json() for r in reports]) + "\n")
        return
    for r in reports:
        for line in r.text_lines():
            out.write(line + "\n")
        out.write(f"# {'PASS' if r.passed else 'FAIL'} {r.suite} ({r.elapsed:.2f}s)\n")


# ---------------------------------------------------------------- commands


def _build(form: str, n: int):
    cap = FORM_CAPS[form]
    if n > cap:
        raise CliError(f"--form {form} supports n <= {cap}")
    if form == "explicit":
        return f_explicit(n)
    if form == "kernel":
        return f_kernel(n)
    return f_recursive(n) if form == "recursive" else f_simplified(n)


def cmd_emit(args, out) -> int:
    obj = _build(args.form, args.n)
    name = "fK" if args.form == "kernel" else "f"
    if isinstance(obj, ClassTable):
        if args.expand:
            _stream_expanded_table(obj, args.format, out)
        else:
            _write_table(obj, args.format, out)
    else:
        _write_element(obj, args.format, out, args.expand or args.form == "kernel", name)
    return 0


def _load(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"input is not JSON: {exc.msg} at line {exc.lineno}") from None
    if isinstance(doc, dict) and "coeffs" in doc:
        return ClassTable.from_json(doc)
    if isinstance(doc, dict) and "terms" in doc:
        if "point" in doc:
            terms = {
                Diagram(int(doc["n"]), tuple(int(v) for v in t["partner"])): Fraction(t["coeff"])
                for t in doc["terms"]
            }
            return NumericElement(int(doc["n"]), Fraction(doc["point"]), terms)
        return Element.from_json(doc)
    raise CliError("input is neither an element nor a class table")


def cmd_read(args, out) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    obj = _load(text)
    if isinstance(obj, ClassTable):
        _write_table(obj, args.format, out)
    else:
        _write_element(obj, args.format, out, expand=False)
    return 0


def cmd_verify(args, out) -> int:
    names = args.suite or ["all"]
    if "all" in names:
        names = [s for s, (_, low, high) in SUITES.items() if low <= args.n <= high]
        # index-range suites run at their full default range
        names += sorted(RANGE_SUITES)
        reports = [
            run_suite(s, RANGE_SUITES[s][1] if s in RANGE_SUITES else args.n, seed=args.seed, force=args.force)
            for s in names
        ]
    else:
        reports = [run_suite(s, args.n, seed=args.seed, force=args.force) for s in names]
    _write_reports(reports, args.format, out)
    return 0 if all(r.passed for r in reports) else 1


def cmd_trace(args, out) -> int:
    if args.n > 5:
        raise CliError("trace compares against the closure oracle for n <= 5")
    rep = check_trace(args.n)
    oracle = markov_trace(f_recursive(args.n))
    if args.format == "json":
        doc = {
            "n": args.n,
            "trace": oracle.to_json(),
            "variants": {v: trace_closed_form(args.n, v).to_json() for v in TRACE_VARIANTS},
            "matches": rep.adjudication["matches"],
            "report": rep.to_json(),
        }
        out.write(_dump(doc) + "\n")
    else:
        out.write(f"tr(f_{args.n}) = {oracle}\n")
        for v in TRACE_VARIANTS:
            val = trace_closed_form(args.n, v)
            mark = "matches" if v in rep.adjudication["matches"] else "differs"
            out.write(f"{v}: {val}  [{mark}]\n")
        for line in rep.text_lines()[1:]:
            out.write(line + "\n")
    # the closed-form comparison is reported, never a failure by itself
    return 0 if all(c.ok for c in rep.checks if c.id != "trace.variant") else 1


def cmd_eval(args, out) -> int:
    n, v = args.n, args.d
    bad = excluded_points(n)
    try:
        if args.form == "explicit":
            if n > FORM_CAPS["explicit"]:
                raise CliError(f"--form explicit supports n <= {FORM_CAPS['explicit']}")
            ev = f_explicit(n).evaluate(v)
            if args.expand:
                _stream_expanded_table(ev, args.format, out)
            else:
                _write_table(ev, args.format, out)
        else:
            x = element_eval(_build(args.form, n), v)
            _write_element(x, args.format, out, args.expand)
    except PoleError as exc:
        listed = ", ".join(str(p) for p in sorted(bad, reverse=True))
        raise CliError(f"{exc}; d must avoid the excluded set {{{listed}}}") from None
    return 0


def cmd_enumerate(args, out) -> int:
    if args.n > ENUMERATE_CAP:
        raise CliError(f"enumerate supports n <= {ENUMERATE_CAP}")
    ds = enumerate_diagrams(args.n, args.k)
    if args.format == "json":
        out.write(_dump([list(d.partner) for d in ds]) + "\n")
    else:
        for d in ds:
            out.write(f"{d}\n")
    return 0


def cmd_relations(args, out) -> int:
    rep = check_relations(args.n)
    _write_reports([rep], args.format, out)
    return 0 if rep.passed else 1


COMMANDS = {
    "emit": cmd_emit,
    "read": cmd_read,
    "verify": cmd_verify,
    "trace": cmd_trace,
    "eval": cmd_eval,
    "enumerate": cmd_enumerate,
    "relations": cmd_relations,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.output == "-":
            return COMMANDS[args.command](args, sys.stdout)
        with open(args.output, "w", encoding="utf-8") as fh:
            return COMMANDS[args.command](args, fh)
    except (CliError, ValueError, DiagramError, ZeroDivisionError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"vtl: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
