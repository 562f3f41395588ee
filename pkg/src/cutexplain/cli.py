"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 proof rejected or a root
found where none was expected.  Reports print as ``key<TAB>value`` lines,
or as one JSON object with ``--json``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import dioph, explain, numeral
from .kernel import (CheckFailure, SexpError, StepLimitExceeded, check, conclusion,
                     dump_proof, load_proof, pretty)
from .kernel import proofs as P
from .lang import (IntLit, LangError, parse_formula, parse_term, show, size_bytes,
                   subst)

EXIT_OK, EXIT_USAGE, EXIT_REJECTED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return n


def _emit(fields, as_json, out):
    if as_json:
        out.write(json.dumps(fields, indent=2) + "\n")
        return
    for key, value in fields.items():
        if isinstance(value, list):
            value = "; ".join(v if isinstance(v, str) else json.dumps(v) for v in value)
        elif isinstance(value, bool):
            value = str(value).lower()
        out.write(f"{key}\t{value}\n")


def _write_proof(proof, path):
    Path(path).write_text(pretty(dump_proof(proof)), encoding="utf-8")


def _lemmas():
    from .library import statements
    return statements()


# ------------------------------------------------------------- commands


def cmd_check(a, out):
    proof = load_proof(Path(a.proof).read_text(encoding="utf-8"))
    goal = parse_formula(a.goal)
    report = check(proof, goal, _lemmas(), a.step_limit)
    fields = {"accepted": report.accepted, "steps": report.steps, "goal": show(goal)}
    if report.failure:
        fields["failure_path"], fields["failure"] = report.failure
    if a.json:
        _emit(fields, True, out)
    else:
        out.write(str(report) + "\n")
    return EXIT_OK if report.accepted else EXIT_REJECTED


def _classified(proof, a, lemmas):
    cat = explain.classify_proof(proof, a.kmax, lemmas)
    fields = explain.classification_dict(proof, cat, lemmas)
    fields["k_max"] = a.kmax
    return fields


def cmd_classify(a, out):
    lemmas = _lemmas()
    proof = load_proof(Path(a.proof).read_text(encoding="utf-8"))
    if a.goal is not None:
        report = check(proof, parse_formula(a.goal), lemmas, a.step_limit)
        if not report.accepted:
            out.write(str(report) + "\n")
            return EXIT_REJECTED
    _emit(_classified(proof, a, lemmas), a.json, out)
    return EXIT_OK


def _report_fields(report):
    return {"target": report.target, **report.as_dict()}


def cmd_explain(a, out):
    if a.kind == "proof":
        return _explain_proof(a, out)
    if a.kind == "centroid":
        return _explain_centroid(a, out)
    if a.kind == "bookshop":
        return _explain_bookshop(a, out)
    return _explain_dioph(a, out)


def _explain_proof(a, out):
    if not a.args:
        raise UsageError("explain proof needs a proof file")
    lemmas = _lemmas()
    proof = load_proof(Path(a.args[0]).read_text(encoding="utf-8"))
    if a.goal is not None:
        target = parse_formula(a.goal)
    else:
        try:
            target = conclusion(proof, lemmas)
        except CheckFailure as e:
            out.write(f"rejected at {e.path or '<root>'}: {e.msg}\n")
            return EXIT_REJECTED
    cuts = explain.detect_cuts(proof, lemmas)
    if not cuts:
        fields = _classified(proof, a, lemmas)
        _emit(fields, a.json, out)
        return EXIT_OK
    tpl, inp, _ = cuts[0]
    if a.input is not None:
        inp = parse_term(a.input)
    e = explain.Explanation(explain.TemplateProgram(tpl), inp)
    _, report = explain.run_explanation(e, target, a.step_limit, lemmas, a.alpha)
    fields = {**_classified(proof, a, lemmas), **_report_fields(report)}
    _emit(fields, a.json, out)
    if a.plot:
        from .plots import plot_explanations
        plot_explanations([("template", report)], a.plot)
    return EXIT_OK


def _parse_point(text):
    try:
        return tuple(Fraction(c) for c in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a point: {text!r}") from None


def _explain_centroid(a, out):
    data = explain.load_dataset(a.data)
    point = _parse_point(a.input or "9,9")
    label, _, report = explain.centroid_classify(data, point, a.alpha)
    fields = {"label": label, "points": len(data.points), **_report_fields(report)}
    _emit(fields, a.json, out)
    if a.plot:
        from .plots import plot_centroid
        plot_centroid(data, point, label, a.plot)
    return EXIT_OK


def _explain_bookshop(a, out):
    wm = explain.bookshop_map()
    inp = parse_term(a.input or "7")
    e, witness, proof = explain.explain_existential(wm, inp)
    _, report = explain.run_explanation(e, explain.existential_target(wm), a.step_limit,
                                        alpha=a.alpha)
    fields = {"witness": show(witness), "proves": show(proof.goal), **_report_fields(report)}
    _emit(fields, a.json, out)
    if a.plot:
        from .plots import plot_explanations
        plot_explanations([("bookshop", report)], a.plot)
    return EXIT_OK


def _explain_dioph(a, out):
    if not a.args:
        raise UsageError("explain dioph needs a polynomial")
    poly = dioph.parse_poly(a.args[0])
    x = int(a.input or 0)
    target = dioph.statement(poly)
    target = subst(target.body, poly.var, IntLit(x))
    rows = []
    for mode in ("interval", "enum"):
        try:
            proof = dioph.prove(poly, mode)
        except dioph.UnsupportedShape:
            continue
        tpl = explain.Template(poly.var, dioph.statement(poly).body, proof)
        e = explain.Explanation(explain.TemplateProgram(tpl), IntLit(x))
        _, report = explain.run_explanation(e, target, a.step_limit, alpha=a.alpha)
        rows.append((mode, e, report))
    ordered = explain.order_explanations([(e, r) for _, e, r in rows])
    names = {id(e): m for m, e, _ in rows}
    listing = []
    for e, r in ordered:
        others = [o for _, _, o in rows if o is not r]
        listing.append({"mode": names[id(e)], **_report_fields(r),
                        "dominates_all": all(explain.dominates(r, o) for o in others)})
    if a.json:
        _emit({"target": show(target), "explanations": listing}, True, out)
    else:
        out.write("mode\tprogram_bytes\tinput_bytes\tstatement_bytes\trun_steps\tratio\t"
                  "passes_threshold\tdominates_all\n")
        for row in listing:
            out.write("\t".join(str(row[k]).lower() if isinstance(row[k], bool) else str(row[k])
                                for k in ("mode", "program_bytes", "input_bytes",
                                          "statement_bytes", "run_steps", "ratio",
                                          "passes_threshold", "dominates_all")) + "\n")
    if a.plot:
        from .plots import plot_explanations
        plot_explanations([(m, r) for m, _, r in rows], a.plot)
    return EXIT_OK


def cmd_dioph(a, out):
    poly = dioph.parse_poly(a.poly)
    st = dioph.statement(poly)
    try:
        proof = dioph.prove(poly, a.mode)
    except dioph.RootFound as e:
        _emit({"polynomial": str(poly), "root": e.witness}, a.json, out)
        return EXIT_REJECTED
    report = check(proof, st, None, a.step_limit)
    if not report.accepted:
        out.write(str(report) + "\n")
        return EXIT_REJECTED
    witness = dioph.threshold(poly) if a.mode == "interval" else 0
    cut = dioph.as_cut(proof, witness)
    fields = {
        "statement": show(st),
        "mode": a.mode,
        "bound": dioph.bound(poly),
        "enumeration_cases": sum(q.count() for _, q in P.walk(proof)
                                 if isinstance(q, P.RangeEnum)),
        "case_splits": P.count_nodes(proof, P.CaseSplit),
        "steps": report.steps,
        "proof_bytes": size_bytes(proof),
    }
    if a.mode == "interval":
        fields["threshold"] = witness
        fields["leaves"] = [show(f) for f in dioph.threshold_leaves(proof)]
    fields.update(_classified(cut, a, None))
    if a.out:
        _write_proof(proof, a.out)
        fields["proof_file"] = a.out
    _emit(fields, a.json, out)
    if a.plot:
        from .plots import plot_polynomial
        plot_polynomial(poly, a.plot, fields.get("threshold"), dioph.bound(poly))
    return EXIT_OK


def _numeral(text, base):
    return numeral.parse_digits(text, base).value


def _plot_trace(a, text):
    if a.plot:
        from .plots import plot_trace_text
        plot_trace_text(text, a.plot)


def cmd_trick(a, out):
    st, trace = numeral.trick_table(a.base, a.digit, a.reps)
    if a.json:
        _emit({"statement": show(st),
               "multiplicand": str(numeral.to_digits(trace.multiplicand, a.base)),
               "multiplier": str(numeral.to_digits(trace.multiplier, a.base)),
               "rows": [str(r) for _, r in trace.partial_rows],
               "result": str(trace.result)}, True, out)
    else:
        out.write(numeral.render_multiplication(trace))
    _plot_trace(a, numeral.render_multiplication(trace))
    return EXIT_OK


def cmd_multiply(a, out):
    trace = numeral.long_multiply_trace(_numeral(a.x, a.base), _numeral(a.y, a.base), a.base)
    if a.json:
        _emit({"rows": [str(r) for _, r in trace.partial_rows],
               "shifts": [k for k, _ in trace.partial_rows],
               "result": str(trace.result)}, True, out)
    else:
        out.write(numeral.render_multiplication(trace))
    _plot_trace(a, numeral.render_multiplication(trace))
    return EXIT_OK


def cmd_divide(a, out):
    d = _numeral(a.d, a.base)
    if d == 0:
        raise UsageError("division by zero")
    trace = numeral.long_divide_trace(_numeral(a.n, a.base), d, a.base)
    if a.json:
        to = numeral.to_digits
        _emit({"quotient_digits": str(trace.quotient_digits()),
               "quotient": str(to(trace.quotient, a.base)),
               "remainder": str(to(trace.remainder, a.base)),
               "partial_remainders": [str(to(r, a.base)) for _, _, r in trace.steps]},
              True, out)
    else:
        out.write(numeral.render_division(trace))
    if a.plot:
        from .plots import plot_remainders
        plot_remainders(trace, a.plot)
    return EXIT_OK


def cmd_lemmas(a, out):
    from .library import digit_scaling_instance, load_library, write_files
    if a.digit is not None:
        goal, proof = digit_scaling_instance(a.digit)
        if a.out:
            _write_proof(proof, a.out)
        _emit({"statement": show(goal), "proof_file": a.out or "",
               "proof_bytes": size_bytes(proof)}, a.json, out)
        return EXIT_OK
    lib = load_library()
    if a.out:
        write_files(Path(a.out))
    rows = []
    for name, e in lib.items():
        rows.append({"name": name, "statement": show(e.statement), "tags": list(e.tags),
                     "steps": check(e.proof, e.statement, _lemmas()).steps,
                     "proof_bytes": size_bytes(e.proof)})
    if a.json:
        _emit({"lemmas": rows}, True, out)
    else:
        for r in rows:
            out.write(f"{r['name']}\t{r['steps']}\t{r['proof_bytes']}\t{r['statement']}\n")
    return EXIT_OK


# --------------------------------------------------------------- parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON object")
    common.add_argument("--alpha", type=_rational, default=explain.DEFAULT_ALPHA,
                        help="size ratio threshold (default 1)")
    common.add_argument("--kmax", type=int, default=explain.DEFAULT_KMAX,
                        help="most cases an explanatory proof may split into (default 12)")
    common.add_argument("--step-limit", type=_positive, default=explain.DEFAULT_STEP_LIMIT,
                        help="checker step budget (default 10^7)")
    drawn = argparse.ArgumentParser(add_help=False, parents=[common])
    drawn.add_argument("--plot", metavar="PATH", help="also draw a figure to PATH")

    p = _Parser(prog="cutexplain", description="Check proofs and measure explanations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="check a proof file against a goal")
    s.add_argument("proof")
    s.add_argument("--goal", required=True)
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("classify", parents=[common], help="categorize a proof")
    s.add_argument("proof")
    s.add_argument("--goal")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("explain", parents=[drawn], help="run and measure an explanation")
    s.add_argument("kind", choices=["proof", "dioph", "centroid", "bookshop"])
    s.add_argument("args", nargs="*")
    s.add_argument("--goal")
    s.add_argument("--input")
    s.add_argument("--data", help="CSV of points with a label column")
    s.set_defaults(fn=cmd_explain)

    s = sub.add_parser("dioph", parents=[drawn], help="prove a polynomial has no natural root")
    s.add_argument("poly")
    s.add_argument("--mode", choices=["enum", "interval"], default="interval")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_dioph)

    s = sub.add_parser("trick", parents=[drawn], help="the repdigit multiplication table")
    s.add_argument("--base", type=int, default=10)
    s.add_argument("--digit", type=int, required=True)
    s.add_argument("--reps", type=_positive, default=1)
    s.set_defaults(fn=cmd_trick)

    s = sub.add_parser("multiply", parents=[drawn], help="long multiplication trace")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--base", type=int, default=10)
    s.set_defaults(fn=cmd_multiply)

    s = sub.add_parser("divide", parents=[drawn], help="long division trace")
    s.add_argument("n")
    s.add_argument("d")
    s.add_argument("--base", type=int, default=10)
    s.set_defaults(fn=cmd_divide)

    s = sub.add_parser("lemmas", parents=[common], help="list or export the checked lemmas")
    s.add_argument("--out", help="directory for all lemma files, or the file for --digit")
    s.add_argument("--digit", type=int, help="export the digit-scaling instance for this digit")
    s.set_defaults(fn=cmd_lemmas)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args, out)
    except UsageError as e:
        err.write(f"{e}\n")
        return EXIT_USAGE
    except (LangError, SexpError, ValueError, ZeroDivisionError, OSError,
            explain.PreconditionFalse, explain.Tie) as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    except dioph.RootFound as e:
        err.write(f"root found: {e.witness}\n")
        return EXIT_REJECTED
    except (explain.ProofMismatch, StepLimitExceeded) as e:
        err.write(f"rejected: {e}\n")
        return EXIT_REJECTED


def main():
    sys.exit(run())
