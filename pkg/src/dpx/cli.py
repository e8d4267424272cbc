"""Command-line front end: ``dpx <command> FILE``.

Exit status is 0 when the check passes, 1 on a mathematical failure (a
violated condition, an unresolved overlap, a crosscheck mismatch) and 2 on
malformed input or a family that fails validation.  ``--report`` switches
to line-oriented ``key: value`` output.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .dpe import (
    CriterionFails,
    build_extension,
    check_dedata,
    detect_iterated,
    normalize_dedata,
)
from .document import (
    Document,
    format_bracket,
    format_dedata,
    format_presentation,
    load_document,
)
from .errors import DpxError, ParseError
from .expr import parse_scalar
from .ncalg import confluence_check, normal_form
from .pbracket import jacobi_check
from .poly import QQ
from .scalar import lagrange_interpolate
from .scl import (
    crosscheck_limit,
    default_overlap_len,
    deform,
    limit_coefficients,
    limit_dedata,
    validate_family,
)

PASS, FAIL, BAD_INPUT = 0, 1, 2

CAVEAT = (
    "note: only the given variables are tested; an iterated presentation "
    "in other variables is not ruled out"
)


class _Out:
    """Collects human-readable lines and report pairs; prints one of them."""

    def __init__(self, command, report):
        self.report = report
        self.lines = []
        self.pairs = [("command", command)]

    def say(self, text=""):
        self.lines.append(text)

    def put(self, key, value):
        self.pairs.append((key, value))

    def flush(self, status):
        self.pairs.append(("status", {PASS: "pass", FAIL: "fail"}.get(status, "error")))
        if self.report:
            for k, v in self.pairs:
                print(f"{k}: {v}")
        else:
            for line in self.lines:
                print(line)
        return status


def corpus_path(name: str) -> Path:
    """Resolve a file argument, falling back to the bundled example corpus."""
    p = Path(name)
    if p.exists():
        return p
    base = resources.files("dpx") / "examples"
    for candidate in (name, name + ".dpx", Path(name).name):
        q = base / str(candidate)
        if q.is_file():
            return Path(str(q))
    raise ParseError(f"no such file: {name}")


def _load(name) -> Document:
    return load_document(corpus_path(name))


def _ring_header(doc):
    return ["[ring]", f"generators = {', '.join(doc.generators)}", f"variables = {', '.join(doc.variables)}"]


# -- commands ------------------------------------------------------------------


def cmd_check(args, out):
    doc = _load(args.file)
    d = doc.require("dedata")
    report = check_dedata(d)
    out.put("conditions_holding", report.holding)
    out.put("failed_conditions", " ".join(str(c) for c in report.failed_conditions))
    out.say(f"{report.holding}/13 conditions hold")
    for failure in report.failures:
        out.say(f"  condition {failure}")
    ext = build_extension(d, check=False)
    jac = jacobi_check(ext.structure)
    out.put("jacobi", "pass" if jac else "fail")
    out.put("jacobi_triples", jac.triples_checked)
    if jac:
        out.say(f"jacobi identity holds on all {jac.triples_checked} generator triples")
    else:
        for triple, value in jac.failures.items():
            out.say(f"  jacobiator({', '.join(triple)}) = {value}")
    return PASS if report and jac else FAIL


def cmd_limit(args, out):
    doc = _load(args.file)
    f = doc.require("family")
    v = validate_family(f)
    if not v:
        for slot, msg in v.problems:
            out.say(f"{slot}: {msg}")
        out.put("problems", len(v.problems))
        return BAD_INPUT
    result = limit_dedata(f)
    report = check_dedata(result.dedata)
    blocks = [_ring_header(doc)]
    if result.base.table:
        blocks.append(format_bracket(result.base))
    blocks.append(format_dedata(result.dedata))
    out.say("\n\n".join("\n".join(b) for b in blocks))
    out.put("conditions_holding", report.holding)
    out.put("failed_conditions", " ".join(str(c) for c in report.failed_conditions))
    if not report:
        out.say(f"# the limit is not Poisson: conditions {report.failed_conditions} fail")
        return FAIL
    return PASS


def cmd_deform(args, out):
    doc = _load(args.file)
    f = doc.require("family")
    lam = parse_scalar(args.lam, QQ)
    pres = deform(f, lam)
    out.say("\n".join(_ring_header(doc)) + "\n\n" + "\n".join(format_presentation(pres)))
    out.put("lambda", lam)
    return PASS


def cmd_crosscheck(args, out):
    doc = _load(args.file)
    f = doc.require("family")
    r = crosscheck_limit(f, args.max_len)
    if r.problems:
        for p in r.problems:
            out.say(p)
        out.put("problems", len(r.problems))
        return BAD_INPUT
    c = r.confluence
    if c.resolved:
        out.say(f"confluence: resolved up to length {c.max_len} ({c.words_checked} overlap words)")
    else:
        out.say(f"confluence: {len(c.unresolved)} unresolved overlap words up to length {c.max_len}")
        for word, _ in c.unresolved:
            out.say(f"  {'*'.join(word)}")
    if r.limit_failures:
        out.say(f"limit DE-data: conditions {r.limit_failures} fail")
    else:
        out.say("limit DE-data: 13/13 conditions hold")
    for u, v, lhs, rhs in r.mismatches:
        out.say(f"mismatch {{{u}, {v}}}: commutator {lhs}, DE-data {rhs}")
    out.say(f"{r.pairs_checked} generator pairs compared, {len(r.mismatches)} mismatches")
    out.say("crosscheck: " + ("pass" if r else "fail"))
    out.put("confluence", "resolved" if c.resolved else "unresolved")
    out.put("limit_failed_conditions", " ".join(str(x) for x in r.limit_failures))
    out.put("pairs_checked", r.pairs_checked)
    out.put("mismatches", len(r.mismatches))
    return PASS if r else FAIL


def _witness(name, pair):
    g, img = pair
    return f"{name}({g})={img}"


def cmd_detect(args, out):
    doc = _load(args.file)
    d = doc.require("dedata")
    result = detect_iterated(d)
    if isinstance(result, CriterionFails):
        parts = []
        if result.alpha12:
            parts.append(_witness("α12", result.alpha12))
        if result.alpha21:
            parts.append(_witness("α21", result.alpha21))
        if result.q11 is not None:
            parts.append(f"q11={result.q11}")
        out.say("criterion fails: " + ", ".join(parts))
        out.say(CAVEAT)
        out.put("form", "none")
        out.put("witnesses", ", ".join(parts))
        return PASS
    first, second = result.first, result.second
    out.say(
        f"form {result.form}: R[{first.variable}; beta1, nu1]_p[{second.variable}; beta2, nu2]_p"
    )
    for label, e in (("1", first), ("2", second)):
        for g in e.base.ring.generators:
            out.say(f"beta{label}({g}) = {e.beta.image(g)}")
        for g in e.base.ring.generators:
            out.say(f"nu{label}({g}) = {e.nu.image(g)}")
    out.put("form", result.form)
    return PASS


def _combo(row, variables):
    terms = []
    for c, v in zip(row, variables):
        if c == 0:
            continue
        terms.append(v if c == 1 else f"{c}*{v}")
    return " + ".join(terms) or "0"


def cmd_normalize(args, out):
    doc = _load(args.file)
    d = doc.require("dedata")
    new, m = normalize_dedata(d)
    v1, v2 = d.variables
    case = 1 if d.q12 else (2 if d.q11 else 3)
    out.say(f"case {case}: z1 = {_combo(m[0], d.variables)}, z2 = {_combo(m[1], d.variables)}")
    out.say("\n".join(format_dedata(new)))
    report = check_dedata(new)
    out.put("case", case)
    out.put("q", f"{new.q11}, {new.q12}")
    out.put("conditions_holding", report.holding)
    return PASS if report else FAIL


def cmd_nf(args, out):
    doc = _load(args.file)
    pres = doc.any_presentation()
    value = normal_form(pres, args.word)
    out.say(str(value))
    out.put("normal_form", value)
    return PASS


def cmd_confluence(args, out):
    doc = _load(args.file)
    pres = doc.any_presentation()
    n = args.max_len or default_overlap_len()
    if n < 3:
        raise ParseError("--max-len must be at least 3")
    c = confluence_check(pres, n)
    out.put("words_checked", c.words_checked)
    out.put("unresolved", len(c.unresolved))
    if c.resolved:
        out.say(f"resolved up to length {n} ({c.words_checked} overlap words)")
        return PASS
    out.say(f"{len(c.unresolved)} of {c.words_checked} overlap words unresolved up to length {n}")
    for word, forms in c.unresolved:
        out.say(f"  {'*'.join(word)}:")
        for nf in forms:
            out.say(f"    {nf}")
    return FAIL


def cmd_bridge(args, out):
    doc = _load(args.file)
    f = doc.require("family")
    bad = 0
    for slot, mono, quotient, derivative in limit_coefficients(f):
        ok = quotient == derivative
        bad += not ok
        out.say(f"{slot} [{mono}]: {quotient} {'=' if ok else '!='} {derivative}")
    out.put("mismatches", bad)
    return PASS if not bad else FAIL


def cmd_interp(args, out):
    points = []
    for item in args.points.split(","):
        node, sep, value = item.partition(":")
        if not sep:
            raise ParseError(f"expected node:value, got {item.strip()!r}")
        points.append((parse_scalar(node.strip(), QQ), parse_scalar(value.strip(), QQ)))
    try:
        f = lagrange_interpolate(points)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    out.say(str(f))
    out.put("polynomial", f)
    return PASS


# -- entry point ---------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(
        prog="dpx", description="Double Poisson extensions and semiclassical limits."
    )
    p.add_argument("--version", action="version", version=f"dpx {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, file=True):
        sp = sub.add_parser(name, help=help)
        if file:
            sp.add_argument("file", help="input file, or the name of a bundled example")
        sp.add_argument("--report", action="store_true", help="key: value output")
        sp.set_defaults(fn=fn)
        return sp

    add("check", cmd_check, "verify DE-data conditions and the Jacobi identity")
    add("limit", cmd_limit, "semiclassical limit of a family, as DE-data")
    add("deform", cmd_deform, "evaluate a family at t = lambda").add_argument(
        "--lambda", dest="lam", required=True, help="deformation point"
    )
    add("crosscheck", cmd_crosscheck, "compare commutator and DE-data brackets").add_argument(
        "--max-len", type=int, default=None, help="overlap length bound"
    )
    add("detect", cmd_detect, "test for an iterated Poisson polynomial extension")
    add("normalize", cmd_normalize, "change variables to normalize q")
    add("nf", cmd_nf, "normal form of a word").add_argument(
        "--word", required=True, help="'*'-separated symbols, e.g. y2*y1*x"
    )
    add("confluence", cmd_confluence, "check overlap words").add_argument(
        "--max-len", type=int, default=None, help="overlap length bound (default 4)"
    )
    add("bridge", cmd_bridge, "limit coefficients via (t-1)-division and derivative")
    add("interp", cmd_interp, "Lagrange interpolation", file=False).add_argument(
        "--points", required=True, help="e.g. '1:0,2:5'"
    )
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = _Out(args.command, args.report)
    try:
        status = args.fn(args, out)
    except (DpxError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"dpx {args.command}: error: {msg}", file=sys.stderr)
        out.put("error", msg)
        if args.report:
            out.flush(BAD_INPUT)
        return BAD_INPUT
    return out.flush(status)


if __name__ == "__main__":
    sys.exit(main())
