"""Reading and writing ``.dpx`` input files.

A file is a sequence of sections.  ``[ring]`` comes first and names the
base generators and the two extension variables; the remaining sections
are optional and each appears at most once::

    [ring]
    generators = z
    variables = x, y

    [bracket]                  # base Poisson bracket, {a, b} = expr
    a, b -> expr

    [dedata]                   # missing entries are zero
    q = 0, -1
    w = 0, 0, 2*z
    alpha11: z -> -z
    nu1: z -> 0

    [presentation]             # over Q; missing entries are those of the
    p11 = 0                    # commutative polynomial ring
    p12 = 1
    tau = 0, 0, 0
    sigma12: z -> 1
    delta1: z -> 0
    baserel: x2 x1 -> -x1*x2   # only for noncommuting base generators

    [family]                   # as [presentation], over Q(t)
    lambdas = 2
    build = lagrange           # optional: entries are values at t = lambda,
    profile: p12 -> 1          # interpolated against values at t = 1

Comments start with ``#``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .dpe import DEData
from .errors import ParseError
from .expr import parse_poly, parse_scalar
from .ncalg import NCPresentation
from .pbracket import PoissonStructure
from .poly import QQ, QQT, Poly, PolyRing
from .scl import ParamFamily, build_family_from_target

SECTIONS = ("ring", "bracket", "dedata", "presentation", "family")

_HEADER = re.compile(r"^\[(\w+)\]$")


@dataclass
class Document:
    """Parsed contents of a ``.dpx`` file.

    For a family written with ``build = lagrange``, ``target`` holds the
    entries as given (a presentation over Q) and ``family`` the interpolated
    result.
    """

    generators: tuple
    variables: tuple = ("y1", "y2")
    bracket: PoissonStructure | None = None
    dedata: DEData | None = None
    presentation: NCPresentation | None = None
    family: ParamFamily | None = None
    target: NCPresentation | None = None
    profile: dict = field(default_factory=dict)

    @property
    def base_ring(self) -> PolyRing:
        return PolyRing(self.generators, QQ)

    def require(self, section: str):
        value = {
            "bracket": self.bracket,
            "dedata": self.dedata,
            "presentation": self.presentation,
            "family": self.family,
        }[section]
        if value is None:
            raise ParseError(f"input has no [{section}] section")
        return value

    def any_presentation(self) -> NCPresentation:
        """The [presentation] if present, otherwise the family's."""
        if self.presentation is not None:
            return self.presentation
        if self.family is not None:
            return self.family.presentation
        raise ParseError("input has neither a [presentation] nor a [family] section")


# -- parsing -------------------------------------------------------------------


@dataclass
class _Line:
    number: int
    text: str
    column: int  # 1-based column of text within the raw line

    def fail(self, msg, offset=0):
        raise ParseError(msg, self.number, self.column + offset)


def _strip(raw: str, number: int):
    body = raw.split("#", 1)[0].rstrip()
    lead = len(body) - len(body.lstrip())
    return _Line(number, body.strip(), lead + 1)


def _split_key(line: _Line, sep: str):
    """``key sep rest`` with the column of ``rest``."""
    key, _, rest = line.text.partition(sep)
    pos = len(key) + len(sep)
    pos += len(rest) - len(rest.lstrip())
    return key.strip(), rest.strip(), line.column + pos


def _split_list(text: str, column: int):
    """Comma-separated items with their columns."""
    out = []
    pos = 0
    for piece in text.split(","):
        lead = len(piece) - len(piece.lstrip())
        out.append((piece.strip(), column + pos + lead))
        pos += len(piece) + 1
    return out


def _names(line: _Line, text: str, column: int):
    items = _split_list(text, column) if text else []
    names = []
    for name, col in items:
        if not re.fullmatch(r"[A-Za-z_]\w*", name):
            raise ParseError(f"bad identifier {name!r}", line.number, col)
        names.append(name)
    return tuple(names)


def _map_entry(line: _Line, ring: PolyRing):
    """``name: g -> expr`` as ``(name, g, Poly)``."""
    name, rest, col = _split_key(line, ":")
    lhs, arrow, rhs = rest.partition("->")
    if not arrow:
        line.fail("expected 'name: generator -> expression'")
    g = lhs.strip()
    if g not in ring.generators:
        raise ParseError(f"unknown generator {g!r}", line.number, col)
    rcol = col + len(lhs) + 2 + (len(rhs) - len(rhs.lstrip()))
    return name, g, parse_poly(rhs.strip(), ring, line.number, rcol)


def _scalar_list(line, text, column, kind, count):
    items = _split_list(text, column)
    if len(items) != count:
        line.fail(f"expected {count} comma-separated values, got {len(items)}")
    return [parse_scalar(s, kind, line.number, c) for s, c in items]


def _poly_list(line, text, column, ring, count):
    items = _split_list(text, column)
    if len(items) != count:
        line.fail(f"expected {count} comma-separated values, got {len(items)}")
    return [parse_poly(s, ring, line.number, c) for s, c in items]


def _sections(text: str):
    current = None
    out = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw, number)
        if not line.text:
            continue
        m = _HEADER.match(line.text)
        if m:
            name = m.group(1)
            if name not in SECTIONS:
                line.fail(f"unknown section [{name}]")
            if any(s == name for s, _, _ in out):
                line.fail(f"duplicate section [{name}]")
            current = (name, number, [])
            out.append(current)
            continue
        if current is None:
            line.fail("expected a section header such as [ring]")
        current[2].append(line)
    return out


def _parse_ring(lines, number):
    gens, variables = None, ("y1", "y2")
    for line in lines:
        key, rest, col = _split_key(line, "=")
        if key == "generators":
            gens = _names(line, rest, col)
        elif key == "variables":
            variables = _names(line, rest, col)
            if len(variables) != 2:
                line.fail("exactly two variables are required")
        else:
            line.fail(f"unknown [ring] entry {key!r}")
    if gens is None:
        raise ParseError("[ring] needs a 'generators =' line", number)
    if set(gens) & set(variables):
        raise ParseError("variables must differ from the base generators", number)
    try:
        PolyRing(gens + variables, QQ)
    except ValueError as exc:
        raise ParseError(str(exc), number) from None
    return gens, variables


def _parse_bracket(lines, ring):
    table = {}
    for line in lines:
        lhs, arrow, rhs = line.text.partition("->")
        if not arrow:
            line.fail("expected 'a, b -> expression'")
        pair = _names(line, lhs.strip(), line.column)
        if len(pair) != 2:
            line.fail("a bracket entry names two generators")
        for g in pair:
            if g not in ring.generators:
                line.fail(f"unknown generator {g!r}")
        rcol = line.column + len(lhs) + 2 + (len(rhs) - len(rhs.lstrip()))
        value = parse_poly(rhs.strip(), ring, line.number, rcol)
        try:
            table[pair] = value
            PoissonStructure(ring, table)
        except ValueError as exc:
            line.fail(str(exc))
    return PoissonStructure(ring, table)


def _parse_dedata(lines, structure, variables):
    ring = structure.ring
    q, w = (0, 0), (0, 0, 0)
    maps = {}
    for line in lines:
        if "->" in line.text:
            name, g, value = _map_entry(line, ring)
            m = re.fullmatch(r"(alpha[12][12]|nu[12])", name)
            if not m:
                line.fail(f"unknown [dedata] map {name!r}")
            maps.setdefault(name, {})[g] = value
            continue
        key, rest, col = _split_key(line, "=")
        if key == "q":
            q = _scalar_list(line, rest, col, QQ, 2)
        elif key == "w":
            w = _poly_list(line, rest, col, ring, 3)
        else:
            line.fail(f"unknown [dedata] entry {key!r}")
    alpha = {k[5:]: v for k, v in maps.items() if k.startswith("alpha")}
    nu = {k[2:]: v for k, v in maps.items() if k.startswith("nu")}
    return DEData.from_images(structure, q=q, w=w, alpha=alpha, nu=nu, variables=variables)


def _parse_presentation(lines, ring, variables, family):
    """Entries of [presentation]/[family]; returns (presentation, extras)."""
    kind = ring.scalar_kind
    p = [0, 1]
    tau = [0, 0, 0]
    sigma, delta, baserel = {}, {}, {}
    lambdas, build, profile = None, None, []
    for line in lines:
        if "->" in line.text:
            name, rest, col = _split_key(line, ":")
            if family and name == "profile":
                profile.append((line, rest, col))
                continue
            if name == "baserel":
                lhs, _, rhs = rest.partition("->")
                pair = lhs.split()
                if len(pair) != 2 or any(g not in ring.generators for g in pair):
                    line.fail("expected 'baserel: g_hi g_lo -> expression' with base generators")
                hi, lo = pair
                if ring.index(hi) <= ring.index(lo):
                    line.fail(f"base relations rewrite {hi} {lo} only when {hi} comes after {lo}")
                rcol = col + len(lhs) + 2 + (len(rhs) - len(rhs.lstrip()))
                baserel[(hi, lo)] = parse_poly(rhs.strip(), ring, line.number, rcol)
                continue
            name, g, value = _map_entry(line, ring)
            if re.fullmatch(r"sigma[12][12]", name):
                sigma.setdefault(name[5:], {})[g] = value
            elif re.fullmatch(r"delta[12]", name):
                delta.setdefault(name[5:], {})[g] = value
            else:
                line.fail(f"unknown map {name!r}")
            continue
        key, rest, col = _split_key(line, "=")
        if key in ("p11", "p12"):
            p[int(key[2]) - 1] = parse_scalar(rest, kind, line.number, col)
        elif key == "tau":
            tau = _poly_list(line, rest, col, ring, 3)
        elif family and key == "lambdas":
            lambdas = _scalar_list(line, rest, col, QQ, len(_split_list(rest, col)))
        elif family and key == "build":
            if rest != "lagrange":
                line.fail("the only supported build is 'lagrange'")
            build = rest
        else:
            line.fail(f"unknown entry {key!r}")
    try:
        pres = NCPresentation.from_images(
            ring, p=p, tau=[x if isinstance(x, Poly) else ring.const(x) for x in tau],
            sigma=sigma, delta=delta, baserel=baserel, variables=variables,
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return pres, lambdas, build, profile


def parse_document(text: str) -> Document:
    sections = _sections(text)
    if not sections or sections[0][0] != "ring":
        raise ParseError("the first section must be [ring]", sections[0][1] if sections else None)
    gens, variables = _parse_ring(sections[0][2], sections[0][1])
    doc = Document(gens, variables)
    ring = doc.base_ring
    bracket_lines = next((ls for s, _, ls in sections if s == "bracket"), None)
    doc.bracket = _parse_bracket(bracket_lines, ring) if bracket_lines is not None else None
    structure = doc.bracket or PoissonStructure.trivial(ring)
    for name, number, lines in sections[1:]:
        if name == "dedata":
            doc.dedata = _parse_dedata(lines, structure, variables)
        elif name == "presentation":
            doc.presentation, *_ = _parse_presentation(lines, ring, variables, False)
        elif name == "family":
            _parse_family(doc, lines, number, ring, variables)
    return doc


def _parse_family(doc, lines, number, ring, variables):
    probe = [ln for ln in lines if _split_key(ln, "=")[0] == "build"]
    lagrange = bool(probe)
    use = ring if lagrange else ring.with_scalars(QQT)
    pres, lambdas, build, profile = _parse_presentation(lines, use, variables, True)
    if not lambdas:
        raise ParseError("[family] needs a 'lambdas =' line", number)
    if profile and not lagrange:
        profile[0][0].fail("profile lines need 'build = lagrange'")
    try:
        if lagrange:
            if len(lambdas) != 1:
                raise ParseError("'build = lagrange' takes exactly one lambda", number)
            slots = dict(pres.slots())
            prof = {}
            for line, rest, col in profile:
                slot, _, rhs = rest.partition("->")
                slot = slot.strip()
                if slot not in slots:
                    line.fail(f"unknown coefficient slot {slot!r}")
                rcol = col + len(rest.partition("->")[0]) + 2
                rcol += len(rhs) - len(rhs.lstrip())
                if isinstance(slots[slot], Poly):
                    prof[slot] = parse_poly(rhs.strip(), ring, line.number, rcol)
                else:
                    prof[slot] = parse_scalar(rhs.strip(), QQ, line.number, rcol)
            doc.target, doc.profile = pres, prof
            doc.family = build_family_from_target(pres, lambdas[0], prof)
        else:
            doc.family = ParamFamily(pres, tuple(lambdas))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), number) from None


def load_document(path) -> Document:
    return parse_document(Path(path).read_text())


# -- printing ------------------------------------------------------------------


def _ring_lines(doc):
    return [
        "[ring]",
        f"generators = {', '.join(doc.generators)}",
        f"variables = {', '.join(doc.variables)}",
    ]


def format_bracket(ps: PoissonStructure):
    out = ["[bracket]"]
    out += [f"{a}, {b} -> {v}" for a, b, v in ps.lines()]
    return out


def format_dedata(d: DEData):
    gens = d.ring.generators
    out = ["[dedata]", f"q = {d.q11}, {d.q12}", f"w = {d.w1}, {d.w2}, {d.w0}"]
    for i in range(2):
        for j in range(2):
            for g in gens:
                img = d.alpha[i][j].image(g)
                if img:
                    out.append(f"alpha{i + 1}{j + 1}: {g} -> {img}")
    for i in range(2):
        for g in gens:
            img = d.nu[i].image(g)
            if img:
                out.append(f"nu{i + 1}: {g} -> {img}")
    return out


def _presentation_body(p: NCPresentation):
    g = p.base.generators
    out = [f"p11 = {p.p11}", f"p12 = {p.p12}", f"tau = {p.tau[0]}, {p.tau[1]}, {p.tau[2]}"]
    for i in range(2):
        for j in range(2):
            for k, name in enumerate(g):
                out.append(f"sigma{i + 1}{j + 1}: {name} -> {p.sigma[i][j][k]}")
    for i in range(2):
        for k, name in enumerate(g):
            if p.delta[i][k]:
                out.append(f"delta{i + 1}: {name} -> {p.delta[i][k]}")
    for (hi, lo), v in sorted(p.baserel.items()):
        out.append(f"baserel: {g[hi]} {g[lo]} -> {v}")
    return out


def format_presentation(p: NCPresentation):
    return ["[presentation]"] + _presentation_body(p)


def format_family(doc_or_family, target=None, profile=None):
    if isinstance(doc_or_family, Document):
        f, target, profile = doc_or_family.family, doc_or_family.target, doc_or_family.profile
    else:
        f = doc_or_family
    out = ["[family]", f"lambdas = {', '.join(str(x) for x in f.lambdas)}"]
    if target is not None:
        out.append("build = lagrange")
        out += _presentation_body(target)
        out += [f"profile: {k} -> {v}" for k, v in sorted((profile or {}).items())]
    else:
        out += _presentation_body(f.presentation)
    return out


def format_document(doc: Document) -> str:
    blocks = [_ring_lines(doc)]
    if doc.bracket is not None:
        blocks.append(format_bracket(doc.bracket))
    if doc.dedata is not None:
        blocks.append(format_dedata(doc.dedata))
    if doc.presentation is not None:
        blocks.append(format_presentation(doc.presentation))
    if doc.family is not None:
        blocks.append(format_family(doc))
    return "\n\n".join("\n".join(b) for b in blocks) + "\n"
