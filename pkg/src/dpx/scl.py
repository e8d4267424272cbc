"""Semiclassical limits (t -> 1) and deformations (t -> lambda) of families of
left double extensions with coefficients in Q(t)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from .dpe import DEData, InvalidDEDataError, build_extension, check_dedata
from .errors import CongruenceError, NotDivisibleError, PoleError
from .ncalg import NCPresentation, commutator_limit_bracket, confluence_check
from .pbracket import PoissonStructure
from .poly import QQ, QQT, Derivation, Poly
from .scalar import (
    as_rational,
    lagrange_interpolate,
    rf_derivative,
    rf_div_t_minus_1,
    rf_eval,
)


def default_overlap_len():
    return int(os.environ.get("DPX_MAX_OVERLAP_LEN", "4"))


@dataclass(frozen=True)
class ParamFamily:
    """A presentation over Q(t) together with its deformation points."""

    presentation: NCPresentation
    lambdas: tuple = ()

    def __post_init__(self):
        if self.presentation.base.scalar_kind != QQT:
            raise ValueError("a family needs Q(t) coefficients")
        lams = tuple(as_rational(x) for x in self.lambdas)
        for lam in lams:
            if lam in (0, 1):
                raise ValueError(f"deformation point {lam} must avoid 0 and 1")
        object.__setattr__(self, "lambdas", lams)


@dataclass
class FamilyReport:
    """``problems`` lists ``(slot, message)`` pairs."""

    problems: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.problems

    def __bool__(self):
        return self.passed


def _poly_of(ring, v):
    return v if isinstance(v, Poly) else ring.const(v)


def _excess(pres: NCPresentation):
    """Each slot minus its value in the commutative presentation, as a Poly."""
    ident = pres.identity_slots()
    ring = pres.base
    return [(name, _poly_of(ring, v) - _poly_of(ring, ident[name])) for name, v in pres.slots()]


def validate_family(f: ParamFamily) -> FamilyReport:
    """Check admissibility at 1 and every lambda, and the congruences
    p11, p12 - 1, tau, sigma - I, delta (and base relations) = 0 mod (t - 1)."""
    report = FamilyReport()
    points = (Fraction(1),) + f.lambdas
    for name, value in f.presentation.slots():
        poly = _poly_of(f.presentation.base, value)
        for c in poly.terms.values():
            for pt in points:
                if c.den(pt) == 0:
                    report.problems.append((name, f"coefficient {c} has a pole at t = {pt}"))
    if report.problems:
        return report
    for name, diff in _excess(f.presentation):
        for e, c in diff.sorted_terms():
            v = rf_eval(c, 1)
            if v:
                mono = Poly(diff.ring, {e: 1})
                report.problems.append(
                    (name, f"coefficient of {mono} is {v} at t = 1 (must match the identity)")
                )
    return report


@dataclass(frozen=True)
class LimitResult:
    base: PoissonStructure
    dedata: DEData


def _lim(poly: Poly, ring):
    """(poly / (t - 1)) at t = 1, coefficientwise, landing in ``ring`` over Q."""
    return Poly(ring, {e: rf_eval(rf_div_t_minus_1(c), 1) for e, c in poly.terms.items()})


def limit_dedata(f: ParamFamily) -> LimitResult:
    """The coefficientwise limit at t = 1, without checking that it is Poisson."""
    report = validate_family(f)
    if not report:
        name, msg = report.problems[0]
        raise CongruenceError(f"{name}: {msg}")
    pres = f.presentation
    R = pres.base.with_scalars(QQ)
    ex = dict(_excess(pres))
    g = pres.base.generators

    def lim(name):
        return _lim(ex[name], R)

    alpha = tuple(
        tuple(Derivation(R, [lim(f"sigma{i}{j}({x})") for x in g]) for j in (1, 2))
        for i in (1, 2)
    )
    nu = tuple(Derivation(R, [lim(f"delta{i}({x})") for x in g]) for i in (1, 2))
    table = {}
    for hi, lo in pres.baserel:
        table[(g[hi], g[lo])] = lim(f"baserel({g[hi]} {g[lo]})")
    base = PoissonStructure(R, table)
    d = DEData(
        base,
        lim("p11").constant_value(),
        lim("p12").constant_value(),
        alpha,
        nu,
        lim("tau1"),
        lim("tau2"),
        lim("tau0"),
        pres.variables,
    )
    return LimitResult(base, d)


def semiclassical_limit(f: ParamFamily) -> LimitResult:
    """DE-data of the Poisson algebra A/(t-1)A, read off coefficientwise.

    Raises :class:`InvalidDEDataError` when the limit is not a Poisson
    bracket, which happens when the family is not a flat deformation.
    """
    result = limit_dedata(f)
    check = check_dedata(result.dedata)
    if not check:
        raise InvalidDEDataError(
            f"limit DE-data fails conditions {check.failed_conditions}", check
        )
    return result


def deform(f: ParamFamily, lam) -> NCPresentation:
    """The presentation obtained by evaluating every coefficient at t = lam."""
    lam = as_rational(lam)
    if lam in (0, 1):
        raise ValueError(f"deformation point {lam} must avoid 0 and 1")
    if lam not in f.lambdas:
        raise ValueError(f"{lam} is not a registered deformation point of this family")
    return f.presentation.map_scalars(lambda c: rf_eval(c, lam), QQ)


@dataclass
class CrosscheckReport:
    """``mismatches`` lists ``(u, v, commutator value, DE-data value)``;
    ``limit_failures`` the conditions the limit DE-data violates."""

    pairs_checked: int = 0
    mismatches: list = field(default_factory=list)
    confluence: object = None
    limit_failures: list = field(default_factory=list)
    problems: list = field(default_factory=list)

    @property
    def passed(self):
        return (
            not self.mismatches
            and not self.problems
            and not self.limit_failures
            and self.confluence is not None
            and self.confluence.resolved
        )

    def __bool__(self):
        return self.passed


def crosscheck_limit(f: ParamFamily, max_len: int | None = None) -> CrosscheckReport:
    """Compare the commutator bracket of the family at t = 1 with the bracket
    built from its limit DE-data, on every pair of generators.

    Both routes are always compared; the report passes only if, in
    addition, the presentation is confluent up to ``max_len`` and the limit
    DE-data is Poisson.
    """
    report = CrosscheckReport()
    v = validate_family(f)
    if not v:
        report.problems = [f"{n}: {m}" for n, m in v.problems]
        return report
    pres = f.presentation
    report.confluence = confluence_check(pres, max_len or default_overlap_len())
    limit = limit_dedata(f)
    report.limit_failures = check_dedata(limit.dedata).failed_conditions
    ext = build_extension(limit.dedata, check=False)
    syms = pres.symbols
    for i in range(len(syms)):
        for j in range(i + 1, len(syms)):
            u, w = syms[i], syms[j]
            lhs = commutator_limit_bracket(pres, [u], [w]).embed(ext.ring)
            rhs = ext.bracket(ext.ring.gen(u), ext.ring.gen(w))
            report.pairs_checked += 1
            if lhs != rhs:
                report.mismatches.append((u, w, lhs, rhs))
    return report


def limit_coefficients(f: ParamFamily):
    """Each t-dependent coefficient c(t) that must vanish at 1, with its
    limit computed two ways: c/(t-1) at 1, and the derivative c'(1).

    Yields ``(slot, monomial, quotient value, derivative value)``.
    """
    for name, diff in _excess(f.presentation):
        for e, c in diff.sorted_terms():
            try:
                via_quotient = rf_eval(rf_div_t_minus_1(c), 1)
            except (NotDivisibleError, PoleError) as exc:
                raise CongruenceError(f"{name}: {exc}") from None
            via_derivative = rf_eval(rf_derivative(c), 1)
            yield name, Poly(diff.ring, {e: 1}), via_quotient, via_derivative


def build_family_from_target(target: NCPresentation, lam, profile: dict | None = None) -> ParamFamily:
    """Interpolate each coefficient between its value at t = 1 (from
    ``profile``) and its target value at t = lam.

    ``profile`` maps slot names (see :meth:`NCPresentation.slots`) to their
    value at t = 1.  Slots not listed take the value of the commutative
    presentation, which is what the congruences at t = 1 require.
    """
    lam = as_rational(lam)
    if lam in (0, 1):
        raise ValueError(f"deformation point {lam} must avoid 0 and 1")
    if target.base.scalar_kind != QQ:
        raise ValueError("target presentation must have rational coefficients")
    at_one = target.identity_slots()
    for name, v in (profile or {}).items():
        if name not in at_one:
            raise KeyError(f"unknown coefficient slot {name!r}")
        at_one[name] = v
    base_t = target.base.with_scalars(QQT)
    values = {}
    for name, v in target.slots():
        tv = _poly_of(target.base, v)
        ov = _poly_of(target.base, at_one[name])
        out = {}
        for e in set(tv.terms) | set(ov.terms):
            out[e] = lagrange_interpolate([(1, ov.coefficient(e)), (lam, tv.coefficient(e))])
        poly = Poly(base_t, out)
        values[name] = poly.constant_value() if name in ("p11", "p12") else poly
    return ParamFamily(target.with_slots(values, base_t), (lam,))
