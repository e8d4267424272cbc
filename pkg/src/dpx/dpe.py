"""Double Poisson extensions R[y1, y2] of a Poisson polynomial algebra R.

The extension bracket is determined by DE-data ``{q, alpha, nu, w}``::

    {y2, y1} = q11*y1^2 + q12*y1*y2 + w1*y1 + w2*y2 + w0
    {y1, a}  = alpha11(a)*y1 + alpha12(a)*y2 + nu1(a)
    {y2, a}  = alpha21(a)*y1 + alpha22(a)*y2 + nu2(a)

and is a Poisson bracket exactly when conditions (1)-(13) below hold.
Condition (1), that every alpha_ij and nu_i is a derivation, holds by
construction since maps are stored as :class:`Derivation` objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product

from .errors import DpxError, RingMismatchError
from .pbracket import PoissonStructure, bracket, hamiltonian
from .poly import Derivation, Poly, PolyRing, derivation_compose_bracket

CONDITIONS = tuple(range(1, 14))


class InvalidDEDataError(DpxError, ValueError):
    """DE-data that does not define a Poisson bracket."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class DEData:
    """DE-data of a double Poisson extension of ``base.ring``.

    ``alpha`` is a 2x2 tuple of derivations of the base ring, ``nu`` a pair,
    ``q11``/``q12`` scalars and ``w1``, ``w2``, ``w0`` base-ring elements.
    """

    base: PoissonStructure
    q11: Fraction
    q12: Fraction
    alpha: tuple
    nu: tuple
    w1: Poly
    w2: Poly
    w0: Poly
    variables: tuple = ("y1", "y2")

    def __post_init__(self):
        ring = self.base.ring
        co = ring.coerce_scalar
        object.__setattr__(self, "q11", co(self.q11))
        object.__setattr__(self, "q12", co(self.q12))
        object.__setattr__(self, "alpha", tuple(tuple(row) for row in self.alpha))
        object.__setattr__(self, "nu", tuple(self.nu))
        object.__setattr__(self, "variables", tuple(self.variables))
        for d in [*self.alpha[0], *self.alpha[1], *self.nu]:
            if d.ring != ring:
                raise RingMismatchError("derivation does not live on the base ring")
        for w in (self.w1, self.w2, self.w0):
            if w.ring != ring:
                raise RingMismatchError(f"{w} is not in the base ring")
        if len(set(self.variables)) != 2 or set(self.variables) & set(ring.generators):
            raise ValueError(f"bad extension variable names {self.variables}")

    @property
    def ring(self) -> PolyRing:
        return self.base.ring

    @classmethod
    def from_images(cls, base, q=(0, 0), w=(0, 0, 0), alpha=None, nu=None, variables=("y1", "y2")):
        """Convenience constructor.

        ``alpha`` maps index strings ``"11"``, ``"12"``, ``"21"``, ``"22"`` and
        ``nu`` maps ``"1"``, ``"2"`` to ``{generator: Poly}`` dictionaries;
        absent maps are zero.  Entries of ``w`` may be scalars or Polys.
        """
        ring = base.ring
        alpha = alpha or {}
        nu = nu or {}

        def der(images):
            if isinstance(images, Derivation):
                return images
            return Derivation.from_map(ring, images or {})

        def elt(x):
            return x if isinstance(x, Poly) else ring.const(x)

        a = tuple(tuple(der(alpha.get(f"{i}{j}")) for j in (1, 2)) for i in (1, 2))
        n = tuple(der(nu.get(str(i))) for i in (1, 2))
        w1, w2, w0 = (elt(x) for x in w)
        return cls(base, q[0], q[1], a, n, w1, w2, w0, tuple(variables))

    @classmethod
    def zero(cls, base, variables=("y1", "y2")):
        return cls.from_images(base, variables=variables)

    def alpha_matrix(self, g: Poly):
        return [[self.alpha[i][j](g) for j in range(2)] for i in range(2)]

    def nu_vector(self, g: Poly):
        return [self.nu[i](g) for i in range(2)]


@dataclass(frozen=True)
class ConditionFailure:
    condition: int
    witness: tuple
    residual: Poly

    def __str__(self):
        return f"({self.condition}) at {', '.join(self.witness)}: residual {self.residual}"


@dataclass
class DEReport:
    """Outcome of :func:`check_dedata`, sorted by condition then witness."""

    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def __bool__(self):
        return self.passed

    @property
    def failed_conditions(self):
        return sorted({f.condition for f in self.failures})

    @property
    def holding(self):
        return len(CONDITIONS) - len(self.failed_conditions)


def _pair_residuals(d: DEData, a: Poly, b: Poly):
    """Residuals of conditions (2)-(7) at the generator pair ``(a, b)``.

    Both sides of each condition are derivations in ``a`` and in ``b``, so
    vanishing on generator pairs decides the condition on all of R.
    """
    ps = d.base
    ab = bracket(ps, a, b)
    A = d.alpha_matrix(a)
    B = d.alpha_matrix(b)
    Na = d.nu_vector(a)
    Nb = d.nu_vector(b)

    def lhs(D):
        return D(ab) - bracket(ps, D(a), b) - bracket(ps, a, D(b))

    # alpha({a,b}) - {alpha(a),b} - {a,alpha(b)} = [alpha(a), alpha(b)]
    comm = [
        [
            sum((A[i][k] * B[k][j] - B[i][k] * A[k][j] for k in range(2)), d.ring.zero())
            for j in range(2)
        ]
        for i in range(2)
    ]
    # nu({a,b}) - {nu(a),b} - {a,nu(b)} = alpha(a)nu(b) - alpha(b)nu(a)
    nrhs = [
        sum((A[i][k] * Nb[k] - B[i][k] * Na[k] for k in range(2)), d.ring.zero())
        for i in range(2)
    ]
    return {
        2: lhs(d.alpha[0][0]) - comm[0][0],
        3: lhs(d.alpha[1][1]) - comm[1][1],
        4: lhs(d.alpha[0][1]) - comm[0][1],
        5: lhs(d.alpha[1][0]) - comm[1][0],
        6: lhs(d.nu[0]) - nrhs[0],
        7: lhs(d.nu[1]) - nrhs[1],
    }


def _derivation_residuals(d: DEData):
    """Conditions (8)-(13) as derivations of R (each side is a derivation)."""
    (a11, a12), (a21, a22) = d.alpha
    n1, n2 = d.nu
    q11, q12 = d.q11, d.q12
    w1, w2, w0 = d.w1, d.w2, d.w0
    br = derivation_compose_bracket
    ham = lambda f: hamiltonian(d.base, f)  # noqa: E731
    return {
        8: br(a21, a11) - (a11 * q11 + a21 * q12 - a22 * q11),
        9: br(a22, a11) + br(a21, a12) - a12 * (2 * q11),
        10: br(a22, a12) - a12 * q12,
        11: br(n2, a11) + br(a21, n1)
        - (n1 * (2 * q11) + n2 * q12 + a21 * w2 - a22 * w1 + ham(w1)),
        12: br(n2, a12) + br(a22, n1) - (n1 * q12 + a12 * w1 - a11 * w2 + ham(w2)),
        13: br(n2, n1) - (n1 * w1 + n2 * w2 - a11 * w0 - a22 * w0 + ham(w0)),
    }


def check_dedata(d: DEData) -> DEReport:
    """Verify conditions (1)-(13); failures carry witnesses and residuals."""
    ring = d.ring
    gens = ring.gens()
    names = ring.generators
    failures = []
    for i, j in product(range(len(gens)), repeat=2):
        for cond, res in _pair_residuals(d, gens[i], gens[j]).items():
            if res:
                failures.append(ConditionFailure(cond, (names[i], names[j]), res))
    for cond, der in _derivation_residuals(d).items():
        for name, img in zip(names, der.images):
            if img:
                failures.append(ConditionFailure(cond, (name,), img))
    failures.sort(key=lambda f: (f.condition, [names.index(w) for w in f.witness]))
    return DEReport(failures)


@dataclass(frozen=True)
class ExtensionRing:
    """R[y1, y2] with the bracket defined by a DE-data."""

    ring: PolyRing
    structure: PoissonStructure
    base_ring: PolyRing

    @property
    def variables(self):
        return self.ring.generators[-2:]

    @property
    def y1(self):
        return self.ring.gen(self.ring.ngens - 2)

    @property
    def y2(self):
        return self.ring.gen(self.ring.ngens - 1)

    def bracket(self, f, g):
        return bracket(self.structure, f, g)

    def lift(self, f: Poly) -> Poly:
        return f.embed(self.ring)


def _extension_table(d: DEData):
    ring = d.ring.extend(*d.variables)
    y1, y2 = ring.gen(d.variables[0]), ring.gen(d.variables[1])
    table = {}
    for (i, j), val in d.base.table.items():
        table[(ring.generators[i], ring.generators[j])] = val.embed(ring)
    for g, gp in zip(d.ring.generators, d.ring.gens()):
        A = [[x.embed(ring) for x in row] for row in d.alpha_matrix(gp)]
        N = [x.embed(ring) for x in d.nu_vector(gp)]
        # table entries are {g, y_i} = -{y_i, g}
        table[(g, d.variables[0])] = -(A[0][0] * y1 + A[0][1] * y2 + N[0])
        table[(g, d.variables[1])] = -(A[1][0] * y1 + A[1][1] * y2 + N[1])
    y2y1 = (
        y1 * y1 * d.q11 + y1 * y2 * d.q12
        + d.w1.embed(ring) * y1 + d.w2.embed(ring) * y2 + d.w0.embed(ring)
    )
    table[(d.variables[0], d.variables[1])] = -y2y1
    return ring, table


def build_extension(d: DEData, check: bool = True) -> ExtensionRing:
    """The Poisson structure on R[y1, y2] defined by ``d``.

    With ``check`` (the default) DE-data failing :func:`check_dedata` is
    rejected, since the resulting bracket would violate the Jacobi identity.
    """
    if check:
        report = check_dedata(d)
        if not report:
            raise InvalidDEDataError(
                f"DE-data fails conditions {report.failed_conditions}", report
            )
    ring, table = _extension_table(d)
    return ExtensionRing(ring, PoissonStructure(ring, table), d.ring)


# -- normalization -------------------------------------------------------------


def normalize_dedata(d: DEData):
    """Change variables so that ``q`` becomes ``{0, q12}``, ``{1, 0}`` or ``{0, 0}``.

    Returns ``(new_data, M)`` where ``M`` is the 2x2 matrix expressing the new
    variables in the old ones: ``(z1, z2)^T = M (y1, y2)^T``.
    """
    (a11, a12), (a21, a22) = d.alpha
    n1, n2 = d.nu
    q11, q12 = d.q11, d.q12
    one, zero = Fraction(1), Fraction(0)
    if q12:
        p = q11 / q12
        new = replace(
            d,
            q11=zero,
            q12=q12,
            alpha=(
                (a11 - a12 * p, a12),
                (a21 + (a11 - a22) * p - a12 * (p * p), a12 * p + a22),
            ),
            nu=(n1, n2 + n1 * p),
            w1=d.w1 - d.w2 * p,
        )
        return new, ((one, zero), (p, one))
    if q11:
        new = replace(
            d,
            q11=one,
            q12=zero,
            alpha=((a11, a12 * q11), (a21 * (1 / q11), a22)),
            nu=(n1 * q11, n2),
            w2=d.w2 * q11,
            w0=d.w0 * q11,
        )
        return new, ((q11, zero), (zero, one))
    return d, ((one, zero), (zero, one))


# -- Poisson polynomial extensions -----------------------------------------------


@dataclass(frozen=True)
class PoissonPolyExtData:
    """R[x; beta, nu]_p: one new variable with ``{x, a} = beta(a) x + nu(a)``."""

    base: PoissonStructure
    beta: Derivation
    nu: Derivation
    variable: str = "x"

    def __post_init__(self):
        if self.beta.ring != self.base.ring or self.nu.ring != self.base.ring:
            raise RingMismatchError("beta and nu must live on the base ring")
        if self.variable in self.base.ring.generators:
            raise ValueError(f"{self.variable!r} already names a base generator")

    @property
    def ring(self):
        return self.base.ring.extend(self.variable)

    def extension(self) -> PoissonStructure:
        ring = self.ring
        x = ring.gen(self.variable)
        table = {}
        for (i, j), val in self.base.table.items():
            table[(ring.generators[i], ring.generators[j])] = val.embed(ring)
        for g, b, n in zip(self.base.ring.generators, self.beta.images, self.nu.images):
            table[(g, self.variable)] = -(b.embed(ring) * x + n.embed(ring))
        return PoissonStructure(ring, table)


def check_poisson_poly_ext(e: PoissonPolyExtData):
    """Failures of the two requirements for R[x; beta, nu]_p, on generator pairs.

    ``beta`` must be a Poisson derivation, and ``(beta, nu)`` must satisfy
    ``nu({a,b}) = {nu(a),b} + {a,nu(b)} + beta(a)nu(b) - nu(a)beta(b)``.
    Returns a list of ``(kind, (a, b), residual)``.
    """
    ps = e.base
    gens = ps.ring.gens()
    names = ps.ring.generators
    out = []
    for i, j in product(range(len(gens)), repeat=2):
        a, b = gens[i], gens[j]
        ab = bracket(ps, a, b)
        r1 = e.beta(ab) - bracket(ps, e.beta(a), b) - bracket(ps, a, e.beta(b))
        if r1:
            out.append(("poisson-derivation", (names[i], names[j]), r1))
        r2 = (
            e.nu(ab) - bracket(ps, e.nu(a), b) - bracket(ps, a, e.nu(b))
            - e.beta(a) * e.nu(b) + e.nu(a) * e.beta(b)
        )
        if r2:
            out.append(("skew", (names[i], names[j]), r2))
    return out


def shift_variable(e: PoissonPolyExtData, s: Poly) -> PoissonPolyExtData:
    """Re-present R[z; beta, nu]_p in the variable z' = z - s, s in R.

    The new nu is ``r -> beta(r) s + nu(r) + {r, s}``; beta is unchanged.
    """
    if s.ring != e.base.ring:
        raise RingMismatchError("the shift must lie in the base ring")
    images = [
        b * s + n + bracket(e.base, g, s)
        for g, b, n in zip(e.base.ring.gens(), e.beta.images, e.nu.images)
    ]
    return replace(e, nu=Derivation(e.base.ring, images))


@dataclass(frozen=True)
class IteratedForm:
    """``A = R[first]_p[second]_p``; ``form`` is 1 (y1 first) or 2 (y2 first)."""

    form: int
    first: PoissonPolyExtData
    second: PoissonPolyExtData


@dataclass(frozen=True)
class CriterionFails:
    """Neither alpha12 = 0 nor (alpha21 = 0 and q11 = 0) holds.

    ``alpha12`` and ``alpha21`` hold ``(generator, image)`` witnesses (or
    None); ``q11`` is recorded when it is the obstruction for form 2.
    """

    alpha12: tuple
    alpha21: tuple | None
    q11: Fraction | None


def _first_nonzero(der: Derivation):
    for g, img in zip(der.ring.generators, der.images):
        if img:
            return (g, img)
    return None


def detect_iterated(d: DEData):
    """Decide whether ``d`` presents an iterated Poisson polynomial extension
    in the given variables, returning the data of the iteration if so."""
    (a11, a12), (a21, a22) = d.alpha
    n1, n2 = d.nu
    v1, v2 = d.variables
    if a12.is_zero():
        first = PoissonPolyExtData(d.base, a11, n1, v1)
        mid = first.extension()
        R1 = mid.ring
        y = R1.gen(v1)
        beta = {g: a22.image(g).embed(R1) for g in d.ring.generators}
        beta[v1] = y * d.q12 + d.w2.embed(R1)
        mu = {g: a21.image(g).embed(R1) * y + n2.image(g).embed(R1) for g in d.ring.generators}
        mu[v1] = y * y * d.q11 + d.w1.embed(R1) * y + d.w0.embed(R1)
        second = PoissonPolyExtData(mid, Derivation.from_map(R1, beta), Derivation.from_map(R1, mu), v2)
        return IteratedForm(1, first, second)
    if a21.is_zero() and not d.q11:
        first = PoissonPolyExtData(d.base, a22, n2, v2)
        mid = first.extension()
        R2 = mid.ring
        y = R2.gen(v2)
        beta = {g: a11.image(g).embed(R2) for g in d.ring.generators}
        beta[v2] = -(y * d.q12) - d.w1.embed(R2)
        mu = {g: a12.image(g).embed(R2) * y + n1.image(g).embed(R2) for g in d.ring.generators}
        mu[v2] = -(d.w2.embed(R2) * y) - d.w0.embed(R2)
        second = PoissonPolyExtData(mid, Derivation.from_map(R2, beta), Derivation.from_map(R2, mu), v1)
        return IteratedForm(2, first, second)
    return CriterionFails(
        alpha12=_first_nonzero(a12),
        alpha21=_first_nonzero(a21),
        q11=d.q11 if d.q11 else None,
    )


def split_by_variable(f: Poly, var: str, base: PolyRing) -> dict:
    """``{k: c_k}`` with ``f = sum c_k var^k`` and each ``c_k`` in ``base``."""
    idx = f.ring.index(var)
    pieces = {}
    for e, c in f.terms.items():
        k = e[idx]
        e2 = e[:idx] + (0,) + e[idx + 1 :]
        pieces.setdefault(k, {})[e2] = c
    return {k: Poly(f.ring, t).restrict(base) for k, t in pieces.items()}


def from_iterated(ext1: PoissonPolyExtData, ext2: PoissonPolyExtData) -> DEData:
    """DE-data of ``R[y1; alpha1, nu1]_p[y2; alpha2, nu2]_p``.

    ``ext2`` lives over ``R[y1]`` and must satisfy: alpha2(R) in R,
    nu2(R) in R*y1 + R, alpha2(y1) = mu12*y1 + w2 and
    nu2(y1) = mu11*y1^2 + w1*y1 + w0 with mu11, mu12 scalars.
    """
    R = ext1.base.ring
    v1, v2 = ext1.variable, ext2.variable
    if ext2.base != ext1.extension():
        raise InvalidDEDataError("ext2 must extend the Poisson algebra built by ext1")

    def pieces(f, what, max_deg):
        parts = split_by_variable(f, v1, R)
        if parts and max(parts) > max_deg:
            raise InvalidDEDataError(f"{what} = {f} has {v1}-degree above {max_deg}")
        return [parts.get(k, R.zero()) for k in range(max_deg + 1)]

    alpha2_imgs, nu21_imgs, nu20_imgs = {}, {}, {}
    for g in R.generators:
        (a,) = pieces(ext2.beta.image(g), f"alpha2({g})", 0)
        alpha2_imgs[g] = a
        c0, c1 = pieces(ext2.nu.image(g), f"nu2({g})", 1)
        nu20_imgs[g], nu21_imgs[g] = c0, c1
    w2, mu12 = pieces(ext2.beta.image(v1), f"alpha2({v1})", 1)
    w0, w1, mu11 = pieces(ext2.nu.image(v1), f"nu2({v1})", 2)
    for name, c in (("mu12", mu12), ("mu11", mu11)):
        if not c.is_constant():
            raise InvalidDEDataError(f"{name} = {c} must be a scalar")
    zero = Derivation.zero(R)
    d = DEData(
        ext1.base,
        mu11.constant_value(),
        mu12.constant_value(),
        (
            (ext1.beta, zero),
            (Derivation.from_map(R, nu21_imgs), Derivation.from_map(R, alpha2_imgs)),
        ),
        (ext1.nu, Derivation.from_map(R, nu20_imgs)),
        w1,
        w2,
        w0,
        (v1, v2),
    )
    report = check_dedata(d)
    if not report:
        raise InvalidDEDataError(
            f"inputs are not Poisson polynomial extensions: conditions {report.failed_conditions} fail",
            report,
        )
    return d
