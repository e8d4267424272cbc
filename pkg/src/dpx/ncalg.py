"""Left double Ore extensions given by generators and relations.

A presentation over a base ring R = F[g_1, ..., g_n] consists of::

    y2 y1  = p11 y1^2 + p12 y1 y2 + tau1 y1 + tau2 y2 + tau0
    y_i g  = sigma_i1(g) y1 + sigma_i2(g) y2 + delta_i(g)      (g a generator)
    g' g   = g g'                 (g < g', unless a base relation is given)

Elements are kept in normal form: left R-combinations of ``y1^i y2^j``,
where a base monomial ``g_1^e_1 ... g_n^e_n`` is read as the ordered word.
Normal forms are computed by rewriting with the relations above, multiplying
a normal monomial by one symbol at a time (memoized per presentation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import CongruenceError, DpxError, NotDivisibleError, ReductionError
from .poly import QQ, Poly, PolyRing
from .scalar import rf_div_t_minus_1, rf_eval

_STEP_BUDGET = 2_000_000


class UnknownSymbolError(DpxError, KeyError):
    pass


@dataclass(frozen=True)
class NCPresentation:
    """Relations of a left double extension of ``base`` with variables y1, y2.

    ``sigma[i][j]`` and ``delta[i]`` hold one image per base generator, in
    generator order.  ``baserel`` maps a generator pair ``(hi, lo)`` (indices,
    ``hi > lo``) to the right-hand side of ``g_hi g_lo -> ...``; missing pairs
    commute.
    """

    base: PolyRing
    p11: object
    p12: object
    tau: tuple
    sigma: tuple
    delta: tuple
    baserel: dict = field(default_factory=dict, hash=False)
    variables: tuple = ("y1", "y2")
    _rw: object = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        co = self.base.coerce_scalar
        object.__setattr__(self, "p11", co(self.p11))
        object.__setattr__(self, "p12", co(self.p12))
        object.__setattr__(self, "tau", tuple(self.tau))
        object.__setattr__(self, "sigma", tuple(tuple(tuple(m) for m in row) for row in self.sigma))
        object.__setattr__(self, "delta", tuple(tuple(m) for m in self.delta))
        object.__setattr__(self, "variables", tuple(self.variables))
        n = self.base.ngens
        polys = list(self.tau) + list(self.baserel.values())
        for row in self.sigma:
            for m in row:
                if len(m) != n:
                    raise ValueError("sigma needs one image per base generator")
                polys += m
        for m in self.delta:
            if len(m) != n:
                raise ValueError("delta needs one image per base generator")
            polys += m
        for f in polys:
            if f.ring != self.base:
                raise ValueError(f"{f} does not live in {self.base}")
        for hi, lo in self.baserel:
            if not hi > lo:
                raise ValueError("base relations rewrite g_hi g_lo with hi > lo")
        if set(self.variables) & set(self.base.generators) or len(set(self.variables)) != 2:
            raise ValueError(f"bad variable names {self.variables}")

    def __hash__(self):
        return hash((self.base, self.p11, self.p12, self.tau, self.sigma, self.delta,
                     frozenset(self.baserel.items()), self.variables))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_images(cls, base, p=(0, 1), tau=(0, 0, 0), sigma=None, delta=None,
                    baserel=None, variables=("y1", "y2")):
        """Build from name-keyed dictionaries.

        ``sigma`` maps ``"11"`` .. ``"22"`` and ``delta`` maps ``"1"``, ``"2"``
        to ``{generator: Poly}``.  Unspecified sigma images default to the
        identity pattern (``sigma_ii(g) = g``, ``sigma_ij(g) = 0``), delta to 0.
        ``baserel`` maps ``(g_hi, g_lo)`` name pairs to Polys.
        """
        sigma = sigma or {}
        delta = delta or {}
        gens = base.generators

        def elt(x):
            return x if isinstance(x, Poly) else base.const(x)

        sig = []
        for i in (1, 2):
            row = []
            for j in (1, 2):
                m = sigma.get(f"{i}{j}", {})
                default = (lambda g: base.gen(g)) if i == j else (lambda g: base.zero())
                row.append(tuple(elt(m[g]) if g in m else default(g) for g in gens))
            sig.append(tuple(row))
        dl = tuple(
            tuple(elt(delta.get(str(i), {}).get(g, 0)) for g in gens) for i in (1, 2)
        )
        rel = {}
        for (hi, lo), rhs in (baserel or {}).items():
            rel[(base.index(hi), base.index(lo))] = elt(rhs)
        return cls(base, p[0], p[1], tuple(elt(x) for x in tau), tuple(sig), dl, rel, tuple(variables))

    @classmethod
    def identity(cls, base, variables=("y1", "y2")):
        """The commutative polynomial ring base[y1, y2] as a presentation."""
        return cls.from_images(base, variables=variables)

    # -- bookkeeping ------------------------------------------------------------

    @property
    def symbols(self):
        return self.base.generators + self.variables

    @property
    def commutative_ring(self):
        """The ring base[y1, y2] that normal forms are printed in."""
        return self.base.extend(*self.variables)

    def slots(self):
        """Every coefficient position as ``(name, value)``.

        Names look like ``p11``, ``tau0``, ``sigma12(x)``, ``delta1(x)`` and
        ``baserel(x2 x1)``.  Values are scalars for ``p11``/``p12`` and Polys
        otherwise.
        """
        g = self.base.generators
        out = [("p11", self.p11), ("p12", self.p12)]
        out += [(f"tau{k}", v) for k, v in zip((1, 2, 0), self.tau)]
        for i, j in product((0, 1), repeat=2):
            out += [(f"sigma{i + 1}{j + 1}({g[k]})", v) for k, v in enumerate(self.sigma[i][j])]
        for i in (0, 1):
            out += [(f"delta{i + 1}({g[k]})", v) for k, v in enumerate(self.delta[i])]
        for (hi, lo), v in sorted(self.baserel.items()):
            out.append((f"baserel({g[hi]} {g[lo]})", v))
        return out

    def identity_slots(self):
        """Slot values of the commutative presentation with the same shape."""
        g = self.base.generators
        zero = self.base.zero()
        out = {"p11": self.base.coerce_scalar(0), "p12": self.base.coerce_scalar(1)}
        for k in (1, 2, 0):
            out[f"tau{k}"] = zero
        for i, j in product((1, 2), repeat=2):
            for name in g:
                out[f"sigma{i}{j}({name})"] = self.base.gen(name) if i == j else zero
        for i in (1, 2):
            for name in g:
                out[f"delta{i}({name})"] = zero
        for hi, lo in sorted(self.baserel):
            out[f"baserel({g[hi]} {g[lo]})"] = self.base.gen(lo) * self.base.gen(hi)
        return out

    def with_slots(self, values: dict, base: PolyRing | None = None):
        """Rebuild with slot values replaced (names as in :meth:`slots`)."""
        base = base or self.base
        g = self.base.generators
        get = values.get
        p11 = get("p11", self.p11)
        p12 = get("p12", self.p12)
        tau = tuple(get(f"tau{k}", v) for k, v in zip((1, 2, 0), self.tau))
        sigma = tuple(
            tuple(
                tuple(get(f"sigma{i + 1}{j + 1}({g[k]})", v) for k, v in enumerate(self.sigma[i][j]))
                for j in (0, 1)
            )
            for i in (0, 1)
        )
        delta = tuple(
            tuple(get(f"delta{i + 1}({g[k]})", v) for k, v in enumerate(self.delta[i]))
            for i in (0, 1)
        )
        rel = {(hi, lo): get(f"baserel({g[hi]} {g[lo]})", v) for (hi, lo), v in self.baserel.items()}
        return NCPresentation(base, p11, p12, tau, sigma, delta, rel, self.variables)

    def map_scalars(self, fn, kind=None) -> "NCPresentation":
        """Apply ``fn`` to every scalar coefficient (e.g. evaluation at t)."""
        base = self.base.with_scalars(kind) if kind else self.base
        values = {}
        for name, v in self.slots():
            if isinstance(v, Poly):
                values[name] = v.map_coeffs(fn, base)
            else:
                values[name] = base.coerce_scalar(fn(v))
        return self.with_slots(values, base)

    @property
    def rewriter(self):
        if self._rw is None:
            object.__setattr__(self, "_rw", _Rewriter(self))
        return self._rw

    def rules(self):
        """Left-hand sides of all rewrite rules, as symbol-name pairs."""
        g = self.base.generators
        v1, v2 = self.variables
        out = [(v2, v1)]
        out += [(v, name) for v in (v1, v2) for name in g]
        out += [(g[hi], g[lo]) for hi in range(len(g)) for lo in range(hi)]
        return out


# -- rewriting engine ------------------------------------------------------------


class _Rewriter:
    """Memoized right multiplication of normal monomials by single symbols.

    A normal monomial is ``(b, i, j)`` standing for ``g^b y1^i y2^j``.
    Symbols are integers: base generators ``0..n-1``, then y1 = n, y2 = n+1.
    """

    def __init__(self, pres: NCPresentation):
        self.p = pres
        self.n = n = pres.base.ngens
        self.y1, self.y2 = n, n + 1
        self.zero_b = (0,) * n
        self.cache = {}
        self.steps = 0
        self._rhs_y2y1 = self._combination([
            (pres.p11, None, (self.y1, self.y1)),
            (pres.p12, None, (self.y1, self.y2)),
            (1, pres.tau[0], (self.y1,)),
            (1, pres.tau[1], (self.y2,)),
            (1, pres.tau[2], ()),
        ])
        self._rhs_yg = {}
        for i in (0, 1):
            for k in range(n):
                self._rhs_yg[(i, k)] = self._combination([
                    (1, pres.sigma[i][0][k], (self.y1,)),
                    (1, pres.sigma[i][1][k], (self.y2,)),
                    (1, pres.delta[i][k], ()),
                ])
        self._rhs_base = {}
        for hi in range(n):
            for lo in range(hi):
                rhs = pres.baserel.get((hi, lo))
                if rhs is None:
                    self._rhs_base[(hi, lo)] = [(pres.base.coerce_scalar(1), (lo, hi))]
                else:
                    self._rhs_base[(hi, lo)] = self._combination([(1, rhs, ())])

    def _word_of(self, e):
        word = []
        for k, m in enumerate(e):
            word += [k] * m
        return tuple(word)

    def _combination(self, parts):
        """Flatten ``scalar * poly * word`` parts into ``[(coeff, word)]``."""
        co = self.p.base.coerce_scalar
        out = []
        for scalar, poly, tail in parts:
            scalar = co(scalar)
            if not scalar:
                continue
            if poly is None:
                out.append((scalar, tail))
                continue
            for e, c in poly.sorted_terms():
                out.append((scalar * c, self._word_of(e) + tail))
        return out

    def rhs(self, a, b):
        """Right-hand side of the rule with left-hand side ``(a, b)``, or None."""
        n = self.n
        if a == self.y2 and b == self.y1:
            return self._rhs_y2y1
        if a in (self.y1, self.y2) and b < n:
            return self._rhs_yg[(a - n, b)]
        if a < n and b < a:
            return self._rhs_base[(a, b)]
        return None

    # element = dict {(b, i, j): coeff}

    def times_word(self, elem, word):
        for s in word:
            elem = self.times_symbol(elem, s)
            if not elem:
                break
        return elem

    def times_symbol(self, elem, s):
        out = {}
        for key, c in elem.items():
            for k2, c2 in self.mono_symbol(key, s).items():
                v = out.get(k2)
                v = c * c2 if v is None else v + c * c2
                if v:
                    out[k2] = v
                else:
                    out.pop(k2, None)
        return out

    def apply_combination(self, key, combo):
        """``monomial(key) * sum(coeff * word)``."""
        out = {}
        for coeff, word in combo:
            for k2, c2 in self.times_word({key: coeff}, word).items():
                v = out.get(k2)
                v = c2 if v is None else v + c2
                if v:
                    out[k2] = v
                else:
                    out.pop(k2, None)
        return out

    def mono_symbol(self, key, s):
        hit = self.cache.get((key, s))
        if hit is not None:
            return hit
        self.steps += 1
        if self.steps > _STEP_BUDGET:
            raise ReductionError("normal-form rewriting exceeded its step budget")
        one = self.p.base.coerce_scalar(1)
        b, i, j = key
        n = self.n
        if s == self.y2:
            res = {(b, i, j + 1): one}
        elif s == self.y1:
            if j == 0:
                res = {(b, i + 1, 0): one}
            else:
                res = self.apply_combination((b, i, j - 1), self._rhs_y2y1)
        else:
            if i == 0 and j == 0:
                top = max((k for k in range(n) if b[k]), default=-1)
                if top <= s:
                    b2 = b[:s] + (b[s] + 1,) + b[s + 1 :]
                    res = {(b2, 0, 0): one}
                else:
                    b2 = b[:top] + (b[top] - 1,) + b[top + 1 :]
                    res = self.apply_combination((b2, 0, 0), self._rhs_base[(top, s)])
            elif j > 0:
                res = self.apply_combination((b, i, j - 1), self._rhs_yg[(1, s)])
            else:
                res = self.apply_combination((b, i - 1, 0), self._rhs_yg[(0, s)])
        self.cache[(key, s)] = res
        return res

    def unit(self):
        return {(self.zero_b, 0, 0): self.p.base.coerce_scalar(1)}


# -- elements ------------------------------------------------------------------


class NCElement:
    """An algebra element in normal form ``sum c * g^b y1^i y2^j``."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: NCPresentation, terms: dict):
        self.pres = pres
        self.terms = {k: c for k, c in terms.items() if c}

    def coefficients(self) -> dict:
        """``{(i, j): left coefficient in the base ring}``."""
        groups = {}
        for (b, i, j), c in self.terms.items():
            groups.setdefault((i, j), {})[b] = c
        return {ij: Poly(self.pres.base, t) for ij, t in sorted(groups.items())}

    def to_commutative(self, ring: PolyRing | None = None) -> Poly:
        """The same expansion read in the commutative ring base[y1, y2]."""
        ring = ring or self.pres.commutative_ring
        return Poly(ring, {b + (i, j): c for (b, i, j), c in self.terms.items()})

    def map_coeffs(self, fn):
        return {k: fn(c) for k, c in self.terms.items()}

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, NCElement) and self.pres == other.pres and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _same(self, other):
        if not isinstance(other, NCElement) or other.pres != self.pres:
            raise ValueError("elements of different presentations")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return NCElement(self.pres, out)

    def __neg__(self):
        return NCElement(self.pres, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, NCElement):
            return nc_multiply(self, other)
        c = self.pres.base.coerce_scalar(other)
        return NCElement(self.pres, {k: v * c for k, v in self.terms.items()})

    def __str__(self):
        return str(self.to_commutative())

    def __repr__(self):
        return f"NCElement({self})"


def _symbol_indices(p: NCPresentation, word):
    if isinstance(word, str):
        word = [w.strip() for w in word.split("*") if w.strip()]
    syms = p.symbols
    out = []
    for w in word:
        if w not in syms:
            raise UnknownSymbolError(f"unknown symbol {w!r}")
        out.append(syms.index(w))
    return tuple(out)


def _run(fn, *args):
    try:
        return fn(*args)
    except RecursionError:
        raise ReductionError("normal-form rewriting recursed too deeply") from None


def normal_form(p: NCPresentation, word) -> NCElement:
    """Normal form of a word (a list of symbol names or ``'a*b*c'``)."""
    idx = _symbol_indices(p, word)
    rw = p.rewriter
    return NCElement(p, _run(rw.times_word, rw.unit(), idx))


def element(p: NCPresentation, f: Poly) -> NCElement:
    """Read a polynomial in base[y1, y2] as the element sum c * (ordered word)."""
    rw = p.rewriter
    ring = p.commutative_ring
    f = f if f.ring == ring else f.embed(ring)
    total = {}
    for e, c in f.terms.items():
        word = rw._word_of(e)
        for k, v in _run(rw.times_word, {(rw.zero_b, 0, 0): c}, word).items():
            total[k] = total[k] + v if k in total else v
    return NCElement(p, total)


def nc_multiply(a: NCElement, b: NCElement) -> NCElement:
    """Product in the algebra, reduced to normal form."""
    a._same(b)
    rw = a.pres.rewriter
    total = {}
    for (bb, i, j), c in b.terms.items():
        word = rw._word_of(bb) + (rw.y1,) * i + (rw.y2,) * j
        part = _run(rw.times_word, {k: v * c for k, v in a.terms.items()}, word)
        for k, v in part.items():
            total[k] = total[k] + v if k in total else v
    return NCElement(a.pres, total)


def _as_element(p, x):
    if isinstance(x, NCElement):
        return x
    return normal_form(p, x)


def commutator_limit_bracket(p: NCPresentation, u, v) -> Poly:
    """``((uv - vu) / (t - 1))`` at ``t = 1``, read in Q[base, y1, y2].

    Raises :class:`CongruenceError` when some coefficient of ``uv - vu`` does
    not vanish at ``t = 1`` (the quotient by ``t - 1`` is not commutative).
    """
    a, b = _as_element(p, u), _as_element(p, v)
    diff = nc_multiply(a, b) - nc_multiply(b, a)
    ring = p.commutative_ring.with_scalars(QQ)
    out = {}
    for (bb, i, j), c in diff.terms.items():
        try:
            out[bb + (i, j)] = rf_eval(rf_div_t_minus_1(c), 1)
        except NotDivisibleError:
            raise CongruenceError(
                f"commutator coefficient {c} does not vanish at t = 1"
            ) from None
    return Poly(ring, out)


# -- confluence ------------------------------------------------------------------


@dataclass
class ConfluenceReport:
    """``unresolved`` lists ``(word, [distinct normal forms])``."""

    max_len: int
    words_checked: int = 0
    unresolved: list = field(default_factory=list)

    @property
    def resolved(self):
        return not self.unresolved

    def __bool__(self):
        return self.resolved


def overlap_words(p: NCPresentation, max_len: int):
    """Words of length 3..max_len in which every adjacent pair is a rule
    left-hand side (chains of overlapping rules), in a fixed order."""
    lhs = set(p.rules())
    succ = {}
    for a, b in sorted(lhs, key=lambda ab: (p.symbols.index(ab[0]), p.symbols.index(ab[1]))):
        succ.setdefault(a, []).append(b)
    words = []

    def grow(word):
        if len(word) >= 3:
            words.append(tuple(word))
        if len(word) == max_len:
            return
        for nxt in succ.get(word[-1], []):
            grow(word + [nxt])

    for a, b in sorted(lhs, key=lambda ab: (p.symbols.index(ab[0]), p.symbols.index(ab[1]))):
        grow([a, b])
    return words


def confluence_check(p: NCPresentation, max_len: int = 4) -> ConfluenceReport:
    """Reduce every overlap word along each first rewrite and compare.

    A passing report means the overlaps are resolvable up to length
    ``max_len``; it is evidence of a free basis, not a proof.
    """
    if max_len < 3:
        raise ValueError("max_len must be at least 3")
    rw = p.rewriter
    report = ConfluenceReport(max_len)
    for word in overlap_words(p, max_len):
        idx = _symbol_indices(p, word)
        results = []
        for pos in range(len(idx) - 1):
            combo = rw.rhs(idx[pos], idx[pos + 1])
            if combo is None:
                continue
            prefix = _run(rw.times_word, rw.unit(), idx[:pos])
            total = {}
            for coeff, rword in combo:
                start = {k: v * coeff for k, v in prefix.items()}
                part = _run(rw.times_word, start, rword + idx[pos + 2 :])
                for k, v in part.items():
                    total[k] = total[k] + v if k in total else v
            results.append(NCElement(p, total))
        report.words_checked += 1
        distinct = []
        for r in results:
            if r not in distinct:
                distinct.append(r)
        if len(distinct) > 1:
            report.unresolved.append((word, distinct))
    return report
