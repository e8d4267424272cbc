"""Sparse commutative polynomials and derivations given by generator images."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import RingMismatchError
from .scalar import PARAM, RatFunc, as_rational, to_ratfunc

QQ = "Q"
QQT = "Q(t)"


@dataclass(frozen=True)
class PolyRing:
    """A polynomial ring over Q or Q(t) with ordered, named generators."""

    generators: tuple
    scalar_kind: str = QQ

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names in {gens}")
        if PARAM in gens:
            raise ValueError(f"'{PARAM}' is reserved for the deformation parameter")
        if self.scalar_kind not in (QQ, QQT):
            raise ValueError(f"unknown scalar kind {self.scalar_kind!r}")

    @property
    def ngens(self):
        return len(self.generators)

    def index(self, name):
        try:
            return self.generators.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a generator of {self}") from None

    def coerce_scalar(self, c):
        if self.scalar_kind == QQ:
            return as_rational(c)
        return to_ratfunc(c)

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        return Poly(self, {(0,) * self.ngens: c})

    def gen(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        e = [0] * self.ngens
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self):
        return [self.gen(i) for i in range(self.ngens)]

    def with_scalars(self, kind):
        return PolyRing(self.generators, kind)

    def extend(self, *names):
        return PolyRing(self.generators + tuple(names), self.scalar_kind)

    def __str__(self):
        field = "Q" if self.scalar_kind == QQ else "Q(t)"
        return f"{field}[{', '.join(self.generators)}]"


def _grlex_key(e):
    return (sum(e), e)


class Poly:
    """An element of a :class:`PolyRing`, stored as ``{exponent tuple: coeff}``.

    Zero coefficients are never stored.  Treat instances as immutable.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping):
        self.ring = ring
        co = ring.coerce_scalar
        self.terms = {e: c for e, c in ((tuple(e), co(c)) for e, c in terms.items()) if c}
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- inspection -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.ring.ngens, self.ring.coerce_scalar(0))

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name):
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def coefficient(self, exponents):
        return self.terms.get(tuple(exponents), self.ring.coerce_scalar(0))

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return [self.ring.generators[i] for i in sorted(used)]

    # -- arithmetic -------------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"{other.ring} vs {self.ring}")
            return other
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            c = self.ring.coerce_scalar(other)
            if not c:
                return self.ring.zero()
            return Poly._raw(self.ring, {e: v * c for e, v in self.terms.items()})
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            c = self.ring.coerce_scalar(other)
            return Poly._raw(self.ring, {e: v / c for e, v in self.terms.items()})
        if isinstance(other, Poly) and other.is_constant() and other:
            return self / other.constant_value()
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        acc = self.ring.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, RatFunc)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ----------------------------------------------

    def diff(self, index):
        """Partial derivative with respect to generator ``index``."""
        out = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                e2 = e[:index] + (k - 1,) + e[index + 1 :]
                out[e2] = c * k
        return Poly._raw(self.ring, out)

    def map_coeffs(self, fn, ring=None):
        """Apply ``fn`` to every coefficient, landing in ``ring`` (same gens)."""
        ring = ring or self.ring
        return Poly(ring, {e: fn(c) for e, c in self.terms.items()})

    def compose(self, images, ring):
        """Substitute generator ``i`` by ``images[i]`` (Polys in ``ring``)."""
        images = list(images)
        result = ring.zero()
        for e, c in self.terms.items():
            term = ring.const(c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            result = result + term
        return result

    def embed(self, ring):
        """Re-express in ``ring``, whose generators must include ours by name."""
        if ring == self.ring:
            return self
        pos = [ring.index(g) for g in self.ring.generators]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * ring.ngens
            for p, k in zip(pos, e):
                e2[p] = k
            out[tuple(e2)] = c
        return Poly(ring, out)

    def restrict(self, ring):
        """Inverse of :meth:`embed`; raises if a dropped generator occurs."""
        pos = [self.ring.index(g) for g in ring.generators]
        keep = set(pos)
        out = {}
        for e, c in self.terms.items():
            if any(k for i, k in enumerate(e) if i not in keep):
                raise ValueError(f"{self} does not lie in {ring}")
            out[tuple(e[p] for p in pos)] = c
        return Poly(ring, out)

    # -- printing -----------------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self}, ring={self.ring})"


def _monomial_text(gens, e):
    parts = []
    for g, k in zip(gens, e):
        if k == 1:
            parts.append(g)
        elif k > 1:
            parts.append(f"{g}^{k}")
    return "*".join(parts)


def _is_plain(c):
    return isinstance(c, Fraction) or (isinstance(c, RatFunc) and c.is_constant())


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = _monomial_text(p.ring.generators, e)
        if _is_plain(c):
            v = as_rational(c)
            neg = v < 0
            v = abs(v)
            if not mono:
                body = str(v)
            elif v == 1:
                body = mono
            else:
                body = f"{v}*{mono}"
        else:
            neg = False
            body = f"({c})" + (f"*{mono}" if mono else "")
        out.append((neg, body))
    text = ("-" if out[0][0] else "") + out[0][1]
    for neg, body in out[1:]:
        text += (" - " if neg else " + ") + body
    return text


class Derivation:
    """A derivation of a polynomial ring, stored by its generator images."""

    __slots__ = ("ring", "images")

    def __init__(self, ring: PolyRing, images: Iterable[Poly]):
        imgs = tuple(images)
        if len(imgs) != ring.ngens:
            raise ValueError(f"need {ring.ngens} images, got {len(imgs)}")
        for img in imgs:
            if img.ring != ring:
                raise RingMismatchError(f"image {img} is not in {ring}")
        self.ring = ring
        self.images = imgs

    @classmethod
    def zero(cls, ring):
        return cls(ring, [ring.zero()] * ring.ngens)

    @classmethod
    def from_map(cls, ring, mapping: Mapping):
        """Build from ``{generator name: Poly}``; missing generators map to 0."""
        unknown = set(mapping) - set(ring.generators)
        if unknown:
            raise KeyError(f"unknown generators {sorted(unknown)}")
        return cls(ring, [mapping.get(g, ring.zero()) for g in ring.generators])

    def __call__(self, f: Poly) -> Poly:
        return derivation_apply(self, f)

    def image(self, name):
        return self.images[self.ring.index(name)]

    def is_zero(self):
        return all(not img for img in self.images)

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash((self.ring, self.images))

    def __add__(self, other):
        self._check(other)
        return Derivation(self.ring, [a + b for a, b in zip(self.images, other.images)])

    def __sub__(self, other):
        self._check(other)
        return Derivation(self.ring, [a - b for a, b in zip(self.images, other.images)])

    def __neg__(self):
        return Derivation(self.ring, [-a for a in self.images])

    def __mul__(self, c):
        """Scale by a scalar or (on the left, as a ring element) a Poly."""
        if isinstance(c, Poly) and c.ring != self.ring:
            raise RingMismatchError(f"{c.ring} vs {self.ring}")
        return Derivation(self.ring, [img * c for img in self.images])

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, Derivation) or other.ring != self.ring:
            raise RingMismatchError("derivations live on different rings")

    def embed(self, ring):
        """Extend to a larger ring by sending the new generators to 0."""
        return Derivation.from_map(
            ring, {g: img.embed(ring) for g, img in zip(self.ring.generators, self.images)}
        )

    def __repr__(self):
        body = ", ".join(f"{g} -> {img}" for g, img in zip(self.ring.generators, self.images))
        return f"Derivation({body})"


def derivation_apply(d: Derivation, f: Poly) -> Poly:
    """Evaluate ``d`` on ``f`` by linearity and the Leibniz rule."""
    if f.ring != d.ring:
        raise RingMismatchError(f"{f.ring} vs {d.ring}")
    result = d.ring.zero()
    for i, img in enumerate(d.images):
        if img:
            df = f.diff(i)
            if df:
                result = result + df * img
    return result


def derivation_compose_bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """The commutator ``d1∘d2 - d2∘d1``, again a derivation."""
    if d1.ring != d2.ring:
        raise RingMismatchError("derivations live on different rings")
    return Derivation(
        d1.ring, [d1(b) - d2(a) for a, b in zip(d1.images, d2.images)]
    )


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")
