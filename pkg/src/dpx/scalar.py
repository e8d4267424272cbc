"""Exact scalars: rationals and rational functions of the parameter ``t``.

Rationals are plain :class:`fractions.Fraction` values.  Rational functions
are :class:`RatFunc` instances kept in canonical form (reduced, monic
denominator), so equality is structural.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational as _RationalABC

from .errors import NotDivisibleError, PoleError

PARAM = "t"


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction or constant RatFunc to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, RatFunc):
        if not x.is_constant():
            raise TypeError(f"{x} is not a constant")
        return x.constant_value()
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a rational")


class TPoly:
    """Dense univariate polynomial in ``t`` over Q, lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [Fraction(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def _raw(cls, coeffs):
        obj = cls.__new__(cls)
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        obj.c = tuple(c)
        return obj

    @classmethod
    def const(cls, a):
        return cls._raw((Fraction(a),))

    @property
    def degree(self):
        return len(self.c) - 1

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def lead(self):
        return self.c[-1]

    def __add__(self, other):
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return TPoly._raw(out)

    def __neg__(self):
        return TPoly._raw(-v for v in self.c)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TPoly):
            if not self.c or not other.c:
                return TPoly._raw(())
            # multiply integer numerators over a common denominator
            a, da = _integral(self.c)
            b, db = _integral(other.c)
            out = [0] * (len(a) + len(b) - 1)
            for i, u in enumerate(a):
                if u:
                    for j, v in enumerate(b):
                        out[i + j] += u * v
            d = da * db
            return TPoly._raw(Fraction(v, d) if v else Fraction(0) for v in out)
        k = Fraction(other)
        return TPoly._raw(v * k for v in self.c)

    def divmod(self, other):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dl = other.c[-1]
        dd = other.degree
        if len(rem) - 1 < dd:
            return TPoly._raw(()), self
        quo = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            coef = rem[k] / dl
            if coef:
                quo[k - dd] = coef
                for j, v in enumerate(other.c):
                    rem[k - dd + j] -= coef * v
        return TPoly._raw(quo), TPoly._raw(rem[:dd])

    def monic(self):
        if not self.c:
            return self
        lc = self.c[-1]
        return TPoly._raw(v / lc for v in self.c)

    def __call__(self, x):
        acc = Fraction(0)
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def derivative(self):
        return TPoly._raw(i * v for i, v in enumerate(self.c) if i)

    def __str__(self):
        return _format_tpoly(self)

    def __repr__(self):
        return f"TPoly({list(map(str, self.c))})"


def _integral(coeffs):
    """Integers ``n_i`` and ``d`` with ``coeffs[i] == n_i / d``."""
    d = 1
    for v in coeffs:
        q = v.denominator
        if q != 1:
            d = d * q // gcd(d, q)
    return [v.numerator * (d // v.denominator) for v in coeffs], d


def tpoly_gcd(a: TPoly, b: TPoly) -> TPoly:
    """Monic gcd; gcd(0, 0) is 0."""
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic()


_ONE = TPoly._raw((Fraction(1),))
_T = TPoly._raw((Fraction(0), Fraction(1)))
_T_MINUS_1 = TPoly._raw((Fraction(-1), Fraction(1)))


def _format_coeff_power(coef: Fraction, k: int) -> str:
    if k == 0:
        return str(coef)
    mono = PARAM if k == 1 else f"{PARAM}^{k}"
    if coef == 1:
        return mono
    return f"{coef}*{mono}"


def _join_signed(parts):
    """Join (coef, text_for_abs) pairs into 'a - b + c' form."""
    out = ""
    for i, (neg, body) in enumerate(parts):
        if i == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def _format_tpoly(p: TPoly) -> str:
    if not p.c:
        return "0"
    parts = []
    for k in range(len(p.c) - 1, -1, -1):
        v = p.c[k]
        if v:
            parts.append((v < 0, _format_coeff_power(abs(v), k)))
    return _join_signed(parts)


class RatFunc:
    """An element of Q(t) in canonical form.

    The denominator is monic and coprime to the numerator; zero is ``0/1``.
    Instances are immutable and mix freely with ``int`` and ``Fraction``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        if isinstance(num, RatFunc):
            if den is not None:
                raise TypeError("use division for RatFunc / RatFunc")
            self.num, self.den, self._hash = num.num, num.den, None
            return
        if not isinstance(num, TPoly):
            num = TPoly.const(num)
        if den is None:
            den = _ONE
        elif not isinstance(den, TPoly):
            den = TPoly.const(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _canonical(num, den)
        self._hash = None

    @classmethod
    def _make(cls, num, den):
        obj = cls.__new__(cls)
        obj.num, obj.den = _canonical(num, den)
        obj._hash = None
        return obj

    @classmethod
    def t(cls):
        """The parameter ``t`` itself."""
        return cls._make(_T, _ONE)

    @classmethod
    def from_coeffs(cls, num_coeffs, den_coeffs=(1,)):
        return cls._make(TPoly(num_coeffs), TPoly(den_coeffs))

    def is_constant(self):
        return self.num.degree <= 0 and self.den.degree == 0

    def is_polynomial(self):
        return self.den.degree == 0

    def constant_value(self) -> Fraction:
        return self.num.c[0] if self.num.c else Fraction(0)

    def __bool__(self):
        return bool(self.num)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc._make(TPoly.const(x), _ONE)
        return NotImplemented

    def __add__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc._make(self.num + o.num, self.den)
        return RatFunc._make(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        obj = RatFunc.__new__(RatFunc)
        obj.num, obj.den, obj._hash = -self.num, self.den, None
        return obj

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc._make(self.num * o.num, _ONE)
        # cancel across the product so the result needs no further reduction
        n1, d2 = _cancel(self.num, o.den)
        n2, d1 = _cancel(o.num, self.den)
        obj = RatFunc.__new__(RatFunc)
        obj.num, obj.den = _normalize_lead(n1 * n2, d1 * d2)
        obj._hash = None
        return obj

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return o
        if not o:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc._make(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return RatFunc._make(_ONE, _ONE) / (self ** (-n))
        acc = RatFunc._make(_ONE, _ONE)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    # -- evaluation ---------------------------------------------------------

    def __call__(self, c) -> Fraction:
        return rf_eval(self, c)

    def __str__(self):
        if self.den.degree == 0:
            return _format_tpoly(self.num)
        n = _format_tpoly(self.num)
        d = _format_tpoly(self.den)
        if len([v for v in self.num.c if v]) > 1 or self.num.c[0].denominator != 1:
            n = f"({n})"
        if len([v for v in self.den.c if v]) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({self})"


def _t_order(p: TPoly) -> int:
    for i, v in enumerate(p.c):
        if v:
            return i
    return 0


def _cancel(num: TPoly, den: TPoly):
    """Divide ``num`` and ``den`` by their gcd (``den`` nonzero)."""
    if not num:
        return num, _ONE
    if den.degree == 0:
        return num, den
    if den.degree == _t_order(den):
        # den is c * t^k: the gcd is a power of t
        k = min(den.degree, _t_order(num))
        return TPoly._raw(num.c[k:]), TPoly._raw(den.c[k:])
    g = tpoly_gcd(num, den)
    if g.degree > 0:
        return num.divmod(g)[0], den.divmod(g)[0]
    return num, den


def _normalize_lead(num: TPoly, den: TPoly):
    if not num:
        return TPoly._raw(()), _ONE
    lc = den.lead()
    if lc != 1:
        inv = 1 / lc
        num = num * inv
        den = den * inv
    return num, den


def _canonical(num: TPoly, den: TPoly):
    return _normalize_lead(*_cancel(num, den))


def to_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc._make(TPoly.const(as_rational(x)), _ONE)


# -- operations on scalars of either kind ----------------------------------


def rf_arith(a, b, op: str) -> RatFunc:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two scalars in Q(t)."""
    a, b = to_ratfunc(a), to_ratfunc(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_eval(f, c) -> Fraction:
    """Value of ``f`` at ``t = c``.  Raises :class:`PoleError` at a pole."""
    c = as_rational(c)
    if not isinstance(f, RatFunc):
        return as_rational(f)
    d = f.den(c)
    if d == 0:
        raise PoleError(f"{f} has a pole at t = {c}")
    return f.num(c) / d


def rf_div_t_minus_1(f) -> RatFunc:
    """Exact quotient ``f / (t - 1)``; ``f`` must vanish at ``t = 1``."""
    f = to_ratfunc(f)
    if f.den(1) == 0:
        raise PoleError(f"{f} has a pole at t = 1")
    q, r = f.num.divmod(_T_MINUS_1)
    if r:
        raise NotDivisibleError(f"{f} does not vanish at t = 1 (value {f(1)})")
    return RatFunc._make(q, f.den)


def rf_derivative(f) -> RatFunc:
    """d/dt by the quotient rule."""
    f = to_ratfunc(f)
    n, d = f.num, f.den
    return RatFunc._make(n.derivative() * d - n * d.derivative(), d * d)


def lagrange_interpolate(points) -> RatFunc:
    """The polynomial of degree < len(points) through ``(node, value)`` pairs."""
    pts = [(as_rational(a), as_rational(v)) for a, v in points]
    nodes = [a for a, _ in pts]
    if len(set(nodes)) != len(nodes):
        raise ValueError("interpolation nodes must be distinct")
    total = TPoly._raw(())
    for k, (ak, ck) in enumerate(pts):
        if not ck:
            continue
        basis = _ONE
        denom = Fraction(1)
        for j, (aj, _) in enumerate(pts):
            if j != k:
                basis = basis * TPoly._raw((-aj, Fraction(1)))
                denom *= ak - aj
        total = total + basis * (ck / denom)
    return RatFunc._make(total, _ONE)


def is_admissible(f, points) -> bool:
    """True when the denominator of ``f`` is nonzero at every point given."""
    if not isinstance(f, RatFunc):
        return True
    return all(f.den(as_rational(p)) != 0 for p in points)
