"""Shared builders for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from dpx.cli import corpus_path
from dpx.dpe import DEData, build_extension, check_dedata
from dpx.document import load_document
from dpx.ncalg import NCPresentation
from dpx.pbracket import PoissonStructure
from dpx.poly import QQ, QQT, Poly, PolyRing
from dpx.scalar import RatFunc

t = RatFunc.t()


def corpus(name):
    return load_document(corpus_path(name))


def random_poly(rng: random.Random, ring: PolyRing, max_deg=3, max_terms=4, coeff=3):
    terms = {}
    n = ring.ngens
    for _ in range(rng.randint(0, max_terms)):
        e = [0] * n
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(n)] += 1
        e = tuple(e)
        terms[e] = terms.get(e, 0) + rng.randint(-coeff, coeff)
    return Poly(ring, terms)


def random_word(rng, symbols, max_len=4):
    return [rng.choice(symbols) for _ in range(rng.randint(1, max_len))]


# -- standard data -------------------------------------------------------------


def t1_dedata():
    R = PolyRing(("z",), QQ)
    z = R.gen("z")
    return DEData.from_images(
        PoissonStructure.trivial(R),
        q=(0, -1),
        w=(0, 0, 2 * z),
        alpha={"11": {"z": -z}, "12": {"z": R.const(2)}, "21": {"z": R.const(-2)}, "22": {"z": z}},
        variables=("x", "y"),
    )


def nonit_dedata():
    R = PolyRing(("x",), QQ)
    x = R.gen("x")
    return DEData.from_images(
        PoissonStructure.trivial(R),
        q=(0, -2),
        w=(0, 0, x**2),
        alpha={"11": {"x": -x}, "12": {"x": x}, "21": {"x": x}, "22": {"x": -x}},
    )


def tq_presentation(q):
    """The algebra T_q over Q: yx = q^-1 xy + (q - q^-1) z and the z relations."""
    q = Fraction(q)
    R = PolyRing(("z",), QQ)
    z = R.gen("z")
    return NCPresentation.from_images(
        R,
        p=(0, 1 / q),
        tau=(0, 0, (q - 1 / q) * z),
        sigma={
            "11": {"z": z / q},
            "12": {"z": R.const(1 - 1 / q**2)},
            "21": {"z": R.const(1 / q - q)},
            "22": {"z": q * z},
        },
        variables=("x", "y"),
    )


def tt_presentation():
    R = PolyRing(("z",), QQT)
    z = R.gen("z")
    return NCPresentation.from_images(
        R,
        p=(0, 1 / t),
        tau=(0, 0, (t - 1 / t) * z),
        sigma={
            "11": {"z": z / t},
            "12": {"z": R.const(1 - t**-2)},
            "21": {"z": R.const(1 / t - t)},
            "22": {"z": t * z},
        },
        variables=("x", "y"),
    )


def dim3_presentation(mu):
    """Degree-one relations in x, y1, y2 with coefficients mu[1..11]."""
    R = PolyRing(("x",), QQ)
    x = R.gen("x")
    return NCPresentation.from_images(
        R,
        p=(mu[1], mu[2]),
        tau=(mu[3] * x, mu[4] * x, mu[5] * x**2),
        sigma={
            "11": {"x": mu[6] * x},
            "12": {"x": mu[7] * x},
            "21": {"x": mu[9] * x},
            "22": {"x": mu[10] * x},
        },
        delta={"1": {"x": mu[8] * x**2}, "2": {"x": mu[11] * x**2}},
    )


DIM3_PROFILE_ONE = (2, 6, 10)


def dim3_profile(pres):
    """Values at t = 1: 1 for the p12, sigma11, sigma22 slots, 0 elsewhere."""
    slots = dict(pres.slots())
    prof = {}
    for name, value in slots.items():
        if isinstance(value, Poly):
            prof[name] = value.ring.zero()
        else:
            prof[name] = 0
    x = pres.base.gen("x")
    prof["p12"] = 1
    prof["sigma11(x)"] = x
    prof["sigma22(x)"] = x
    return prof


def nonit_target():
    return dim3_presentation({1: 0, 2: -1, 3: 0, 4: 0, 5: 1, 6: 0, 7: 1, 8: 0, 9: 1, 10: 0, 11: 0})


# -- random DE-data over k[x] ----------------------------------------------------


def _small(rng, lo=-3, hi=3):
    return Fraction(rng.randint(lo, hi))


def random_valid_dedata(rng: random.Random, case: int, tries=200) -> DEData:
    """Random DE-data over k[x] (trivial bracket) that passes check_dedata.

    alpha_ij(x) = c_ij x, nu_i(x) = n_i x^2, w = (a1 x, a2 x, a0 x^2).  The
    q-dependent constraints fix c12 and c21 (or c22); nu and w0 then solve
    a linear system.  ``case`` picks q12 != 0, (q12 = 0, q11 != 0) or q = 0.
    """
    R = PolyRing(("x",), QQ)
    x = R.gen("x")
    for _ in range(tries):
        c11, c12, c21, c22 = (_small(rng) for _ in range(4))
        a1, a2 = _small(rng), _small(rng)
        if case == 1:
            q11, q12 = _small(rng), Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
            c12 = Fraction(0)
            c21 = -q11 * (c11 - c22) / q12
        elif case == 2:
            q11, q12 = Fraction(rng.choice([-3, -2, -1, 1, 2, 3])), Fraction(0)
            c12 = Fraction(0)
            c22 = c11
        else:
            q11 = q12 = Fraction(0)
        # linear equations for (n1, n2)
        m11, m12, r1 = c21 - 2 * q11, -c11 - q12, a2 * c21 - a1 * c22
        m21, m22, r2 = c22 - q12, -c12, a1 * c12 - a2 * c11
        det = m11 * m22 - m12 * m21
        if det == 0:
            continue
        n1 = (r1 * m22 - m12 * r2) / det
        n2 = (m11 * r2 - r1 * m21) / det
        if c11 + c22:
            a0 = (a1 * n1 + a2 * n2) / (c11 + c22)
        elif a1 * n1 + a2 * n2 == 0:
            a0 = _small(rng)
        else:
            continue
        d = DEData.from_images(
            PoissonStructure.trivial(R),
            q=(q11, q12),
            w=(a1 * x, a2 * x, a0 * x**2),
            alpha={"11": {"x": c11 * x}, "12": {"x": c12 * x}, "21": {"x": c21 * x}, "22": {"x": c22 * x}},
            nu={"1": {"x": n1 * x**2}, "2": {"x": n2 * x**2}},
        )
        if check_dedata(d):
            return d
    raise AssertionError("no valid DE-data found")


def basis_change_residuals(d: DEData, new: DEData, m):
    """Brackets of z = M y computed in the extension of ``d`` minus the
    brackets predicted by ``new``; all entries must vanish."""
    ext = build_extension(d)
    S = ext.ring
    y1, y2 = ext.y1, ext.y2
    z1 = y1 * m[0][0] + y2 * m[0][1]
    z2 = y1 * m[1][0] + y2 * m[1][1]
    lift = ext.lift
    out = []
    pred = z1 * z1 * new.q11 + z1 * z2 * new.q12 + lift(new.w1) * z1 + lift(new.w2) * z2 + lift(new.w0)
    out.append(ext.bracket(z2, z1) - pred)
    for g in d.ring.generators:
        G = S.gen(g)
        gp = d.ring.gen(g)
        a = new.alpha_matrix(gp)
        n = new.nu_vector(gp)
        for i, z in enumerate((z1, z2)):
            pred = lift(a[i][0]) * z1 + lift(a[i][1]) * z2 + lift(n[i])
            out.append(ext.bracket(z, G) - pred)
    return out
