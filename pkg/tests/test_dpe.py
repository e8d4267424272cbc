import random
from dataclasses import replace
from fractions import Fraction

import pytest

from dpx.dpe import (
    CriterionFails,
    DEData,
    InvalidDEDataError,
    IteratedForm,
    PoissonPolyExtData,
    _pair_residuals,
    build_extension,
    check_dedata,
    check_poisson_poly_ext,
    detect_iterated,
    from_iterated,
    normalize_dedata,
    shift_variable,
)
from dpx.pbracket import PoissonStructure, jacobi_check
from dpx.poly import QQ, Derivation, PolyRing

from helpers import corpus, nonit_dedata, basis_change_residuals, random_poly, random_valid_dedata, t1_dedata


def kx():
    R = PolyRing(("x",), QQ)
    return R, R.gen("x")


# -- check_dedata --------------------------------------------------------------


def test_t1_passes():
    report = check_dedata(t1_dedata())
    assert report and report.holding == 13


def test_zero_dedata_passes():
    for name in ("skewsym", "om2"):
        base = corpus(name).dedata.base
        assert check_dedata(DEData.zero(base))


def test_mutated_t1_fails_10_and_13():
    d = t1_dedata()
    z = d.ring.gen("z")
    a = d.alpha
    d = replace(d, alpha=(a[0], (a[1][0], Derivation.from_map(d.ring, {"z": 2 * z}))))
    report = check_dedata(d)
    assert report.failed_conditions == [10, 13]
    assert report.holding == 11
    res = {f.condition: f.residual for f in report.failures}
    # residuals are left side minus right side
    assert res[10] == d.ring.const(-2)
    assert res[13] == 2 * z**2
    assert all(f.witness == ("z",) for f in report.failures)


def test_corpus_dedata_pass():
    for name in ("t1", "tensor", "skewsym", "om2"):
        assert check_dedata(corpus(name).dedata), name


def test_nonit_lambda2_fails():
    assert check_dedata(nonit_dedata()).failed_conditions == [8, 10, 13]


def test_pair_conditions_on_random_polynomials():
    rng = random.Random(21)
    for name in ("t1", "skewsym", "om2"):
        d = corpus(name).dedata
        for _ in range(6):
            a = random_poly(rng, d.ring, 3, 3, 2)
            b = random_poly(rng, d.ring, 3, 3, 2)
            assert not any(_pair_residuals(d, a, b).values()), name


# -- build_extension -----------------------------------------------------------


def test_t1_extension_bracket():
    ext = build_extension(t1_dedata())
    z, x, y = (ext.ring.gen(g) for g in "zxy")
    assert ext.variables == ("x", "y")
    assert ext.bracket(x, z) == -z * x + 2 * y
    assert ext.bracket(y, x) == -x * y + 2 * z


def test_zero_extension_is_trivial():
    R, x = kx()
    ext = build_extension(DEData.zero(PoissonStructure.trivial(R)))
    assert not ext.structure.table


def test_nonit_extension_needs_unchecked_build():
    d = nonit_dedata()
    with pytest.raises(InvalidDEDataError) as info:
        build_extension(d)
    assert info.value.report.failed_conditions == [8, 10, 13]
    ext = build_extension(d, check=False)
    x = ext.ring.gen("x")
    assert ext.bracket(ext.y2, ext.y1) == -2 * ext.y1 * ext.y2 + x**2
    # reference value from an independent symbolic expansion
    y1, y2 = ext.y1, ext.y2
    assert jacobi_check(ext.structure).failures == {("x", "y1", "y2"): -2 * x**3 + 2 * x * y1**2 + 2 * x * y2**2}


def test_base_is_subalgebra():
    d = corpus("skewsym").dedata
    ext = build_extension(d)
    assert ext.structure.restrict(d.ring) == d.base


def _perturb(rng, d):
    """Change one coefficient of ``d``; usually breaks some condition."""
    x = d.ring.gen("x")
    k = rng.randrange(4)
    bump = Fraction(rng.choice([-1, 1]))
    if k == 0:
        return replace(d, q11=d.q11 + bump)
    if k == 1:
        return replace(d, w0=d.w0 + bump * x**2)
    if k == 2:
        a = d.alpha
        old = a[0][1]
        new = Derivation.from_map(d.ring, {"x": old.image("x") + bump * x})
        return replace(d, alpha=((a[0][0], new), a[1]))
    n = d.nu
    return replace(d, nu=(n[0], Derivation.from_map(d.ring, {"x": n[1].image("x") + bump * x**2})))


def test_check_agrees_with_jacobi_random():
    rng = random.Random(22)
    seen = {True: 0, False: 0}
    for i in range(45):
        d = random_valid_dedata(rng, 1 + i % 3)
        if i % 2:
            d = _perturb(rng, d)
        ok = bool(check_dedata(d))
        assert ok == bool(jacobi_check(build_extension(d, check=False).structure))
        seen[ok] += 1
    assert seen[True] and seen[False]


def test_check_agrees_with_jacobi_nontrivial_base():
    rng = random.Random(23)
    base = corpus("skewsym").dedata.base
    R = base.ring
    for _ in range(15):
        d = DEData.from_images(
            base,
            q=(rng.randint(-1, 1), rng.randint(-1, 1)),
            w=tuple(random_poly(rng, R, 2, 2, 1) for _ in range(3)),
            alpha={k: {g: R.gen(g) * rng.randint(-1, 1) for g in R.generators} for k in ("11", "12", "21", "22")},
        )
        assert bool(check_dedata(d)) == bool(jacobi_check(build_extension(d, check=False).structure))


# -- normalization -------------------------------------------------------------


def test_normalize_t1_is_identity():
    d = t1_dedata()
    new, m = normalize_dedata(d)
    assert new == d
    assert m == ((1, 0), (0, 1))


def _generic(q):
    R, x = kx()
    return DEData.from_images(
        PoissonStructure.trivial(R),
        q=q,
        w=(x, x + 1, x**2),
        alpha={"11": {"x": x}, "12": {"x": 2 * x}, "21": {"x": 3 * x}, "22": {"x": 5 * x}},
        nu={"1": {"x": x**2}, "2": {"x": 7 * x}},
    )


def test_normalize_case1():
    d = _generic((3, 1))
    new, m = normalize_dedata(d)
    assert (new.q11, new.q12) == (0, 1)
    assert (new.w1, new.w2, new.w0) == (d.w1 - 3 * d.w2, d.w2, d.w0)
    assert m == ((1, 0), (3, 1))


def test_normalize_case2():
    d = _generic((2, 0))
    new, m = normalize_dedata(d)
    x = d.ring.gen("x")
    assert (new.q11, new.q12) == (1, 0)
    assert (new.w1, new.w2, new.w0) == (d.w1, 2 * d.w2, 2 * d.w0)
    assert new.alpha_matrix(x) == [[x, 4 * x], [Fraction(3, 2) * x, 5 * x]]
    assert m == ((2, 0), (0, 1))


def test_normalize_preserves_bracket():
    rng = random.Random(24)
    for case in (1, 2, 3):
        for _ in range(7):
            d = random_valid_dedata(rng, case)
            new, m = normalize_dedata(d)
            assert check_dedata(new)
            assert not any(basis_change_residuals(d, new, m))
            if case == 1:
                assert new.q11 == 0
            elif case == 2:
                assert (new.q11, new.q12) == (1, 0)


# -- iterated extensions -------------------------------------------------------


def _skepoi_ok(form):
    return not check_poisson_poly_ext(form.first) and not check_poisson_poly_ext(form.second)


def test_detect_tensor():
    d = corpus("tensor").dedata
    out = detect_iterated(d)
    assert isinstance(out, IteratedForm) and out.form == 1
    R1 = out.second.base.ring
    y1 = R1.gen(d.variables[0])
    w1, w2, w0 = (w.embed(R1) for w in (d.w1, d.w2, d.w0))
    assert out.second.beta.image(d.variables[0]) == y1 * d.q12 + w2
    assert out.second.nu.image(d.variables[0]) == y1 * y1 * d.q11 + w1 * y1 + w0
    assert _skepoi_ok(out)


def test_detect_failures():
    out = detect_iterated(nonit_dedata())
    assert isinstance(out, CriterionFails)
    R, x = kx()
    assert out.alpha12 == ("x", x) and out.alpha21 == ("x", x)
    out = detect_iterated(t1_dedata())
    z = t1_dedata().ring.gen("z")
    assert out.alpha12 == ("z", z.ring.const(2)) and out.alpha21 == ("z", z.ring.const(-2))


def _swap(d):
    """The same algebra with y1 and y2 exchanged (needs q11 = 0)."""
    (a11, a12), (a21, a22) = d.alpha
    return replace(
        d,
        q11=Fraction(0),
        q12=-d.q12,
        alpha=((a22, a21), (a12, a11)),
        nu=(d.nu[1], d.nu[0]),
        w1=-d.w2,
        w2=-d.w1,
        w0=-d.w0,
    )


def test_detect_form2():
    rng = random.Random(25)
    found = 0
    while found < 5:
        d = random_valid_dedata(rng, 3)
        if d.alpha[0][1].image("x") or not d.alpha[1][0].image("x"):
            continue
        s = _swap(d)
        assert check_dedata(s)
        out = detect_iterated(s)
        assert isinstance(out, IteratedForm) and out.form == 2
        R2 = out.first.ring
        y2 = R2.gen(s.variables[1])
        assert out.second.beta.image(s.variables[1]) == -(y2 * s.q12) - s.w1.embed(R2)
        assert out.second.nu.image(s.variables[1]) == -(s.w2.embed(R2) * y2) - s.w0.embed(R2)
        assert _skepoi_ok(out)
        found += 1


def test_detect_outputs_satisfy_skew_condition():
    rng = random.Random(26)
    for name in ("tensor", "skewsym", "om2"):
        assert _skepoi_ok(detect_iterated(corpus(name).dedata)), name
    for case in (1, 2):
        for _ in range(5):
            out = detect_iterated(random_valid_dedata(rng, case))
            assert out.form == 1 and _skepoi_ok(out)


def test_from_iterated_zero():
    R, x = kx()
    base = PoissonStructure.trivial(R)
    e1 = PoissonPolyExtData(base, Derivation.zero(R), Derivation.zero(R), "y1")
    mid = e1.extension()
    e2 = PoissonPolyExtData(mid, Derivation.zero(mid.ring), Derivation.zero(mid.ring), "y2")
    assert from_iterated(e1, e2) == DEData.zero(base)


def om2_iterated():
    R = PolyRing(("b", "c"), QQ)
    b, c = R.gens()
    e1 = PoissonPolyExtData(
        PoissonStructure.trivial(R), Derivation.from_map(R, {"b": 2 * b, "c": 2 * c}), Derivation.zero(R), "a"
    )
    mid = e1.extension()
    S = mid.ring
    B, C = S.gen("b"), S.gen("c")
    e2 = PoissonPolyExtData(
        mid,
        Derivation.from_map(S, {"b": -2 * B, "c": -2 * C}),
        Derivation.from_map(S, {"a": -4 * B * C}),
        "d",
    )
    return e1, e2


def test_from_iterated_om2():
    e1, e2 = om2_iterated()
    d = from_iterated(e1, e2)
    assert d == corpus("om2").dedata
    ext = build_extension(d)
    a, b, c, dd = (ext.ring.gen(g) for g in "abcd")
    assert ext.bracket(a, dd) == 4 * b * c
    # composing the two single-variable extensions gives the same bracket
    assert ext.structure == e2.extension()


def test_from_iterated_round_trip():
    rng = random.Random(27)
    samples = [corpus(n).dedata for n in ("tensor", "skewsym", "om2")]
    samples += [random_valid_dedata(rng, 1 + i % 2) for i in range(6)]
    for d in samples:
        out = detect_iterated(d)
        back = from_iterated(out.first, out.second)
        assert back == d
        assert build_extension(back).structure == out.second.extension()


def test_from_iterated_rejects_bad_degree():
    e1, e2 = om2_iterated()
    S = e2.base.ring
    a = S.gen("a")
    bad = replace(e2, nu=Derivation.from_map(S, {"a": a**3}))
    with pytest.raises(InvalidDEDataError):
        from_iterated(e1, bad)


def test_shift_variable_examples():
    R, x = kx()
    e = PoissonPolyExtData(PoissonStructure.trivial(R), Derivation.from_map(R, {"x": x}), Derivation.zero(R), "z")
    assert shift_variable(e, R.zero()) == e
    assert shift_variable(e, R.one()).nu.image("x") == x
    assert shift_variable(e, x).nu.image("x") == x**2


def test_shift_preserves_skew_condition():
    rng = random.Random(28)
    for name in ("skewsym", "om2", "tensor"):
        form = detect_iterated(corpus(name).dedata)
        for e in (form.first, form.second):
            for _ in range(3):
                s = random_poly(rng, e.base.ring, 2, 3, 2)
                assert not check_poisson_poly_ext(shift_variable(e, s))
