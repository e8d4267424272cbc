import random

import pytest

from dpx.dpe import build_extension
from dpx.errors import RingMismatchError
from dpx.pbracket import PoissonStructure, bracket, hamiltonian, jacobi_check, jacobiator
from dpx.poly import QQ, PolyRing

from helpers import corpus, random_poly, t1_dedata


def om2():
    doc = corpus("om2")
    return build_extension(doc.dedata).structure


def test_om2_brackets():
    ps = om2()
    a, b, c, d = (ps.ring.gen(g) for g in "abcd")
    assert bracket(ps, b, a) == -2 * b * a
    assert bracket(ps, a * a, d) == 8 * a * b * c
    assert bracket(ps, a, d) == 4 * b * c
    assert bracket(ps, b, c) == 0
    assert bracket(ps, a * d - b * c, a) == 0  # the determinant is central


def test_bracket_with_itself_vanishes():
    ps = om2()
    rng = random.Random(1)
    for _ in range(20):
        f = random_poly(rng, ps.ring)
        assert bracket(ps, f, f) == 0


def test_ring_mismatch():
    ps = om2()
    other = PolyRing(("u",), QQ)
    with pytest.raises(RingMismatchError):
        bracket(ps, other.gen("u"), ps.ring.gen("a"))


def test_table_normalization():
    R = PolyRing(("x", "y"), QQ)
    x, y = R.gens()
    ps = PoissonStructure(R, {("y", "x"): x * y})
    assert ps.gen_bracket(0, 1) == -x * y
    assert PoissonStructure(R, {("x", "y"): -x * y}) == ps
    with pytest.raises(ValueError):
        PoissonStructure(R, {("x", "y"): x, ("y", "x"): x})
    with pytest.raises(ValueError):
        PoissonStructure(R, {("x", "x"): y})


def test_hamiltonian_examples():
    ps = om2()
    a, b = ps.ring.gen("a"), ps.ring.gen("b")
    assert hamiltonian(ps, b)(a) == -2 * a * b
    R = PolyRing(("u", "v"), QQ)
    assert hamiltonian(PoissonStructure.trivial(R), R.gen("u")).is_zero()
    t1 = build_extension(t1_dedata())
    S = t1.ring
    z, x, y = (S.gen(g) for g in "zxy")
    assert hamiltonian(t1.structure, z)(x) == z * x - 2 * y


def test_jacobi_examples():
    assert jacobi_check(om2())
    R = PolyRing(("x1", "x2", "x3"), QQ)
    x1, x2, x3 = R.gens()
    bad = PoissonStructure(R, {("x1", "x2"): x3, ("x2", "x3"): x1, ("x3", "x1"): x1})
    report = jacobi_check(bad)
    assert not report and report.triples_checked == 1
    # {{x1,x2},x3} + {{x2,x3},x1} + {{x3,x1},x2} = 0 + 0 + {x1,x2}
    assert report.failures == {("x1", "x2", "x3"): x3}
    S = PolyRing(("p", "q"), QQ)
    p, q = S.gens()
    assert jacobi_check(PoissonStructure(S, {("p", "q"): p**3 + q}))


def _structures():
    out = [om2(), build_extension(t1_dedata()).structure]
    for name in ("skewsym", "tensor"):
        out.append(build_extension(corpus(name).dedata).structure)
    return out


def test_bracket_is_biderivation_random():
    rng = random.Random(2)
    for ps in _structures():
        for _ in range(15):
            f, g, h = (random_poly(rng, ps.ring) for _ in range(3))
            assert bracket(ps, f, g) == -bracket(ps, g, f)
            assert bracket(ps, f, g * h) == bracket(ps, f, g) * h + g * bracket(ps, f, h)
            assert bracket(ps, f + g, h) == bracket(ps, f, h) + bracket(ps, g, h)


def test_generator_jacobi_implies_full_jacobi():
    rng = random.Random(3)
    for ps in _structures():
        assert jacobi_check(ps)
        for _ in range(8):
            f, g, h = (random_poly(rng, ps.ring, 3, 3, 2) for _ in range(3))
            assert jacobiator(ps, f, g, h) == 0


def test_hamiltonian_matches_bracket():
    rng = random.Random(4)
    for ps in _structures():
        a = random_poly(rng, ps.ring)
        ham = hamiltonian(ps, a)
        for g in ps.ring.gens():
            assert ham(g) == bracket(ps, a, g)
