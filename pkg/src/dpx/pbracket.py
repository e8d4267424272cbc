"""Poisson structures on polynomial rings.

A structure is a table of brackets between generators; the bracket of two
arbitrary polynomials is the unique biderivation extending it::

    {f, g} = sum_{i<j} (df/dx_i dg/dx_j - df/dx_j dg/dx_i) {x_i, x_j}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from .errors import RingMismatchError
from .poly import Derivation, Poly, PolyRing


class PoissonStructure:
    """Antisymmetric bracket table ``{(i, j): {g_i, g_j}}`` with ``i < j``."""

    __slots__ = ("ring", "table")

    def __init__(self, ring: PolyRing, table: Mapping | None = None):
        self.ring = ring
        clean = {}
        for (i, j), val in (table or {}).items():
            if isinstance(i, str):
                i, j = ring.index(i), ring.index(j)
            if val.ring != ring:
                raise RingMismatchError(f"bracket value {val} is not in {ring}")
            if i == j:
                if val:
                    raise ValueError(f"{{{ring.generators[i]}, {ring.generators[i]}}} must be 0")
                continue
            if i > j:
                i, j, val = j, i, -val
            if (i, j) in clean and clean[(i, j)] != val:
                raise ValueError(
                    f"conflicting values for {{{ring.generators[i]}, {ring.generators[j]}}}"
                )
            if val:
                clean[(i, j)] = val
        self.table = clean

    @classmethod
    def trivial(cls, ring):
        return cls(ring, {})

    def gen_bracket(self, i, j) -> Poly:
        if i == j:
            return self.ring.zero()
        if i < j:
            return self.table.get((i, j), self.ring.zero())
        return -self.table.get((j, i), self.ring.zero())

    def __call__(self, f, g):
        return bracket(self, f, g)

    def __eq__(self, other):
        return isinstance(other, PoissonStructure) and self.ring == other.ring and self.table == other.table

    def __hash__(self):
        return hash((self.ring, frozenset(self.table.items())))

    def restrict(self, ring: PolyRing) -> "PoissonStructure":
        """Brackets among the generators of a sub-ring (which must close up)."""
        pos = {g: self.ring.index(g) for g in ring.generators}
        table = {}
        for a, b in combinations(ring.generators, 2):
            table[(a, b)] = self.gen_bracket(pos[a], pos[b]).restrict(ring)
        return PoissonStructure(ring, table)

    def embed(self, ring: PolyRing) -> "PoissonStructure":
        """The same brackets on a ring with extra (bracket-free) generators."""
        table = {}
        for (i, j), val in self.table.items():
            table[(self.ring.generators[i], self.ring.generators[j])] = val.embed(ring)
        return PoissonStructure(ring, table)

    def lines(self):
        """``(g_i, g_j, value)`` for every nonzero table entry, in order."""
        g = self.ring.generators
        return [(g[i], g[j], v) for (i, j), v in sorted(self.table.items())]

    def __repr__(self):
        body = "; ".join(f"{{{a}, {b}}} = {v}" for a, b, v in self.lines())
        return f"PoissonStructure({self.ring}: {body or 'trivial'})"


def bracket(ps: PoissonStructure, f: Poly, g: Poly) -> Poly:
    """``{f, g}`` under ``ps``."""
    if f.ring != ps.ring or g.ring != ps.ring:
        raise RingMismatchError("bracket operands must live in the structure's ring")
    result = ps.ring.zero()
    if not ps.table:
        return result
    df = {}
    dg = {}
    for (i, j), val in ps.table.items():
        if i not in df:
            df[i] = f.diff(i)
        if j not in df:
            df[j] = f.diff(j)
        if i not in dg:
            dg[i] = g.diff(i)
        if j not in dg:
            dg[j] = g.diff(j)
        coef = df[i] * dg[j] - df[j] * dg[i]
        if coef:
            result = result + coef * val
    return result


def hamiltonian(ps: PoissonStructure, a: Poly) -> Derivation:
    """The derivation ``{a, -}``."""
    if a.ring != ps.ring:
        raise RingMismatchError("element is not in the structure's ring")
    return Derivation(ps.ring, [bracket(ps, a, x) for x in ps.ring.gens()])


@dataclass
class JacobiReport:
    """Outcome of :func:`jacobi_check`.  ``failures`` maps generator-name
    triples to their nonzero Jacobiator."""

    failures: dict = field(default_factory=dict)
    triples_checked: int = 0

    @property
    def passed(self):
        return not self.failures

    def __bool__(self):
        return self.passed


def jacobiator(ps: PoissonStructure, f: Poly, g: Poly, h: Poly) -> Poly:
    b = ps
    return b(b(f, g), h) + b(b(g, h), f) + b(b(h, f), g)


def jacobi_check(ps: PoissonStructure) -> JacobiReport:
    """Evaluate the Jacobiator on every generator triple ``i < j < k``.

    The Jacobiator of a biderivation is a derivation in each argument, so
    vanishing on generator triples implies vanishing everywhere.
    """
    gens = ps.ring.gens()
    names = ps.ring.generators
    report = JacobiReport()
    for i, j, k in combinations(range(len(gens)), 3):
        report.triples_checked += 1
        val = jacobiator(ps, gens[i], gens[j], gens[k])
        if val:
            report.failures[(names[i], names[j], names[k])] = val
    return report
