"""Deterministic sample generators for checks and property runs."""

from __future__ import annotations

import random
from fractions import Fraction

from .cend import CendElem
from .poly import MPoly, UPoly
from .polymat import PolyMat


def random_mpoly_dx(rng: random.Random, degree: int, coeff_bound: int = 2) -> MPoly:
    """Random polynomial in d, x with total degree <= degree."""
    terms = {}
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            c = rng.randint(-coeff_bound, coeff_bound)
            if c:
                terms[(i, j, 0, 0)] = Fraction(c)
    return MPoly(terms)


def random_cend(rng: random.Random, n: int, degree: int) -> CendElem:
    return CendElem(
        [[random_mpoly_dx(rng, degree) for _ in range(n)] for _ in range(n)]
    )


def random_upoly(rng: random.Random, degree: int, var: str = "x") -> UPoly:
    coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(degree)]
    coeffs.append(Fraction(rng.choice([1, 2, -1, -2, 3])))
    return UPoly(coeffs, var)


def random_polymat(rng: random.Random, n: int, degree: int) -> PolyMat:
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(degree + 1)]
            row.append(UPoly(coeffs, "x"))
        rows.append(row)
    return PolyMat(rows)


def random_unimodular(rng: random.Random, n: int, ops: int = 4) -> PolyMat:
    """Product of random transvections, sign flips and swaps."""
    mat = PolyMat.identity(n)
    if n == 1:
        return mat.scale(rng.choice([1, -1, 2, Fraction(1, 2)]))
    for _ in range(ops):
        kind = rng.randrange(3)
        if kind == 0:
            i, j = rng.sample(range(n), 2)
            p = UPoly(
                [Fraction(rng.randint(-2, 2)) for _ in range(rng.randint(1, 3))], "x"
            )
            rows = [list(r) for r in PolyMat.identity(n).rows]
            rows[i][j] = p
            mat = mat @ PolyMat(rows)
        elif kind == 1:
            i = rng.randrange(n)
            entries: list[UPoly | Fraction] = [Fraction(1)] * n
            entries[i] = Fraction(rng.choice([-1, 2, -2]))
            mat = mat @ PolyMat.diagonal(entries)
        else:
            i, j = rng.sample(range(n), 2)
            rows = [list(r) for r in PolyMat.identity(n).rows]
            rows[i][i] = UPoly.zero()
            rows[j][j] = UPoly.zero()
            rows[i][j] = UPoly.const(1)
            rows[j][i] = UPoly.const(1)
            mat = mat @ PolyMat(rows)
    return mat


def random_modvec_raw(rng: random.Random, n: int, degree: int) -> tuple[MPoly, ...]:
    out = []
    for _ in range(n):
        terms = {}
        for k in range(degree + 1):
            c = rng.randint(-2, 2)
            if c:
                terms[(k, 0, 0, 0)] = Fraction(c)
        out.append(MPoly(terms))
    return tuple(out)
