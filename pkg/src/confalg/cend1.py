"""Subalgebra closure and classification for the scalar case (N = 1).

A subalgebra of Q[d, x] under the substitution product is saturated as a
Q[d]-module basis over the x-power coordinates, together with a running
bivariate gcd witness.  Stabilized closures split as p(x) * q(d+x), which is
exactly the classification data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from typing import Sequence

from .cend import product_apply
from .poly import MPoly, UPoly, bipoly_gcd, mpoly_div_by_upoly, upoly_from_mpoly, upoly_gcd
from .polymat import PidRowBasis

_D = MPoly.var("d")
_X = MPoly.var("x")

CPARTIAL = "CPARTIAL"
P_ONLY = "P_ONLY"
Q_ONLY = "Q_ONLY"
PQ = "PQ"
FULL = "FULL"

_SPLIT_SEED = 733362  # deterministic specialization points for the p/q split


@dataclass(frozen=True)
class SubalgDescriptor:
    """One of the classification types with its defining polynomials.

    ``p`` is monic in x; ``q`` is monic in the shift variable z = d + x.
    """

    type_tag: str
    p: UPoly | None = None
    q: UPoly | None = None

    def __post_init__(self):
        if self.type_tag not in (CPARTIAL, P_ONLY, Q_ONLY, PQ, FULL):
            raise ValueError(f"unknown type tag {self.type_tag!r}")


@dataclass(frozen=True)
class ClosureState:
    basis: tuple[MPoly, ...]
    gcd_witness: MPoly
    rounds: int
    status: str  # "stabilized" | "budget_exhausted"
    x_degree_cap: int


def _rows_to_polys(basis: PidRowBasis) -> tuple[MPoly, ...]:
    out = []
    for row in basis.canonical():
        acc = MPoly.zero()
        for k, entry in enumerate(row):
            if not entry.is_zero():
                acc = acc + entry.to_mpoly("d") * _X**k
        out.append(acc)
    return tuple(out)


def _poly_to_row(p: MPoly, cap: int) -> list[UPoly] | None:
    if p.degree("x") > cap:
        return None
    row = [UPoly.zero("d")] * (cap + 1)
    for k, part in p.coefficients_in("x").items():
        row[k] = upoly_from_mpoly(part, "d")
    return row


def _witness(polys: Sequence[MPoly]) -> MPoly:
    acc = MPoly.zero()
    for p in polys:
        acc = bipoly_gcd(acc, p)
    return acc


def closure(
    gens: Sequence[MPoly], x_degree_cap: int | None = None, rounds: int = 12
) -> ClosureState:
    """Saturate generators under the product's coefficient extraction.

    Elements above the x-degree cap are discarded; the state stabilizes when
    the echelon basis stops changing and the gcd witness repeats.
    """
    if not gens:
        raise ValueError("need at least one generator")
    clean = []
    for g in gens:
        extra = g.variables() - {"d", "x"}
        if extra:
            raise ValueError(f"generators live in d, x; found {sorted(extra)}")
        if not g.is_zero():
            clean.append(g)
    if not clean:
        raise ValueError("all generators are zero")
    if x_degree_cap is None:
        x_degree_cap = 2 * max(g.degree("x") for g in clean) + 4
    basis = PidRowBasis(x_degree_cap + 1, var="d")
    for g in clean:
        row = _poly_to_row(g, x_degree_cap)
        if row is None:
            raise ValueError("generator exceeds the x-degree cap")
        basis.add(row)

    witness = _witness(_rows_to_polys(basis))
    rounds_used = 0
    for round_no in range(1, rounds + 1):
        rounds_used = round_no
        current = _rows_to_polys(basis)
        changed = False
        for a in current:
            ar = ((a,),)
            for b in current:
                product = product_apply(ar, ((b,),), "l")[0][0]
                for part in product.coefficients_in("l").values():
                    row = _poly_to_row(part, x_degree_cap)
                    if row is not None and basis.add(row):
                        changed = True
        new_witness = _witness(_rows_to_polys(basis))
        stable = not changed and new_witness == witness
        witness = new_witness
        if stable:
            return ClosureState(
                _rows_to_polys(basis), witness, rounds_used, "stabilized", x_degree_cap
            )
    return ClosureState(
        _rows_to_polys(basis), witness, rounds_used, "budget_exhausted", x_degree_cap
    )


def _specialize_d(p: MPoly, t: Fraction) -> UPoly:
    return upoly_from_mpoly(p.substitute({"d": MPoly.const(t)}), "x")


def classify(state: ClosureState) -> SubalgDescriptor:
    """Split the stabilized gcd witness as p(x) * q(d + x) and tag the type."""
    if state.status != "stabilized":
        raise ValueError("closure did not stabilize; classification refused")
    if all(not p.uses("x") for p in state.basis):
        return SubalgDescriptor(CPARTIAL)
    witness = state.gcd_witness
    if witness.is_constant():
        return SubalgDescriptor(FULL, p=UPoly.const(1), q=None)

    rng = random.Random(_SPLIT_SEED)
    for _ in range(8):
        points = []
        while len(points) < 3:
            t = Fraction(rng.randint(-19, 19))
            if t not in points:
                points.append(t)
        p_split = _specialize_d(witness, points[0])
        for t in points[1:]:
            p_split = upoly_gcd(p_split, _specialize_d(witness, t))
        try:
            residue = mpoly_div_by_upoly(witness, p_split, "x")
        except ValueError:
            continue
        # read q from the residue at a point where p does not vanish
        c = None
        for cand in range(0, 40):
            for signed in (Fraction(cand), Fraction(-cand)):
                if p_split.eval(signed) != 0:
                    c = signed
                    break
            if c is not None:
                break
        if c is None:
            continue
        q_at_c = residue.substitute({"d": _X - MPoly.const(c), "x": MPoly.const(c)})
        try:
            q_split = upoly_from_mpoly(q_at_c, "x", out_var="z").monic()
        except ValueError:
            continue
        rebuilt = p_split.to_mpoly("x") * q_split.retag("x").to_mpoly().substitute(
            {"x": _D + _X}
        )
        if rebuilt == witness:
            p_final = p_split.monic()
            q_final = q_split
            p_const = p_final.is_constant()
            q_const = q_final.is_constant()
            if p_const and q_const:
                return SubalgDescriptor(FULL, p=UPoly.const(1), q=None)
            if q_const:
                return SubalgDescriptor(P_ONLY, p=p_final, q=None)
            if p_const:
                return SubalgDescriptor(Q_ONLY, p=None, q=q_final)
            return SubalgDescriptor(PQ, p=p_final, q=q_final)
    raise ValueError(
        "gcd witness does not split as p(x) * q(d+x); closure invariant violated"
    )


def irreducible_on_standard(desc: SubalgDescriptor) -> bool:
    """Whether the classified subalgebra acts irreducibly on Q[d]."""
    return desc.type_tag in (CPARTIAL, P_ONLY, FULL)
