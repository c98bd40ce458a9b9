"""Decision procedures: ideals, isomorphism, anti-involutions, extensions.

Every decision returns enough certificate data (transforms, witnesses,
divisor lists) for an independent re-verification pass; searches carry
explicit budgets and report honest three-valued outcomes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cend import (
    ActionClosure,
    AntiInvSpec,
    CendElem,
    RawMat,
    RawVec,
    nth_products,
    polymat_to_raw,
    raw_mat_vec,
    raw_mul,
    raw_subst,
    raw_vec_subst,
    standard_action,
)
from .poly import MPoly, RatLike, UPoly, upoly_from_mpoly
from .polymat import (
    PidRowBasis,
    PolyMat,
    det,
    hermite_left_generator,
    is_unimodular,
    right_divide,
    smith_divisors,
    star,
)

_D = MPoly.var("d")
_X = MPoly.var("x")


class DegenerateError(ValueError):
    """A nondegeneracy precondition (det != 0) failed."""


class MismatchError(ValueError):
    """Structural data does not satisfy its defining identity."""


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealReport:
    """Canonical one-sided ideal generator with its derivation certificate.

    For side "left" the ideal is (everything) * generator * defining matrix;
    the certificate carries the Hermite matrix R = generator @ P and the row
    multipliers expressing R in the stacked coefficient rows of the inputs.
    For side "right" the generator is a matrix in the shifted variable z
    (standing for d+x) and the ideal is generator(d+x) * (algebra).
    """

    side: str
    generator: PolyMat
    hermite: PolyMat
    multipliers: tuple[tuple[UPoly, ...], ...]


def _d_coefficient_mats(elem: CendElem) -> list[PolyMat]:
    """Matrix coefficients of the d-power expansion, entries over Q[x]."""
    n = elem.n
    split: dict[int, list[list[UPoly]]] = {}
    for i, row in enumerate(elem.entries):
        for j, entry in enumerate(row):
            for k, part in entry.coefficients_in("d").items():
                grid = split.setdefault(
                    k, [[UPoly.zero()] * n for _ in range(n)]
                )
                grid[i][j] = grid[i][j] + upoly_from_mpoly(part, "x")
    return [PolyMat(split[k]) for k in sorted(split)]


def _tilde_coefficient_mats(elem: CendElem) -> list[PolyMat]:
    """Coefficients of the (d+x)-adapted expansion sum_i d^i a_i(d+x).

    Substituting x -> z - d turns the expansion into a plain d-expansion with
    coefficients in the shift variable z, carried here in the x slot.
    """
    shifted = elem.substitute({"x": _X - _D})
    return _d_coefficient_mats(shifted)


def left_ideal_generator(p_mat: PolyMat, gens: Sequence[CendElem]) -> IdealReport:
    """Canonical Q: the generated left ideal is (algebra) * Q * P, gens as a-parts."""
    if det(p_mat).is_zero():
        raise DegenerateError("defining matrix must be nondegenerate")
    if not gens:
        raise ValueError("need at least one generator")
    mats: list[PolyMat] = []
    for g in gens:
        if g.n != p_mat.n:
            raise ValueError("generator size mismatch")
        full = g.times_polymat(p_mat)
        mats.extend(_d_coefficient_mats(full))
    if not mats:
        zero = PolyMat.zero(p_mat.n)
        return IdealReport("left", zero, zero, ())
    hermite, history = hermite_left_generator(mats, track=True)
    try:
        generator = right_divide(hermite, p_mat)
    except ValueError as exc:
        raise MismatchError(
            "saturation did not close on a multiple of the defining matrix"
        ) from exc
    return IdealReport("left", generator, hermite, _pack_history(history))


def right_ideal_generator(p_mat: PolyMat, gens: Sequence[CendElem]) -> IdealReport:
    """Canonical Q(z): the generated right ideal is Q(d+x) * (algebra)."""
    if det(p_mat).is_zero():
        raise DegenerateError("defining matrix must be nondegenerate")
    if not gens:
        raise ValueError("need at least one generator")
    mats: list[PolyMat] = []
    for g in gens:
        if g.n != p_mat.n:
            raise ValueError("generator size mismatch")
        full = g.times_polymat(p_mat)
        mats.extend(m.transpose() for m in _tilde_coefficient_mats(full))
    hermite_t, history = hermite_left_generator(mats, track=True)
    generator = hermite_t.transpose()
    return IdealReport("right", generator, generator, _pack_history(history))


def _pack_history(history) -> tuple[tuple[UPoly, ...], ...]:
    if history is None:
        return ()
    return tuple(tuple(row) for row in history)


# ---------------------------------------------------------------------------
# Isomorphism and anti-automorphism decisions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsoDecision:
    isomorphic: bool
    alpha: Fraction | None
    divisors_left: tuple[UPoly, ...]
    divisors_right: tuple[UPoly, ...]


def _root_sum(p: UPoly) -> Fraction:
    d = p.degree()
    if d <= 0:
        return Fraction(0)
    return -p.coefficient(d - 1) / p.lead()


def decide_isomorphism(p_mat: PolyMat, q_mat: PolyMat) -> IsoDecision:
    """Shift-equivalence of elementary divisors, via the unique candidate.

    Equal divisor lists force det P(x+alpha) = c det Q(x), which pins the
    root sums, so alpha = (s_P - s_Q)/deg is the only candidate to test.
    """
    dp = det(p_mat)
    dq = det(q_mat)
    if dp.is_zero() or dq.is_zero():
        raise DegenerateError("both matrices must be nondegenerate")
    if p_mat.n != q_mat.n:
        return IsoDecision(False, None, smith_divisors(p_mat), smith_divisors(q_mat))
    if dp.is_constant() and dq.is_constant():
        divs = smith_divisors(p_mat)
        return IsoDecision(True, Fraction(0), divs, smith_divisors(q_mat))
    if dp.degree() != dq.degree():
        return IsoDecision(False, None, smith_divisors(p_mat), smith_divisors(q_mat))
    alpha = (_root_sum(dp) - _root_sum(dq)) / dp.degree()
    left = smith_divisors(p_mat.shift(alpha))
    right = smith_divisors(q_mat)
    if left == right:
        return IsoDecision(True, alpha, left, right)
    return IsoDecision(False, None, smith_divisors(p_mat), right)


def anti_automorphism_exists(p_mat: PolyMat) -> IsoDecision:
    """Existence of an anti-automorphism: mirrored divisors at the candidate shift."""
    dp = det(p_mat)
    if dp.is_zero():
        raise DegenerateError("matrix must be nondegenerate")
    if dp.is_constant():
        divs = smith_divisors(p_mat)
        return IsoDecision(True, Fraction(0), divs, divs)
    alpha = 2 * _root_sum(dp) / dp.degree()
    reflected = smith_divisors(star(p_mat, alpha))
    plain = smith_divisors(p_mat)
    if reflected == plain:
        return IsoDecision(True, alpha, plain, reflected)
    return IsoDecision(False, None, plain, reflected)


def _candidate_polys(degree_cap: int, grid: Sequence[RatLike]) -> list[UPoly]:
    polys: list[UPoly] = []
    for deg in range(degree_cap + 1):
        for coefs in itertools.product(grid, repeat=deg + 1):
            if coefs[deg] == 0:
                continue
            polys.append(UPoly(coefs))
    return polys


def anti_involution_search(
    p_mat: PolyMat,
    degree_cap: int = 1,
    coeff_grid: Sequence[RatLike] = (0, 1, -1),
    max_candidates: int = 200_000,
) -> AntiInvSpec | None:
    """Bounded search for anti-involution data over a small coefficient grid.

    The shift is the unique anti-automorphism candidate; Y ranges over
    unimodular matrices with entry degrees <= degree_cap and coefficients in
    the grid, in a fixed enumeration order.  Absence within the budget is not
    a disproof.
    """
    report = anti_automorphism_exists(p_mat)
    if not report.isomorphic:
        return None
    alpha = report.alpha
    n = p_mat.n
    polys = _candidate_polys(degree_cap, tuple(coeff_grid))
    diag_opts: list[UPoly] = [UPoly.const(1), UPoly.zero()] + [
        p for p in polys if p != UPoly.const(1)
    ]
    off_opts: list[UPoly] = [UPoly.zero()] + polys
    slots = [
        diag_opts if i == j else off_opts for i in range(n) for j in range(n)
    ]
    seen = 0
    p_star = star(p_mat, alpha)
    for flat in itertools.product(*slots):
        seen += 1
        if seen > max_candidates:
            return None
        y = PolyMat([list(flat[i * n : (i + 1) * n]) for i in range(n)])
        if not is_unimodular(y):
            continue
        lhs = star(y, alpha) @ p_star
        for eps in (1, -1):
            if lhs == (p_mat @ y).scale(eps):
                return AntiInvSpec(p_mat, y, eps, Fraction(alpha))
    return None


def antiinv_conjugacy_verify(
    spec1: AntiInvSpec, spec2: AntiInvSpec, witness: PolyMat
) -> bool:
    """Check a conjugacy witness between two anti-involutions over the same P."""
    if spec1.p_mat != spec2.p_mat:
        raise ValueError("specs must share the defining matrix")
    if spec1.epsilon != spec2.epsilon:
        return False
    if not is_unimodular(witness):
        return False
    delta = (spec2.alpha - spec1.alpha) / 2
    target = (spec2.p_mat @ spec2.y_mat).shift(delta)
    base = spec1.p_mat @ spec1.y_mat
    return star(witness, spec1.alpha) @ base @ witness == target


# ---------------------------------------------------------------------------
# Extension modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionModule:
    """A module built from a factorization or a Jordan-block twist.

    ``action`` follows the verifier contract: (a-part, parameter name,
    vector of polynomials in d) -> vector.  For the factorization kind the
    vector length is N; for the Jordan kind it is 2N (two stacked blocks).
    """

    kind: str
    p_mat: PolyMat
    alpha: Fraction
    r_mat: PolyMat | None
    s_mat: PolyMat | None
    gamma: Fraction
    action: ActionClosure = field(compare=False)

    @property
    def vector_size(self) -> int:
        return self.p_mat.n if self.kind == "factorization" else 2 * self.p_mat.n


def build_extension(
    p_mat: PolyMat,
    kind: str,
    r_mat: PolyMat | None = None,
    s_mat: PolyMat | None = None,
    alpha: RatLike = 0,
    gamma: RatLike = 0,
) -> ExtensionModule:
    alpha = Fraction(alpha)
    gamma = Fraction(gamma)
    if kind == "factorization":
        if r_mat is None or s_mat is None:
            raise ValueError("factorization kind needs both factors")
        if r_mat @ s_mat != p_mat.shift(alpha):
            raise MismatchError("factors do not multiply to the shifted matrix")
        s_in_d = raw_subst(polymat_to_raw(s_mat), {"x": _D})
        r_raw = polymat_to_raw(r_mat)
        a_const = MPoly.const(alpha)

        def act(a_part: RawMat, param: str, vec: RawVec) -> RawVec:
            p = MPoly.var(param)
            head = raw_subst(a_part, {"d": -p, "x": p + _D + a_const})
            r_shift = raw_subst(r_raw, {"x": p + _D})
            shifted = raw_vec_subst(vec, {"d": p + _D})
            return raw_mat_vec(raw_mul(raw_mul(s_in_d, head), r_shift), shifted)

        return ExtensionModule("factorization", p_mat, alpha, r_mat, s_mat, gamma, act)

    if kind == "jordan":
        p_raw = polymat_to_raw(p_mat)
        g_const = MPoly.const(gamma)
        n = p_mat.n

        def act_jordan(a_part: RawMat, param: str, vec: RawVec) -> RawVec:
            if len(vec) != 2 * n:
                raise ValueError("jordan module vectors have two blocks")
            p = MPoly.var(param)
            full = raw_mul(a_part, p_raw)
            head0 = raw_subst(full, {"d": -p, "x": p + _D + g_const})
            deriv = tuple(tuple(e.derivative("x") for e in row) for row in full)
            head1 = raw_subst(deriv, {"d": -p, "x": p + _D + g_const})
            first = raw_vec_subst(vec[:n], {"d": p + _D})
            second = raw_vec_subst(vec[n:], {"d": p + _D})
            out_first = tuple(
                a + b
                for a, b in zip(raw_mat_vec(head0, first), raw_mat_vec(head1, second))
            )
            out_second = raw_mat_vec(head0, second)
            return out_first + out_second

        return ExtensionModule("jordan", p_mat, alpha, None, None, gamma, act_jordan)

    raise ValueError(f"unknown extension kind {kind!r}")


def embedded_standard_witness(
    module: ExtensionModule, a: CendElem, vec: RawVec
) -> tuple[RawVec, RawVec]:
    """Both sides of the submodule identity a . (S(d) v) == S(d) (standard a . v).

    Exact equality of the two returned vectors witnesses that S(d) Q[d]^N is
    invariant and carries the standard module structure.
    """
    if module.kind != "factorization":
        raise ValueError("submodule witness applies to the factorization kind")
    assert module.s_mat is not None
    s_in_d = raw_subst(polymat_to_raw(module.s_mat), {"x": _D})
    embedded = raw_mat_vec(s_in_d, vec)
    lhs = module.action(a.entries, "l", embedded)
    std = standard_action(module.p_mat, module.alpha)
    rhs = raw_mat_vec(s_in_d, std(a.entries, "l", vec))
    return lhs, rhs


# ---------------------------------------------------------------------------
# Unital closure probe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosureOutcome:
    outcome: str  # "cur_n" | "cend_n" | "undecided"
    rounds_used: int
    basis_rank: int


def unital_closure_probe(
    gens: Sequence[CendElem], degree_cap: int = 6, rounds: int = 8
) -> ClosureOutcome:
    """Saturate a unital generator set and report the closure dichotomy.

    Requires the identity symbol among the generators.  Any x-dependent
    element forces the full algebra; a stabilized x-free closure is the
    current subalgebra; otherwise the budget ran out.
    """
    if not gens:
        raise ValueError("need generators")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValueError("generator size mismatch")
    if not any(g == CendElem.identity(n) for g in gens):
        raise ValueError("identity symbol must be among the generators")
    if any(g.uses_x() for g in gens):
        return ClosureOutcome("cend_n", 0, 0)

    basis = PidRowBasis(n * n, var="d")

    def to_row(elem: CendElem) -> list[UPoly]:
        row = []
        for i in range(n):
            for j in range(n):
                row.append(upoly_from_mpoly(elem.entries[i][j], "d"))
        return row

    def from_row(row: Sequence[UPoly]) -> CendElem:
        rows = [
            [row[i * n + j].to_mpoly("d") for j in range(n)] for i in range(n)
        ]
        return CendElem(rows)

    for g in gens:
        basis.add(to_row(g))
    for round_no in range(1, rounds + 1):
        current = [from_row(r) for r in basis.canonical()]
        changed = False
        for a in current:
            for b in current:
                for coeff in nth_products(a, b):
                    if coeff.is_zero():
                        continue
                    if coeff.uses_x():
                        return ClosureOutcome("cend_n", round_no, basis.rank())
                    if coeff.d_degree() > degree_cap:
                        continue
                    if basis.add(to_row(coeff)):
                        changed = True
        if not changed:
            return ClosureOutcome("cur_n", round_no, basis.rank())
    return ClosureOutcome("undecided", rounds, basis.rank())
