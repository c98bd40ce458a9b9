"""Orthogonal/symplectic conformal subalgebras and bilinear-form machinery.

Generators are anti-fixed points of the defining anti-involution; invariance
of the associated bilinear pairing is checked symbolically in both series
parameters, and irreducibility is probed by growing Q[d]-module spans.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .cend import (
    AntiInvSpec,
    CendElem,
    LambdaSeries,
    ModVec,
    RawMat,
    RawVec,
    apply_antiinv,
    bracket_apply,
    pair_bracket_raw,
    polymat_to_raw,
    raw_mat_vec,
    raw_mul,
    raw_subst,
    raw_transpose,
    raw_vec_subst,
    standard_action,
)
from .poly import MPoly, UPoly, upoly_from_mpoly
from .polymat import PidRowBasis, PolyMat, det, is_unimodular, star

_D = MPoly.var("d")
_X = MPoly.var("x")
_L = MPoly.var("l")
_M = MPoly.var("m")


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    checked: int
    failures: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# Conformal bilinear forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfBilinearForm:
    """Pairing <v, w>_l = v^t(-l) P(l) w(l) with a symmetry claim on P."""

    p_mat: PolyMat
    epsilon: int

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if star(self.p_mat, 0) != self.p_mat.scale(self.epsilon):
            raise ValueError("matrix does not have the claimed symmetry")

    def nondegenerate(self) -> bool:
        return not det(self.p_mat).is_zero()

    def pair(self, v: RawVec, w: RawVec, at: MPoly | None = None) -> MPoly:
        """Evaluate the pairing with the series slot at ``at`` (default l)."""
        lam = at if at is not None else _L
        p_at = raw_subst(polymat_to_raw(self.p_mat), {"x": lam})
        v_neg = raw_vec_subst(v, {"d": -lam})
        w_pos = raw_vec_subst(w, {"d": lam})
        pw = raw_mat_vec(p_at, w_pos)
        acc = MPoly.zero()
        for a, b in zip(v_neg, pw):
            if a and b:
                acc = acc + a * b
        return acc


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OcSpcGen:
    """One generator x^n A - eps (-d-x)^n A^t, right-multiplied by P."""

    n: int
    a_matrix: tuple[tuple[Fraction, ...], ...]
    a_part: CendElem
    element: CendElem


def make_oc_spc_generators(
    n: int, p_mat: PolyMat, epsilon: int, max_n: int
) -> list[OcSpcGen]:
    """Anti-fixed generators of the orthogonal (eps=+1) / symplectic (eps=-1)
    subalgebra attached to a hermitian / skew-hermitian defining matrix."""
    form = ConfBilinearForm(p_mat, epsilon)  # validates the symmetry claim
    if not form.nondegenerate():
        raise ValueError("defining matrix must be nondegenerate")
    if p_mat.n != n:
        raise ValueError("size mismatch")
    gens: list[OcSpcGen] = []
    for power in range(max_n + 1):
        x_pow = _X**power
        neg_pow = (-_D - _X) ** power
        for i in range(n):
            for j in range(n):
                a_part = CendElem.matrix_unit(n, i, j, x_pow) - CendElem.matrix_unit(
                    n, j, i, neg_pow
                ).scale(epsilon)
                if a_part.is_zero():
                    continue
                a_rows = tuple(
                    tuple(
                        Fraction(1) if (r, c) == (i, j) else Fraction(0)
                        for c in range(n)
                    )
                    for r in range(n)
                )
                gens.append(
                    OcSpcGen(power, a_rows, a_part, a_part.times_polymat(p_mat))
                )
    return gens


def check_anti_fixed(a: CendElem, spec: AntiInvSpec) -> bool:
    """True iff the anti-involution sends the element a*P to its negative."""
    return apply_antiinv(a, spec) == -a


def sigma_star(a: CendElem) -> CendElem:
    """The transpose-reflection a^t(d, -d-x) (plain defining matrix)."""
    return a.transpose().substitute({"x": -_D - _X})


def anti_fixed_part(a: CendElem) -> CendElem:
    return (a - sigma_star(a)).scale(Fraction(1, 2))


def fixed_part(a: CendElem) -> CendElem:
    return (a + sigma_star(a)).scale(Fraction(1, 2))


def family_conjugacy_verify(
    p_mat: PolyMat,
    q_mat: PolyMat,
    witness: PolyMat,
    epsilon: int,
    scale: Fraction | int = 1,
) -> bool:
    """Certificate check that two defining matrices are congruent forms.

    Both matrices must carry the same symmetry sign and the witness must be
    unimodular with star(witness) @ p_mat @ witness == scale * q_mat (a
    nonzero rational scale is absorbed by rescaling the form).  Conjugacy of
    the attached subalgebra families reduces to exactly this congruence; no
    search is attempted here.
    """
    scale = Fraction(scale)
    if not scale:
        return False
    for m in (p_mat, q_mat):
        if star(m, 0) != m.scale(epsilon):
            return False
        if det(m).is_zero():
            return False
    if not is_unimodular(witness):
        return False
    return star(witness, 0) @ p_mat @ witness == q_mat.scale(scale)


# ---------------------------------------------------------------------------
# Invariance of the pairing
# ---------------------------------------------------------------------------


def invariance_check(
    form: ConfBilinearForm, a: CendElem, degree_cap: int = 3
) -> AxiomReport:
    """Verify <a_m v, w>_l + <v, a_m w>_{l-m} == 0 on the monomial basis.

    ``a`` is the full symbol of the acting element; v, w range over d^k e_i
    with k <= degree_cap.
    """
    if not form.nondegenerate():
        raise ValueError("form must be nondegenerate")
    n = form.p_mat.n
    if a.n != n:
        raise ValueError("size mismatch")
    act = _full_symbol_action(a)
    basis: list[tuple[int, int, RawVec]] = []
    for k in range(degree_cap + 1):
        for i in range(n):
            vec = [MPoly.zero()] * n
            vec[i] = _D**k
            basis.append((k, i, tuple(vec)))
    failures: list[str] = []
    checked = 0
    lam_minus_mu = _L - _M
    for k1, i1, v in basis:
        av = act("m", v)
        for k2, i2, w in basis:
            checked += 1
            t1 = form.pair(av, w, at=_L)
            aw = act("m", w)
            t2 = form.pair(v, aw, at=lam_minus_mu)
            if not (t1 + t2).is_zero():
                failures.append(
                    f"defect at v=d^{k1} e{i1 + 1}, w=d^{k2} e{i2 + 1}"
                )
    return AxiomReport(not failures, checked, tuple(failures))


def _full_symbol_action(a: CendElem) -> Callable[[str, RawVec], RawVec]:
    def act(param: str, vec: RawVec) -> RawVec:
        p = MPoly.var(param)
        head = raw_subst(a.entries, {"d": -p, "x": p + _D})
        return raw_mat_vec(head, raw_vec_subst(vec, {"d": p + _D}))

    return act


# ---------------------------------------------------------------------------
# Bracket closure
# ---------------------------------------------------------------------------


def bracket_closure_check(
    gens: Sequence[CendElem],
    p_mat: PolyMat | None,
    membership: Callable[[CendElem], bool],
    max_pairs: int | None = None,
) -> AxiomReport:
    """Check that bracket coefficients of generator pairs satisfy a predicate.

    Generators and the coefficients handed to the predicate are a-parts
    relative to p_mat (pass None for the plain algebra).
    """
    failures: list[str] = []
    checked = 0
    for ia, a in enumerate(gens):
        for ib, b in enumerate(gens):
            if max_pairs is not None and checked >= max_pairs:
                return AxiomReport(not failures, checked, tuple(failures))
            checked += 1
            series = LambdaSeries.from_raw(
                pair_bracket_raw(a.entries, b.entries, p_mat, "l")
            )
            for (kl, _), coeff in series.coefficients:
                if coeff.is_zero():
                    continue
                if not membership(coeff):
                    failures.append(
                        f"pair ({ia}, {ib}): coefficient of l^{kl} escapes"
                    )
    return AxiomReport(not failures, checked, tuple(failures))


# ---------------------------------------------------------------------------
# Irreducibility probe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeOutcome:
    outcome: str  # "irreducible" | "proper_invariant_detected" | "undecided"
    rank: int
    rounds_used: int
    basis: tuple[tuple[UPoly, ...], ...]


def irreducibility_probe(
    gens: Sequence[CendElem],
    p_mat: PolyMat,
    alpha,
    start: ModVec,
    degree_cap: int = 4,
    rounds: int = 6,
) -> ProbeOutcome:
    """Grow the Q[d]-span of action coefficients from a start vector.

    Reports irreducible when the span reaches the full module, a verified
    proper invariant submodule when it stabilizes strictly below, undecided
    when the budget runs out first.
    """
    n = p_mat.n
    if not start or all(e.is_zero() for e in start):
        raise ValueError("start vector must be nonzero")
    if len(start) != n or any(g.n != n for g in gens):
        raise ValueError("size mismatch")
    act = standard_action(p_mat, alpha)
    basis = PidRowBasis(n, var="d")
    basis.add(list(start))

    def coefficient_rows(gen: CendElem, row: Sequence[UPoly]) -> list[list[UPoly]]:
        vec = tuple(e.to_mpoly("d") for e in row)
        out_raw = act(gen.entries, "l", vec)
        rows: dict[int, list[UPoly]] = {}
        for i, entry in enumerate(out_raw):
            for k, part in entry.coefficients_in("l").items():
                row_k = rows.setdefault(k, [UPoly.zero("d")] * n)
                row_k[i] = row_k[i] + upoly_from_mpoly(part, "d")
        return [r for r in rows.values() if any(not e.is_zero() for e in r)]

    def is_full() -> bool:
        return basis.rank() == n and all(
            basis.rows[i][basis.pivots[i]] == UPoly.const(1, "d")
            for i in range(n)
        )

    rounds_used = 0
    for round_no in range(1, rounds + 1):
        rounds_used = round_no
        changed = False
        snapshot = [list(r) for r in basis.canonical()]
        for gen in gens:
            for row in snapshot:
                for new_row in coefficient_rows(gen, row):
                    if max(e.degree() for e in new_row) > degree_cap:
                        continue
                    if basis.add(new_row):
                        changed = True
        if is_full():
            return ProbeOutcome("irreducible", basis.rank(), rounds_used, basis.canonical())
        if not changed:
            # stabilized strictly below the full span: verify invariance
            for gen in gens:
                for row in basis.canonical():
                    for new_row in coefficient_rows(gen, row):
                        if not basis.contains(new_row):
                            return ProbeOutcome(
                                "undecided", basis.rank(), rounds_used, basis.canonical()
                            )
            return ProbeOutcome(
                "proper_invariant_detected",
                basis.rank(),
                rounds_used,
                basis.canonical(),
            )
    return ProbeOutcome("undecided", basis.rank(), rounds_used, basis.canonical())


# ---------------------------------------------------------------------------
# Tensor-square equivariance spot check
# ---------------------------------------------------------------------------


def tensor_action(gen: CendElem, tensor: RawMat) -> RawMat:
    """Diagonal action on V (x) V; slot one lives in d, slot two in x."""
    head1 = raw_subst(gen.entries, {"d": -_L, "x": _L + _D})
    term1 = raw_mul(head1, raw_subst(tensor, {"d": _L + _D}))
    head2 = raw_subst(gen.entries, {"d": -_L, "x": _L + _X})
    term2 = raw_mul(raw_subst(tensor, {"x": _L + _X}), raw_transpose(head2))
    return tuple(
        tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(term1, term2)
    )


def tensor_to_symbol(tensor: RawMat) -> RawMat:
    """p(d) e_i (x) q(d) e_j  ->  p(-x) q(x+d) E_ji."""
    return raw_transpose(raw_subst(tensor, {"d": -_X, "x": _X + _D}))


def phi_equivariance_spotcheck(
    n: int, samples: Sequence[tuple[UPoly, UPoly, int, int, CendElem]]
) -> AxiomReport:
    """Verify that the tensor-to-symbol map intertwines the two actions.

    Samples are (p, q, i, j, generator); p, q are polynomials in d and the
    generator is a plain (defining matrix = identity) anti-fixed symbol.
    """
    failures: list[str] = []
    checked = 0
    for idx, (p, q, i, j, gen) in enumerate(samples):
        checked += 1
        if gen.n != n:
            raise ValueError("generator size mismatch")
        tensor = [[MPoly.zero()] * n for _ in range(n)]
        tensor[i][j] = p.to_mpoly("d") * q.retag("x").to_mpoly()
        tensor_t: RawMat = tuple(tuple(r) for r in tensor)
        lhs = tensor_to_symbol(tensor_action(gen, tensor_t))
        rhs = bracket_apply(gen.entries, tensor_to_symbol(tensor_t), "l")
        if lhs != rhs:
            failures.append(f"sample {idx}: equivariance fails")
    return AxiomReport(not failures, checked, tuple(failures))
