"""Conformal endomorphism kernel: symbols, products, brackets, actions.

Elements are represented by their symbols, N x N matrices of polynomials in
{d, x}.  All products are simultaneous substitutions followed by matrix
multiplication, so every identity check in this module is exact.

The low-level "raw" layer works on plain tuples of MPoly entries, which may
contain the series parameters l and m during nested computations; the public
types (CendElem, LambdaSeries) enforce the parameter-free invariants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .poly import MPoly, RatLike, UPoly, upoly_from_mpoly
from .polymat import PolyMat, inverse_unimodular, is_unimodular, star

RawMat = tuple[tuple[MPoly, ...], ...]
RawVec = tuple[MPoly, ...]

_D = MPoly.var("d")
_X = MPoly.var("x")


# ---------------------------------------------------------------------------
# Raw matrix helpers
# ---------------------------------------------------------------------------


def raw_zero(n: int) -> RawMat:
    z = MPoly.zero()
    return tuple(tuple(z for _ in range(n)) for _ in range(n))


def raw_identity(n: int) -> RawMat:
    one = MPoly.const(1)
    z = MPoly.zero()
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def raw_add(a: RawMat, b: RawMat) -> RawMat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def raw_sub(a: RawMat, b: RawMat) -> RawMat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def raw_scale(a: RawMat, c: MPoly | RatLike) -> RawMat:
    return tuple(tuple(x * c for x in ra) for ra in a)


def raw_mul(a: RawMat, b: RawMat) -> RawMat:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = MPoly.zero()
            for k in range(n):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def raw_subst(a: RawMat, bindings: Mapping[str, MPoly | RatLike]) -> RawMat:
    return tuple(tuple(e.substitute(bindings) for e in row) for row in a)


def raw_transpose(a: RawMat) -> RawMat:
    n = len(a)
    return tuple(tuple(a[j][i] for j in range(n)) for i in range(n))


def raw_is_zero(a: RawMat) -> bool:
    return all(e.is_zero() for row in a for e in row)


def raw_vec_subst(v: RawVec, bindings: Mapping[str, MPoly | RatLike]) -> RawVec:
    return tuple(e.substitute(bindings) for e in v)


def raw_mat_vec(a: RawMat, v: RawVec) -> RawVec:
    out = []
    for row in a:
        acc = MPoly.zero()
        for e, x in zip(row, v):
            if e and x:
                acc = acc + e * x
        out.append(acc)
    return tuple(out)


def polymat_to_raw(p: PolyMat) -> RawMat:
    return p.to_mpoly_rows()


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


class CendElem:
    """Symbol of a conformal operator: N x N matrix of polynomials in d, x."""

    __slots__ = ("n", "entries")

    def __init__(self, entries: Sequence[Sequence[MPoly]]):
        n = len(entries)
        if any(len(r) != n for r in entries):
            raise ValueError("symbol matrix must be square")
        for row in entries:
            for e in row:
                if e.uses("l") or e.uses("m"):
                    raise ValueError("symbol entries must not contain l or m")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", tuple(tuple(r) for r in entries))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("CendElem is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def identity(n: int) -> CendElem:
        return CendElem(raw_identity(n))

    @staticmethod
    def zero(n: int) -> CendElem:
        return CendElem(raw_zero(n))

    @staticmethod
    def scalar(p: MPoly) -> CendElem:
        return CendElem(((p,),))

    @staticmethod
    def matrix_unit(n: int, i: int, j: int, p: MPoly | RatLike = 1) -> CendElem:
        rows = [[MPoly.zero()] * n for _ in range(n)]
        rows[i][j] = MPoly.const(p) if not isinstance(p, MPoly) else p
        return CendElem(rows)

    @staticmethod
    def from_polymat(p: PolyMat) -> CendElem:
        return CendElem(p.to_mpoly_rows())

    @staticmethod
    def from_constant_matrix(rows: Sequence[Sequence[RatLike]]) -> CendElem:
        return CendElem([[MPoly.const(e) for e in row] for row in rows])

    # -- algebra ------------------------------------------------------------

    def raw(self) -> RawMat:
        return self.entries

    def __add__(self, other: CendElem) -> CendElem:
        self._same_size(other)
        return CendElem(raw_add(self.entries, other.entries))

    def __sub__(self, other: CendElem) -> CendElem:
        self._same_size(other)
        return CendElem(raw_sub(self.entries, other.entries))

    def __neg__(self) -> CendElem:
        return CendElem(raw_scale(self.entries, -1))

    def scale(self, c: MPoly | RatLike) -> CendElem:
        return CendElem(raw_scale(self.entries, c))

    def __matmul__(self, other: CendElem) -> CendElem:
        self._same_size(other)
        return CendElem(raw_mul(self.entries, other.entries))

    def times_polymat(self, p: PolyMat) -> CendElem:
        """Right multiplication by a matrix over Q[x]."""
        if p.n != self.n:
            raise ValueError("size mismatch")
        return CendElem(raw_mul(self.entries, polymat_to_raw(p)))

    def d_mult(self) -> CendElem:
        """Multiplication by the derivation symbol d."""
        return CendElem(raw_scale(self.entries, _D))

    def transpose(self) -> CendElem:
        return CendElem(raw_transpose(self.entries))

    def substitute(self, bindings: Mapping[str, MPoly | RatLike]) -> CendElem:
        return CendElem(raw_subst(self.entries, bindings))

    def is_zero(self) -> bool:
        return raw_is_zero(self.entries)

    def x_degree(self) -> int:
        return max((e.degree("x") for row in self.entries for e in row), default=-1)

    def d_degree(self) -> int:
        return max((e.degree("d") for row in self.entries for e in row), default=-1)

    def uses_x(self) -> bool:
        return any(e.uses("x") for row in self.entries for e in row)

    def _same_size(self, other: CendElem) -> None:
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, CendElem):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        from .grammar import format_poly

        body = ", ".join(
            "[" + ", ".join(format_poly(e) for e in row) + "]" for row in self.entries
        )
        return f"CendElem([{body}])"


ModVec = tuple[UPoly, ...]


def modvec(entries: Iterable[UPoly | RatLike]) -> ModVec:
    out = []
    for e in entries:
        if isinstance(e, UPoly):
            if e.var != "d":
                raise ValueError("module vectors live over Q[d]")
            out.append(e)
        else:
            out.append(UPoly.const(e, "d"))
    return tuple(out)


# ---------------------------------------------------------------------------
# Lambda series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaSeries:
    """Finite series sum_{n,k} l^n m^k * coefficient, coefficients CendElem."""

    n: int
    coefficients: tuple[tuple[tuple[int, int], CendElem], ...]

    @staticmethod
    def from_raw(raw: RawMat) -> LambdaSeries:
        n = len(raw)
        buckets: dict[tuple[int, int], list[list[MPoly]]] = {}
        for i, row in enumerate(raw):
            for j, entry in enumerate(row):
                for (kl, km), part in _split_lm(entry).items():
                    grid = buckets.get((kl, km))
                    if grid is None:
                        grid = [[MPoly.zero()] * n for _ in range(n)]
                        buckets[(kl, km)] = grid
                    grid[i][j] = grid[i][j] + part
        coeffs = tuple(
            (key, CendElem(grid)) for key, grid in sorted(buckets.items())
        )
        return LambdaSeries(n, coeffs)

    def coeff(self, l_power: int, m_power: int = 0) -> CendElem:
        for key, val in self.coefficients:
            if key == (l_power, m_power):
                return val
        return CendElem.zero(self.n)

    def as_list(self) -> list[CendElem]:
        """Plain l-power coefficient list [c_0, c_1, ...]; [] for zero."""
        if any(key[1] for key, _ in self.coefficients):
            raise ValueError("series involves the second parameter")
        if not self.coefficients:
            return []
        top = max(key[0] for key, _ in self.coefficients)
        return [self.coeff(k) for k in range(top + 1)]

    def map_coefficients(self, fn: Callable[[CendElem], CendElem]) -> LambdaSeries:
        return LambdaSeries(
            self.n, tuple((key, fn(val)) for key, val in self.coefficients)
        )

    def is_zero(self) -> bool:
        return all(val.is_zero() for _, val in self.coefficients)

    def to_raw(self) -> RawMat:
        acc = raw_zero(self.n)
        for (kl, km), val in self.coefficients:
            mono = MPoly.monomial((0, 0, kl, km))
            acc = raw_add(acc, raw_scale(val.entries, mono))
        return acc


def _split_lm(p: MPoly) -> dict[tuple[int, int], MPoly]:
    out: dict[tuple[int, int], dict] = {}
    for exp, coef in p.terms.items():
        key = (exp[2], exp[3])
        out.setdefault(key, {})[(exp[0], exp[1], 0, 0)] = coef
    return {k: MPoly(t) for k, t in out.items()}


# ---------------------------------------------------------------------------
# Products and brackets
# ---------------------------------------------------------------------------


def _param(var: str | MPoly) -> MPoly:
    if isinstance(var, MPoly):
        return var
    if var not in ("l", "m"):
        raise ValueError("series parameter must be l or m")
    return MPoly.var(var)


def product_apply(g: RawMat, x_raw: RawMat, nu: str | MPoly = "l") -> RawMat:
    """g acting on the left of x by the associative product, parameter nu."""
    p = _param(nu)
    head = raw_subst(g, {"d": -p, "x": _X + p + _D})
    tail = raw_subst(x_raw, {"d": p + _D})
    return raw_mul(head, tail)


def bracket_apply(g: RawMat, x_raw: RawMat, nu: str | MPoly = "l") -> RawMat:
    """g acting on x by the commutator bracket, parameter nu."""
    p = _param(nu)
    first = product_apply(g, x_raw, p)
    second = raw_mul(
        raw_subst(x_raw, {"d": p + _D, "x": _X - p}),
        raw_subst(g, {"d": -p}),
    )
    return raw_sub(first, second)


def lambda_product(a: CendElem, b: CendElem, nu: str = "l") -> LambdaSeries:
    """The associative product of two symbols, collected by l-powers."""
    a._same_size(b)
    return LambdaSeries.from_raw(product_apply(a.entries, b.entries, nu))


def nth_products(a: CendElem, b: CendElem) -> list[CendElem]:
    """Plain l-power coefficients [c_0, c_1, ...] of the product series."""
    return lambda_product(a, b).as_list()


def nth_products_divided(a: CendElem, b: CendElem) -> list[CendElem]:
    """Coefficients in the divided-power convention (l^n / n!)."""
    fact = 1
    out = []
    for k, c in enumerate(nth_products(a, b)):
        if k:
            fact *= k
        out.append(c.scale(fact))
    return out


def lie_bracket(a: CendElem, b: CendElem, nu: str = "l") -> LambdaSeries:
    """Commutator bracket of two symbols, collected by l-powers."""
    a._same_size(b)
    return LambdaSeries.from_raw(bracket_apply(a.entries, b.entries, nu))


def pair_product_raw(
    a: RawMat, b: RawMat, p_mat: PolyMat | None, nu: str | MPoly = "l"
) -> RawMat:
    """Product of the elements a*P and b*P, expressed on their a-parts.

    The result is the a-part series c with (aP) prod (bP) = c * P; no
    division is performed (the defining matrix appears once, mid-product).
    """
    p = _param(nu)
    head = raw_subst(a, {"d": -p, "x": _X + p + _D})
    tail = raw_subst(b, {"d": p + _D})
    if p_mat is None:
        return raw_mul(head, tail)
    mid = raw_subst(polymat_to_raw(p_mat), {"x": _X + p + _D})
    return raw_mul(raw_mul(head, mid), tail)


def pair_bracket_raw(
    a: RawMat, b: RawMat, p_mat: PolyMat | None, nu: str | MPoly = "l"
) -> RawMat:
    """Commutator of the elements a*P and b*P on their a-parts."""
    p = _param(nu)
    first = pair_product_raw(a, b, p_mat, p)
    head = raw_subst(b, {"d": p + _D, "x": _X - p})
    tail = raw_subst(a, {"d": -p})
    if p_mat is None:
        second = raw_mul(head, tail)
    else:
        mid = raw_subst(polymat_to_raw(p_mat), {"x": _X - p})
        second = raw_mul(raw_mul(head, mid), tail)
    return raw_sub(first, second)


def pair_product_series(
    a: CendElem, b: CendElem, p_mat: PolyMat | None = None
) -> LambdaSeries:
    return LambdaSeries.from_raw(pair_product_raw(a.entries, b.entries, p_mat))


def pair_bracket_series(
    a: CendElem, b: CendElem, p_mat: PolyMat | None = None
) -> LambdaSeries:
    return LambdaSeries.from_raw(pair_bracket_raw(a.entries, b.entries, p_mat))


# ---------------------------------------------------------------------------
# Module actions
# ---------------------------------------------------------------------------

ActionClosure = Callable[[RawMat, str, RawVec], RawVec]


def standard_action(p_mat: PolyMat, alpha: RatLike = 0) -> ActionClosure:
    """Action of elements a*P on column vectors over Q[d], twisted by alpha.

    The full symbol E = a*P acts by E(-nu, nu+d+alpha) v(nu+d).
    """
    p_raw = polymat_to_raw(p_mat)
    a_const = MPoly.const(alpha)

    def act(a_part: RawMat, param: str, vec: RawVec) -> RawVec:
        p = _param(param)
        full = raw_mul(a_part, p_raw)
        head = raw_subst(full, {"d": -p, "x": p + _D + a_const})
        shifted = raw_vec_subst(vec, {"d": p + _D})
        return raw_mat_vec(head, shifted)

    return act


def module_action(
    a: CendElem, p_mat: PolyMat, alpha: RatLike, vec: ModVec
) -> dict[int, ModVec]:
    """Standard action of the element a*P on a vector, split by l-powers."""
    if p_mat.n != a.n or len(vec) != a.n:
        raise ValueError("size mismatch")
    act = standard_action(p_mat, alpha)
    raw = act(a.entries, "l", tuple(v.to_mpoly("d") for v in vec))
    return _vec_series(raw)


def dual_action(a: CendElem, vec: ModVec) -> dict[int, ModVec]:
    """Contragredient action: -a^t(-l, -d) v(l+d), split by l-powers."""
    if len(vec) != a.n:
        raise ValueError("size mismatch")
    raw = dual_action_raw(a.entries, "l", tuple(v.to_mpoly("d") for v in vec))
    return _vec_series(raw)


def dual_action_raw(a_part: RawMat, param: str, vec: RawVec) -> RawVec:
    p = _param(param)
    head = raw_scale(
        raw_subst(raw_transpose(a_part), {"d": -p, "x": -_D}), -1
    )
    shifted = raw_vec_subst(vec, {"d": p + _D})
    return raw_mat_vec(head, shifted)


def _vec_series(raw: RawVec) -> dict[int, ModVec]:
    out: dict[int, list[UPoly]] = {}
    n = len(raw)
    for i, entry in enumerate(raw):
        for k, part in entry.coefficients_in("l").items():
            row = out.setdefault(k, [UPoly.zero("d")] * n)
            row[i] = row[i] + upoly_from_mpoly(part, "d")
    return {k: tuple(v) for k, v in sorted(out.items()) if any(e for e in v)}


# ---------------------------------------------------------------------------
# Conjugation and anti-involutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AutoSpec:
    """Automorphism data: unimodular C and a rational shift alpha."""

    c_mat: PolyMat
    alpha: Fraction

    def __post_init__(self):
        if not is_unimodular(self.c_mat):
            raise ValueError("automorphism matrix must be unimodular")


def conjugate(a: CendElem, spec: AutoSpec) -> CendElem:
    """C(d+x) a(d, x+alpha) C(x)^{-1}."""
    if spec.c_mat.n != a.n:
        raise ValueError("size mismatch")
    c_outer = raw_subst(polymat_to_raw(spec.c_mat), {"x": _D + _X})
    middle = raw_subst(a.entries, {"x": _X + MPoly.const(spec.alpha)})
    c_inner = polymat_to_raw(inverse_unimodular(spec.c_mat))
    return CendElem(raw_mul(raw_mul(c_outer, middle), c_inner))


@dataclass(frozen=True)
class AntiInvSpec:
    """Anti-involution data (P, Y, epsilon, alpha); validated at construction.

    The defining identity is Y^t(-x+alpha) P^t(-x+alpha) == epsilon P(x) Y(x).
    """

    p_mat: PolyMat
    y_mat: PolyMat
    epsilon: int
    alpha: Fraction

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if not is_unimodular(self.y_mat):
            raise ValueError("anti-involution matrix must be unimodular")
        lhs = star(self.y_mat, self.alpha) @ star(self.p_mat, self.alpha)
        rhs = (self.p_mat @ self.y_mat).scale(self.epsilon)
        if lhs != rhs:
            raise ValueError("anti-involution identity fails for these data")


def apply_antiinv(a: CendElem, spec: AntiInvSpec) -> CendElem:
    """a-part of the image of a*P: eps Y(d+x) a^t(d, -d-x+alpha) Y^t(-x+alpha)^{-1}."""
    if spec.p_mat.n != a.n:
        raise ValueError("size mismatch")
    y_outer = raw_subst(polymat_to_raw(spec.y_mat), {"x": _D + _X})
    middle = raw_subst(
        raw_transpose(a.entries), {"x": -_D - _X + MPoly.const(spec.alpha)}
    )
    y_inner = polymat_to_raw(inverse_unimodular(star(spec.y_mat, spec.alpha)))
    return CendElem(
        raw_scale(raw_mul(raw_mul(y_outer, middle), y_inner), spec.epsilon)
    )


# ---------------------------------------------------------------------------
# Generators and homomorphisms
# ---------------------------------------------------------------------------


def cur_n(n: int) -> list[CendElem]:
    """Matrix-unit generators of the current subalgebra (x-free symbols)."""
    return [CendElem.matrix_unit(n, i, j) for i in range(n) for j in range(n)]


def homomorphism_image(
    a: CendElem,
    r_mat: PolyMat,
    s_mat: PolyMat,
    alpha: RatLike = 0,
    p_mat: PolyMat | None = None,
) -> CendElem:
    """Image S(d+x) a(d, x+alpha) R(x) of the element a*P, P(x+alpha) = R S."""
    if r_mat.n != a.n or s_mat.n != a.n:
        raise ValueError("size mismatch")
    if p_mat is not None and p_mat.shift(alpha) != r_mat @ s_mat:
        raise ValueError("factorization does not match: P(x+alpha) != R(x) S(x)")
    s_outer = raw_subst(polymat_to_raw(s_mat), {"x": _D + _X})
    middle = raw_subst(a.entries, {"x": _X + MPoly.const(alpha)})
    r_inner = polymat_to_raw(r_mat)
    return CendElem(raw_mul(raw_mul(s_outer, middle), r_inner))


# ---------------------------------------------------------------------------
# Axiom verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    checked: int
    failures: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


_L = MPoly.var("l")
_M = MPoly.var("m")


def verify_assoc_axioms(
    samples: Iterable[tuple[CendElem, CendElem, CendElem]],
) -> AxiomReport:
    """Exact check of sesquilinearity and associativity on sample triples."""
    failures: list[str] = []
    count = 0
    for idx, (a, b, c) in enumerate(samples):
        count += 1
        ar, br, cr = a.entries, b.entries, c.entries
        prod_ab = product_apply(ar, br, "l")
        if product_apply(raw_scale(ar, _D), br, "l") != raw_scale(prod_ab, -_L):
            failures.append(f"sample {idx}: sesquilinearity fails in the left slot")
        if product_apply(ar, raw_scale(br, _D), "l") != raw_scale(prod_ab, _L + _D):
            failures.append(f"sample {idx}: sesquilinearity fails in the right slot")
        inner = product_apply(br, cr, "m")
        lhs = product_apply(ar, inner, "l")
        rhs = raw_mul(
            raw_subst(prod_ab, {"d": -(_L + _M), "x": _X + _L + _M + _D}),
            raw_subst(cr, {"d": _L + _M + _D}),
        )
        if lhs != rhs:
            failures.append(f"sample {idx}: associativity fails")
    return AxiomReport(not failures, count, tuple(failures))


def verify_lie_axioms(
    samples: Iterable[tuple[CendElem, CendElem, CendElem]],
) -> AxiomReport:
    """Exact check of the bracket axioms on sample triples."""
    failures: list[str] = []
    count = 0
    for idx, (a, b, c) in enumerate(samples):
        count += 1
        ar, br, cr = a.entries, b.entries, c.entries
        br_ab = bracket_apply(ar, br, "l")
        if bracket_apply(raw_scale(ar, _D), br, "l") != raw_scale(br_ab, -_L):
            failures.append(f"sample {idx}: bracket sesquilinearity fails (left)")
        if bracket_apply(ar, raw_scale(br, _D), "l") != raw_scale(br_ab, _L + _D):
            failures.append(f"sample {idx}: bracket sesquilinearity fails (right)")
        flipped = bracket_apply(br, ar, "m")
        skew = raw_subst(flipped, {"m": -_D - _L})
        if br_ab != raw_scale(skew, -1):
            failures.append(f"sample {idx}: skew-symmetry fails")
        lhs = bracket_apply(ar, bracket_apply(br, cr, "m"), "l")
        nu = _L + _M
        term1 = raw_sub(
            raw_mul(
                raw_subst(br_ab, {"d": -nu, "x": _X + nu + _D}),
                raw_subst(cr, {"d": nu + _D}),
            ),
            raw_mul(
                raw_subst(cr, {"d": nu + _D, "x": _X - nu}),
                raw_subst(br_ab, {"d": -nu}),
            ),
        )
        term2 = bracket_apply(br, bracket_apply(ar, cr, "l"), "m")
        if lhs != raw_add(term1, term2):
            failures.append(f"sample {idx}: Jacobi identity fails")
    return AxiomReport(not failures, count, tuple(failures))


def verify_module_axioms(
    action: ActionClosure,
    samples: Iterable[tuple[CendElem, CendElem, RawVec]],
    p_mat: PolyMat | None = None,
    lie: bool = False,
) -> AxiomReport:
    """Exact check of the module axioms for an abstract action closure.

    Samples are (a, b, v) with a, b given by their a-parts relative to p_mat
    and v a vector of parameter-free polynomials in d.
    """
    failures: list[str] = []
    count = 0
    for idx, (a, b, vec) in enumerate(samples):
        count += 1
        ar, br = a.entries, b.entries
        av = action(ar, "l", vec)
        scaled = tuple(e * _D for e in av)
        shifted = action(ar, "l", tuple(e * _D for e in vec))
        if tuple(e * (-_L) for e in av) != tuple(
            s - t for s, t in zip(scaled, shifted)
        ):
            failures.append(f"sample {idx}: derivation compatibility fails")
        if action(raw_scale(ar, _D), "l", vec) != tuple(e * (-_L) for e in av):
            failures.append(f"sample {idx}: sesquilinearity of the action fails")
        inner = action(br, "m", vec)
        lhs = action(ar, "l", inner)
        if lie:
            lhs = tuple(
                p - q for p, q in zip(lhs, action(br, "m", action(ar, "l", vec)))
            )
            composite = pair_bracket_raw(ar, br, p_mat, "l")
        else:
            composite = pair_product_raw(ar, br, p_mat, "l")
        rhs = raw_vec_subst(action(composite, "m", vec), {"m": _L + _M})
        if lhs != rhs:
            failures.append(f"sample {idx}: composition axiom fails")
    return AxiomReport(not failures, count, tuple(failures))
