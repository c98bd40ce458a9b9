"""Square matrices over Q[x]: determinants, Smith/Hermite forms, congruence.

Everything is exact and certificate-producing: Smith forms carry the
unimodular transforms, Hermite generators carry tracked multipliers, and the
star/congruence operations are plain algebra so callers can re-verify
independently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .poly import MPoly, RatLike, UPoly, upoly_xgcd

Row = tuple[UPoly, ...]


class PolyMat:
    """Immutable N x N matrix with UPoly entries in x."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[UPoly]]):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        for r in rows:
            for e in r:
                if e.var != "x":
                    raise ValueError("PolyMat entries must be polynomials in x")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("PolyMat is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def identity(n: int) -> PolyMat:
        one = UPoly.const(1)
        zero = UPoly.zero()
        return PolyMat([[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(n: int) -> PolyMat:
        z = UPoly.zero()
        return PolyMat([[z] * n for _ in range(n)])

    @staticmethod
    def diagonal(entries: Sequence[UPoly | RatLike]) -> PolyMat:
        n = len(entries)
        zero = UPoly.zero()
        ups = [e if isinstance(e, UPoly) else UPoly.const(e) for e in entries]
        return PolyMat([[ups[i] if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def from_scalar(p: UPoly) -> PolyMat:
        return PolyMat([[p]])

    # -- algebra ------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> UPoly:
        return self.rows[ij[0]][ij[1]]

    def __add__(self, other: PolyMat) -> PolyMat:
        self._same_size(other)
        return PolyMat(
            [
                [self.rows[i][j] + other.rows[i][j] for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def __sub__(self, other: PolyMat) -> PolyMat:
        self._same_size(other)
        return PolyMat(
            [
                [self.rows[i][j] - other.rows[i][j] for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def __neg__(self) -> PolyMat:
        return PolyMat([[-e for e in r] for r in self.rows])

    def __matmul__(self, other: PolyMat) -> PolyMat:
        self._same_size(other)
        n = self.n
        zero = UPoly.zero()
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMat(out)

    def scale(self, c: RatLike) -> PolyMat:
        return PolyMat([[e * c for e in r] for r in self.rows])

    def transpose(self) -> PolyMat:
        return PolyMat(
            [[self.rows[j][i] for j in range(self.n)] for i in range(self.n)]
        )

    def map_entries(self, fn: Callable[[UPoly], UPoly]) -> PolyMat:
        return PolyMat([[fn(e) for e in r] for r in self.rows])

    def shift(self, alpha: RatLike) -> PolyMat:
        """Entrywise x -> x + alpha."""
        return self.map_entries(lambda e: e.shift(alpha))

    def compose(self, inner: UPoly) -> PolyMat:
        return self.map_entries(lambda e: e.compose(inner))

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def _same_size(self, other: PolyMat) -> None:
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMat):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        from .grammar import format_upoly

        body = ", ".join(
            "[" + ", ".join(format_upoly(e) for e in r) + "]" for r in self.rows
        )
        return f"PolyMat([{body}])"

    # -- conversions ----------------------------------------------------------

    def to_mpoly_rows(self) -> tuple[tuple[MPoly, ...], ...]:
        return tuple(tuple(e.to_mpoly("x") for e in row) for row in self.rows)


def det(mat: PolyMat) -> UPoly:
    """Exact determinant by expansion with column-subset memoization."""
    n = mat.n
    if n == 0:
        return UPoly.const(1)
    cache: dict[tuple[int, tuple[int, ...]], UPoly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> UPoly:
        if len(cols) == 1:
            return mat.rows[row][cols[0]]
        key = (row, cols)
        got = cache.get(key)
        if got is not None:
            return got
        acc = UPoly.zero()
        for k, c in enumerate(cols):
            e = mat.rows[row][c]
            if e.is_zero():
                continue
            rest = cols[:k] + cols[k + 1 :]
            sub = minor(row + 1, rest)
            term = e * sub
            acc = acc + (term if k % 2 == 0 else -term)
        cache[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def is_unimodular(mat: PolyMat) -> bool:
    """True iff det is a nonzero rational constant."""
    d = det(mat)
    return d.is_constant() and not d.is_zero()


def adjugate(mat: PolyMat) -> PolyMat:
    n = mat.n
    if n == 1:
        return PolyMat([[UPoly.const(1)]])
    out = [[UPoly.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [
                [mat.rows[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = det(PolyMat(sub))
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof
    return PolyMat(out)


def inverse_unimodular(mat: PolyMat) -> PolyMat:
    """Inverse over Q[x]; requires a nonzero constant determinant."""
    d = det(mat)
    if not d.is_constant() or d.is_zero():
        raise ValueError("matrix is not unimodular")
    c = Fraction(1, 1) / d.constant_value()
    return adjugate(mat).scale(c)


def star(mat: PolyMat, alpha: RatLike = 0) -> PolyMat:
    """Entrywise x -> -x + alpha, then transpose."""
    reflected = mat.compose(UPoly((alpha, -1)))
    return reflected.transpose()


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithCert:
    """Diagonal divisors with the unimodular transforms that realize them."""

    divisors: tuple[UPoly, ...]
    left: PolyMat
    right: PolyMat

    def verify(self, mat: PolyMat) -> bool:
        if not (is_unimodular(self.left) and is_unimodular(self.right)):
            return False
        if self.left @ mat @ self.right != PolyMat.diagonal(self.divisors):
            return False
        prev: UPoly | None = None
        seen_zero = False
        for dv in self.divisors:
            if dv.is_zero():
                seen_zero = True
                continue
            if seen_zero:
                return False
            if not dv.monic() == dv:
                return False
            if prev is not None and not prev.divides(dv):
                return False
            prev = dv
        return True


def smith_form(mat: PolyMat) -> SmithCert:
    """Smith normal form over Q[x] by classical gcd elimination.

    Returns monic divisors with the divisibility chain, trailing zeros for
    singular input, and unimodular left/right transforms with
    left @ mat @ right == diag(divisors).
    """
    n = mat.n
    work = [list(r) for r in mat.rows]
    left = [list(r) for r in PolyMat.identity(n).rows]
    right = [list(r) for r in PolyMat.identity(n).rows]

    def swap_rows(i, j):
        if i != j:
            work[i], work[j] = work[j], work[i]
            left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        if i != j:
            for r in range(n):
                work[r][i], work[r][j] = work[r][j], work[r][i]
                right[r][i], right[r][j] = right[r][j], right[r][i]

    def row_op(i, j, q):
        # row_i -= q * row_j
        for c in range(n):
            work[i][c] = work[i][c] - q * work[j][c]
            left[i][c] = left[i][c] - q * left[j][c]

    def col_op(i, j, q):
        # col_i -= q * col_j
        for r in range(n):
            work[r][i] = work[r][i] - q * work[r][j]
            right[r][i] = right[r][i] - q * right[r][j]

    for t in range(n):
        # locate a nonzero pivot of minimal degree in the trailing block
        pivot = None
        best = None
        for i in range(t, n):
            for j in range(t, n):
                e = work[i][j]
                if e.is_zero():
                    continue
                key = (e.degree(), i, j)
                if best is None or key < best:
                    best = key
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            # clear the pivot column
            dirty = True
            while dirty:
                dirty = False
                for i in range(t + 1, n):
                    if work[i][t].is_zero():
                        continue
                    q = work[i][t] // work[t][t]
                    row_op(i, t, q)
                    if not work[i][t].is_zero():
                        swap_rows(i, t)
                        dirty = True
            # clear the pivot row
            for j in range(t + 1, n):
                if work[t][j].is_zero():
                    continue
                q = work[t][j] // work[t][t]
                col_op(j, t, q)
                if not work[t][j].is_zero():
                    swap_cols(j, t)
                    break
            else:
                break  # row and column are clear
        # enforce divisibility of the trailing block by the pivot
        offender = None
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                if not work[t][t].divides(work[i][j]):
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, UPoly.const(-1))  # add offending row to pivot row
            # redo this pivot position
            return _smith_resume(work, left, right, t, n)
        # normalize pivot monic
        lead = work[t][t].lead()
        if lead != 1:
            inv = Fraction(1, 1) / lead
            for c in range(n):
                work[t][c] = work[t][c] * inv
                left[t][c] = left[t][c] * inv

    divisors = tuple(work[i][i] for i in range(n))
    return SmithCert(divisors, PolyMat(left), PolyMat(right))


def _smith_resume(work, left, right, t, n) -> SmithCert:
    # Re-run the elimination from the current state.  The divisibility fix
    # strictly reduces the minimal degree reachable at the pivot, so the
    # recursion terminates.
    partial = PolyMat(work)
    cert = smith_form(partial)
    return SmithCert(cert.divisors, cert.left @ PolyMat(left), PolyMat(right) @ cert.right)


def smith_divisors(mat: PolyMat) -> tuple[UPoly, ...]:
    return smith_form(mat).divisors


# ---------------------------------------------------------------------------
# Hermite row form over a PID (Q[v])
# ---------------------------------------------------------------------------


class PidRowBasis:
    """Incremental Hermite/echelon basis for rows over Q[v].

    Rows are vectors of UPoly in a fixed variable; the basis is kept with
    strictly increasing pivot columns, monic pivots and reduced entries above
    each pivot, so equal row modules produce identical canonical forms.
    Optionally tracks how each basis row combines the inserted rows.
    """

    def __init__(self, ncols: int, var: str = "x", track: bool = False):
        self.ncols = ncols
        self.var = var
        self.rows: list[list[UPoly]] = []
        self.pivots: list[int] = []
        self.track = track
        self.history: list[list[UPoly]] = []
        self._count = 0

    def _zero_row(self, width: int) -> list[UPoly]:
        return [UPoly.zero(self.var)] * width

    def _lead_col(self, row: Sequence[UPoly]) -> int | None:
        for j, e in enumerate(row):
            if not e.is_zero():
                return j
        return None

    def add(self, row: Sequence[UPoly], tag_width: int | None = None) -> bool:
        """Insert a row; returns True if the module grew or a pivot changed."""
        if len(row) != self.ncols:
            raise ValueError("row width mismatch")
        r = list(row)
        if self.track:
            width = tag_width if tag_width is not None else self._count + 1
            hist = self._zero_row(max(width, self._count + 1))
            for h in self.history:
                while len(h) < len(hist):
                    h.append(UPoly.zero(self.var))
            hist[self._count] = UPoly.const(1, self.var)
            self._count += 1
        else:
            hist = []
        changed = False
        idx = 0
        while idx < len(self.rows):
            col = self.pivots[idx]
            lead = self._lead_col(r)
            if lead is None:
                break
            if lead < col:
                break
            if lead > col:
                idx += 1
                continue
            pivot = self.rows[idx][col]
            if pivot.divides(r[col]):
                q = r[col].exact_div(pivot)
                r = [a - q * b for a, b in zip(r, self.rows[idx])]
                if self.track:
                    hist = [a - q * b for a, b in zip(hist, self.history[idx])]
            else:
                g, u, v = upoly_xgcd(pivot, r[col])
                combined = [u * a + v * b for a, b in zip(self.rows[idx], r)]
                qp = pivot.exact_div(g)
                qr = r[col].exact_div(g)
                r = [qp * b - qr * a for a, b in zip(self.rows[idx], r)]
                self.rows[idx] = combined
                if self.track:
                    comb_h = [u * a + v * b for a, b in zip(self.history[idx], hist)]
                    hist = [
                        qp * b - qr * a for a, b in zip(self.history[idx], hist)
                    ]
                    self.history[idx] = comb_h
                changed = True
        lead = self._lead_col(r)
        if lead is not None:
            pos = 0
            while pos < len(self.pivots) and self.pivots[pos] < lead:
                pos += 1
            self.rows.insert(pos, r)
            self.pivots.insert(pos, lead)
            if self.track:
                self.history.insert(pos, hist)
            changed = True
        if changed:
            self._normalize()
        return changed

    def _normalize(self) -> None:
        # monic pivots, then reduce entries above each pivot
        for i, col in enumerate(self.pivots):
            lead = self.rows[i][col].lead()
            if lead != 1:
                inv = Fraction(1, 1) / lead
                self.rows[i] = [e * inv for e in self.rows[i]]
                if self.track:
                    self.history[i] = [e * inv for e in self.history[i]]
        for i in range(len(self.rows) - 1, -1, -1):
            col = self.pivots[i]
            pivot = self.rows[i][col]
            for k in range(i):
                entry = self.rows[k][col]
                if entry.is_zero() or entry.degree() < pivot.degree():
                    continue
                q = entry // pivot
                self.rows[k] = [a - q * b for a, b in zip(self.rows[k], self.rows[i])]
                if self.track:
                    self.history[k] = [
                        a - q * b for a, b in zip(self.history[k], self.history[i])
                    ]

    def reduce(self, row: Sequence[UPoly]) -> list[UPoly]:
        """Remainder of a row modulo the current module."""
        r = list(row)
        for idx, col in enumerate(self.pivots):
            if r[col].is_zero():
                continue
            pivot = self.rows[idx][col]
            if pivot.divides(r[col]):
                q = r[col].exact_div(pivot)
                r = [a - q * b for a, b in zip(r, self.rows[idx])]
        return r

    def contains(self, row: Sequence[UPoly]) -> bool:
        return all(e.is_zero() for e in self.reduce(row))

    def canonical(self) -> tuple[Row, ...]:
        return tuple(tuple(r) for r in self.rows)

    def rank(self) -> int:
        return len(self.rows)


def hermite_left_generator(
    mats: Sequence[PolyMat], track: bool = False
) -> tuple[PolyMat, list[list[UPoly]] | None]:
    """Canonical generator of the left Mat_N Q[x]-ideal spanned by ``mats``.

    Returns R with ideal == Mat_N Q[x] * R, rows in Hermite form (monic
    pivots, reduced off-pivot entries, zero rows at the bottom).  With
    ``track=True`` also returns, per basis row, its expression in the stacked
    input rows.
    """
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].n
    if any(m.n != n for m in mats):
        raise ValueError("all matrices must have the same size")
    total = len(mats) * n
    basis = PidRowBasis(n, "x", track=track)
    for m in mats:
        for row in m.rows:
            basis.add(row, tag_width=total)
    rows = [list(r) for r in basis.canonical()]
    while len(rows) < n:
        rows.append([UPoly.zero()] * n)
    history = None
    if track:
        history = [list(h) + [UPoly.zero()] * (total - len(h)) for h in basis.history]
    return PolyMat(rows), history


def right_divide(mat_rows: PolyMat, p_mat: PolyMat) -> PolyMat:
    """Solve Q @ p_mat == mat_rows exactly; raises if not divisible."""
    d = det(p_mat)
    if d.is_zero():
        raise ValueError("cannot divide by a singular matrix")
    adj = adjugate(p_mat)
    num = mat_rows @ adj
    return num.map_entries(lambda e: e.exact_div(d))


def left_divide(p_mat: PolyMat, mat_rows: PolyMat) -> PolyMat:
    """Solve p_mat @ Q == mat_rows exactly; raises if not divisible."""
    d = det(p_mat)
    if d.is_zero():
        raise ValueError("cannot divide by a singular matrix")
    adj = adjugate(p_mat)
    num = adj @ mat_rows
    return num.map_entries(lambda e: e.exact_div(d))


# ---------------------------------------------------------------------------
# Star-congruence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StarForm:
    """A claim base^t(-x+alpha) == sign * base, checked on demand."""

    base: PolyMat
    alpha: Fraction
    sign: int

    def holds(self) -> bool:
        if self.sign not in (1, -1):
            return False
        return star(self.base, self.alpha) == self.base.scale(self.sign)


def congruence_verify(a_mat: PolyMat, c_mat: PolyMat, alpha: RatLike = 0) -> PolyMat:
    """Return star(C, alpha) @ A @ C for unimodular C."""
    if not is_unimodular(c_mat):
        raise ValueError("congruence transform must be unimodular")
    return star(c_mat, alpha) @ a_mat @ c_mat


def _elementary_factors(n: int, degree_cap: int) -> list[PolyMat]:
    """Deterministic grid of unimodular factors for the bounded search."""
    factors: list[PolyMat] = []
    coeff_grid = (-2, -1, 1, 2)
    polys: list[UPoly] = []
    for deg in range(degree_cap + 1):
        for coefs in itertools.product((0,) + coeff_grid, repeat=deg + 1):
            if coefs[deg] == 0:
                continue
            if all(c == 0 for c in coefs):
                continue
            polys.append(UPoly(coefs))
    # transvections I + p*E_ij
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for p in polys:
                rows = [list(r) for r in PolyMat.identity(n).rows]
                rows[i][j] = p
                factors.append(PolyMat(rows))
    # diagonal unit scalings
    units = (Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2))
    for i in range(n):
        for u in units:
            entries: list[UPoly | RatLike] = [Fraction(1)] * n
            entries[i] = u
            factors.append(PolyMat.diagonal(entries))
    # permutations
    for perm in itertools.permutations(range(n)):
        if perm == tuple(range(n)):
            continue
        zero = UPoly.zero()
        one = UPoly.const(1)
        factors.append(
            PolyMat([[one if perm[i] == j else zero for j in range(n)] for i in range(n)])
        )
    return factors


def congruence_search_bounded(
    a_mat: PolyMat,
    target: PolyMat,
    alpha: RatLike = 0,
    degree_cap: int = 1,
    max_factors: int = 2,
) -> PolyMat | None:
    """Search a unimodular C with star(C, alpha) @ A @ C == target.

    C is sought as a product of at most ``max_factors`` elementary unimodular
    factors with entry degrees <= degree_cap over a small integer grid, in a
    fixed enumeration order.  Absence within the budget proves nothing.
    """
    a_mat._same_size(target)
    ident = PolyMat.identity(a_mat.n)
    if congruence_verify(a_mat, ident, alpha) == target:
        return ident
    factors = _elementary_factors(a_mat.n, degree_cap)
    frontier: list[PolyMat] = [ident]
    for _ in range(max_factors):
        next_frontier: list[PolyMat] = []
        for base in frontier:
            for f in factors:
                cand = base @ f
                if star(cand, alpha) @ a_mat @ cand == target:
                    return cand
                next_frontier.append(cand)
        frontier = next_frontier
    return None
