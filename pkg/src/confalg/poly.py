"""Exact sparse polynomial arithmetic over Q in the fixed alphabet {d, x, l, m}.

The four variables are written ``d`` (the derivation symbol usually printed as
a partial-derivative sign), ``x`` (the position symbol), and the two series
parameters ``l`` and ``m``.  Everything is exact: coefficients are
`fractions.Fraction`, equality is representation equality of canonical forms.

Two layers live here:

* :class:`MPoly` — sparse multivariate polynomials over all four variables,
  the universal carrier for symbols and product results.
* :class:`UPoly` — dense univariate polynomials with a variable tag, used for
  matrix entries over Q[x], Q[d]-module coordinates and reported generators.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

VARS: tuple[str, ...] = ("d", "x", "l", "m")
_VAR_INDEX = {v: i for i, v in enumerate(VARS)}

Exponent = tuple[int, int, int, int]
RatLike = int | Fraction

_ZERO_EXP: Exponent = (0, 0, 0, 0)


def _rat(value: RatLike) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def _grlex_key(exp: Exponent) -> tuple[int, Exponent]:
    # Graded lexicographic with d > x > l > m.
    return (sum(exp), exp)


class MPoly:
    """Sparse polynomial in {d, x, l, m} with Fraction coefficients.

    Instances are immutable; the term map never stores zero coefficients, so
    ``==`` on the canonical representation is mathematical equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exponent, Fraction] | None = None):
        clean = {}
        if terms:
            for exp, coef in terms.items():
                if coef:
                    clean[exp] = coef
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("MPoly is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> MPoly:
        return _MP_ZERO

    @staticmethod
    def const(value: RatLike) -> MPoly:
        c = _rat(value)
        if not c:
            return _MP_ZERO
        return MPoly({_ZERO_EXP: c})

    @staticmethod
    def var(name: str) -> MPoly:
        return _MP_VARS[name]

    @staticmethod
    def monomial(exp: Exponent, coef: RatLike = 1) -> MPoly:
        return MPoly({exp: _rat(coef)})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(e == _ZERO_EXP for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms[_ZERO_EXP]

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = _VAR_INDEX[var]
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def uses(self, var: str) -> bool:
        i = _VAR_INDEX[var]
        return any(e[i] for e in self.terms)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    out.add(VARS[i])
        return out

    def leading_term(self) -> tuple[Exponent, Fraction]:
        """Leading (exponent, coefficient) under graded lex d > x > l > m."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(exp, Fraction(0))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: MPoly | RatLike) -> MPoly:
        other = _as_mpoly(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, coef in other.terms.items():
            s = out.get(exp)
            if s is None:
                out[exp] = coef
            else:
                s = s + coef
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        res = MPoly.__new__(MPoly)
        object.__setattr__(res, "terms", out)
        return res

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        res = MPoly.__new__(MPoly)
        object.__setattr__(res, "terms", {e: -c for e, c in self.terms.items()})
        return res

    def __sub__(self, other: MPoly | RatLike) -> MPoly:
        return self + (-_as_mpoly(other))

    def __rsub__(self, other: MPoly | RatLike) -> MPoly:
        return _as_mpoly(other) + (-self)

    def __mul__(self, other: MPoly | RatLike) -> MPoly:
        other = _as_mpoly(other)
        if not self.terms or not other.terms:
            return _MP_ZERO
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                c = c1 * c2
                s = out.get(exp)
                if s is None:
                    out[exp] = c
                else:
                    s = s + c
                    if s:
                        out[exp] = s
                    else:
                        del out[exp]
        res = MPoly.__new__(MPoly)
        object.__setattr__(res, "terms", out)
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MPoly:
        if n < 0:
            raise ValueError("negative power")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: RatLike) -> MPoly:
        c = _rat(c)
        if not c:
            return _MP_ZERO
        res = MPoly.__new__(MPoly)
        object.__setattr__(res, "terms", {e: c * v for e, v in self.terms.items()})
        return res

    # -- structural operations ----------------------------------------------

    def substitute(self, bindings: Mapping[str, MPoly | RatLike]) -> MPoly:
        """Simultaneous substitution; unbound variables are unchanged."""
        bound: dict[int, MPoly] = {}
        for name, val in bindings.items():
            if name not in _VAR_INDEX:
                raise KeyError(f"unknown variable {name!r}")
            bound[_VAR_INDEX[name]] = _as_mpoly(val)
        if not bound:
            return self
        powers: dict[int, list[MPoly]] = {i: [MPoly.const(1)] for i in bound}
        result = _MP_ZERO
        for exp, coef in self.terms.items():
            piece = MPoly.const(coef)
            residual = [0, 0, 0, 0]
            for i, k in enumerate(exp):
                if not k:
                    continue
                if i in bound:
                    cache = powers[i]
                    while len(cache) <= k:
                        cache.append(cache[-1] * bound[i])
                    piece = piece * cache[k]
                else:
                    residual[i] = k
            if residual != [0, 0, 0, 0]:
                piece = piece * MPoly.monomial(tuple(residual))  # type: ignore[arg-type]
            result = result + piece
        return result

    def derivative(self, var: str) -> MPoly:
        i = _VAR_INDEX[var]
        out: dict[Exponent, Fraction] = {}
        for exp, coef in self.terms.items():
            k = exp[i]
            if not k:
                continue
            new = list(exp)
            new[i] = k - 1
            out[tuple(new)] = coef * k  # type: ignore[index]
        return MPoly(out)

    def coefficients_in(self, var: str) -> dict[int, MPoly]:
        """Split as a polynomial in one variable; values are var-free."""
        i = _VAR_INDEX[var]
        buckets: dict[int, dict[Exponent, Fraction]] = {}
        for exp, coef in self.terms.items():
            k = exp[i]
            new = list(exp)
            new[i] = 0
            buckets.setdefault(k, {})[tuple(new)] = coef  # type: ignore[index]
        return {k: MPoly(t) for k, t in buckets.items()}

    # -- comparisons & misc --------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        from .grammar import format_poly

        return f"MPoly({format_poly(self)!r})"


def _as_mpoly(value: MPoly | RatLike) -> MPoly:
    if isinstance(value, MPoly):
        return value
    return MPoly.const(value)


_MP_ZERO = MPoly({})
_MP_VARS = {
    v: MPoly({tuple(1 if j == i else 0 for j in range(4)): Fraction(1)})  # type: ignore[misc]
    for i, v in enumerate(VARS)
}


# ---------------------------------------------------------------------------
# Univariate layer
# ---------------------------------------------------------------------------


class UPoly:
    """Dense univariate polynomial over Q, lowest-degree coefficient first.

    The variable tag is a single letter; matrix entries use ``x``, module
    coordinates use ``d``, and reported shift-variable generators use ``z``
    (standing for d+x).  The zero polynomial is the empty coefficient tuple.
    """

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs: Iterable[RatLike], var: str = "x"):
        cs = [_rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("UPoly is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(var: str = "x") -> UPoly:
        return UPoly((), var)

    @staticmethod
    def const(value: RatLike, var: str = "x") -> UPoly:
        return UPoly((value,), var)

    @staticmethod
    def variable(var: str = "x") -> UPoly:
        return UPoly((0, 1), var)

    @staticmethod
    def from_roots(roots: Sequence[RatLike], var: str = "x") -> UPoly:
        p = UPoly.const(1, var)
        for r in roots:
            p = p * UPoly((-_rat(r), 1), var)
        return p

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if len(self.coeffs) > 1:
            raise ValueError("polynomial is not constant")
        return self.coeffs[0]

    def lead(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: UPoly) -> None:
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")

    def __add__(self, other: UPoly | RatLike) -> UPoly:
        other = self._coerce(other)
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(
            (self.coefficient(i) + other.coefficient(i) for i in range(n)), self.var
        )

    __radd__ = __add__

    def __neg__(self) -> UPoly:
        return UPoly((-c for c in self.coeffs), self.var)

    def __sub__(self, other: UPoly | RatLike) -> UPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: UPoly | RatLike) -> UPoly:
        return self._coerce(other) + (-self)

    def __mul__(self, other: UPoly | RatLike) -> UPoly:
        other = self._coerce(other)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return UPoly.zero(self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> UPoly:
        result = UPoly.const(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other: UPoly | RatLike) -> UPoly:
        if isinstance(other, UPoly):
            return other
        return UPoly.const(other, self.var)

    def divmod(self, other: UPoly) -> tuple[UPoly, UPoly]:
        """Field-coefficient polynomial division with remainder."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UPoly.zero(self.var), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.lead()
        for k in range(dq, -1, -1):
            c = rem[k + other.degree()] / lead
            if c:
                quo[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UPoly(quo, self.var), UPoly(rem, self.var)

    def __floordiv__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[0]

    def __mod__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[1]

    def divides(self, other: UPoly) -> bool:
        if self.is_zero():
            return other.is_zero()
        return other.divmod(self)[1].is_zero()

    def exact_div(self, other: UPoly) -> UPoly:
        quo, rem = self.divmod(other)
        if not rem.is_zero():
            raise ValueError("division is not exact")
        return quo

    def monic(self) -> UPoly:
        if self.is_zero():
            return self
        lead = self.lead()
        return UPoly((c / lead for c in self.coeffs), self.var)

    def derivative(self) -> UPoly:
        return UPoly((c * k for k, c in enumerate(self.coeffs) if k), self.var)

    def eval(self, point: RatLike) -> Fraction:
        acc = Fraction(0)
        p = _rat(point)
        for c in reversed(self.coeffs):
            acc = acc * p + c
        return acc

    def compose(self, inner: UPoly) -> UPoly:
        """Horner composition self(inner); result in inner's variable."""
        acc = UPoly.zero(inner.var)
        for c in reversed(self.coeffs):
            acc = acc * inner + UPoly.const(c, inner.var)
        return acc

    def shift(self, alpha: RatLike) -> UPoly:
        """Return self(var + alpha), exact."""
        return self.compose(UPoly((alpha, 1), self.var))

    def retag(self, var: str) -> UPoly:
        return UPoly(self.coeffs, var)

    # -- conversions ----------------------------------------------------------

    def to_mpoly(self, var: str | None = None) -> MPoly:
        name = var or self.var
        i = _VAR_INDEX[name]
        terms: dict[Exponent, Fraction] = {}
        for k, c in enumerate(self.coeffs):
            if c:
                exp = [0, 0, 0, 0]
                exp[i] = k
                terms[tuple(exp)] = c  # type: ignore[index]
        return MPoly(terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UPoly.const(other, self.var)
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.var, self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        from .grammar import format_poly

        return f"UPoly({format_poly(self.to_mpoly(), var_map={self.var: self.var})!r})"


def upoly_from_mpoly(p: MPoly, var: str, out_var: str | None = None) -> UPoly:
    """Read an MPoly that only uses one variable as a UPoly."""
    extra = p.variables() - {var}
    if extra:
        raise ValueError(f"polynomial uses {sorted(extra)}, expected only {var!r}")
    i = _VAR_INDEX[var]
    coeffs = [Fraction(0)] * (p.degree(var) + 1)
    for exp, coef in p.terms.items():
        coeffs[exp[i]] = coef
    return UPoly(coeffs, out_var or var)


# ---------------------------------------------------------------------------
# GCDs
# ---------------------------------------------------------------------------


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd by the Euclidean algorithm; gcd(a, 0) = monic(a)."""
    a._check(b)
    r0, r1 = a, b
    while not r1.is_zero():
        r0, r1 = r1, r0 % r1
    return r0.monic()


def upoly_xgcd(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly, UPoly]:
    """Extended Euclid: (g, u, v) with u*a + v*b = g, g monic."""
    a._check(b)
    r0, r1 = a, b
    u0, u1 = UPoly.const(1, a.var), UPoly.zero(a.var)
    v0, v1 = UPoly.zero(a.var), UPoly.const(1, a.var)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if r0.is_zero():
        return r0, u0, v0
    lead = r0.lead()
    inv = UPoly.const(Fraction(1, 1) / lead, a.var)
    return r0.monic(), u0 * inv, v0 * inv


def upoly_lcm(a: UPoly, b: UPoly) -> UPoly:
    if a.is_zero() or b.is_zero():
        return UPoly.zero(a.var)
    return (a * b).exact_div(upoly_gcd(a, b)).monic()


def _dx_content_and_primitive(p: MPoly) -> tuple[UPoly, dict[int, UPoly]]:
    """Split p(d, x) as content(x) * primitive-part, d the main variable."""
    coeffs = {k: upoly_from_mpoly(c, "x") for k, c in p.coefficients_in("d").items()}
    content = UPoly.zero("x")
    for c in coeffs.values():
        content = upoly_gcd(content, c)
    primitive = {k: c.exact_div(content) for k, c in coeffs.items()}
    return content, primitive


def _dx_from_coeffs(coeffs: Mapping[int, UPoly]) -> MPoly:
    acc = MPoly.zero()
    d = MPoly.var("d")
    for k, c in coeffs.items():
        acc = acc + c.to_mpoly("x") * d**k
    return acc


def _pseudo_rem(a: dict[int, UPoly], b: dict[int, UPoly]) -> dict[int, UPoly]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, main variable d.

    Coefficient arithmetic stays in Q[x]; no coefficient divisions occur.
    """
    da = max(a)
    db = max(b)
    lb = b[db]
    rem = dict(a)
    steps = da - db + 1
    while rem and max(rem) >= db:
        dr = max(rem)
        top = rem[dr]
        steps -= 1
        new = {i: c * lb for i, c in rem.items() if i != dr}
        for j, c in b.items():
            if j == db:
                continue
            t = new.get(j + dr - db, UPoly.zero("x")) - top * c
            if t.is_zero():
                new.pop(j + dr - db, None)
            else:
                new[j + dr - db] = t
        rem = new
    if steps > 0 and rem:
        scale = lb**steps
        rem = {i: c * scale for i, c in rem.items()}
    return rem


def bipoly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """GCD in Q[d, x] via content/primitive split and a subresultant PRS.

    The result is normalized so its leading coefficient under the graded-lex
    term order is 1.
    """
    for p in (a, b):
        extra = p.variables() - {"d", "x"}
        if extra:
            raise ValueError(f"bipoly_gcd limited to d, x; found {sorted(extra)}")
    if a.is_zero():
        return _normalize_leading(b)
    if b.is_zero():
        return _normalize_leading(a)

    cont_a, prim_a = _dx_content_and_primitive(a)
    cont_b, prim_b = _dx_content_and_primitive(b)
    cont = upoly_gcd(cont_a, cont_b)

    c0, c1 = prim_a, prim_b
    if max(c0) < max(c1):
        c0, c1 = c1, c0
    if max(c1) == 0:
        # a primitive polynomial of d-degree 0 is a nonzero constant
        pp_gcd: dict[int, UPoly] = {0: UPoly.const(1, "x")}
    else:
        g = UPoly.const(1, "x")
        h = UPoly.const(1, "x")
        while c1:
            delta = max(c0) - max(c1)
            rem = _pseudo_rem(c0, c1)
            divisor = g * h**delta
            c0, c1 = c1, {k: c.exact_div(divisor) for k, c in rem.items()}
            g = c0[max(c0)]
            if delta:
                h = (g**delta).exact_div(h ** (delta - 1))
        _, pp_gcd = _dx_content_and_primitive(_dx_from_coeffs(c0))

    result = _dx_from_coeffs(pp_gcd) * cont.to_mpoly("x")
    return _normalize_leading(result)


def _normalize_leading(p: MPoly) -> MPoly:
    if p.is_zero():
        return p
    _, lead = p.leading_term()
    return p.scale(Fraction(1, 1) / lead)


def mpoly_div_by_upoly(p: MPoly, q: UPoly, var: str | None = None) -> MPoly:
    """Exact division of an MPoly by a univariate polynomial in ``var``."""
    v = var or q.var
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if q.is_constant():
        return p.scale(Fraction(1, 1) / q.constant_value())
    i = _VAR_INDEX[v]
    rem = dict(p.terms)
    out: dict[Exponent, Fraction] = {}
    dq = q.degree()
    lead = q.lead()
    while rem:
        exp = max(rem, key=_grlex_key)
        coef = rem[exp]
        if exp[i] < dq:
            raise ValueError("division is not exact")
        qexp = list(exp)
        qexp[i] -= dq
        qe: Exponent = tuple(qexp)  # type: ignore[assignment]
        c = coef / lead
        out[qe] = out.get(qe, Fraction(0)) + c
        for k, b in enumerate(q.coeffs):
            if not b:
                continue
            te = list(qe)
            te[i] += k
            t: Exponent = tuple(te)  # type: ignore[assignment]
            s = rem.get(t, Fraction(0)) - c * b
            if s:
                rem[t] = s
            else:
                rem.pop(t, None)
    return MPoly(out)
