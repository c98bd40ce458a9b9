"""JSON wire formats: matrices as arrays of polynomial strings, one grammar.

Every polynomial that crosses the CLI boundary uses the text grammar from
:mod:`confalg.grammar`; matrices are arrays of arrays of such strings, series
are maps keyed by "l^n" (or "l^n*m^k") exponent strings.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from .cend import CendElem, LambdaSeries, ModVec, modvec
from .grammar import ParseError, format_poly, format_upoly, parse_poly
from .poly import MPoly, UPoly, upoly_from_mpoly
from .polymat import PolyMat


class PayloadError(ValueError):
    """Malformed JSON payload (wrong shape, bad polynomial, bad variable)."""


def fraction_to_str(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def fraction_from_json(data: Any, field: str) -> Fraction:
    if isinstance(data, bool) or not isinstance(data, (str, int)):
        raise PayloadError(f"{field}: expected a rational as string or integer")
    try:
        return Fraction(str(data))
    except (ValueError, ZeroDivisionError) as exc:
        raise PayloadError(f"{field}: not a rational: {data!r}") from exc


def _parse_entry(text: Any, field: str, allowed: set[str]) -> MPoly:
    if not isinstance(text, str):
        raise PayloadError(f"{field}: expected a polynomial string")
    try:
        poly = parse_poly(text)
    except ParseError as exc:
        raise PayloadError(f"{field}: {exc}") from exc
    extra = poly.variables() - allowed
    if extra:
        raise PayloadError(
            f"{field}: variable(s) {sorted(extra)} not allowed here"
        )
    return poly


def polymat_from_json(data: Any, field: str = "matrix") -> PolyMat:
    if not isinstance(data, list) or not data:
        raise PayloadError(f"{field}: expected a non-empty array of arrays")
    n = len(data)
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise PayloadError(f"{field}: non-square matrix")
        rows.append(
            [
                upoly_from_mpoly(
                    _parse_entry(e, f"{field}[{i}][{j}]", {"x"}), "x"
                )
                for j, e in enumerate(row)
            ]
        )
    return PolyMat(rows)


def polymat_to_json(mat: PolyMat) -> list[list[str]]:
    return [[format_upoly(e) for e in row] for row in mat.rows]


def cend_from_json(data: Any, field: str = "symbol") -> CendElem:
    if not isinstance(data, list) or not data:
        raise PayloadError(f"{field}: expected a non-empty array of arrays")
    n = len(data)
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise PayloadError(f"{field}: non-square matrix")
        rows.append(
            [_parse_entry(e, f"{field}[{i}][{j}]", {"d", "x"}) for j, e in enumerate(row)]
        )
    return CendElem(rows)


def cend_to_json(elem: CendElem) -> list[list[str]]:
    return [[format_poly(e) for e in row] for row in elem.entries]


def series_to_json(series: LambdaSeries) -> dict[str, list[list[str]]]:
    out = {}
    for (kl, km), coeff in series.coefficients:
        if coeff.is_zero():
            continue
        key = f"l^{kl}" if not km else f"l^{kl}*m^{km}"
        out[key] = cend_to_json(coeff)
    return out


def modvec_from_json(data: Any, field: str = "vector") -> ModVec:
    if not isinstance(data, list) or not data:
        raise PayloadError(f"{field}: expected a non-empty array")
    entries = []
    for i, e in enumerate(data):
        poly = _parse_entry(e, f"{field}[{i}]", {"d"})
        entries.append(upoly_from_mpoly(poly, "d"))
    return modvec(entries)


def modvec_to_json(vec: Sequence[UPoly]) -> list[str]:
    return [format_upoly(e) for e in vec]


def vec_series_to_json(series: dict[int, ModVec]) -> dict[str, list[str]]:
    return {f"l^{k}": modvec_to_json(v) for k, v in series.items()}


def upolys_to_json(polys: Sequence[UPoly]) -> list[str]:
    return [format_upoly(p) for p in polys]


def cend_list_from_json(data: Any, field: str = "gens") -> list[CendElem]:
    if not isinstance(data, list) or not data:
        raise PayloadError(f"{field}: expected a non-empty array of matrices")
    return [cend_from_json(m, f"{field}[{k}]") for k, m in enumerate(data)]
