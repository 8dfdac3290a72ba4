"""Thin adapter to sympy for the few leaf utilities the workbench buys in:
irreducibility/factorization of polynomials over the rationals (with every
indeterminate treated as an independent algebraic variable) and real-root
isolation of univariate rational polynomials. All ring arithmetic stays in
``diffpoly``; sympy never sees a derivation."""

from __future__ import annotations

from fractions import Fraction

import sympy

from .diffpoly import DiffPoly, Indet
from .errors import DcfwbError

_SYM_CACHE: dict[Indet, sympy.Symbol] = {}


def _symbol(ind: Indet) -> sympy.Symbol:
    sym = _SYM_CACHE.get(ind)
    if sym is None:
        fam, var, der = ind
        sym = sympy.Symbol(f"{fam}{var}_{der}")
        _SYM_CACHE[ind] = sym
    return sym


def to_sympy(p: DiffPoly) -> sympy.Expr:
    total = sympy.Integer(0)
    for em, c in p.terms:
        term = sympy.Rational(c.numerator, c.denominator)
        for ind, e in em:
            term *= _symbol(ind) ** e
        total += term
    return total


def _ind_of_symbol(sym: sympy.Symbol) -> Indet:
    name = sym.name
    fam = name[0]
    var, der = name[1:].split("_")
    return (fam, int(var), int(der))


def from_sympy(expr) -> DiffPoly:
    expr = sympy.expand(expr)
    poly = sympy.Poly(expr, *sorted(expr.free_symbols, key=str)) if expr.free_symbols else None
    if poly is None:
        q = sympy.Rational(expr)
        return DiffPoly.const(Fraction(q.p, q.q))
    gens = [_ind_of_symbol(g) for g in poly.gens]
    out = []
    for exps, coeff in poly.terms():
        q = sympy.Rational(coeff)
        em = tuple(sorted((gens[i], e) for i, e in enumerate(exps) if e))
        out.append((em, Fraction(q.p, q.q)))
    return DiffPoly(out)


def is_irreducible_over_Q(p: DiffPoly) -> bool:
    """Algebraic irreducibility over the rationals (indeterminates independent)."""
    if p.is_zero() or p.is_constant():
        raise DcfwbError("irreducibility is asked of nonconstant polynomials only")
    _, factors = sympy.factor_list(to_sympy(p))
    return len(factors) == 1 and factors[0][1] == 1


def factor_over_Q(p: DiffPoly) -> list[tuple[DiffPoly, int]]:
    """Nonconstant irreducible factors over the rationals, with multiplicities."""
    _, factors = sympy.factor_list(to_sympy(p))
    return [(from_sympy(f), m) for f, m in factors]


def univar_coeffs(p: DiffPoly, var: int, family: str = "Y") -> list[Fraction]:
    """Coefficient list (ascending degree) of an order-0 polynomial in one variable."""
    ind = (family, var, 0)
    coeffs: dict[int, Fraction] = {}
    for em, c in p.terms:
        if not em:
            coeffs[0] = coeffs.get(0, Fraction(0)) + c
            continue
        if len(em) != 1 or em[0][0] != ind:
            raise DcfwbError(f"not univariate order-0 in {family}{var}")
        coeffs[em[0][1]] = c
    deg = max(coeffs) if coeffs else 0
    return [coeffs.get(i, Fraction(0)) for i in range(deg + 1)]


def _as_poly(coeffs: list[Fraction]):
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(coeffs))
    return sympy.Poly(expr, x)


def real_root_intervals(coeffs: list[Fraction]) -> list[tuple[Fraction, Fraction, int]]:
    """Isolating rational intervals (lo, hi, multiplicity) for the distinct
    real roots, in ascending order."""
    poly = _as_poly(coeffs)
    out = []
    for (lo, hi), mult in poly.intervals():
        out.append((Fraction(lo.p, lo.q), Fraction(hi.p, hi.q), mult))
    return out


def count_real_roots_with_mult(coeffs: list[Fraction]) -> int:
    return sum(m for _, _, m in real_root_intervals(coeffs))


def eval_univar(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc
