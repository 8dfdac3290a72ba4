"""Canonical enumeration of differential polynomials over the rationals.

Polynomials are ordered by an explicit complexity weight, ties broken by
canonical polynomial order, so "the first s polynomials" is well defined and
deterministic. Weights: a coefficient n/d weighs |n|+d-1; an indeterminate
factor of variable v, derivative r, exponent e weighs e*(1+2r+v); each
additional monomial weighs 1 extra. Rank-heavy, coefficient-heavy and
high-index polynomials therefore appear late, and every weight class is
finite.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..caps import CAPS
from ..diffpoly import DiffPoly, Rank, rank_in
from ..errors import CapExceededError


def coeff_weight(c: Fraction) -> int:
    return abs(c.numerator) + c.denominator - 1


def indet_weight(var: int, deriv: int) -> int:
    return 1 + 2 * deriv + var


def poly_weight(p: DiffPoly) -> int:
    if p.is_zero():
        return 0
    total = len(p.terms) - 1
    for em, c in p.terms:
        total += coeff_weight(c)
        for (_fam, v, r), e in em:
            total += e * indet_weight(v, r)
    return total


def _coeffs_of_weight(k: int) -> list[Fraction]:
    out = []
    for den in range(1, k + 1):
        num = k + 1 - den
        if math.gcd(num, den) == 1:
            out.append(Fraction(num, den))
            out.append(Fraction(-num, den))
    return out


def _expmaps_up_to(w: int, nvars: int, family: str, require_var: int | None):
    """Exponent maps of weight <= w, bucketed by weight; optionally only maps
    containing (or only maps free of) the required variable."""
    indets = []
    for v in range(min(nvars, w)):
        r = 0
        while indet_weight(v, r) <= w:
            indets.append(((family, v, r), indet_weight(v, r)))
            r += 1
    with_req: dict[int, list] = {k: [] for k in range(w + 1)}
    without_req: dict[int, list] = {k: [] for k in range(w + 1)}

    def rec(idx: int, used: int, acc: list, has_req: bool):
        target = with_req if has_req else without_req
        target[used].append(tuple(sorted(acc)))
        for i in range(idx, len(indets)):
            (fam, v, r), unit = indets[i]
            e = 1
            while used + e * unit <= w:
                rec(i + 1, used + e * unit, acc + [((fam, v, r), e)],
                    has_req or v == require_var)
                e += 1

    rec(0, 0, [], False)
    return with_req, without_req


def _polys_of_weight(w: int, nvars: int, family: str,
                     require_var: int | None = None) -> list[DiffPoly]:
    """All canonical polynomials of exactly weight w (finitely many); with
    ``require_var`` set, only those involving that variable."""
    if w == 0:
        return [] if require_var is not None else [DiffPoly.zero()]
    with_req, without_req = _expmaps_up_to(w - 1, nvars, family, require_var)
    monos: list[tuple[int, tuple, Fraction]] = []
    min_req_mono = w + 1
    for mw in range(1, w + 1):
        for bucket, is_req in ((with_req, True), (without_req, False)):
            for em_weight, maps in bucket.items():
                cw = mw - em_weight
                if cw < 1:
                    continue
                for em in maps:
                    if not em and is_req:
                        continue
                    for c in _coeffs_of_weight(cw):
                        monos.append((mw, em, c))
                    if is_req:
                        min_req_mono = min(min_req_mono, mw)
    if require_var is not None and min_req_mono > w:
        return []
    req_maps = {em for k in with_req.values() for em in k}
    monos.sort(key=lambda t: (t[0], t[1], t[2]))
    out: list[DiffPoly] = []

    def rec(idx: int, remaining: int, acc: list, used_maps: set, has_req: bool):
        if remaining == 0:
            if has_req or require_var is None:
                out.append(DiffPoly([(em, c) for _w, em, c in acc]))
            return
        if require_var is not None and not has_req and remaining < min_req_mono + (1 if acc else 0):
            return
        for i in range(idx, len(monos)):
            mw, em, c = monos[i]
            extra = mw + (1 if acc else 0)
            if extra > remaining:
                break  # monos sorted by weight: nothing later fits
            if em in used_maps:
                continue
            acc.append(monos[i])
            used_maps.add(em)
            rec(i + 1, remaining - extra, acc, used_maps,
                has_req or em in req_maps)
            acc.pop()
            used_maps.discard(em)

    rec(0, w, [], set(), False)
    out.sort(key=lambda p: p.sort_key())
    return out


class PolyEnumeration:
    """Lazy, cached stream of all polynomials over variables 0..nvars-1 of a
    family, in (weight, canonical order); optionally restricted to
    polynomials involving one required variable."""

    def __init__(self, nvars: int, family: str = "Y", require_var: int | None = None):
        self.nvars = nvars
        self.family = family
        self.require_var = require_var
        self._items: list[DiffPoly] = []
        self._next_weight = 0

    def _grow(self):
        w = self._next_weight
        self._items.extend(_polys_of_weight(w, min(self.nvars, w + 1),
                                            self.family, self.require_var))
        self._next_weight += 1

    def _ensure(self, n: int):
        while len(self._items) < n:
            if self._next_weight > CAPS.enum_budget:
                raise CapExceededError("polynomial enumeration exceeded its weight budget")
            self._grow()

    def prefix(self, n: int) -> list[DiffPoly]:
        """The first n polynomials of the stream."""
        self._ensure(n)
        return self._items[:n]

    def entry(self, t: int) -> DiffPoly:
        self._ensure(t + 1)
        return self._items[t]

    def first_below_rank(self, n: int, var: int, bound: Rank) -> list[DiffPoly]:
        """First n stream entries involving the variable whose rank in it is
        strictly below the bound (an infinite bound admits any rank)."""
        if not bound.is_infinite and not Rank(0, 1) < bound:
            return []  # nothing involving the variable can rank below (0,1)
        got: list[DiffPoly] = []
        idx = 0
        while len(got) < n:
            if idx >= len(self._items):
                if self._next_weight > CAPS.enum_budget:
                    break
                self._grow()
                continue
            p = self._items[idx]
            idx += 1
            if p.is_zero():
                continue
            r = rank_in(p, var, self.family)
            if r.order is not None and r.order >= 0 and r < bound:
                got.append(p)
        return got


_shared: dict[tuple, PolyEnumeration] = {}


def shared_enumeration(nvars: int, family: str = "Y",
                       require_var: int | None = None) -> PolyEnumeration:
    key = (nvars, family, require_var)
    if key not in _shared:
        _shared[key] = PolyEnumeration(nvars, family, require_var)
    return _shared[key]
