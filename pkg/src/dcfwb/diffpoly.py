"""Exact multivariate differential polynomials over the rationals.

A polynomial lives in the ring generated by indeterminates ``Y_i^(r)``
(variable ``i`` of a family, differentiated ``r`` times), all treated as
separate commuting variables, with the formal derivation delta mapping each
``Y_i^(r)`` to ``Y_i^(r+1)`` and acting on products by the Leibniz rule.
Three disjoint variable families exist: ``Y`` (the default), ``T`` (tower
variables) and ``X`` (approximation-side polynomials).

Values are immutable and canonical: two equal polynomials have identical
internal representation, so equality and hashing are structural. All
operations are pure.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .caps import CAPS
from .errors import CapExceededError, MissingAssignmentError, NoLeaderError

FAMILIES = ("T", "X", "Y")

# An indeterminate is (family, var index, derivative order).
Indet = tuple[str, int, int]
# Exponent maps are stored as tuples of (indeterminate, exponent>0),
# sorted ascending by indeterminate.
ExpMap = tuple[tuple[Indet, int], ...]

Scalar = Union[int, Fraction]

ORDER_INFINITE = math.inf  # order of the zero polynomial


def _mono_key(em: ExpMap):
    # Graded by the leading (highest) indeterminate, then by the exponent map
    # read from the top down. Constants (empty map) sort first.
    if not em:
        return ((), ())
    return (em[-1][0], tuple(reversed(em)))


class Rank:
    """Rank of a differential polynomial in one variable: (order, degree) or infinite.

    Total order: infinite beats everything; finite ranks compare by order,
    then by degree of the leading derivative. Nonzero polynomials free of the
    variable get rank (-1, 1).
    """

    __slots__ = ("order", "degree", "_inf")

    def __init__(self, order: int, degree: int):
        self.order = order
        self.degree = degree
        self._inf = False

    @classmethod
    def infinite(cls) -> "Rank":
        r = cls.__new__(cls)
        r.order = None
        r.degree = None
        r._inf = True
        return r

    @property
    def is_infinite(self) -> bool:
        return self._inf

    def _key(self):
        if self._inf:
            return (1,)
        return (0, self.order, self.degree)

    def __eq__(self, other):
        return isinstance(other, Rank) and self._key() == other._key()

    def __lt__(self, other):
        if not isinstance(other, Rank):
            return NotImplemented
        return self._key() < other._key()

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self._inf:
            return "Rank.infinite()"
        return f"Rank({self.order}, {self.degree})"


RANK_INFINITE = Rank.infinite()


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not a rational scalar: {c!r}")


def _check_caps(terms):
    if len(terms) > CAPS.max_monomials:
        raise CapExceededError(
            f"polynomial has {len(terms)} monomials, cap is {CAPS.max_monomials}")
    for em, _ in terms:
        for (fam, var, der), e in em:
            if der > CAPS.max_deriv:
                raise CapExceededError(
                    f"derivative order {der} of {fam}{var} exceeds cap {CAPS.max_deriv}")
            if e > CAPS.max_degree:
                raise CapExceededError(
                    f"exponent {e} of {fam}{var}^({der}) exceeds cap {CAPS.max_degree}")


class DiffPoly:
    """A canonical differential polynomial with Fraction coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Iterable[tuple[ExpMap, Scalar]] = ()):
        merged: dict[ExpMap, Fraction] = {}
        for em, c in terms:
            c = _as_fraction(c)
            if not c:
                continue
            acc = merged.get(em)
            acc = c if acc is None else acc + c
            if acc:
                merged[em] = acc
            elif em in merged:
                del merged[em]
        canon = tuple(sorted(merged.items(), key=lambda t: _mono_key(t[0])))
        _check_caps(canon)
        self._terms = canon
        self._hash = hash(canon)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "DiffPoly":
        return _ZERO

    @classmethod
    def one(cls) -> "DiffPoly":
        return _ONE

    @classmethod
    def const(cls, c: Scalar) -> "DiffPoly":
        c = _as_fraction(c)
        if not c:
            return _ZERO
        return cls((((), c),))

    @classmethod
    def gen(cls, var: int, deriv: int = 0, family: str = "Y") -> "DiffPoly":
        if family not in FAMILIES:
            raise ValueError(f"unknown variable family {family!r}")
        if var < 0 or deriv < 0:
            raise ValueError("variable index and derivative order must be >= 0")
        em: ExpMap = ((((family, var, deriv)), 1),)
        return cls(((em, Fraction(1)),))

    # -- basic structure ---------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[ExpMap, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not self._terms[0][0])

    def constant_value(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if self.is_constant():
            return self._terms[0][1]
        raise ValueError("not a constant polynomial")

    def variables(self) -> set[tuple[str, int]]:
        return {(fam, var) for em, _ in self._terms for (fam, var, _), _ in em}

    def indeterminates(self) -> set[Indet]:
        return {ind for em, _ in self._terms for ind, _ in em}

    def leading_monomial(self) -> tuple[ExpMap, Fraction]:
        """Canonically largest monomial (the last in storage order)."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self._terms[-1]

    def sort_key(self):
        """Total-order key on polynomials (canonical polynomial order)."""
        return tuple((_mono_key(em), c) for em, c in reversed(self._terms))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "DiffPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return DiffPoly(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly(tuple((em, -c) for em, c in self._terms))

    def __sub__(self, other) -> "DiffPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "DiffPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "DiffPoly":
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return _ZERO
            return DiffPoly(tuple((em, k * c) for em, k in self._terms))
        if not isinstance(other, DiffPoly):
            return NotImplemented
        out: list[tuple[ExpMap, Fraction]] = []
        for em1, c1 in self._terms:
            for em2, c2 in other._terms:
                out.append((_em_mul(em1, em2), c1 * c2))
        return DiffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "DiffPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DiffPoly.const(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        from .grammar import render
        return f"DiffPoly({render(self)!r})"


def _coerce(x) -> "DiffPoly":
    if isinstance(x, DiffPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return DiffPoly.const(x)
    return NotImplemented


def _em_mul(a: ExpMap, b: ExpMap) -> ExpMap:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for ind, e in b:
        d[ind] = d.get(ind, 0) + e
    return tuple(sorted(d.items()))


_ZERO = DiffPoly.__new__(DiffPoly)
_ZERO._terms = ()
_ZERO._hash = hash(())
_ONE = DiffPoly((((), Fraction(1)),))


# -- public operations -----------------------------------------------------

def add(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    return a + b


def mul(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    return a * b


def neg(a: DiffPoly) -> DiffPoly:
    return -a


def scale(a: DiffPoly, c: Scalar) -> DiffPoly:
    return a * _as_fraction(c)


def delta(a: DiffPoly) -> DiffPoly:
    """Formal derivation: additive, Leibniz on products, kills rationals."""
    out: list[tuple[ExpMap, Fraction]] = []
    for em, c in a.terms:
        for idx, ((fam, var, der), e) in enumerate(em):
            # differentiate this factor, keep the rest
            bumped = ((fam, var, der + 1), 1)
            rest = list(em)
            if e == 1:
                del rest[idx]
            else:
                rest[idx] = ((fam, var, der), e - 1)
            d = dict(rest)
            d[bumped[0]] = d.get(bumped[0], 0) + 1
            out.append((tuple(sorted(d.items())), c * e))
    return DiffPoly(out)


def delta_k(a: DiffPoly, k: int) -> DiffPoly:
    for _ in range(k):
        a = delta(a)
    return a


def order_in(a: DiffPoly, var: int, family: str = "Y"):
    """Greatest derivative order of the variable occurring in ``a``.

    Returns -1 when a nonzero ``a`` does not involve the variable, and
    ``ORDER_INFINITE`` for the zero polynomial.
    """
    if a.is_zero():
        return ORDER_INFINITE
    best = -1
    for em, _ in a.terms:
        for (fam, v, der), _e in em:
            if fam == family and v == var and der > best:
                best = der
    return best


def degree_in_leader(a: DiffPoly, var: int, family: str = "Y") -> int:
    r = order_in(a, var, family)
    if r is ORDER_INFINITE or r < 0:
        raise NoLeaderError(f"polynomial does not involve {family}{var}")
    ind = (family, var, r)
    return max(e for em, _ in a.terms for i, e in em if i == ind)


def rank_in(a: DiffPoly, var: int, family: str = "Y") -> Rank:
    if a.is_zero():
        return RANK_INFINITE
    r = order_in(a, var, family)
    if r == -1:
        return Rank(-1, 1)
    return Rank(r, degree_in_leader(a, var, family))


def leader(a: DiffPoly, var: int, family: str = "Y") -> Indet:
    r = order_in(a, var, family)
    if r is ORDER_INFINITE or r < 0:
        raise NoLeaderError(f"polynomial does not involve {family}{var}")
    return (family, var, r)


def coeffs_in(a: DiffPoly, ind: Indet) -> dict[int, DiffPoly]:
    """View ``a`` as univariate in the indeterminate; degree -> coefficient."""
    buckets: dict[int, list] = {}
    for em, c in a.terms:
        e = 0
        rest = []
        for i, k in em:
            if i == ind:
                e = k
            else:
                rest.append((i, k))
        buckets.setdefault(e, []).append((tuple(rest), c))
    return {e: DiffPoly(ts) for e, ts in buckets.items()}


def initial(a: DiffPoly, var: int, family: str = "Y") -> DiffPoly:
    """Coefficient of the leading power of the leader."""
    u = leader(a, var, family)
    d = degree_in_leader(a, var, family)
    return coeffs_in(a, u)[d]


def partial(a: DiffPoly, ind: Indet) -> DiffPoly:
    """Formal partial derivative with respect to a single indeterminate."""
    out = []
    for em, c in a.terms:
        for idx, (i, e) in enumerate(em):
            if i != ind:
                continue
            rest = list(em)
            if e == 1:
                del rest[idx]
            else:
                rest[idx] = (i, e - 1)
            out.append((tuple(rest), c * e))
    return DiffPoly(out)


def separant(a: DiffPoly, var: int, family: str = "Y") -> DiffPoly:
    return partial(a, leader(a, var, family))


def eval_subst(a: DiffPoly, assignment: Mapping) -> DiffPoly:
    """Substitute polynomials (or scalars) for variables, exactly.

    Keys are variable indices (family ``Y``) or ``(family, index)`` pairs.
    Derivatives of assigned values are obtained through ``delta``, so the
    substitution is a differential-ring homomorphism. Every variable that
    occurs in ``a`` must be assigned.
    """
    table: dict[tuple[str, int], DiffPoly] = {}
    for key, val in assignment.items():
        fam, var = key if isinstance(key, tuple) else ("Y", key)
        table[(fam, var)] = _coerce_value(val)
    deriv_cache: dict[Indet, DiffPoly] = {}

    def value_of(ind: Indet) -> DiffPoly:
        fam, var, der = ind
        if (fam, var) not in table:
            raise MissingAssignmentError(f"no assignment for {fam}{var}")
        got = deriv_cache.get(ind)
        if got is None:
            if der == 0:
                got = table[(fam, var)]
            else:
                got = delta(value_of((fam, var, der - 1)))
            deriv_cache[ind] = got
        return got

    total = DiffPoly.zero()
    for em, c in a.terms:
        acc = DiffPoly.const(c)
        for ind, e in em:
            acc = acc * (value_of(ind) ** e)
        total = total + acc
    return total


def _coerce_value(v) -> DiffPoly:
    got = _coerce(v)
    if got is NotImplemented:
        raise TypeError(f"cannot substitute {v!r}")
    return got


def max_var(a: DiffPoly, family: str) -> int:
    """Largest variable index of the family occurring, or -1."""
    best = -1
    for fam, var in a.variables():
        if fam == family and var > best:
            best = var
    return best


def relabel(a: DiffPoly, mapping: Mapping[tuple[str, int], tuple[str, int]]) -> DiffPoly:
    """Rename variables (family, index) -> (family, index), keeping derivatives."""
    out = []
    for em, c in a.terms:
        d: dict[Indet, int] = {}
        for (fam, var, der), e in em:
            nf, nv = mapping.get((fam, var), (fam, var))
            ind = (nf, nv, der)
            d[ind] = d.get(ind, 0) + e
        out.append((tuple(sorted(d.items())), c))
    return DiffPoly(out)
