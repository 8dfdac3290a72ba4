"""Ritt pairwise reduction and apparent minimal differential polynomials.

Three layers:

* ``partial_reduce`` — classical partial (pseudo-)remainder of one
  differential polynomial against another and its formal derivatives, with a
  verifiable audit trail,
* ``reduce_pair`` / ``closure_min`` — the pairwise least-rank-consequence
  operation and its fixpoint closure over a single variable,
* ``minimal_apparent`` — the tower recursion computing, for a finite
  constraint set in variables T0..Tr, the least-rank polynomial the set
  forces the target variable to satisfy (zero when the set is consistent
  with the target being differentially transcendental).

Membership testing against a chain is partial reduction: remainder zero
means member, nonzero means treated as non-member. This is sound but
incomplete in general (the classical caveat about vanishing initials and
separants of reducible chain elements); traces carry a flag whenever an
uncertified irreducibility assumption is consumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .caps import CAPS
from .diffpoly import (
    DiffPoly,
    Rank,
    coeffs_in,
    degree_in_leader,
    delta_k,
    initial,
    leader,
    max_var,
    order_in,
    rank_in,
)
from .errors import (
    CapExceededError,
    DcfwbError,
    InconsistentConstraintsError,
    NoLeaderError,
    TowerLimitationError,
)


# -- normalization helpers ---------------------------------------------------

def content_normalize(p: DiffPoly) -> DiffPoly:
    """Divide out the rational content; leading coefficient made positive."""
    if p.is_zero():
        return p
    num_gcd = 0
    den_lcm = 1
    for _, c in p.terms:
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    if p.leading_monomial()[1] < 0:
        content = -content
    return p * (1 / content)


def normalize_leading(p: DiffPoly) -> DiffPoly:
    """Scale so the canonically-largest monomial has coefficient 1.

    Coincides with "monic in the leader" whenever the initial is rational.
    """
    if p.is_zero():
        return p
    return p * (1 / p.leading_monomial()[1])


# -- reduction traces --------------------------------------------------------

@dataclass(frozen=True)
class ReductionStep:
    """One pseudo-division pass: multiplier * before == quotient * divisor + after."""

    before: DiffPoly
    divisor: DiffPoly
    deriv_order: int          # divisor == delta^k(h) for the premise h
    multiplier: DiffPoly
    quotient: DiffPoly
    after: DiffPoly

    def holds(self) -> bool:
        return self.multiplier * self.before == self.quotient * self.divisor + self.after


@dataclass
class ReductionTrace:
    premise_g: DiffPoly
    premise_h: DiffPoly
    var: int
    family: str
    steps: list[ReductionStep] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def verify(self) -> bool:
        """Expand every step identity and check the steps chain together."""
        prev = self.premise_g
        for st in self.steps:
            if st.before != prev or not st.holds():
                return False
            prev = st.after
        return True

    @property
    def remainder(self) -> DiffPoly:
        return self.steps[-1].after if self.steps else self.premise_g


def _pseudo_divide(g: DiffPoly, h: DiffPoly, ind) -> tuple[DiffPoly, DiffPoly, DiffPoly]:
    """Pseudo-division by ``h`` viewed as univariate in the indeterminate.

    Returns (multiplier, quotient, remainder) with
    multiplier * g == quotient * h + remainder and deg_ind(remainder) < deg_ind(h).
    """
    hc = coeffs_in(h, ind)
    d = max(hc)
    if d == 0:
        raise NoLeaderError("divisor does not involve the indeterminate")
    lead = hc[d]
    mult = DiffPoly.one()
    quot = DiffPoly.zero()
    rem = g
    while not rem.is_zero():
        rc = coeffs_in(rem, ind)
        k = max(rc)
        if k < d:
            break
        c = rc[k]
        # monomial ind^(k-d)
        em = ((ind, k - d),) if k > d else ()
        ind_pow = DiffPoly(((em, Fraction(1)),))
        rem = lead * rem - c * ind_pow * h
        quot = lead * quot + c * ind_pow
        mult = mult * lead
    return mult, quot, rem


def partial_reduce(g: DiffPoly, h: DiffPoly, var: int, family: str = "Y") -> tuple[DiffPoly, ReductionTrace]:
    """Ritt partial remainder of ``g`` with respect to ``h`` in one variable.

    Eliminates all occurrences of the leader of ``h`` and of its derivatives
    from ``g`` by pseudo-division against ``h`` and delta^k(h), premultiplying
    by initials and separants. The remainder has strictly smaller rank in the
    variable than ``h`` (or is zero), and the trace identities expand exactly.
    """
    if h.is_zero():
        raise NoLeaderError("cannot reduce against the zero polynomial")
    e = order_in(h, var, family)
    if e < 0:
        raise NoLeaderError(f"divisor does not involve {family}{var}")
    hd = degree_in_leader(h, var, family)
    trace = ReductionTrace(premise_g=g, premise_h=h, var=var, family=family)
    rem = g
    budget = CAPS.closure_budget
    while not rem.is_zero():
        r = order_in(rem, var, family)
        if r is math.inf or r < e:
            break
        if r == e and degree_in_leader(rem, var, family) < hd:
            break
        budget -= 1
        if budget < 0:
            raise CapExceededError("partial reduction exceeded its step budget")
        k = r - e
        divisor = delta_k(h, k) if k else h
        ind = (family, var, r)
        mult, quot, new_rem = _pseudo_divide(rem, divisor, ind)
        trace.steps.append(ReductionStep(rem, divisor, k, mult, quot, new_rem))
        rem = new_rem
    return rem, trace


# -- pairwise least-rank consequence ----------------------------------------

_BACKJUMP = "backjump"


def _descend(g: DiffPoly, h: DiffPoly, var: int, family: str, normal_form=None):
    """Euclid-style descent; returns ('ok', f) | ('unit', 1) | ('backjump', p)."""
    def norm(p: DiffPoly) -> DiffPoly:
        p = normal_form(p) if normal_form else p
        return content_normalize(p)

    g, h = norm(g), norm(h)
    budget = CAPS.closure_budget
    while True:
        if g.is_zero():
            return ("ok", normalize_leading(h)) if not h.is_zero() else ("ok", DiffPoly.zero())
        if h.is_zero():
            return ("ok", normalize_leading(g))
        for p in (g, h):
            if p.is_constant():
                return ("unit", DiffPoly.one())
            if order_in(p, var, family) < 0:
                # nonzero, free of the target variable: over the coefficient
                # field this is a unit; under a tower it is a new relation on
                # lower variables for the caller to fold in.
                return (_BACKJUMP, p) if normal_form else ("unit", DiffPoly.one())
        if rank_in(g, var, family) < rank_in(h, var, family):
            g, h = h, g
        rem, _ = partial_reduce(g, h, var, family)
        rem = norm(rem)
        if rem.is_zero():
            return ("ok", normalize_leading(h))
        g, h = h, rem
        budget -= 1
        if budget < 0:
            raise CapExceededError("pairwise reduction exceeded its step budget")


def reduce_pair(g: DiffPoly, h: DiffPoly, var: int, family: str = "Y") -> DiffPoly:
    """Least-rank polynomial forced to vanish by ``g = h = 0`` in the variable.

    Returns the constant 1 when the pair is inconsistent over the coefficient
    field, or the (normalized) lower-rank input when no strictly smaller
    consequence exists.
    """
    status, f = _descend(g, h, var, family)
    return f


def closure_min(V, var: int, family: str = "Y") -> DiffPoly:
    """Least-rank element of the closure of V under the pairwise operation.

    Ignores elements not involving the variable; returns zero when none does
    (the differentially transcendental case), and 1 on an inconsistent set.
    """
    got = _closure_min(V, var, family, normal_form=None)
    if got[0] == "unit":
        return DiffPoly.one()
    return got[1]


def _closure_min(V, var: int, family: str, normal_form=None, flags=None):
    S: list[DiffPoly] = []
    seen = set()
    for v in V:
        if v.is_zero() or order_in(v, var, family) < 0:
            continue
        v = normal_form(v) if normal_form else v
        if v.is_zero():
            continue
        v = normalize_leading(v)
        if v.is_constant():
            return ("unit", DiffPoly.one())
        if order_in(v, var, family) < 0:
            return (_BACKJUMP, v)
        if v not in seen:
            seen.add(v)
            S.append(v)
    if not S:
        return ("ok", DiffPoly.zero())
    budget = CAPS.closure_budget
    fresh = list(S)
    while fresh:
        nxt: list[DiffPoly] = []
        for a in list(S):
            for b in fresh:
                if a is b:
                    continue
                budget -= 1
                if budget < 0:
                    raise CapExceededError("pairwise closure exceeded its step budget")
                status, f = _descend(a, b, var, family, normal_form)
                if status == "unit":
                    return ("unit", DiffPoly.one())
                if status == _BACKJUMP:
                    return (_BACKJUMP, f)
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        S.extend(nxt)
        fresh = nxt
    best = min(S, key=lambda p: (rank_in(p, var, family), p.sort_key()))
    if flags is not None and degree_in_leader(best, var, family) > 1 and len(S) > 1:
        flags.append(f"closure over {family}{var} consumed an irreducibility assumption")
    return ("ok", normalize_leading(best))


# -- tower fields ------------------------------------------------------------

class TowerField:
    """A triangular chain of extensions: level j carries the minimal
    polynomial of generator t_j over the previous levels (zero for a
    differential transcendental). Elements are handled as polynomials in the
    generators reduced to normal form against the chain; equality is
    reduction of the difference to zero."""

    def __init__(self, levels: list[DiffPoly] | None = None, family: str = "T",
                 certified: list[bool] | None = None):
        self.family = family
        self.levels: list[DiffPoly] = list(levels or [])
        self.certified: list[bool] = list(certified or [])
        while len(self.certified) < len(self.levels):
            self.certified.append(False)
        for j, f in enumerate(self.levels):
            if not f.is_zero() and order_in(f, j, family) < 0:
                raise DcfwbError(f"level {j} minimal polynomial does not involve {family}{j}")

    def extended(self, f: DiffPoly, certified: bool = False) -> "TowerField":
        return TowerField(self.levels + [f], self.family, self.certified + [certified])

    def normal_form(self, p: DiffPoly) -> DiffPoly:
        for k in range(len(self.levels) - 1, -1, -1):
            fk = self.levels[k]
            if fk.is_zero() or p.is_zero():
                continue
            if order_in(p, k, self.family) < 0:
                continue
            p, _ = partial_reduce(p, fk, k, self.family)
        return p

    def is_zero(self, p: DiffPoly) -> bool:
        return self.normal_form(p).is_zero()

    def equal(self, p: DiffPoly, q: DiffPoly) -> bool:
        return self.is_zero(p - q)

    def __len__(self):
        return len(self.levels)


def _certify_irreducible_over_Q(f: DiffPoly) -> bool | None:
    """sympy-backed irreducibility over the rationals, for polynomials whose
    coefficients are rational (any set of indeterminates, viewed algebraically).
    Returns None when outside that fragment."""
    from .sympybridge import is_irreducible_over_Q
    try:
        return is_irreducible_over_Q(f)
    except DcfwbError:
        return None


@dataclass
class ChainResult:
    levels: list[DiffPoly]
    flags: list[str]
    restarts: int
    added_relations: list[DiffPoly]

    def tower(self, family: str = "T") -> TowerField:
        return TowerField(self.levels, family)


def apparent_chain(V, upto: int, family: str = "T") -> ChainResult:
    """Chains of least-rank forced polynomials for levels 0..upto.

    Implements the level recursion: close the level-j images of V under the
    pairwise operation over the tower built so far, extend the tower by the
    result, and continue. A nonzero relation surfacing on variables below the
    current level joins V and restarts the loop (strictly descending in rank,
    so this terminates; budgeted regardless).
    """
    base = [p for p in V if not p.is_zero()]
    for p in base:
        if p.is_constant():
            raise InconsistentConstraintsError("a nonzero constant was asserted to vanish")
    flags: list[str] = []
    added: list[DiffPoly] = []
    restarts = 0
    while True:
        tower = TowerField([], family)
        restart_with: DiffPoly | None = None
        for j in range(upto + 1):
            images = []
            for p in base:
                q = content_normalize(tower.normal_form(p))
                if q.is_zero():
                    continue
                if q.is_constant():
                    raise InconsistentConstraintsError(
                        "constraints force a nonzero constant to vanish")
                images.append(q)
            low = [q for q in images if max_var(q, family) < j]
            if low:
                restart_with = normalize_leading(
                    min(low, key=lambda p: (max_var(p, family),
                                            rank_in(p, max_var(p, family), family), p.sort_key())))
                break
            level = [q for q in images if max_var(q, family) == j]
            status, fj = _closure_min(level, j, family, normal_form=tower.normal_form, flags=flags)
            if status == "unit":
                raise InconsistentConstraintsError(
                    f"constraints on {family}{j} reduce to the unit")
            if status == _BACKJUMP:
                restart_with = normalize_leading(fj)
                break
            certified = False
            if not fj.is_zero():
                if order_in(fj, j, family) == 0 and fj.variables() <= {(family, j)}:
                    verdict = _certify_irreducible_over_Q(fj)
                    if verdict is False and j < upto:
                        raise TowerLimitationError(
                            f"level {j} polynomial is reducible over the rationals; "
                            "the tower extension is not certifiable")
                    certified = bool(verdict)
                elif j < upto:
                    flags.append(f"irreducibility assumed at level {j}")
            tower = tower.extended(fj, certified)
        if restart_with is None:
            return ChainResult(tower.levels, flags, restarts, added)
        if any(restart_with == normalize_leading(content_normalize(p)) for p in base):
            raise TowerLimitationError(
                "chain refinement did not progress (unsupported input shape)")
        base.append(restart_with)
        added.append(restart_with)
        restarts += 1
        if restarts > CAPS.restart_budget:
            raise TowerLimitationError("chain refinement exceeded its restart budget")


def minimal_apparent(V, m: int, family: str = "T") -> DiffPoly:
    """The least-rank polynomial in T0..Tm forced on the target variable by
    the (consistent) conjunction of the constraints; zero iff the set is
    consistent with the target being differentially transcendental."""
    return apparent_chain(V, m, family).levels[m]
