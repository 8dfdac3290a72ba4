"""Desk-scale computability lab: truth-table functionals over finite oracles,
the forcing construction of a set D whose Turing degree avoids the cone above
B while the join of the halting set with D computes the target jump bits, and
the first-jump-equivalence closure check on finite labeled degree posets.

Bit strings are finite; the characteristic function they induce is 0 beyond
their length."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .caps import CAPS
from .errors import DcfwbError, HorizonError

Bits = str  # e.g. "0101"


def _check_bits(s: str, what: str) -> str:
    if any(ch not in "01" for ch in s):
        raise DcfwbError(f"{what} must be a 0/1 string, got {s!r}")
    return s


def chi(bits: Bits, x: int) -> int:
    return int(bits[x]) if 0 <= x < len(bits) else 0


@dataclass(frozen=True)
class TTFunctional:
    """Truth-table machine: output depends on the oracle prefix of length
    ``use_bound`` only. ``table`` maps (prefix, input) to an output bit;
    ``time_cost`` gives the halt time of an entry (default 1), so that
    convergence is monotone in the time bound."""

    use_bound: int
    table: tuple[tuple[tuple[str, int], int], ...]
    time_cost: tuple[tuple[tuple[str, int], int], ...] = ()

    @classmethod
    def make(cls, use_bound: int, table: dict, time_cost: dict | None = None) -> "TTFunctional":
        for (prefix, x), out in table.items():
            _check_bits(prefix, "oracle prefix")
            if len(prefix) != use_bound:
                raise DcfwbError(f"table prefix {prefix!r} must have length {use_bound}")
            if out not in (0, 1):
                raise DcfwbError("outputs are bits")
            if x < 0:
                raise DcfwbError("inputs are naturals")
        tc = dict(time_cost or {})
        for key, t in tc.items():
            if key not in table:
                raise DcfwbError("time_cost entry without a table entry")
            if t < 1:
                raise DcfwbError("halt times start at 1")
        return cls(use_bound, tuple(sorted(table.items())),
                   tuple(sorted(tc.items())))

    def converges(self, sigma: Bits, x: int, t: int | None = None):
        """Output bit if the computation halts on oracle prefix sigma within
        time t, else None. Needs the full use: |sigma| >= use_bound."""
        if len(sigma) < self.use_bound:
            return None
        key = (sigma[: self.use_bound], x)
        table = dict(self.table)
        if key not in table:
            return None
        if t is not None and dict(self.time_cost).get(key, 1) > t:
            return None
        return table[key]

    def to_json(self) -> dict:
        return {"use": self.use_bound,
                "table": [[p, x, out] for (p, x), out in self.table],
                "time": [[p, x, t] for (p, x), t in self.time_cost]}

    @classmethod
    def from_json(cls, data: dict) -> "TTFunctional":
        return cls.make(int(data["use"]),
                        {(p, x): out for p, x, out in data["table"]},
                        {(p, x): t for p, x, t in data.get("time", [])})


@dataclass
class GammaStep:
    """Annotation for one pair of construction steps around index e."""

    e: int
    appended_bit: int                       # the target jump bit recorded at the odd step
    split: tuple[str, str, int, int] | None  # least (sigma, tau, x, t) or None
    chose_sigma: bool | None                # which branch the even step took
    segment: str                            # gamma after the even step


@dataclass
class GammaTrace:
    B: Bits
    Cjump: Bits
    functionals: list[TTFunctional]
    steps: list[GammaStep] = field(default_factory=list)

    @property
    def final_segment(self) -> Bits:
        return self.steps[-1].segment if self.steps else ""

    def segment_before(self, e: int) -> Bits:
        """gamma_{2e}: the segment entering step pair e."""
        return self.steps[e - 1].segment if e else ""


def _find_split(func: TTFunctional, gamma: Bits):
    """Least 4-tuple (sigma, tau, x, t) extending gamma on which the
    functional converges to different outputs; honest about the horizon.

    The least tuple in the fixed enumeration (sorted by |sigma|+|tau|+x+t,
    then by sigma, tau, x, t) never pads prefixes beyond the use bound or
    waits longer than the halt times: any padded or slowed variant has a
    strictly larger sum with the same computation available unpadded. So the
    search ranges over the finite table only."""
    if func.use_bound <= len(gamma):
        return None  # both prefixes would share the decisive use; no split possible
    limit_len, limit_x, limit_t = CAPS.max_prefix, CAPS.max_input, CAPS.max_time
    table = dict(func.table)
    times = dict(func.time_cost)
    candidates = []
    beyond_caps = False
    for (p1, x), out1 in table.items():
        if not p1.startswith(gamma):
            continue
        for (p2, x2), out2 in table.items():
            if x2 != x or out1 == out2 or not p2.startswith(gamma):
                continue
            t = max(times.get((p1, x), 1), times.get((p2, x), 1))
            if len(p1) > limit_len or len(p2) > limit_len or x > limit_x or t > limit_t:
                beyond_caps = True
                continue
            candidates.append((len(p1) + len(p2) + x + t, p1, p2, x, t))
    if candidates:
        _total, sigma, tau, x, t = min(candidates)
        return (sigma, tau, x, t)
    if beyond_caps:
        raise HorizonError(
            f"a splitting pair exists beyond the search caps "
            f"(|prefix|<={limit_len}, x<={limit_x}, t<={limit_t})")
    return None


def build_gamma(B: Bits, Cjump: Bits, functionals: list[TTFunctional], E: int) -> GammaTrace:
    """Stage-by-stage construction of initial segments of D.

    Odd steps append the next target jump bit; even steps take the least
    splitting 4-tuple for the current functional (if any) and pick the branch
    whose output disagrees with B at the witness input."""
    _check_bits(B, "B")
    _check_bits(Cjump, "Cjump")
    if not B:
        raise DcfwbError("B must be nonempty")
    if len(Cjump) < E:
        raise DcfwbError(f"Cjump supplies {len(Cjump)} bits, need {E}")
    if len(functionals) < E:
        raise DcfwbError(f"need {E} functionals, got {len(functionals)}")
    trace = GammaTrace(B=B, Cjump=Cjump, functionals=list(functionals[:E]))
    gamma = ""
    for e in range(E):
        bit = chi(Cjump, e)
        gamma_odd = gamma + str(bit)
        split = _find_split(functionals[e], gamma_odd)
        chose_sigma = None
        if split is None:
            gamma = gamma_odd
        else:
            sigma, tau, x, t = split
            if sigma.startswith(tau) or tau.startswith(sigma):
                raise DcfwbError("split prefixes must be incompatible")
            out_tau = functionals[e].converges(tau, x, t)
            chose_sigma = out_tau == chi(B, x)
            gamma = sigma if chose_sigma else tau
        trace.steps.append(GammaStep(e, bit, split, chose_sigma, gamma))
    return trace


def diagonalization_holds(trace: GammaTrace, D: Bits) -> bool:
    """Whenever a split was taken, the chosen branch's output disagrees with B."""
    for st in trace.steps:
        if st.split is None:
            continue
        sigma, tau, x, t = st.split
        branch = sigma if st.chose_sigma else tau
        if not D.startswith(branch):
            return False
        out = trace.functionals[st.e].converges(branch, x, t)
        if out is None or out == chi(trace.B, x):
            return False
    return True


def recover_jump_bit(trace: GammaTrace, D: Bits, e: int) -> int:
    """Re-derive the e-th target jump bit from D plus the per-step
    "did a split exist" answers, re-running the least-tuple search and
    resolving each split by compatibility with D."""
    if e >= len(trace.steps):
        raise DcfwbError(f"trace has {len(trace.steps)} steps, asked for index {e}")
    if not D.startswith(trace.final_segment):
        raise DcfwbError("D does not extend the constructed segments")
    length = 0  # |gamma_{2k}| as we walk k = 0..e
    for k in range(e):
        odd_len = length + 1
        if trace.steps[k].split is None:
            length = odd_len
        else:
            gamma_odd = D[:odd_len]
            found = _find_split(trace.functionals[k], gamma_odd)
            if found is None:
                raise DcfwbError("trace claims a split that the search cannot reproduce")
            sigma, tau, _x, _t = found
            if _compatible(sigma, D) == _compatible(tau, D):
                raise DcfwbError("exactly one split branch must be compatible with D")
            length = len(sigma) if _compatible(sigma, D) else len(tau)
    return chi(D, length)


def _compatible(prefix: Bits, D: Bits) -> bool:
    return D.startswith(prefix) or prefix.startswith(D)


# -- first-jump equivalence ---------------------------------------------------

def check_sim1_closure(members, jump: dict) -> bool:
    """Does the member set respect first-jump equivalence on a finite labeled
    degree family? Labels with equal jumps must be both in or both out."""
    members = set(members)
    labels = list(jump)
    for c in labels:
        for d in labels:
            if jump[c] == jump[d] and ((c in members) != (d in members)):
                return False
    return True
