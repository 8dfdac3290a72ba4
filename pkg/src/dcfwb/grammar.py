"""Text grammar for differential polynomials: parser and deterministic printer.

    poly   := term (('+'|'-') term)* ;
    term   := coef ('*' atom)* | atom ('*' atom)* ;
    coef   := integer ('/' positive-integer)? ;
    atom   := family nat deriv? pow? ;
    deriv  := "'"+  |  '^(' nat ')' ;
    pow    := '^' nat ;

Families are ``Y``, ``T`` and ``X`` (disjoint namespaces). Whitespace is
ignored everywhere. One optional leading sign is accepted before the first
term. ``parse(render(p)) == p`` for every canonical polynomial.
"""

from __future__ import annotations

from fractions import Fraction

from .caps import CAPS
from .diffpoly import DiffPoly, ExpMap, FAMILIES
from .errors import CapExceededError, PolyParseError


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        if ch:
            self.pos += 1
        return ch

    def expect(self, ch: str):
        got = self.take()
        if got != ch:
            raise PolyParseError(f"expected {ch!r}, found {got or 'end of input'!r}", self.pos)

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise PolyParseError("expected a number", start)
        return int(self.text[start:self.pos])

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def parse(text: str) -> DiffPoly:
    """Parse polynomial text; raises PolyParseError with a position on bad input."""
    sc = _Scanner(text)
    if sc.at_end():
        raise PolyParseError("empty input", 0)
    total = DiffPoly.zero()
    sign = 1
    ch = sc.peek()
    if ch in "+-":
        sc.take()
        sign = -1 if ch == "-" else 1
    while True:
        total = total + _term(sc) * sign
        if sc.at_end():
            return total
        ch = sc.take()
        if ch == "+":
            sign = 1
        elif ch == "-":
            sign = -1
        else:
            raise PolyParseError(f"expected '+' or '-', found {ch!r}", sc.pos)


def _term(sc: _Scanner) -> DiffPoly:
    ch = sc.peek()
    if ch.isdigit():
        coeff = _coef(sc)
        factors = []
        while sc.peek() == "*":
            sc.take()
            factors.append(_atom(sc))
        return _build(coeff, factors)
    if ch in FAMILIES:
        factors = [_atom(sc)]
        while sc.peek() == "*":
            sc.take()
            factors.append(_atom(sc))
        return _build(Fraction(1), factors)
    raise PolyParseError(f"expected a coefficient or a variable, found {ch or 'end of input'!r}", sc.pos)


def _coef(sc: _Scanner) -> Fraction:
    num = sc.nat()
    if sc.peek() == "/":
        sc.take()
        den = sc.nat()
        if den == 0:
            raise PolyParseError("zero denominator", sc.pos)
        return Fraction(num, den)
    return Fraction(num)


def _atom(sc: _Scanner):
    ch = sc.take()
    if ch not in FAMILIES:
        raise PolyParseError(f"expected a variable family ({'/'.join(FAMILIES)}), found {ch or 'end of input'!r}", sc.pos)
    var = sc.nat()
    deriv = 0
    if sc.peek() == "'":
        while sc.peek() == "'":
            sc.take()
            deriv += 1
    elif sc.peek() == "^":
        save = sc.pos
        sc.take()
        if sc.peek() == "(":
            sc.take()
            deriv = sc.nat()
            sc.expect(")")
        else:
            sc.pos = save  # plain power, handled below
    power = 1
    if sc.peek() == "^":
        sc.take()
        if sc.peek() == "(":
            raise PolyParseError("derivative marker after power is not allowed", sc.pos)
        power = sc.nat()
    if deriv > CAPS.max_deriv:
        raise CapExceededError(f"derivative order {deriv} exceeds cap {CAPS.max_deriv}")
    if power > CAPS.max_degree:
        raise CapExceededError(f"exponent {power} exceeds cap {CAPS.max_degree}")
    return (ch, var, deriv), power


def _build(coeff: Fraction, factors) -> DiffPoly:
    exps: dict = {}
    for ind, e in factors:
        if e == 0:
            continue
        exps[ind] = exps.get(ind, 0) + e
    em: ExpMap = tuple(sorted(exps.items()))
    return DiffPoly(((em, coeff),))


def _render_indet(ind, e: int) -> str:
    fam, var, der = ind
    if der == 0:
        mark = ""
    elif der <= 3:
        mark = "'" * der
    else:
        mark = f"^({der})"
    body = f"{fam}{var}{mark}"
    return body if e == 1 else f"{body}^{e}"


def render(p: DiffPoly) -> str:
    """Deterministic text form; highest-rank terms first."""
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for em, c in reversed(p.terms):
        neg = c < 0
        c = -c if neg else c
        factors = [_render_indet(ind, e) for ind, e in em]
        if c != 1 or not factors:
            factors.insert(0, str(c))
        body = "*".join(factors)
        if not chunks:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)
