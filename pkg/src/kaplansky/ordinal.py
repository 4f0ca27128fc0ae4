"""Ordinals below epsilon_0 in Cantor normal form, plus the symbol ``INF``.

An ordinal is a tuple of ``(exponent, coefficient)`` terms with strictly
decreasing exponents (themselves ordinals) and positive integer
coefficients.  The empty tuple is 0.
"""

from __future__ import annotations

import re
from enum import Enum
from functools import total_ordering


class OrdinalError(ValueError):
    pass


@total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms=()):
        terms = tuple(terms)
        for i, (e, c) in enumerate(terms):
            if not isinstance(e, Ordinal) or not isinstance(c, int) or c < 1:
                raise OrdinalError(f"bad CNF term ({e!r}, {c!r})")
            if i and not e < terms[i - 1][0]:
                raise OrdinalError("CNF exponents must strictly decrease")
        self.terms = terms
        self._hash = hash(terms)

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalError("negative ordinal")
        return ZERO if n == 0 else cls(((ZERO, n),))

    @classmethod
    def omega_power(cls, e: "Ordinal | int", c: int = 1) -> "Ordinal":
        return cls(((coerce(e), c),))

    # structure

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def __int__(self):
        if not self.is_finite():
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __index__(self):
        return int(self)

    # order

    def _cmp(self, other: "Ordinal") -> int:
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return -1 if e1 < e2 else 1
            if c1 != c2:
                return -1 if c1 < c2 else 1
        return (len(self.terms) > len(other.terms)) - (len(self.terms) < len(other.terms))

    def __eq__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other) if other >= 0 else None
        if isinstance(other, Ordinal):
            return self.terms == other.terms
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        if isinstance(other, _Infinity):
            return True
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        return self._hash

    # arithmetic

    def __add__(self, other):
        other = coerce(other)
        if not other.terms:
            return self
        lead_e, lead_c = other.terms[0]
        kept = []
        for e, c in self.terms:
            if e > lead_e:
                kept.append((e, c))
            elif e == lead_e:
                lead_c += c
                break
            else:
                break
        return Ordinal(tuple(kept) + ((lead_e, lead_c),) + other.terms[1:])

    def __radd__(self, other):
        return coerce(other) + self

    def succ(self) -> "Ordinal":
        return self + ONE

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)


ZERO = Ordinal(())
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def coerce(a) -> Ordinal:
    if isinstance(a, Ordinal):
        return a
    if isinstance(a, int):
        return Ordinal.of(a)
    if isinstance(a, str):
        return parse_ordinal(a)
    raise OrdinalError(f"cannot interpret {a!r} as an ordinal")


class _Infinity:
    """The symbol that sits above every ordinal."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("inf")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = _Infinity()


class Cmp(Enum):
    LT = -1
    EQ = 0
    GT = 1


def ord_compare(a, b) -> Cmp:
    a, b = coerce(a), coerce(b)
    return Cmp(a._cmp(b))


def ord_add(a, b) -> Ordinal:
    return coerce(a) + coerce(b)


def ord_succ(a) -> Ordinal:
    return coerce(a).succ()


class Kind(Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


def classify(a) -> tuple[Kind, Ordinal | None]:
    """``(Kind.SUCCESSOR, predecessor)``, ``(Kind.LIMIT, None)`` or ``(Kind.ZERO, None)``."""
    a = coerce(a)
    if not a.terms:
        return Kind.ZERO, None
    e, c = a.terms[-1]
    if not e.is_zero():
        return Kind.LIMIT, None
    head = a.terms[:-1]
    return Kind.SUCCESSOR, Ordinal(head + (((ZERO, c - 1),) if c > 1 else ()))


def is_limit(a) -> bool:
    return classify(a)[0] is Kind.LIMIT


def limit_split(a) -> tuple[Ordinal, int]:
    """Write an infinite ordinal as (limit part, finite tail)."""
    a = coerce(a)
    if a.is_finite():
        raise OrdinalError(f"{a} is finite and has no limit part")
    e, c = a.terms[-1]
    if e.is_zero():
        return Ordinal(a.terms[:-1]), c
    return a, 0


def finite_tail(a) -> int:
    a = coerce(a)
    if a.is_finite():
        return int(a)
    return limit_split(a)[1]


def fundamental_sequence(delta, m: int) -> Ordinal:
    """The m-th element of the canonical cofinal sequence of a limit ordinal.

    Rules, with gamma the part before the last term:
      (gamma + w^(e+1))[m] = gamma + w^e * m
      (gamma + w^lam)[m]   = gamma + w^(lam[m])       for limit lam
      (gamma + w^e * (c+1))[m] = gamma + w^e * c + (w^e)[m]
    """
    delta = coerce(delta)
    if not is_limit(delta):
        raise OrdinalError(f"{delta} is not a limit ordinal")
    if m < 0:
        raise OrdinalError("sequence index must be non-negative")
    head = delta.terms[:-1]
    e, c = delta.terms[-1]
    if c > 1:
        head = head + ((e, c - 1),)
    prefix = Ordinal(head)
    kind, pred = classify(e)
    if kind is Kind.SUCCESSOR:
        tail = Ordinal(((pred, m),)) if m else ZERO
    else:
        tail = Ordinal(((fundamental_sequence(e, m), 1),))
    return prefix + tail


# ---------------------------------------------------------------------------
# Text syntax: 0, 7, w, w*2+3, w^w+1, w^(w+1)*2, inf


def format_ordinal(a) -> str:
    if a is INF:
        return "inf"
    a = coerce(a)
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite() or e == OMEGA:
            base = f"w^{format_ordinal(e)}"
        else:
            base = f"w^({format_ordinal(e)})"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(w)|(\^)|(\*)|(\+)|(\()|(\)))")


def parse_ordinal(text: str) -> Ordinal:
    """Parse the ordinal syntax; ``inf`` is rejected here (see parse_height)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise OrdinalError(f"unexpected character in ordinal {text!r} at {pos}")
        kinds = ("num", "w", "^", "*", "+", "(", ")")
        for kind, g in zip(kinds, m.groups()):
            if g is not None:
                tokens.append((kind, g))
        pos = m.end()
    if not tokens:
        raise OrdinalError("empty ordinal")
    value, i = _parse_sum(tokens, 0, text)
    if i != len(tokens):
        raise OrdinalError(f"trailing input in ordinal {text!r}")
    return value


def _parse_sum(tokens, i, text):
    total, i = _parse_term(tokens, i, text)
    while i < len(tokens) and tokens[i][0] == "+":
        nxt, i = _parse_term(tokens, i + 1, text)
        total = total + nxt
    return total, i


def _parse_term(tokens, i, text):
    if i >= len(tokens):
        raise OrdinalError(f"truncated ordinal {text!r}")
    kind, val = tokens[i]
    if kind == "num":
        return Ordinal.of(int(val)), i + 1
    if kind != "w":
        raise OrdinalError(f"unexpected {val!r} in ordinal {text!r}")
    i += 1
    exponent = ONE
    if i < len(tokens) and tokens[i][0] == "^":
        i += 1
        if i >= len(tokens):
            raise OrdinalError(f"missing exponent in {text!r}")
        kind, val = tokens[i]
        if kind == "num":
            exponent, i = Ordinal.of(int(val)), i + 1
        elif kind == "w":
            exponent, i = OMEGA, i + 1
        elif kind == "(":
            exponent, i = _parse_sum(tokens, i + 1, text)
            if i >= len(tokens) or tokens[i][0] != ")":
                raise OrdinalError(f"unbalanced parenthesis in {text!r}")
            i += 1
        else:
            raise OrdinalError(f"bad exponent in {text!r}")
    coef = 1
    if i < len(tokens) and tokens[i][0] == "*":
        if i + 1 >= len(tokens) or tokens[i + 1][0] != "num":
            raise OrdinalError(f"coefficient must be an integer in {text!r}")
        coef = int(tokens[i + 1][1])
        i += 2
    if coef == 0:
        return ZERO, i
    return Ordinal(((exponent, coef),)), i


def parse_height(text: str):
    """Parse an ordinal or the symbol ``inf``."""
    return INF if text.strip() == "inf" else parse_ordinal(text)
