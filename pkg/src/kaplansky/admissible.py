"""Supports of invariant families: deficiency, admissibility, supremum.

A support is a finite set of points (k, a) plus finitely many ladders
(k, d): a ladder stands for the infinite family (k, d[m]) of rungs along the
canonical fundamental sequence of the limit ordinal d.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .filtration import InvariantTable
from .ordinal import ZERO, Ordinal, OrdinalError, coerce, fundamental_sequence, is_limit, limit_split


class SupportError(ValueError):
    pass


@dataclass(frozen=True)
class SupportSet:
    n: int
    points: frozenset = frozenset()
    ladders: frozenset = frozenset()

    def __post_init__(self):
        pts = frozenset((k % self.n, coerce(a)) for k, a in self.points)
        lads = frozenset((k % self.n, coerce(d)) for k, d in self.ladders)
        for k, d in lads:
            if not is_limit(d):
                raise SupportError(f"ladder ({k}, {d}) is not at a limit ordinal")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "ladders", lads)

    def rung(self, ladder, m: int):
        k, d = ladder
        return k, fundamental_sequence(d, m)

    def with_ladder(self, k: int, d) -> "SupportSet":
        return SupportSet(self.n, self.points, self.ladders | {(k, d)})

    def with_point(self, k: int, a) -> "SupportSet":
        return SupportSet(self.n, self.points | {(k, a)}, self.ladders)


@dataclass(frozen=True)
class AdmissibleFamily:
    """Multiplicities on a support: ``points`` and ``ladders`` map their keys to
    cards (one card per rung for ladders); ``infinite`` holds the kappa_{k,inf}."""

    n: int
    points: dict = dc_field(default_factory=dict)
    ladders: dict = dc_field(default_factory=dict)
    infinite: dict = dc_field(default_factory=dict)

    @property
    def support(self) -> SupportSet:
        return SupportSet(self.n, frozenset(k for k, c in self.points.items() if c),
                          frozenset(k for k, c in self.ladders.items() if c))

    def table(self) -> InvariantTable:
        if self.ladders:
            from .classify import UnsupportedTransfinite
            raise UnsupportedTransfinite("ladders denote infinitely many invariants")
        return InvariantTable(self.n, dict(self.points), dict(self.infinite))


def support_of_table(table: InvariantTable) -> SupportSet:
    return SupportSet(table.n, frozenset(key for key, _ in table.finite))


def family_of_table(table: InvariantTable) -> AdmissibleFamily:
    return AdmissibleFamily(table.n, dict(table.finite), {}, dict(table.infinite))


def deficiency_member(D: SupportSet, k: int, delta) -> bool:
    """True when D_k is not cofinal in the limit ordinal delta.

    Only a ladder sitting exactly at (k, delta) is cofinal there: points are
    finitely many, a ladder at d < delta stays below d, and a ladder at
    d > delta has only finitely many rungs below delta because its rungs
    increase to d.  A finite union of bounded sets is bounded.
    """
    delta = coerce(delta)
    if not is_limit(delta):
        raise OrdinalError(f"{delta} is not a limit ordinal")
    return (k % D.n, delta) not in D.ladders


def rung_bound(D: SupportSet) -> int:
    """How many rungs per ladder the admissibility check has to inspect.

    Write a ladder as g + tail(m).  Either every rung from some m on has the
    form g + m with g a fixed limit (the demands then cycle with period n),
    or the rungs from m = 1 on are pairwise distinct limit ordinals, each
    demanding its own ladder, so one of the first (#ladders + 1) lacks it.
    Checking m < max(n, #ladders + 2) therefore finds a violation whenever
    one exists.  Points and finite tails only enlarge the margin.
    """
    tails = [limit_split(a)[1] for _, a in D.points if not a.is_finite()]
    return max(D.n, len(D.ladders) + 2) + len(D.points) + max(tails, default=0)


def _demand(D: SupportSet, k: int, a: Ordinal):
    """None, or the counterexample triple for the element (k, a)."""
    if a.is_finite():
        return None
    delta, l = limit_split(a)
    src = (k - 1 - l) % D.n
    if deficiency_member(D, src, delta):
        return (src, delta), l, (k % D.n, a)
    return None


def is_admissible(D: SupportSet):
    """(True, None) or (False, ((k, delta), l, (k+1+l, delta+l)))."""
    for k, a in sorted(D.points, key=lambda p: (p[1], p[0])):
        bad = _demand(D, k, a)
        if bad:
            return False, bad
    M = rung_bound(D)
    for lad in sorted(D.ladders, key=lambda p: (p[1], p[0])):
        for m in range(M + 1):
            k, a = D.rung(lad, m)
            bad = _demand(D, k, a)
            if bad:
                return False, bad
    return True, None


@dataclass(frozen=True)
class CombinedSupport:
    """Projection of a support on the ordinals: explicit values plus ladder limits."""

    ordinals: frozenset
    ladder_limits: frozenset


def csup_ubd(D: SupportSet) -> tuple[CombinedSupport, Ordinal]:
    csup = CombinedSupport(frozenset(a for _, a in D.points), frozenset(d for _, d in D.ladders))
    ubd = max(list(csup.ordinals) + list(csup.ladder_limits), default=ZERO)
    return csup, ubd

