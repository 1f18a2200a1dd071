"""Ledger of extended intersection numbers against leaves of the fiber foliation.

Star numbers are not computed from geometry. They are bookkeeping values
subject to finitely many rules: nonnegativity for distinct curves, the sum
rule ``f*C0 + f*C1 = f.C`` across a broken leaf, the building inequality
against the fiber class, and the lower bound ``f*C0 >= 1`` (resp.
``f*C1 >= 1``) whenever ``f`` has an end on a positive (resp. negative)
horizontal class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from polyembed.core import HomologyClass, Violation
from polyembed.errors import NonHorizontalClass, UnknownComponent


class LeafKind(str, Enum):
    CLOSED_FIBER = "closed_fiber"
    C0 = "C0"
    C1 = "C1"


class SignMode(str, Enum):
    ALL_POSITIVE = "all_positive"
    ALL_NEGATIVE = "all_negative"
    INFEASIBLE = "infeasible"
    EMPTY = "empty"
    # only produced by the enumerator when the unique-leaf rule is switched off
    MIXED = "mixed"


@dataclass(frozen=True)
class StarLedger:
    """Star values keyed by ``(component id, leaf kind)``.

    ``total_against_fiber`` is the intersection of the whole curve with a
    fiber, which bounds the sum of closed-fiber entries.
    """

    entries: Mapping = field(default_factory=dict)
    total_against_fiber: int = 1

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def value(self, component, leaf: LeafKind) -> int:
        return self.entries.get((component, LeafKind(leaf)), 0)

    def components(self) -> list:
        return sorted({cid for cid, _ in self.entries}, key=repr)


def star_broken_sum(ledger: StarLedger, component) -> int:
    """``f*C0 + f*C1`` for component ``f``; equals ``f.C`` for a nearby closed leaf."""
    if not any(cid == component for cid, _ in ledger.entries):
        raise UnknownComponent(component)
    return ledger.value(component, LeafKind.C0) + ledger.value(component, LeafKind.C1)


def check_ledger(ledger: StarLedger) -> list:
    """Named violations of the ledger rules; empty when the ledger is consistent."""
    out = []
    for (cid, leaf), v in sorted(ledger.entries.items(), key=repr):
        if v < 0:
            out.append(Violation("star-nonnegative", f"{cid} * {leaf.value} = {v}"))
    for cid in ledger.components():
        closed = ledger.value(cid, LeafKind.CLOSED_FIBER)
        if star_broken_sum(ledger, cid) != closed:
            out.append(Violation("broken-sum", f"{cid}: C0 + C1 = {star_broken_sum(ledger, cid)}, closed leaf {closed}"))
    total = sum(ledger.value(cid, LeafKind.CLOSED_FIBER) for cid in ledger.components())
    if total > ledger.total_against_fiber:
        out.append(Violation("building-inequality", f"sum {total} exceeds {ledger.total_against_fiber}"))
    return out


def star_lower_bounds(ends: Iterable[HomologyClass]) -> dict:
    """Lower bounds on ``f*C0`` and ``f*C1`` forced by the ends of ``f``.

    An end on ``(k, 0)`` with ``k > 0`` sits over the unique C0 plane on the
    underlying simple orbit; the difference of the two asymptotic
    representations is governed by a positive eigenvalue whose eigenvector
    winds at least once, which pushes one intersection into ``f*C0``.
    Symmetrically for ``k < 0`` and C1.
    """
    lower = {LeafKind.C0: 0, LeafKind.C1: 0}
    for c in ends:
        if c.l != 0:
            raise NonHorizontalClass(f"end class {c} is not horizontal")
        if c.k == 0:
            raise ValueError("end class (0,0) is not an orbit class")
        lower[LeafKind.C0 if c.k > 0 else LeafKind.C1] = 1
    return lower


def sign_consistency(ends: Sequence[HomologyClass], broken_sum: int = 1) -> SignMode:
    """Classify the horizontal ends of the non-cover component.

    Mixed signs force ``f*C0 >= 1`` and ``f*C1 >= 1``, which exceeds the
    broken-leaf sum of 1.
    """
    ends = list(ends)
    lower = star_lower_bounds(ends)
    if not ends:
        return SignMode.EMPTY
    if lower[LeafKind.C0] + lower[LeafKind.C1] > broken_sum:
        return SignMode.INFEASIBLE
    return SignMode.ALL_POSITIVE if lower[LeafKind.C0] else SignMode.ALL_NEGATIVE


def ledger_for_degree_d(mode: SignMode, n_covers: int) -> StarLedger:
    """Ledger of a degree-d limit: ``f0`` meets each fiber once, covers never.

    Component ids are ``"f0"`` and ``"f1" .. f"f{n_covers}"``.
    """
    entries = {("f0", LeafKind.CLOSED_FIBER): 1}
    if mode is SignMode.ALL_NEGATIVE:
        entries[("f0", LeafKind.C0)], entries[("f0", LeafKind.C1)] = 0, 1
    elif mode is SignMode.ALL_POSITIVE:
        entries[("f0", LeafKind.C0)], entries[("f0", LeafKind.C1)] = 1, 0
    else:
        raise ValueError(f"no consistent ledger for sign mode {mode.value}")
    for i in range(1, n_covers + 1):
        for leaf in LeafKind:
            entries[(f"f{i}", leaf)] = 0
    return StarLedger(entries, total_against_fiber=1)
