"""Fredholm indices and symplectic areas of building components.

Indices are for unparametrized curves whose ends move freely in the circle
family of geodesics of their class. Areas are exact Fractions in units where
the line has area ``R`` and the exceptional divisor has area 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from polyembed.core import ComponentSpec, HomologyClass, LevelKind
from polyembed.errors import LengthMismatch, WrongLevel


@dataclass(frozen=True)
class IndexResult:
    index: int
    formula_tag: LevelKind


@dataclass(frozen=True)
class AreaResult:
    area: Fraction


def index_top(s: int, d: int, e: int, classes: Sequence[HomologyClass]) -> IndexResult:
    """Index of a curve in the complement of the torus with ``s`` negative ends."""
    if len(classes) != s:
        raise LengthMismatch(f"{s} ends declared but {len(classes)} classes given")
    winding = sum(c.k + c.l for c in classes)
    return IndexResult(s - 2 + 6 * d - 2 * e + 2 * winding, LevelKind.TOP)


def index_neck(s_plus: int, s_minus: int) -> IndexResult:
    if s_plus < 0 or s_minus < 0 or s_plus + s_minus < 1:
        raise ValueError("a neck component needs at least one end")
    return IndexResult(2 * s_plus + s_minus - 2, LevelKind.NECK)


def index_bottom(s: int) -> IndexResult:
    """Index of a genus-0 curve in the cotangent bundle with ``s`` positive ends.

    Also the deformation index of a sub-building whose uppermost level has
    ``s`` positive ends.
    """
    if s < 1:
        raise ValueError("a bottom component needs at least one end")
    return IndexResult(2 * s - 2, LevelKind.BOTTOM)


def component_index(c: ComponentSpec) -> IndexResult:
    if c.level_kind is LevelKind.TOP:
        orbits = [e.orbit for e in c.negative_ends]
        return index_top(len(orbits), c.degree, c.exceptional, orbits)
    if c.level_kind is LevelKind.NECK:
        return index_neck(len(c.positive_ends), len(c.negative_ends))
    return index_bottom(len(c.ends))


def class_area(d: int, e: int, R) -> Fraction:
    """Area of the class d[line] - e[E]."""
    return Fraction(R) * d - e


def area_top(c: ComponentSpec, R) -> AreaResult:
    if c.level_kind is not LevelKind.TOP:
        raise WrongLevel(f"area formula applies to top components, got {c.level_kind.value}")
    boundary = sum(e.orbit.k + 2 * e.orbit.l for e in c.ends)
    return AreaResult(class_area(c.degree, c.exceptional, R) + boundary)


def constrained_index(idx: int, points: int) -> int:
    """Index left after imposing ``points`` generic point constraints."""
    if points < 0:
        raise ValueError("number of point constraints must be nonnegative")
    return idx - 2 * points
