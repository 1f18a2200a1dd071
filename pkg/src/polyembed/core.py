"""Combinatorial records for curve components and leveled buildings.

A building lives in three kinds of levels: ``top`` (the complement of the
torus), ``neck`` (the symplectization of the unit cotangent bundle) and
``bottom`` (the cotangent bundle itself). Ends are asymptotic to closed
geodesics on the torus, labelled by their class ``(k, l)``.

Matched ends carry the *same* class on both sides. A C0 plane ending on
``(1, 0)`` and a C1 plane ending on ``(-1, 0)`` are joined through a bottom
cylinder with positive ends ``(1, 0)`` and ``(-1, 0)``, whose classes sum to
zero.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from polyembed.errors import MalformedMatching

SCHEMA_VERSION = "1"

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or an integer into a reduced Fraction.

    Decimal notation is rejected on purpose; inputs must be exact.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise ValueError(f"not a rational of the form p/q: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Sign(str, Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    def flipped(self) -> "Sign":
        return Sign.NEGATIVE if self is Sign.POSITIVE else Sign.POSITIVE


class LevelKind(str, Enum):
    TOP = "top"
    NECK = "neck"
    BOTTOM = "bottom"


@dataclass(frozen=True, order=True)
class HomologyClass:
    """The class ``k[dD(1)] + l[dD(2)]`` in the first homology of the torus."""

    k: int
    l: int

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(-self.k, -self.l)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        return HomologyClass(self.k + other.k, self.l + other.l)

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return HomologyClass(self.k - other.k, self.l - other.l)

    def scaled(self, n: int) -> "HomologyClass":
        return HomologyClass(n * self.k, n * self.l)

    @property
    def is_zero(self) -> bool:
        return self.k == 0 and self.l == 0

    @property
    def is_horizontal(self) -> bool:
        return self.l == 0 and self.k != 0

    def __str__(self) -> str:
        return f"({self.k},{self.l})"


ZERO = HomologyClass(0, 0)


@dataclass(frozen=True)
class PunctureEnd:
    sign: Sign
    orbit: HomologyClass
    movable: bool = True

    @classmethod
    def neg(cls, k: int, l: int, movable: bool = True) -> "PunctureEnd":
        return cls(Sign.NEGATIVE, HomologyClass(k, l), movable)

    @classmethod
    def pos(cls, k: int, l: int, movable: bool = True) -> "PunctureEnd":
        return cls(Sign.POSITIVE, HomologyClass(k, l), movable)


@dataclass(frozen=True)
class ComponentSpec:
    """One finite-energy curve component.

    ``degree`` and ``exceptional`` are intersection numbers with the line at
    infinity and with the exceptional divisor; they are only meaningful for
    top components. ``exceptional_cover`` marks a cover of the exceptional
    divisor, the one case where ``exceptional`` may be negative.
    """

    level_kind: LevelKind
    genus: int = 0
    degree: int = 0
    exceptional: int = 0
    ends: tuple = ()
    cover_multiplicity: int = 1
    exceptional_cover: bool = False

    def __post_init__(self):
        object.__setattr__(self, "level_kind", LevelKind(self.level_kind))
        object.__setattr__(self, "ends", tuple(self.ends))

    @classmethod
    def top(cls, degree: int, exceptional: int, *classes, cover: int = 1) -> "ComponentSpec":
        ends = tuple(PunctureEnd(Sign.NEGATIVE, HomologyClass(*c)) for c in classes)
        return cls(LevelKind.TOP, 0, degree, exceptional, ends, cover)

    @classmethod
    def bottom(cls, *classes, cover: int = 1) -> "ComponentSpec":
        ends = tuple(PunctureEnd(Sign.POSITIVE, HomologyClass(*c)) for c in classes)
        return cls(LevelKind.BOTTOM, 0, 0, 0, ends, cover)

    @classmethod
    def neck(cls, positive: Sequence, negative: Sequence, cover: int = 1) -> "ComponentSpec":
        ends = tuple(PunctureEnd(Sign.POSITIVE, HomologyClass(*c)) for c in positive)
        ends += tuple(PunctureEnd(Sign.NEGATIVE, HomologyClass(*c)) for c in negative)
        return cls(LevelKind.NECK, 0, 0, 0, ends, cover)

    @property
    def positive_ends(self) -> list:
        return [e for e in self.ends if e.sign is Sign.POSITIVE]

    @property
    def negative_ends(self) -> list:
        return [e for e in self.ends if e.sign is Sign.NEGATIVE]

    def end_balance(self) -> HomologyClass:
        total = ZERO
        for end in self.ends:
            total = total + (end.orbit if end.sign is Sign.POSITIVE else -end.orbit)
        return total


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}" if self.detail else self.rule


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def rules(self) -> frozenset:
        return frozenset(v.rule for v in self.violations)

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def from_list(cls, violations: Iterable[Violation]) -> "ValidationReport":
        unique = sorted(set(violations), key=lambda v: (v.rule, v.detail))
        return cls(tuple(unique))


def _component_violations(c: ComponentSpec, label: str = "") -> list:
    out = []
    where = f"{label}: " if label else ""
    if c.level_kind is LevelKind.TOP and c.positive_ends:
        out.append(Violation("top-negativity", f"{where}top component has a positive end"))
    if c.level_kind is LevelKind.BOTTOM and c.negative_ends:
        out.append(Violation("bottom-positivity", f"{where}bottom component has a negative end"))
    if c.level_kind is not LevelKind.TOP and (c.degree or c.exceptional or c.exceptional_cover):
        out.append(Violation("level-degree", f"{where}degree/exceptional set on a {c.level_kind.value} component"))
    if c.exceptional_cover:
        if c.degree != 0 or c.exceptional >= 0 or c.ends:
            out.append(Violation("nonnegative-intersections", f"{where}cover of E needs d=0, e<0 and no ends"))
    elif c.degree < 0 or c.exceptional < 0:
        out.append(Violation("nonnegative-intersections", f"{where}d={c.degree}, e={c.exceptional}"))
    if c.genus < 0:
        out.append(Violation("genus-range", f"{where}genus {c.genus}"))
    if c.cover_multiplicity < 1:
        out.append(Violation("cover-multiplicity", f"{where}multiplicity {c.cover_multiplicity}"))
    for i, end in enumerate(c.ends):
        if end.orbit.is_zero:
            out.append(Violation("null-orbit", f"{where}end {i} has class (0,0)"))
    if c.level_kind is not LevelKind.TOP and not c.ends:
        out.append(Violation("empty-ends", f"{where}closed {c.level_kind.value} component"))
    return out


def validate_component(c: ComponentSpec) -> ValidationReport:
    return ValidationReport.from_list(_component_violations(c))


_KIND_RANK = {LevelKind.BOTTOM: 0, LevelKind.NECK: 1, LevelKind.TOP: 2}


@dataclass(frozen=True)
class BuildingSpec:
    """A leveled collection of components with matched ends.

    ``matchings`` holds 4-tuples ``(ci, ei, cj, ej)`` joining end ``ei`` of
    component ``ci`` with end ``ej`` of component ``cj``; either end may come
    first. ``total_class`` is the expected ``(degree, exceptional)`` total,
    or None to skip that check.
    """

    components: tuple
    levels: tuple
    matchings: tuple = ()
    total_class: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "levels", tuple(int(x) for x in self.levels))
        object.__setattr__(self, "matchings", tuple(tuple(int(x) for x in m) for m in self.matchings))
        if self.total_class is not None:
            object.__setattr__(self, "total_class", tuple(self.total_class))
        if len(self.levels) != len(self.components):
            raise ValueError("levels and components differ in length")

    def degree_total(self) -> tuple:
        tops = [c for c in self.components if c.level_kind is LevelKind.TOP]
        return sum(c.degree for c in tops), sum(c.exceptional for c in tops)


def _level_violations(b: BuildingSpec) -> list:
    out = []
    by_kind = {kind: {lvl for c, lvl in zip(b.components, b.levels) if c.level_kind is kind} for kind in LevelKind}
    for kind in (LevelKind.TOP, LevelKind.BOTTOM):
        if len(by_kind[kind]) > 1:
            out.append(Violation("level-structure", f"{kind.value} components on several levels"))
    for lower, upper in ((LevelKind.BOTTOM, LevelKind.NECK), (LevelKind.NECK, LevelKind.TOP), (LevelKind.BOTTOM, LevelKind.TOP)):
        if by_kind[lower] and by_kind[upper] and max(by_kind[lower]) >= min(by_kind[upper]):
            out.append(Violation("level-structure", f"{lower.value} level not below {upper.value} level"))
    return out


def _is_tree(n: int, edges: list) -> bool:
    if n == 0:
        return True
    if len(edges) != n - 1:
        return False
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def validate_building(b: BuildingSpec, allow_unmatched: bool = False) -> ValidationReport:
    """Check matching, the genus-0 tree condition, homology balance and totals.

    With ``allow_unmatched`` the building is treated as a sub-building and
    free ends are permitted. Raises MalformedMatching if an end is used by
    two matchings.
    """
    out = []
    for i, c in enumerate(b.components):
        out.extend(_component_violations(c, f"component {i}"))
    out.extend(_level_violations(b))

    n = len(b.components)
    used = Counter()
    edges = []
    for mi, (ci, ei, cj, ej) in enumerate(b.matchings):
        if not (0 <= ci < n and 0 <= cj < n) or not (0 <= ei < len(b.components[ci].ends)) \
                or not (0 <= ej < len(b.components[cj].ends)):
            out.append(Violation("matching-index", f"matching {mi} refers to a missing end"))
            continue
        for key in ((ci, ei), (cj, ej)):
            used[key] += 1
            if used[key] > 1:
                raise MalformedMatching(f"end {key[1]} of component {key[0]} is matched twice")
        edges.append((ci, cj))
        a, c = b.components[ci].ends[ei], b.components[cj].ends[ej]
        if a.sign is c.sign:
            out.append(Violation("matching-signs", f"matching {mi} joins two {a.sign.value} ends"))
        else:
            (pc, _), (nc, _) = ((ci, a), (cj, c)) if a.sign is Sign.POSITIVE else ((cj, c), (ci, a))
            if b.levels[nc] != b.levels[pc] + 1:
                out.append(Violation("matching-levels",
                                     f"matching {mi}: positive end at level {b.levels[pc]}, "
                                     f"negative end at level {b.levels[nc]}"))
        if a.orbit != c.orbit:
            out.append(Violation("matching-orbit", f"matching {mi}: {a.orbit} vs {c.orbit}"))

    if not allow_unmatched:
        for i, c in enumerate(b.components):
            for j in range(len(c.ends)):
                if not used[(i, j)]:
                    out.append(Violation("unmatched-end", f"end {j} of component {i}"))

    if not _is_tree(n, edges):
        out.append(Violation("genus-tree", f"{n} components, {len(edges)} matchings, not a tree"))
    for i, c in enumerate(b.components):
        if c.genus != 0:
            out.append(Violation("genus-zero", f"component {i} has genus {c.genus}"))
        if c.level_kind is LevelKind.TOP:
            continue
        if not c.end_balance().is_zero:
            out.append(Violation("homology-balance", f"component {i}: ends sum to {c.end_balance()}"))
        if len(c.ends) == 1:
            out.append(Violation("contractibility", f"component {i} has a single end"))

    if b.total_class is not None and b.degree_total() != tuple(b.total_class):
        out.append(Violation("total-class", f"expected {tuple(b.total_class)}, found {b.degree_total()}"))
    return ValidationReport.from_list(out)


# JSON -----------------------------------------------------------------------

def component_to_dict(c: ComponentSpec, level: int) -> dict:
    d = {
        "level": level,
        "kind": c.level_kind.value,
        "degree": c.degree,
        "e": c.exceptional,
        "genus": c.genus,
        "cover": c.cover_multiplicity,
        "ends": [{"sign": e.sign.value, "k": e.orbit.k, "l": e.orbit.l, "movable": e.movable} for e in c.ends],
    }
    if c.exceptional_cover:
        d["e_cover"] = True
    return d


def building_to_dict(b: BuildingSpec) -> dict:
    d = {
        "schema": SCHEMA_VERSION,
        "components": [component_to_dict(c, lvl) for c, lvl in zip(b.components, b.levels)],
        "matchings": [list(m) for m in b.matchings],
    }
    if b.total_class is not None:
        d["total_class"] = list(b.total_class)
    return d


def _strict_int(x, name: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"{name} must be an integer, got {x!r}")
    return x


def building_from_dict(d: dict) -> BuildingSpec:
    """Inverse of building_to_dict. Raises ValueError on schema errors."""
    if not isinstance(d, dict) or "components" not in d:
        raise ValueError("building JSON needs a 'components' list")
    if str(d.get("schema", SCHEMA_VERSION)) != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {d.get('schema')!r}")
    comps, levels = [], []
    for raw in d["components"]:
        try:
            ends = []
            for e in raw.get("ends", []):
                if e["sign"] not in ("+", "-"):
                    raise ValueError(f"bad end sign {e['sign']!r}")
                ends.append(PunctureEnd(Sign(e["sign"]),
                                        HomologyClass(_strict_int(e["k"], "k"), _strict_int(e["l"], "l")),
                                        bool(e.get("movable", True))))
            comps.append(ComponentSpec(
                level_kind=LevelKind(raw["kind"]),
                genus=_strict_int(raw.get("genus", 0), "genus"),
                degree=_strict_int(raw.get("degree", 0), "degree"),
                exceptional=_strict_int(raw.get("e", 0), "e"),
                ends=tuple(ends),
                cover_multiplicity=_strict_int(raw.get("cover", 1), "cover"),
                exceptional_cover=bool(raw.get("e_cover", False)),
            ))
            levels.append(_strict_int(raw["level"], "level"))
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed component {raw!r}: {exc}") from exc
    matchings = []
    for m in d.get("matchings", []):
        if not isinstance(m, (list, tuple)) or len(m) != 4:
            raise ValueError(f"matching must be [ci, ei, cj, ej], got {m!r}")
        matchings.append(tuple(_strict_int(x, "matching index") for x in m))
    total = d.get("total_class")
    if total is not None:
        if not isinstance(total, (list, tuple)) or len(total) != 2:
            raise ValueError("total_class must be [degree, e]")
        total = (_strict_int(total[0], "degree"), _strict_int(total[1], "e"))
    return BuildingSpec(tuple(comps), tuple(levels), tuple(matchings), total)


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


__all__ = [
    "BuildingSpec",
    "ComponentSpec",
    "HomologyClass",
    "LevelKind",
    "PunctureEnd",
    "SCHEMA_VERSION",
    "Sign",
    "ValidationReport",
    "Violation",
    "building_from_dict",
    "building_to_dict",
    "format_rational",
    "parse_rational",
    "validate_building",
    "validate_component",
]
