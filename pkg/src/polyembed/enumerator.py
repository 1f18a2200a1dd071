"""Enumeration of limit configurations and the resulting embedding bound.

Two searches are implemented:

* limits of fiber-class spheres (degree 1, one intersection with E), which
  produce the finite energy foliation: a closed fiber, or a broken pair of
  planes C0 (degree 0) and C1 (degree 1) joined through the cotangent bundle;
* limits of degree-d spheres through 2d points. One top component ``f0`` is
  not a cover of a leaf; its ends, its degree ``d'`` and the number ``m`` of
  bottom cylinders avoiding it are constrained by counting and by area.

``R`` is the area of a line; an embedding of P(1,2) into B(a) gives one into
the projective plane of line area ``R`` for every ``R > a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from polyembed.capacities import Polydisk, inclusion_bound
from polyembed.core import BuildingSpec, ComponentSpec, HomologyClass, format_rational, parse_rational
from polyembed.errors import NotNeeded, OutOfRange
from polyembed.index_area import area_top, class_area, index_top
from polyembed.intersections import SignMode, StarLedger, ledger_for_degree_d, sign_consistency


@dataclass(frozen=True)
class Rule:
    name: str
    description: str


RULES = {
    "G1-blowdown": Rule(
        "G1-blowdown",
        "A degree-0 plane meeting E once and ending on a (2,0) geodesic comes in a circle family; "
        "blowing E down gives planes through a common point whose pairwise intersection number is 0, "
        "contradicting positivity of intersections.",
    ),
    "unique-leaf": Rule(
        "unique-leaf",
        "Each (1,0) geodesic bounds exactly one C0 leaf and each (-1,0) geodesic exactly one C1 leaf; "
        "this selects the comparison leaf behind the sign dichotomy for the ends of f0.",
    ),
}


@dataclass(frozen=True)
class RuleSet:
    """Geometric axioms the arithmetic cannot derive. Both default to on."""

    g1_blowdown: bool = True
    unique_leaf: bool = True


DEFAULT_RULES = RuleSet()


# Fiber class ----------------------------------------------------------------

# (degree, E-intersection) of C0 and of C1 in the two ways E can be met once
_CASES = {1: ((0, 0), (1, 1)), 2: ((0, 1), (1, 0))}
PLANE_SEARCH_BOUND = 4


def plane_pair(case: int, k: int, l: int) -> tuple:
    """The C0 and C1 planes of ``case`` with C0 ending on ``(k, l)``."""
    if case not in _CASES:
        raise ValueError(f"case must be 1 or 2, got {case}")
    (d0, e0), (d1, e1) = _CASES[case]
    return ComponentSpec.top(d0, e0, (k, l)), ComponentSpec.top(d1, e1, (-k, -l))


def plane_class_system(case: int, k: int, l: int) -> dict:
    """Indices of both planes and the area of C0 (independent of R)."""
    c0, c1 = plane_pair(case, k, l)
    return {
        "index_c0": index_top(1, c0.degree, c0.exceptional, [c0.ends[0].orbit]).index,
        "index_c1": index_top(1, c1.degree, c1.exceptional, [c1.ends[0].orbit]).index,
        "area_c0": area_top(c0, 0).area,
    }


def enumerate_plane_classes(case: int, bound: int = PLANE_SEARCH_BOUND) -> list:
    """Classes ``(k, l)`` with both indices nonnegative and C0 of area 1.

    The two index inequalities pin ``k + l`` (to 1 in case 1, to 2 in case 2)
    and the area equation pins ``k + 2l``, so every solution has ``|k| <= 2``
    and ``l = 0``; the box ``|k|, |l| <= 4`` contains all of them.
    """
    out = []
    for k in range(-bound, bound + 1):
        for l in range(-bound, bound + 1):
            if k == 0 and l == 0:
                continue
            sys_ = plane_class_system(case, k, l)
            if sys_["index_c0"] >= 0 and sys_["index_c1"] >= 0 and sys_["area_c0"] == 1:
                out.append(HomologyClass(k, l))
    return out


@dataclass(frozen=True)
class FiberLimitConfig:
    kind: str
    case: Optional[int] = None
    c0_class: Optional[HomologyClass] = None
    c1_class: Optional[HomologyClass] = None
    exclusion: Optional[str] = None

    def building(self) -> BuildingSpec:
        if self.kind == "closed":
            return BuildingSpec((ComponentSpec.top(1, 1),), (1,), (), (1, 1))
        c0, c1 = plane_pair(self.case, self.c0_class.k, self.c0_class.l)
        cyl = ComponentSpec.bottom(
            (self.c0_class.k, self.c0_class.l), (self.c1_class.k, self.c1_class.l)
        )
        return BuildingSpec((c0, cyl, c1), (1, 0, 1), ((0, 0, 1, 0), (2, 0, 1, 1)), (1, 1))


def enumerate_fiber_limits(R, rules: RuleSet = DEFAULT_RULES) -> list:
    """All limit types of a fiber-class sphere for line area ``1 < R < 3``.

    Broken limits need both planes to have positive area; C1 has area
    ``R - 2``, so they only appear for ``R > 2``. The case-2 pair is
    arithmetically fine and is flagged by the G1-blowdown rule.
    """
    R = parse_rational(R)
    if not (1 < R < 3):
        raise OutOfRange(f"fiber limits need 1 < R < 3, got {format_rational(R)}")
    configs = [FiberLimitConfig("closed")]
    total = class_area(1, 1, R)
    for case in (1, 2):
        for cls in enumerate_plane_classes(case):
            c0, c1 = plane_pair(case, cls.k, cls.l)
            a0, a1 = area_top(c0, R).area, area_top(c1, R).area
            assert a0 + a1 == total
            if a0 <= 0 or a1 <= 0:
                continue
            exclusion = "G1-blowdown" if case == 2 and rules.g1_blowdown else None
            configs.append(FiberLimitConfig("broken", case, cls, -cls, exclusion))
    return configs


# Degree d -------------------------------------------------------------------

def s_cap(d: int) -> int:
    """Largest number of ends of f0 searched.

    The area bound drops by 1 per extra end, so a feasible assignment with
    more ends implies one with fewer; the cap only has to exceed the floor.
    """
    return 2 * d + 4


@dataclass(frozen=True)
class DegreeDConfig:
    d: int
    m: int
    d_prime: int
    s: int
    sign_mode: SignMode
    area_bound: Fraction
    positive_ends: int = 0
    ledger: Optional[StarLedger] = field(default=None, compare=False, repr=False)

    @property
    def f0_ends(self) -> list:
        p = self.positive_ends
        return [HomologyClass(1, 0)] * p + [HomologyClass(-1, 0)] * (self.s - p)

    @property
    def spare_degree(self) -> int:
        return self.d - self.d_prime - self.positive_ends - self.m

    @property
    def assemblable(self) -> bool:
        # extra degree can only hang off a C0 hub that carries the m cylinders
        return self.spare_degree == 0 or (self.spare_degree > 0 and self.m >= 1 and self.s > self.positive_ends)

    def building(self) -> BuildingSpec:
        """Assemble a building from f0, covering cylinders and covers of leaves.

        Each end of f0 is joined through a bottom cylinder to a C0 plane (for
        a ``(-1,0)`` end) or a C1 plane (for a ``(1,0)`` end). The ``m``
        cylinders avoiding f0 hang off the C0 partner of the first negative
        end and lead to C1 covers; leftover degree is absorbed into the
        multiplicity of the first of those covers.
        """
        if not self.assemblable:
            raise ValueError("configuration does not assemble into a genus-0 building")
        comps = [ComponentSpec.top(self.d_prime, self.d_prime - 1, *[(c.k, c.l) for c in self.f0_ends])]
        levels = [1]
        matchings = []
        hub = None
        for i, cls in enumerate(self.f0_ends):
            comps.append(ComponentSpec.bottom((cls.k, cls.l), (-cls.k, -cls.l)))
            levels.append(0)
            cyl = len(comps) - 1
            matchings.append((0, i, cyl, 0))
            if cls.k < 0:
                partner = ComponentSpec.top(0, 0, (1, 0))
                if hub is None:
                    hub = len(comps)
            else:
                partner = ComponentSpec.top(1, 1, (-1, 0))
            comps.append(partner)
            levels.append(1)
            matchings.append((cyl, 1, len(comps) - 1, 0))
        if self.m:
            extra = [1 + self.spare_degree] + [1] * (self.m - 1)
            hub_ends = [(1, 0)] + [(mult, 0) for mult in extra]
            comps[hub] = ComponentSpec.top(0, 0, *hub_ends, cover=sum(mult for mult, _ in hub_ends))
            for j, mult in enumerate(extra, start=1):
                comps.append(ComponentSpec.bottom((mult, 0), (-mult, 0), cover=mult))
                levels.append(0)
                cyl = len(comps) - 1
                matchings.append((hub, j, cyl, 0))
                comps.append(ComponentSpec.top(mult, mult, (-mult, 0), cover=mult))
                levels.append(1)
                matchings.append((cyl, 1, len(comps) - 1, 0))
        return BuildingSpec(tuple(comps), tuple(levels), tuple(matchings), (self.d, self.d - 1))


@dataclass(frozen=True)
class Certificate:
    R: Fraction
    d: int
    m: Optional[int]
    d_prime: Optional[int]
    s: Optional[int]
    max_area_bound: Optional[Fraction]
    inequality: str
    frontier: str
    pruned: dict


@dataclass(frozen=True)
class Feasibility:
    R: Fraction
    d: int
    feasible: bool
    config: Optional[DegreeDConfig] = None
    certificate: Optional[Certificate] = None


@lru_cache(maxsize=None)
def _uniform_modes(s: int) -> tuple:
    return (sign_consistency([HomologyClass(-1, 0)] * s), sign_consistency([HomologyClass(1, 0)] * s),
            sign_consistency([HomologyClass(1, 0), HomologyClass(-1, 0)]))


def _branches(s: int, rules: RuleSet):
    """Yield (positive end count, sign mode) for the sign patterns of f0's ends."""
    neg, pos, mixed = _uniform_modes(s)
    yield 0, neg
    yield s, pos
    if s >= 2:
        if rules.unique_leaf:
            yield None, mixed
        else:
            # descending: the area bound grows with p, so first hits come early
            for p in range(s - 1, 0, -1):
                yield p, SignMode.MIXED


def _scan(R: Fraction, d: int, rules: RuleSet, first_only: bool,
          s_floor: Optional[int] = None, d_prime_cap: Optional[int] = None):
    """Walk all assignments (m, d', s, sign pattern); return (feasible list, pruned counts, best infeasible)."""
    p_num, q = R.numerator, R.denominator
    feasible = []
    pruned = {"sign-consistency": 0, "c1-cover-count": 0, "area": 0}
    best = None  # (bound numerator over q, m, d', s)
    for m in range(0, d):
        dp_max = d - m if d_prime_cap is None else d_prime_cap
        s_lo = 2 * d - m if s_floor is None else s_floor
        hi = max(s_cap(d), s_lo)
        assert hi >= s_lo
        for dp in range(1, dp_max + 1):
            for s in range(s_lo, hi + 1):
                for p, mode in _branches(s, rules):
                    if p is None:
                        pruned["sign-consistency"] += 1
                        continue
                    # every (1,0) end of f0 and every avoiding cylinder needs its own C1 cover
                    if p + m > d - dp:
                        pruned["c1-cover-count"] += 1
                        continue
                    # q * (d'R - (d'-1) - (s-p) + p), all ends of minimal multiplicity
                    num = dp * p_num - q * (dp - 1) - q * (s - p) + q * p
                    if best is None or num > best[0]:
                        best = (num, m, dp, s)
                    if num < 0:
                        pruned["area"] += 1
                        continue
                    feasible.append(DegreeDConfig(d, m, dp, s, mode, Fraction(num, q), p))
                    if first_only:
                        return feasible, pruned, best
    return feasible, pruned, best


def _certificate(R: Fraction, d: int, pruned: dict, best) -> Certificate:
    if best is None:
        return Certificate(R, d, None, None, None, None, "no assignment survives the counting rules",
                           "", pruned)
    num, m, dp, s = best
    bound = Fraction(num, R.denominator)
    inequality = (f"0 <= Area(f0) <= d'R - (d'-1) - s = {dp}*{format_rational(R)} - {dp - 1} - {s} "
                  f"= {format_rational(bound)} < 0")
    frontier = ""
    if (m, dp, s) == (0, d, 2 * d):
        value = d * (R - 2) + 1 + (d - m) - (2 * d - m)
        frontier = (f"d(R-2) + 1 + (d-m) - (2d-m) = {d}*{format_rational(R - 2)} + 1 - {d} = "
                    f"{format_rational(value)} < 0, i.e. R - 2 = {format_rational(R - 2)} "
                    f"< 1 - 1/d = {format_rational(1 - Fraction(1, d))}")
    return Certificate(R, d, m, dp, s, bound, inequality, frontier, pruned)


def degree_d_feasibility(R, d: int, rules: RuleSet = DEFAULT_RULES, *,
                         s_floor: Optional[int] = None, d_prime_cap: Optional[int] = None) -> Feasibility:
    """Search all (m, d', s, sign pattern) for a degree-d limit with nonnegative f0 area.

    ``s_floor`` and ``d_prime_cap`` replace the lower bound ``2d - m`` on the
    number of ends and the upper bound ``d - m`` on the degree of f0; they
    exist to probe which constraints are active.

    Boundary cases where the best area bound is exactly 0 are reported as
    feasible; nothing is claimed about the existence of such curves.
    """
    R = parse_rational(R)
    if d < 1:
        raise ValueError("degree must be at least 1")
    found, pruned, best = _scan(R, d, rules, False, s_floor, d_prime_cap)
    if not found:
        return Feasibility(R, d, False, certificate=_certificate(R, d, pruned, best))
    candidates = [c for c in found if c.assemblable] or found
    witness = max(candidates, key=lambda c: (c.area_bound, -c.m, c.d_prime, -c.s))
    ledger = None
    if witness.sign_mode is SignMode.ALL_NEGATIVE and witness.assemblable:
        tops = sum(c.level_kind.value == "top" for c in witness.building().components)
        ledger = ledger_for_degree_d(witness.sign_mode, tops - 1)
    witness = DegreeDConfig(witness.d, witness.m, witness.d_prime, witness.s, witness.sign_mode,
                            witness.area_bound, witness.positive_ends, ledger)
    return Feasibility(R, d, True, config=witness)


def is_feasible(R, d: int, rules: RuleSet = DEFAULT_RULES) -> bool:
    found, _, _ = _scan(parse_rational(R), d, rules, True)
    return bool(found)


def frontier(d: int, rules: RuleSet = DEFAULT_RULES) -> Fraction:
    """Least R at which degree d stops obstructing.

    Every area bound is increasing in R, so degree d is infeasible exactly
    for R below the smallest root over the assignments that pass the
    counting rules.
    """
    roots = []
    for m in range(0, d):
        for dp in range(1, d - m + 1):
            for s in range(2 * d - m, s_cap(d) + 1):
                for p, _ in _branches(s, rules):
                    if p is None or p + m > d - dp:
                        continue
                    roots.append(Fraction(dp - 1 + s - 2 * p, dp))
    if not roots:
        raise ArithmeticError(f"no admissible assignment at degree {d}")
    return min(roots)


DEFAULT_MAX_DEGREE = 1000


def witness_degree(R, rules: RuleSet = DEFAULT_RULES, max_degree: int = DEFAULT_MAX_DEGREE) -> Optional[int]:
    """Least degree whose feasibility search fails, certifying that P(1,2) misses the ball.

    Returns None when ``R >= 3`` (the branch m=0, d'=d, s=2d keeps area bound
    ``d(R-3) + 1 >= 1`` at every degree) or when nothing fails up to
    ``max_degree``. Raises NotNeeded for ``R <= 2``.
    """
    R = parse_rational(R)
    if R <= 2:
        raise NotNeeded(f"R = {format_rational(R)} <= 2: the volume already obstructs")
    if R >= 3:
        return None
    for d in range(1, max_degree + 1):
        if not is_feasible(R, d, rules):
            return d
    return None


@dataclass(frozen=True)
class EmbeddingBound:
    target: str
    bound: Fraction
    schedule: tuple
    inclusion_bound: Fraction
    sharp: bool


def embedding_bound_polydisk12(max_degree: int = 12, rules: RuleSet = DEFAULT_RULES) -> EmbeddingBound:
    """Supremum over d of the per-degree frontier, with the inclusion comparison.

    ``d * frontier(d)`` is checked to be affine in d over the schedule; its
    slope is then the limit of the increasing frontier sequence.
    """
    if max_degree < 3:
        raise ValueError("need at least degrees 2 and 3 to extract the limit")
    schedule = tuple((d, frontier(d, rules)) for d in range(2, max_degree + 1))
    scaled = [d * f for d, f in schedule]
    slope = scaled[1] - scaled[0]
    if any(scaled[i] != scaled[0] + slope * i for i in range(len(scaled))):
        raise ArithmeticError("frontier is not of the form (a*d + b)/d; limit not extracted")
    if any(b <= a for (_, a), (_, b) in zip(schedule, schedule[1:])):
        raise ArithmeticError("frontier is not increasing in d")
    incl = inclusion_bound(Polydisk(1, 2))
    return EmbeddingBound("polydisk:1,2", slope, schedule, incl, slope == incl)
