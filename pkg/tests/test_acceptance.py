"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line with its wall time; the lines are printed
in the terminal summary (see conftest.py) and when this file is run directly.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from polyembed.capacities import Polydisk, ech_bound, folding_bound, inclusion_bound, volume_bound
from polyembed.core import ComponentSpec, HomologyClass, validate_building
from polyembed.cz_spectrum import AsymptoticOperatorSpec, asymptotic_operator_spectrum, rr_component_index
from polyembed.enumerator import (
    embedding_bound_polydisk12,
    enumerate_fiber_limits,
    enumerate_plane_classes,
    witness_degree,
)
from polyembed.index_area import index_bottom, index_neck, index_top
from polyembed.intersections import SignMode, sign_consistency

from builders import add_bottom_plane, drop_matching, fixture_buildings, flip_sign

RESULTS = []


class Criterion:
    def __init__(self, number, title, limit=None):
        self.number, self.title, self.limit = number, title, limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and (self.limit is None or elapsed < self.limit)
        budget = f" (limit {self.limit:g}s)" if self.limit else ""
        RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {self.number:>2}. {self.title}: {elapsed:.3f}s{budget}")
        if exc_type is None and not ok:
            raise AssertionError(f"criterion {self.number} took {elapsed:.2f}s, limit {self.limit}s")
        return False


def test_01_index_values():
    with Criterion(1, "index regression", 1.0):
        assert index_top(1, 0, 0, [HomologyClass(1, 0)]).index == 1  # C0
        assert index_top(1, 1, 1, [HomologyClass(-1, 0)]).index == 1  # C1
        assert index_top(0, 1, 1, []).index == 2  # closed fiber
        assert index_top(1, 1, 0, [HomologyClass(-2, 0)]).index == 1  # case 2, C1 on (-2,0)
        assert index_top(1, 0, 1, [HomologyClass(2, 0)]).index == 1  # case 2, C0 through E on (2,0)


def _random_component(rng):
    kind = rng.choice(("top", "neck", "bottom"))
    cls = lambda: (rng.randint(-5, 5), rng.randint(-5, 5))
    if kind == "top":
        return ComponentSpec.top(rng.randint(0, 6), rng.randint(-3, 6), *[cls() for _ in range(rng.randint(0, 7))])
    if kind == "neck":
        sp, sm = rng.randint(0, 5), rng.randint(0, 5)
        if sp + sm == 0:
            sp = 1
        return ComponentSpec.neck([cls() for _ in range(sp)], [cls() for _ in range(sm)])
    return ComponentSpec.bottom(*[cls() for _ in range(rng.randint(1, 8))])


def test_02_riemann_roch_equivalence():
    rng = random.Random(2)
    with Criterion(2, "Riemann-Roch equivalence on 1000 inputs", 5.0):
        for _ in range(1000):
            c = _random_component(rng)
            if c.level_kind.value == "top":
                orbits = [e.orbit for e in c.ends]
                expected = index_top(len(orbits), c.degree, c.exceptional, orbits).index
            elif c.level_kind.value == "neck":
                expected = index_neck(len(c.positive_ends), len(c.negative_ends)).index
            else:
                expected = index_bottom(len(c.ends)).index
            assert rr_component_index(c) == expected


def test_03_spectrum():
    with Criterion(3, "asymptotic operator spectrum", 30.0):
        for T in (1.0, 2 * math.pi):
            coarse = asymptotic_operator_spectrum(AsymptoticOperatorSpec(T, 256), (-8, 8))
            fine = asymptotic_operator_spectrum(AsymptoticOperatorSpec(T, 512), (-8, 8))
            for target in (0.0, -T):
                [p] = [p for p in coarse if abs(p.eigenvalue - target) < 1e-3]
                assert abs(p.eigenvalue - target) <= 1e-8
                assert p.multiplicity == 1 and p.winding == 0
            first_positive = min((p for p in coarse if p.eigenvalue > 1e-6), key=lambda p: p.eigenvalue)
            assert first_positive.winding >= 1
            assert len(coarse) == len(fine)
            for a, b in zip(coarse, fine):
                assert abs(a.eigenvalue - b.eigenvalue) <= 1e-4
                assert (a.winding, a.multiplicity) == (b.winding, b.multiplicity)


def test_04_fiber_limits():
    with Criterion(4, "plane classes and fiber limits at R = 5/2", 1.0):
        assert enumerate_plane_classes(1) == [HomologyClass(1, 0)]
        assert enumerate_plane_classes(2) == [HomologyClass(2, 0)]
        configs = enumerate_fiber_limits(Fraction(5, 2))
        assert [(c.kind, c.case) for c in configs] == [("closed", None), ("broken", 1), ("broken", 2)]
        assert [c.exclusion for c in configs] == [None, None, "G1-blowdown"]


def test_05_witness_frontier():
    with Criterion(5, "witness degree frontier for q <= 20", 10.0):
        Rs = sorted({Fraction(p, q) for q in range(1, 21) for p in range(2 * q + 1, 3 * q)})
        for R in Rs:
            least = next(d for d in range(1, 1000) if d * (3 - R) > 1)
            assert witness_degree(R) == least, R
        assert witness_degree(Fraction(5, 2)) == 3
        assert witness_degree(Fraction(29, 10)) == 11
        assert witness_degree(3) is None


def test_06_embedding_bound():
    with Criterion(6, "embedding bound for P(1,2) is 3 and sharp"):
        res = embedding_bound_polydisk12()
        assert res.bound == 3
        assert res.bound == inclusion_bound(Polydisk(1, 2))
        assert res.sharp is True


def test_07_capacity_comparison():
    with Criterion(7, "ECH and volume bounds stay below 3", 5.0):
        p = Polydisk(1, 2)
        assert ech_bound(p, 100) == 2
        assert volume_bound(p) == 2
        assert ech_bound(p, 100) < 3 and volume_bound(p) < 3


def test_08_folding_ordering():
    with Criterion(8, "folding beats inclusion"):
        for s in (Fraction(5, 2), Fraction(3), Fraction(4), Fraction(10)):
            p = Polydisk(1, s)
            assert folding_bound(p) == 2 + s / 2
            assert folding_bound(p) < 1 + s


def test_09_mutations():
    rng = random.Random(9)
    pool = fixture_buildings(rng, n_random=60)
    with Criterion(9, "500 building mutations name the broken rule", 5.0):
        for b in pool:
            assert validate_building(b).ok
        for i in range(500):
            b = rng.choice(pool)
            kind = i % 3
            if kind == 0 and b.matchings:
                mutated, rule = drop_matching(b, rng), "unmatched-end"
            elif kind == 1 and any(c.ends for c in b.components):
                mutated, rule = flip_sign(b, rng)
            else:
                mutated, rule = add_bottom_plane(b, rng), "contractibility"
            assert rule in validate_building(mutated).rules, (i, rule)


def test_10_sign_rule():
    with Criterion(10, "sign rule is infeasible exactly on mixed patterns", 1.0):
        for n in range(0, 7):
            for signs in itertools.product((1, -1), repeat=n):
                mode = sign_consistency([HomologyClass(s, 0) for s in signs])
                assert (mode is SignMode.INFEASIBLE) == (len(set(signs)) == 2)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
