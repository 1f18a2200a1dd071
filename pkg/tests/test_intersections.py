import itertools

import pytest
from hypothesis import given, strategies as st

from polyembed.core import HomologyClass
from polyembed.errors import NonHorizontalClass, UnknownComponent
from polyembed.intersections import (
    LeafKind,
    SignMode,
    StarLedger,
    check_ledger,
    ledger_for_degree_d,
    sign_consistency,
    star_broken_sum,
    star_lower_bounds,
)

horizontal = st.builds(HomologyClass, st.integers(1, 5) | st.integers(-5, -1), st.just(0))


@given(st.lists(horizontal, max_size=8))
def test_sign_modes(ends):
    mode = sign_consistency(ends)
    signs = {c.k > 0 for c in ends}
    if not ends:
        assert mode is SignMode.EMPTY
    elif len(signs) == 2:
        assert mode is SignMode.INFEASIBLE
    else:
        assert mode is (SignMode.ALL_POSITIVE if signs == {True} else SignMode.ALL_NEGATIVE)


def test_mixed_allowed_with_larger_budget():
    ends = [HomologyClass(1, 0), HomologyClass(-1, 0)]
    assert sign_consistency(ends, broken_sum=2) is SignMode.ALL_POSITIVE


def test_lower_bounds():
    assert star_lower_bounds([HomologyClass(2, 0)]) == {LeafKind.C0: 1, LeafKind.C1: 0}
    assert star_lower_bounds([HomologyClass(-1, 0)] * 3) == {LeafKind.C0: 0, LeafKind.C1: 1}
    with pytest.raises(NonHorizontalClass):
        star_lower_bounds([HomologyClass(1, 1)])
    with pytest.raises(ValueError):
        star_lower_bounds([HomologyClass(0, 0)])


@pytest.mark.parametrize("mode", [SignMode.ALL_NEGATIVE, SignMode.ALL_POSITIVE])
@pytest.mark.parametrize("n", [0, 1, 5])
def test_degree_d_ledger_is_consistent(mode, n):
    ledger = ledger_for_degree_d(mode, n)
    assert check_ledger(ledger) == []
    assert star_broken_sum(ledger, "f0") == 1
    assert len(ledger.components()) == n + 1


def test_no_ledger_for_mixed():
    with pytest.raises(ValueError):
        ledger_for_degree_d(SignMode.INFEASIBLE, 2)


def test_ledger_rules_named():
    bad = StarLedger({("a", LeafKind.C0): -1, ("a", LeafKind.C1): 1, ("a", LeafKind.CLOSED_FIBER): 1,
                      ("b", LeafKind.CLOSED_FIBER): 1, ("b", LeafKind.C0): 1})
    rules = {v.rule for v in check_ledger(bad)}
    assert rules == {"star-nonnegative", "broken-sum", "building-inequality"}


def test_unknown_component():
    with pytest.raises(UnknownComponent):
        star_broken_sum(StarLedger({}), "f9")


def test_exhaustive_small_patterns():
    for n in range(0, 5):
        for signs in itertools.product((1, -1), repeat=n):
            mode = sign_consistency([HomologyClass(s, 0) for s in signs])
            assert (mode is SignMode.INFEASIBLE) == (len(set(signs)) == 2)
