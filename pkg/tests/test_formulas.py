from math import ceil

import pytest
from hypothesis import given, strategies as st

from coxlen import formulas as F
from coxlen.core import INF


def test_universal_power_length():
    assert F.universal_power_length(3, 4, 2) == 6
    assert F.universal_power_length(3, 0, 1) == 1
    assert F.universal_power_length(5, 3, 5) == 14
    assert F.universal_power_length(3, 0, 0) == 0


def test_normalize_r0():
    assert F.normalize(3, 2, 0) == (1, 3)
    assert F.normalize(3, 0, 0) == (0, 0)
    with pytest.raises(ValueError):
        F.normalize(3, 1, 4)


def test_chi():
    assert F.chi(3, 3) == 4
    assert F.chi(4, 3) == 5
    assert F.chi(5, 4) == 9
    with pytest.raises(ValueError):
        F.chi(INF, 3)


def test_unbounded_condition_examples():
    assert F.unbounded_condition(5, 3)
    assert not F.unbounded_condition(4, 3)
    assert F.unbounded_condition(3, 4)


def test_theorem1_lower_bound():
    assert F.theorem1_lower_bound(3, 5, 7) == 3
    assert F.theorem1_lower_bound(3, 5, 7) == ceil(21 * 5 / 7 - 14 + 2)
    with pytest.raises(ValueError):
        F.theorem1_lower_bound(4, 3, 0)


def test_upper_bound_rank3():
    assert F.upper_bound_rank3(4, 5, 2) == 5
    assert F.upper_bound_rank3(3, 0, 1) == 1
    assert F.upper_bound_rank3(5, 4, 3) == 5


def test_upper_bound_rank_ge4():
    assert F.upper_bound_rank_ge4(4, 3, 2, 1) == 5
    assert F.upper_bound_rank_ge4(4, 3, 3, 1) == 5
    assert F.upper_bound_rank_ge4(5, 3, 4, 2) == 10
    with pytest.raises(ValueError):
        F.upper_bound_rank_ge4(3, 3, 1, 1)


def test_commuting_rank3_length():
    assert F.commuting_rank3_length(2) == {2}
    assert F.commuting_rank3_length(3) == {1, 3}
    assert F.commuting_rank3_length(1) == {1, 3}


def test_bound_report_json():
    rep = F.bound_report(3, 4, 5, 2)
    d = rep.to_json()
    assert d["upper"] == 5 and d["params"]["lambda"] == 5
    assert d["computed"] is None


@given(st.integers(3, 8), st.integers(3, 12), st.integers(1, 49))
def test_theorem1_bound_monotone(n, k, lam):
    if F.unbounded_condition(k, n):
        assert F.theorem1_lower_bound(n, k, lam + 1) >= F.theorem1_lower_bound(n, k, lam)


@given(st.integers(3, 8), st.integers(3, 12), st.integers(0, 20), st.integers(1, 8))
def test_bounds_bracket_universal(n, k, lam, r):
    r = min(r, n)
    up = F.upper_bound(n, k, lam, r)
    assert F.power_lower_bound(n, k, lam, r) <= up <= F.universal_power_length(n, lam, r)
    assert up % 2 == (lam * n + r) % 2


def test_power_lower_bound_matches_theorem1_at_r0():
    for n in range(3, 7):
        for k in range(3, 9):
            for lam in range(1, 12):
                a = F.power_lower_bound(n, k, lam, 0)
                b = max(F.theorem1_lower_bound(n, k, lam), (lam * n) % 2)
                assert a == b
