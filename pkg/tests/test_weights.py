from itertools import combinations, combinations_with_replacement, product
from math import comb, gcd

import pytest
from hypothesis import given, settings, strategies as st

from epaffine.repfunctors import doubling_orbits
from epaffine.weights import (ExponentMultiset, SpinExponentVector, expected_uniform_cap,
                              max_wedge_dim_over_order_r, realizable_multisets, signed_sum_counts,
                              spin_fixed_dim, subset_sum_counts, validate_f2_realizable, wedge_fixed_dim)


def brute_wedge(entries, m, r):
    return sum(1 for s in combinations(entries, m) if sum(s) % r == 0)


def brute_spin(t, r):
    """(all, even, odd) counts of sign patterns with zero signed sum."""
    total = even = odd = 0
    for eps in product((1, -1), repeat=len(t)):
        if sum(e * x for e, x in zip(eps, t)) % r == 0:
            total += 1
            if eps.count(-1) % 2:
                odd += 1
            else:
                even += 1
    return total, even, odd


odd_r = st.sampled_from([3, 5, 7, 9, 11, 13, 15])


@st.composite
def spin_inputs(draw):
    r = draw(odd_r)
    t = draw(st.lists(st.integers(0, r - 1), min_size=1, max_size=9))
    return r, tuple(t)


@st.composite
def exponent_lists(draw):
    r = draw(odd_r)
    entries = draw(st.lists(st.integers(0, r - 1), min_size=1, max_size=10))
    m = draw(st.integers(1, len(entries)))
    return r, entries, m


def test_validate_examples():
    assert validate_f2_realizable(7, [0, 0, 1, 2, 4])
    assert not validate_f2_realizable(7, [1, 2])
    assert validate_f2_realizable(5, [1, 2, 3, 4])


def test_exponent_multiset_checks():
    assert ExponentMultiset.of(7, [8, 2, 4]).entries == (1, 2, 4)
    with pytest.raises(ValueError):
        ExponentMultiset(4, (0,))
    with pytest.raises(ValueError):
        ExponentMultiset(7, (7,))


def test_wedge_examples():
    assert wedge_fixed_dim([0] * 5 + [1, 2, 4], 3, 7) == 11
    assert wedge_fixed_dim([0, 0, 1, 2, 3, 4, 5, 6], 3, 7) == 8
    assert wedge_fixed_dim(ExponentMultiset.of(7, [0] * 8), 3) == 56
    with pytest.raises(ValueError):
        wedge_fixed_dim([1, 2, 4], 4, 7)
    with pytest.raises(ValueError):
        wedge_fixed_dim([1, 2, 4], 2)


@settings(max_examples=400, deadline=None)
@given(exponent_lists())
def test_wedge_against_enumeration(inp):
    r, entries, m = inp
    assert wedge_fixed_dim(entries, m, r) == brute_wedge(entries, m, r)
    assert sum(subset_sum_counts(entries, m, r)) == comb(len(entries), m)


@settings(max_examples=300, deadline=None)
@given(exponent_lists(), st.integers(1, 100))
def test_wedge_invariant_under_units(inp, u):
    r, entries, m = inp
    if gcd(u, r) != 1:
        return
    base = wedge_fixed_dim(entries, m, r)
    assert wedge_fixed_dim([-e % r for e in entries], m, r) == base
    assert wedge_fixed_dim([u * e % r for e in entries], m, r) == base


def test_spin_examples():
    assert spin_fixed_dim(SpinExponentVector(7, (0, 0, 0, 1, 2, 3), "B")) == 16
    assert spin_fixed_dim(SpinExponentVector(7, (1, 2, 3, 4, 5, 6), "B")) == 10
    assert spin_fixed_dim(SpinExponentVector(7, (0, 0, 0, 0, 0, 1, 2, 3), "Deven")) == 32
    assert spin_fixed_dim(SpinExponentVector(7, (0, 0, 1, 1, 2, 2, 3, 3), "Deven")) == 20
    assert spin_fixed_dim(SpinExponentVector(5, (0, 0, 1, 1, 1, 2, 2, 2), "Deven")) == 24
    for n in range(1, 8):
        assert spin_fixed_dim(SpinExponentVector(11, (0,) * n, "B")) == 2 ** n
    with pytest.raises(ValueError):
        SpinExponentVector(7, (), "B")
    with pytest.raises(ValueError):
        SpinExponentVector(7, (1,), "D")


@settings(max_examples=400, deadline=None)
@given(spin_inputs())
def test_spin_against_enumeration(inp):
    r, t = inp
    total, even, odd = brute_spin(t, r)
    assert spin_fixed_dim(SpinExponentVector(r, t, "B")) == total
    assert spin_fixed_dim(SpinExponentVector(r, t, "Deven")) == even
    assert spin_fixed_dim(SpinExponentVector(r, t, "Dodd")) == odd


@settings(max_examples=400, deadline=None)
@given(spin_inputs(), st.integers(0, 8))
def test_spin_parity_properties(inp, i):
    r, t = inp
    b = spin_fixed_dim(SpinExponentVector(r, t, "B"))
    de = spin_fixed_dim(SpinExponentVector(r, t, "Deven"))
    do = spin_fixed_dim(SpinExponentVector(r, t, "Dodd"))
    assert b == de + do
    i %= len(t)
    flipped = t[:i] + ((-t[i]) % r,) + t[i + 1:]
    assert spin_fixed_dim(SpinExponentVector(r, flipped, "Deven")) == do
    assert spin_fixed_dim(SpinExponentVector(r, flipped, "Dodd")) == de
    even, odd = signed_sum_counts(t, r)
    assert sum(even) + sum(odd) == 2 ** len(t)


def test_half_spin_matches_branching():
    # with a zero first coordinate, the D-even count equals the full count of the rest
    for r in (3, 5, 7, 9, 11, 13):
        max_n = 8 if r <= 7 else 6
        for n in range(2, max_n + 1):
            for rest in combinations_with_replacement(range(r), n - 1):
                t = (0,) + rest
                assert (spin_fixed_dim(SpinExponentVector(r, t, "Deven"))
                        == spin_fixed_dim(SpinExponentVector(r, rest, "B")))


def _stable(r, t):
    eig = [x % r for x in t] + [-x % r for x in t]
    return validate_f2_realizable(r, eig)


def test_order_seven_encodings_are_forced():
    # order-7 elements of the rank-8 orthogonal group, up to signs and order of coordinates
    by_fixed = {}
    for t in combinations_with_replacement(range(4), 8):
        if _stable(7, t) and any(t):
            by_fixed.setdefault(2 * t.count(0), []).append(t)
    assert by_fixed[4] == [(0, 0, 1, 1, 2, 2, 3, 3)]
    assert by_fixed[10] == [(0, 0, 0, 0, 0, 1, 2, 3)]
    assert spin_fixed_dim(SpinExponentVector(7, by_fixed[4][0], "Deven")) == 20
    assert spin_fixed_dim(SpinExponentVector(7, by_fixed[10][0], "Deven")) == 32


def test_order_five_encoding():
    cands = [t for t in combinations_with_replacement(range(3), 8)
             if _stable(5, t) and 2 * t.count(0) == 4]
    assert (0, 0, 1, 1, 1, 2, 2, 2) in cands
    assert all(spin_fixed_dim(SpinExponentVector(5, t, "Deven")) == 24 for t in cands)


def test_realizable_multisets_are_complete():
    # compare against filtering every multiset of size 5 for r = 7
    brute = {m for m in combinations_with_replacement(range(7), 5) if validate_f2_realizable(7, m) and any(m)}
    got = {e.entries for e in realizable_multisets(5, 7)}
    assert got == brute


def test_max_wedge_examples():
    w = max_wedge_dim_over_order_r(8, 7)
    assert w.max == 11
    assert {e.entries for e in w.witnesses} == {(0, 0, 0, 0, 0, 1, 2, 4), (0, 0, 0, 0, 0, 3, 5, 6)}
    w = max_wedge_dim_over_order_r(12, 13)
    assert w.exists and w.max < comb(9, 3) + 1
    w = max_wedge_dim_over_order_r(7, 11)
    assert not w.exists and w.witnesses == []
    with pytest.raises(ValueError):
        max_wedge_dim_over_order_r(8, 5)
    with pytest.raises(ValueError):
        max_wedge_dim_over_order_r(15, 7)


def test_max_wedge_at_nine_exceeds_the_formula():
    w = max_wedge_dim_over_order_r(9, 7)
    assert w.max == 27 > expected_uniform_cap(9) == 21
    assert {e.entries for e in w.witnesses} == {(1, 1, 1, 2, 2, 2, 4, 4, 4), (3, 3, 3, 5, 5, 5, 6, 6, 6)}


def test_max_wedge_against_enumeration_small():
    # brute force over all realizable multisets, using the subset oracle
    for k in (7, 8):
        orbs = [(0,)] + doubling_orbits(7)
        best = 0
        for mults in product(range(k + 1), repeat=3):
            size = mults[0] + 3 * (mults[1] + mults[2])
            if size != k or mults[0] == k:
                continue
            entries = [e for o, mu in zip(orbs, mults) for e in o * mu]
            best = max(best, brute_wedge(entries, 3, 7))
        assert max_wedge_dim_over_order_r(k, 7).max == best
