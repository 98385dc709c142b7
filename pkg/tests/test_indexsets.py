from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fractalsum.indexsets import (
    Blocks,
    Checkpoints,
    ExplicitPrefix,
    HorizonError,
    ResidueClass,
    greedy_checkpoints,
    natural_numbers,
    parse_index_set,
    partition_limsup,
    residue_cover,
    residue_partition,
)

ODDS = ResidueClass(2, 1)


def scan_checkpoints(member, beta, count, limit):
    """Brute-force oracle: walk n upward and test the inequality directly."""
    ns, prev, running = [], 0, 0
    k = 1
    block = 0
    n = prev
    while len(ns) < count:
        n += 1
        if n > limit:
            raise HorizonError("scan limit")
        block += member(n)
        if F(block, n) > beta - F(1, k):
            ns.append(n)
            prev, block, k = n, 0, k + 1
    return tuple(ns)


def test_prefix_count_examples():
    assert ODDS.prefix_count(10) == 5
    assert natural_numbers().prefix_count(7) == 7
    assert Blocks([(2, 3), (11, 41)]).prefix_count(20) == 12


def test_horizon_is_enforced():
    S = ExplicitPrefix([1, 4, 10], 12)
    assert S.prefix_count(12) == 3
    with pytest.raises(HorizonError):
        S.prefix_count(13)
    capped = Blocks([(1, 2)], horizon=5)
    with pytest.raises(HorizonError):
        capped.prefix_count(6)


def test_blocks_validate_and_merge():
    with pytest.raises(ValueError):
        Blocks([(1, 4), (3, 6)])
    with pytest.raises(ValueError):
        Blocks([(0, 2)])
    assert Blocks([(1, 2), (3, 5)]).blocks == ((1, 5),)


def test_parse_literals():
    assert parse_index_set("mod:2,1") == ODDS
    assert parse_index_set("all").prefix_count(9) == 9
    assert parse_index_set("blocks:2-3,11-41").prefix_count(20) == 12
    S = parse_index_set("list:1,4,10@12")
    assert S.members_upto(12) == [1, 4, 10]
    with pytest.raises(ValueError):
        parse_index_set("nope")


def test_greedy_checkpoints_naturals():
    cps = greedy_checkpoints(natural_numbers(), 1, 4)
    assert cps.ns == (1, 3, 10, 41)
    assert greedy_checkpoints(natural_numbers(), 1, 5).ns[-1] == 206
    assert cps.verify(natural_numbers()) and cps.is_minimal(natural_numbers())


def test_greedy_checkpoints_recurrence_to_twelve():
    cps = greedy_checkpoints(natural_numbers(), 1, 12)
    ns = cps.all
    assert all(ns[k] == k * ns[k - 1] + 1 for k in range(1, 13))
    assert ns[12] == 823059745
    assert cps.verify(natural_numbers()) and cps.is_minimal(natural_numbers())


def test_greedy_checkpoints_odds():
    # the minimal scan gives n_2 = 3: the single odd number 3 already makes the density positive
    assert greedy_checkpoints(ODDS, F(1, 2), 2).ns == (1, 3)
    assert greedy_checkpoints(ODDS, F(1, 2), 5).ns == scan_checkpoints(lambda n: n % 2, F(1, 2), 5, 10**5)


def test_greedy_checkpoints_horizon_error():
    with pytest.raises(HorizonError):
        greedy_checkpoints(ExplicitPrefix([1, 2], 30), 1, 4)
    with pytest.raises(HorizonError):
        greedy_checkpoints(ResidueClass(3, 0), 1, 3, limit=1000)


def test_tampered_checkpoints_fail_verification():
    cps = greedy_checkpoints(natural_numbers(), 1, 4)
    assert not Checkpoints((1, 3, 9, 41), cps.beta, cps.counts).verify(natural_numbers())
    assert not Checkpoints((1, 3, 11, 45), F(1), (1, 2, 8, 34)).is_minimal(natural_numbers())


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 5), st.sampled_from([F(1, 8), F(1, 7), F(1, 10)]), st.integers(1, 5))
def test_greedy_matches_linear_scan_on_residues(modulus, r, beta, count):
    r %= modulus
    S = ResidueClass(modulus, r)
    member = lambda n: int(n % modulus == r)
    try:
        expected = scan_checkpoints(member, beta, count, 20_000)
    except HorizonError:
        return
    cps = greedy_checkpoints(S, beta, count)
    assert cps.ns == expected


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 6), st.integers(0, 8)), min_size=1, max_size=8), st.integers(1, 4))
def test_greedy_matches_linear_scan_on_blocks(gaps, count):
    blocks, pos = [], 0
    for gap, length in gaps:
        a = pos + gap
        blocks.append((a, a + length))
        pos = a + length + 1
    horizon = pos + 5
    S = Blocks(blocks, horizon)
    members = set(S.members_upto(horizon))
    beta = F(1, 3)
    try:
        expected = scan_checkpoints(lambda n: int(n in members), beta, count, horizon)
    except HorizonError:
        with pytest.raises(HorizonError):
            greedy_checkpoints(S, beta, count)
        return
    assert greedy_checkpoints(S, beta, count).ns == expected


def test_partition_limsup_examples():
    p = partition_limsup(natural_numbers(), 2, 2)
    assert p.checkpoints.ns == (1, 3, 10, 41)
    assert p.subsets[0].blocks == ((1, 1), (4, 10))
    assert p.subsets[1].blocks == ((2, 3), (11, 41))
    p3 = partition_limsup(natural_numbers(), 3, 1)
    assert [s.blocks for s in p3.subsets] == [((1, 1),), ((2, 3),), ((4, 10),)]


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(1, 2), st.sampled_from([natural_numbers(), ResidueClass(2, 1), ResidueClass(3, 0)]))
def test_partition_is_disjoint_cover_with_density(ell, rounds, S):
    beta = F(1, 3) if S.prefix_count(6) < 6 else F(1)
    p = partition_limsup(S, ell, rounds, beta=beta)
    H = p.checkpoints.all[-1]
    members = [set(sub.members_upto(H)) for sub in p.subsets]
    union = set().union(*members)
    assert sum(map(len, members)) == len(union)
    assert union == set(S.members_upto(H))
    for j in range(1, ell + 1):
        assert all(w["exceeds"] for w in p.density_witness(j))


def test_residue_partition_examples():
    s1, s2 = residue_partition(2)
    assert s1.members_upto(8) == [2, 4, 6, 8] and s2.members_upto(9) == [3, 5, 7, 9]
    s = residue_partition(3)
    assert [x.members_upto(10) for x in s] == [[3, 6, 9], [4, 7, 10], [5, 8]]
    with pytest.raises(ValueError):
        residue_partition(1)


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_residue_partition_union(ell):
    H = 500
    got = sorted(x for s in residue_partition(ell) for x in s.members_upto(H)) + list(range(1, ell))
    assert sorted(got) == list(range(1, H + 1))
    cover = sorted(x for s in residue_cover(ell) for x in s.members_upto(H))
    assert cover == list(range(1, H + 1))


@pytest.mark.parametrize("ell", [2, 3, 7])
def test_residue_density_bound(ell):
    n = np.arange(1, 10**6 + 1)
    for S in residue_partition(ell):
        counts = np.cumsum(np.isin(n % ell, [S.residue]) & (n >= S.start))
        assert np.all(np.abs(counts / n - 1 / ell) <= ell / n)
        for probe in (1, 17, 999, 10**6):
            assert S.prefix_count(probe) == counts[probe - 1]


@given(st.integers(1, 9), st.integers(0, 8), st.integers(1, 12), st.integers(0, 300), st.integers(0, 300))
def test_residue_count_between_matches_enumeration(mod, r, start, lo, length):
    S = ResidueClass(mod, r % mod, start)
    hi = lo + length
    expected = sum(1 for k in range(max(lo, 1), hi + 1) if k >= start and k % mod == r % mod)
    assert S.count_between(lo, hi) == expected
