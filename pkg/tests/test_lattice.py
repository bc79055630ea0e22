import random

import pytest
from hypothesis import given, settings, strategies as st

from cnlattice.distribution import enumerate_paths
from cnlattice.instances import random_boundary_site, random_kernel
from cnlattice.lattice import (
    InvalidAnchor,
    NotMember,
    SupportPoint,
    is_member,
    l1_ball,
    l1_sphere,
    order_index,
    support_set,
)


def P(s, *y):
    return SupportPoint(s, tuple(y))


def _oracle_support(kernel, t, x):
    """Support points read off the brute-force path law (reachability of y + s e_d)."""
    law = enumerate_paths(kernel, x, t)
    pts = [P(z[-1], *(z[:-1] + (0,))) for z, m in law.items() if z[-1] >= 1 and m > 0]
    return sorted(pts)


def test_support_1d_t3(sym1):
    assert support_set(3, (0,)).points == (P(1, 0), P(3, 0))
    assert _oracle_support(sym1, 3, (0,)) == [P(1, 0), P(3, 0)]


def test_support_2d_t2(uniform2):
    expected = (P(1, -1, 0), P(1, 1, 0), P(2, 0, 0))
    assert support_set(2, (0, 0)).points == expected
    assert tuple(_oracle_support(uniform2, 2, (0, 0))) == expected


def test_support_t1_single_point():
    assert support_set(1, (0,)).points == (P(1, 0),)


def test_anchor_is_last():
    for t in range(1, 6):
        sset = support_set(t, (2, -1, 0))
        assert sset.points[-1] == sset.anchor == P(t, 2, -1, 0)


@pytest.mark.parametrize("t,x", [(0, (0,)), (2, (1,)), (3, (0, 2))])
def test_invalid_anchor(t, x):
    with pytest.raises(InvalidAnchor):
        support_set(t, x)


def test_is_member_examples():
    assert not is_member(3, (0,), 2, (0,))
    assert is_member(2, (0, 0), 1, (1, 0))
    assert not is_member(2, (0, 0), 1, (2, 0))


def test_order_index_examples():
    s1 = support_set(3, (0,))
    assert order_index(s1, P(1, 0)) == 0
    assert order_index(s1, P(3, 0)) == 1
    assert order_index(support_set(2, (0, 0)), P(1, 1, 0)) == 1
    with pytest.raises(NotMember):
        order_index(s1, P(2, 0))


def test_support_sizes_match_sphere_counts():
    # |S(t,x)| = sum over s of #{y: |y - x| <= t - s, same parity}.
    assert len(support_set(6, (0,))) == 3
    assert len(support_set(6, (0, 0))) == 21
    assert len(support_set(4, (0, 0, 0))) == 30


def test_l1_sphere_counts():
    assert sum(1 for _ in l1_sphere((0, 0), 3)) == 12
    assert sum(1 for _ in l1_ball((0,), 2)) == 5


def test_serialization():
    assert support_set(3, (0,)).to_json() == {"t": 3, "x": [0], "points": [{"s": 1, "y": [0]}, {"s": 3, "y": [0]}]}


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(1, 3), t=st.integers(1, 5))
def test_membership_matches_definition_and_order(seed, d, t):
    rng = random.Random(seed)
    x = random_boundary_site(rng, d)
    sset = support_set(t, x)
    assert list(sset.points) == sorted(set(sset.points))
    for s in range(0, t + 2):
        for z in l1_ball(x[:-1], t + 1):
            y = z + (0,)
            assert is_member(t, x, s, y) == (P(s, *y) in sset)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(1, 2), t=st.integers(1, 6))
def test_nesting(seed, d, t):
    rng = random.Random(seed)
    x = random_boundary_site(rng, d)
    outer = set(support_set(t, x).points)
    for p in outer:
        assert set(support_set(p.s, p.y).points) <= outer


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(1, 2))
def test_members_at_equal_time_do_not_nest(seed, d):
    rng = random.Random(seed)
    t = rng.randint(1, 6)
    sset = support_set(t, random_boundary_site(rng, d))
    for p in sset:
        for q in sset:
            if p != q and p.s == q.s:
                assert q not in support_set(p.s, p.y)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(1, 2))
def test_support_equals_reachability_oracle(seed, d):
    rng = random.Random(seed)
    t = rng.randint(1, 6 if d == 1 else 4)
    x = random_boundary_site(rng, d)
    kernel = random_kernel(rng, d, x, t)
    assert list(support_set(t, x).points) == _oracle_support(kernel, t, x)
