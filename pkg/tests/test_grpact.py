import random
from itertools import combinations

import numpy as np
import pytest

from conftest import brute_closure, rand_invertible
from epaffine.datasets import general_linear, gl_order, singer_group, singer_normalizer
from epaffine.gf2core import BitMatrix, GF2Error
from epaffine.grpact import (CapExceeded, EnumeratedGroup, MatrixGroup, PermAction, enumerate_elements,
                             format_group, induced_permutation, is_primitive, is_transitive,
                             minimal_block_system, orbit_decomposition, parse_group, tiny_maximal_subgroups,
                             verify_block_system)
from epaffine.repfunctors import parse_tag


def cyclic_action(n):
    return PermAction(n, (tuple((i + 1) % n for i in range(n)),))


def brute_blocks(p):
    """All nontrivial blocks containing point 0."""
    out = []
    for size in range(2, p.degree):
        if p.degree % size:
            continue
        for rest in combinations(range(1, p.degree), size - 1):
            b = frozenset((0,) + rest)
            ok = True
            # closure of the block under the generated group
            images = {b}
            frontier = [b]
            while frontier and ok:
                nxt = []
                for blk in frontier:
                    for img in p.images:
                        c = frozenset(img[x] for x in blk)
                        if c in images:
                            continue
                        if any(c & d for d in images):
                            ok = False
                            break
                        images.add(c)
                        nxt.append(c)
                    if not ok:
                        break
                frontier = nxt
            if ok:
                out.append(b)
    return out


def test_orbits_examples():
    assert orbit_decomposition(general_linear(3)).sizes == [7]
    assert orbit_decomposition(singer_group(4)).sizes == [15]
    t = MatrixGroup(2, (BitMatrix.from_lists([[1, 1], [0, 1]]),))
    # row convention: e_0 -> e_0 + e_1 and e_1 is fixed
    assert orbit_decomposition(t).orbits == [(0b01, 0b11), (0b10,)]


def test_orbits_partition_and_divide(rng):
    for _ in range(40):
        k = rng.randint(2, 6)
        gens = tuple(rand_invertible(rng, k) for _ in range(rng.randint(1, 2)))
        h = MatrixGroup(k, gens)
        od = orbit_decomposition(h)
        pts = [v for orb in od.orbits for v in orb]
        assert sorted(pts) == list(range(1, 1 << k))
        assert [o[0] for o in od.orbits] == sorted(o[0] for o in od.orbits)
        if k <= 4:
            n = len(brute_closure(gens, k))
            assert all(n % s == 0 for s in od.sizes)
        for i, orb in enumerate(od.orbits):
            for g in gens:
                assert all(od.orbit_of(g.apply(v)) == i for v in orb)


def test_orbits_on_wedge_module():
    od = orbit_decomposition(general_linear(4), parse_tag("wedge2"))
    # decomposable and non-degenerate 2-forms on F_2^4
    assert sorted(od.sizes) == [28, 35]
    assert sum(od.sizes) == 2 ** 6 - 1


def test_orbit_cap():
    with pytest.raises(CapExceeded):
        orbit_decomposition(general_linear(4), cap_dim=3)


def test_transversal_and_stabilizer():
    h = general_linear(3)
    od = orbit_decomposition(h)
    words = od.transversal(0)
    rep = od.representative(0)
    for v, w in words.items():
        assert od.word_matrix(w).apply(rep) == v
    stab = od.stabilizer_generators(0)
    assert all(g.apply(rep) == rep for g in stab)
    assert len(brute_closure(stab, 3)) == 168 // 7


def test_induced_permutation_examples():
    h = MatrixGroup(3, (BitMatrix.identity(3),))
    p = induced_permutation(h, [1, 2, 4])
    assert p.images == ((0, 1, 2),)
    c7 = singer_group(3)
    orb = orbit_decomposition(c7).orbits[0]
    p = induced_permutation(c7, orb)
    assert p.degree == 7
    x, seen = 0, set()
    while x not in seen:
        seen.add(x)
        x = p.images[0][x]
    assert len(seen) == 7
    with pytest.raises(ValueError):
        induced_permutation(c7, [1, 2])


def test_induced_permutation_respects_products(rng):
    for _ in range(20):
        g, h = rand_invertible(rng, 4), rand_invertible(rng, 4)
        grp = MatrixGroup(4, (g, h, g @ h))
        for orb in orbit_decomposition(grp).orbits:
            p = induced_permutation(grp, orb)
            a, b, ab = p.images
            assert all(ab[i] == b[a[i]] for i in range(p.degree))


def test_primitivity_examples():
    assert is_primitive(cyclic_action(7)) == (True, None)
    ok, blocks = is_primitive(cyclic_action(15))
    assert not ok and {len(b) for b in blocks} <= {3, 5}
    assert verify_block_system(cyclic_action(15), blocks)
    gl3 = general_linear(3)
    assert is_primitive(induced_permutation(gl3, range(1, 8)))[0]
    with pytest.raises(ValueError):
        is_primitive(PermAction(3, ((0, 1, 2),)))


@pytest.mark.parametrize("n", [2, 3, 5, 7, 11, 13, 17])
def test_prime_degree_is_primitive(n):
    assert is_primitive(cyclic_action(n))[0]


def test_primitivity_against_block_enumeration():
    rng = random.Random(11)
    for _ in range(150):
        n = rng.randint(2, 10)
        gens = []
        for _ in range(rng.randint(1, 2)):
            perm = list(range(n))
            rng.shuffle(perm)
            gens.append(tuple(perm))
        p = PermAction(n, tuple(gens))
        if not is_transitive(p):
            continue
        ok, blocks = is_primitive(p)
        assert ok == (not brute_blocks(p))
        if not ok:
            assert verify_block_system(p, blocks)


def test_minimal_block_system_is_finest():
    p = cyclic_action(12)
    assert minimal_block_system(p, 6) == [(i, i + 6) for i in range(6)]
    assert len(minimal_block_system(p, 4)) == 4


def test_verify_block_system_rejects():
    p = cyclic_action(6)
    assert not verify_block_system(p, [[0, 1], [2, 3], [4, 5]][:2])
    assert not verify_block_system(p, [[0, 1, 2, 3, 4, 5]])
    assert not verify_block_system(p, [[0, 2], [1, 3], [4, 5]])
    assert verify_block_system(p, [[0, 2, 4], [1, 3, 5]])


def test_enumerate_examples():
    assert enumerate_elements(MatrixGroup(3, (BitMatrix.identity(3),))) == [BitMatrix.identity(3)]
    assert len(enumerate_elements(singer_group(4))) == 15
    assert len(enumerate_elements(general_linear(3))) == 168
    assert len(enumerate_elements(general_linear(4))) == gl_order(4)
    with pytest.raises(CapExceeded):
        enumerate_elements(general_linear(4), cap=1000)
    with pytest.raises(ValueError):
        enumerate_elements(MatrixGroup(3, general_linear(3).generators, order=100))


def test_enumeration_matches_brute_force(rng):
    for _ in range(20):
        k = rng.randint(2, 4)
        gens = tuple(rand_invertible(rng, k) for _ in range(rng.randint(1, 2)))
        got = {g.data for g in enumerate_elements(MatrixGroup(k, gens))}
        assert got == set(brute_closure(gens, k))


def test_enumerated_group_tables():
    g = EnumeratedGroup(singer_normalizer(3))
    assert g.order == 21
    for x in range(g.order):
        rx = g.right_table(x)
        for y in range(0, g.order, 5):
            assert g.element(int(rx[y])) == g.element(y) @ g.element(x)
    assert g.element_order(0) == 1


def _maximals_oracle(h):
    """Maximal subgroups by brute force.

    Every subgroup of these groups is 2-generated, and up to conjugacy the
    first generator can be taken from a list of class representatives.  All
    conjugates of the closures are then compared by inclusion.
    """
    elems = brute_closure(h.generators, h.dim)
    n = len(elems)
    inv = {k: m.inverse() for k, m in elems.items()}
    reps, covered = [], set()
    for k, x in elems.items():
        if k not in covered:
            reps.append(x)
            covered |= {(inv[c] @ x @ elems[c]).data for c in elems}
    found = set()
    for a in reps:
        for b in elems.values():
            s = frozenset(brute_closure([a, b], h.dim))
            if len(s) < n:
                found.add(s)
    found.add(frozenset([BitMatrix.identity(h.dim).data]))
    everything = set()
    for s in found:
        for c in elems:
            everything.add(frozenset((inv[c] @ elems[x] @ elems[c]).data for x in s))
    return [s for s in everything if not any(s < t for t in everything)]


@pytest.mark.parametrize("h", [singer_group(3), singer_group(4), singer_normalizer(3), general_linear(3)],
                         ids=["C7", "C15", "7:3", "GL3"])
def test_tiny_maximals_against_oracle(h):
    got = tiny_maximal_subgroups(h)
    oracle = _maximals_oracle(h)
    assert sum(c.class_size for c in got) == len(oracle)
    assert sorted(c.order for c in got for _ in range(c.class_size)) == sorted(len(s) for s in oracle)
    for c in got:
        members = frozenset(brute_closure(c.generators, h.dim))
        assert members in oracle


def test_tiny_maximals_examples():
    assert [(c.order, c.class_size) for c in tiny_maximal_subgroups(singer_group(3))] == [(1, 1)]
    assert sorted((c.order, c.class_size) for c in tiny_maximal_subgroups(singer_group(4))) == [(3, 1), (5, 1)]
    gl3 = tiny_maximal_subgroups(general_linear(3))
    assert sorted((c.order, c.class_size) for c in gl3) == [(21, 8), (24, 7), (24, 7)]
    assert sum(c.class_size for c in gl3) == 22


def test_tiny_maximals_gl3_are_maximal():
    h = general_linear(3)
    elems = brute_closure(h.generators, 3)
    for c in tiny_maximal_subgroups(h):
        members = brute_closure(c.generators, 3)
        assert len(members) == c.order
        # adjoining any outside element gives everything
        for key, x in list(elems.items())[::7]:
            if key not in members:
                assert len(brute_closure(list(c.generators) + [x], 3)) == 168


def test_tiny_maximals_no_containment():
    h = general_linear(3)
    found = [frozenset(brute_closure(c.generators, 3)) for c in tiny_maximal_subgroups(h)]
    for a in found:
        for b in found:
            assert a == b or not a < b


def test_tiny_maximals_trivial_group():
    assert tiny_maximal_subgroups(MatrixGroup(2, (BitMatrix.identity(2),))) == []


def test_group_file_round_trip():
    for h in [general_linear(4), singer_normalizer(3), MatrixGroup(2, (BitMatrix.identity(2),))]:
        text = format_group(h)
        back = parse_group(text)
        assert back == h
        assert format_group(back) == text


@pytest.mark.parametrize("bad", ["", "GF2GROUP 2\n", "GF2GROUP 2 1 colour=red\nGF2 2 2\n10\n01\n",
                                 "GF2GROUP 2 2\nGF2 2 2\n10\n01\n", "GF2GROUP 2 1\nGF2 2 2\n10\n10\n",
                                 "GF2GROUP 2 1\nGF2 3 3\n100\n010\n001\n"])
def test_group_file_errors(bad):
    with pytest.raises(GF2Error):
        parse_group(bad)


def test_orbit_ordering_deterministic():
    a = orbit_decomposition(singer_normalizer(3), parse_tag("wedge2"))
    b = orbit_decomposition(singer_normalizer(3), parse_tag("wedge2"))
    assert a.orbits == b.orbits
    assert np.all(np.diff([o[0] for o in a.orbits]) > 0)
