import itertools
import json

import pytest
from hypothesis import given, strategies as st

from chromalat.poset import (
    BudgetError,
    CycleError,
    MonotoneMap,
    PosetError,
    antichain,
    build_poset,
    chain_poset,
    comma_over,
    comma_under,
    compose,
    constant,
    covers,
    disjoint_union,
    dual,
    empty_poset,
    identity,
    induced_subposet,
    is_cosieve,
    is_embedding,
    is_sieve,
    map_leq,
    mapping_poset,
    pi0,
    point,
    poset_from_json,
    poset_to_json,
    product,
    skeleton,
    subdivision,
    subset_lattice,
    to_dot,
)
from chromalat.homotopy import subdivision_map

from conftest import monotone_maps, posets


def axioms_hold(P):
    n = len(P)
    for i in range(n):
        if not P.leq(i, i):
            return False
        for j in range(n):
            if i != j and P.leq(i, j) and P.leq(j, i):
                return False
            for k in range(n):
                if P.leq(i, j) and P.leq(j, k) and not P.leq(i, k):
                    return False
    return True


def relation_set(P):
    return {(i, j) for i in P for j in P if P.leq(i, j)}


def brute_chains(P):
    """Nonempty subsets of P that are totally ordered, by direct enumeration."""
    out = []
    for r in range(1, len(P) + 1):
        for sub in itertools.combinations(range(len(P)), r):
            if all(P.comparable(a, b) for a, b in itertools.combinations(sub, 2)):
                out.append(sub)
    return out


# --- construction ----------------------------------------------------------


def test_build_point():
    e = build_poset(["a"], [])
    assert len(e) == 1 and relation_set(e) == {(0, 0)}


def test_build_chain():
    P = build_poset(["a", "b"], [(0, 1)])
    assert relation_set(P) == {(0, 0), (0, 1), (1, 1)}


def test_build_cycle_names_witness():
    with pytest.raises(CycleError) as info:
        build_poset(["a", "b"], [(0, 1), (1, 0)])
    assert info.value.cycle[0] == info.value.cycle[-1]
    assert set(info.value.cycle) == {"a", "b"}


def test_build_closes_transitively():
    P = build_poset("abc", [(0, 1), (1, 2)])
    assert P.leq(0, 2)


def test_build_rejects_bad_index():
    with pytest.raises(PosetError):
        build_poset("ab", [(0, 5)])


def test_constructor_checks_axioms():
    from chromalat.poset import Poset

    with pytest.raises(PosetError):
        Poset("ab", [0b11, 0b11])  # antisymmetry
    with pytest.raises(PosetError):
        Poset("abc", [0b011, 0b110, 0b100])  # 0<=1<=2 without 0<=2


def test_empty_poset_is_legal():
    E = empty_poset()
    assert len(E) == 0 and pi0(E) == [] and covers(E) == []


# --- dual, product, subset lattice ------------------------------------------


def test_dual_of_point():
    assert dual(point()) == point()


def test_dual_of_two_chain_swaps():
    D = dual(chain_poset(1))
    assert D.leq(1, 0) and not D.leq(0, 1)


def test_dual_subset_lattice_is_reverse_inclusion():
    D = dual(subset_lattice(2))
    for a in range(4):
        for b in range(4):
            assert D.leq(a, b) == (b & ~a == 0)


def test_product_unit():
    P = build_poset("abc", [(0, 1), (0, 2)])
    EP = product(point(), P)
    assert relation_set(EP) == relation_set(P)


def test_product_square_has_nine_relations():
    sq = product(chain_poset(1), chain_poset(1))
    # oracle: enumerate all pairs of pairs
    expected = sum(
        1
        for (p, q), (p2, q2) in itertools.product(itertools.product(range(2), repeat=2), repeat=2)
        if p <= p2 and q <= q2
    )
    assert len(sq) == 4 and len(relation_set(sq)) == expected == 9


def test_product_of_antichains():
    A = product(antichain(2), antichain(2))
    assert len(A) == 4 and relation_set(A) == {(i, i) for i in range(4)}


def test_subset_lattice_sizes():
    assert len(subset_lattice(0)) == 1
    assert len(subset_lattice(3)) == 8


def test_subset_lattice_covers_count():
    # oracle: pairs i ⊂ j with |j \ i| = 1
    expected = sum(1 for i in range(8) for j in range(8) if i & ~j == 0 and bin(j & ~i).count("1") == 1)
    assert len(covers(subset_lattice(3))) == expected == 12


def test_subset_lattice_cap():
    with pytest.raises(BudgetError):
        subset_lattice(7)


# --- induced subposets, sieves, commas ----------------------------------------


def test_induced_all_is_identity():
    P = subset_lattice(2)
    S, emb = induced_subposet(P, range(4))
    assert S == P and emb == identity(P)


def test_nonempty_subsets():
    P = subset_lattice(3)
    S, emb = induced_subposet(P, range(1, 8))
    assert len(S) == 7
    assert sorted(emb(i) for i in S.minimal()) == [1, 2, 4]
    assert is_embedding(emb)


def test_induced_on_maximal_antichain_is_discrete():
    P = build_poset("abcd", [(0, 2), (0, 3), (1, 2), (1, 3)])
    S, _ = induced_subposet(P, P.maximal())
    assert relation_set(S) == {(0, 0), (1, 1)}


def test_sieves_and_cosieves():
    P = subset_lattice(2)
    assert is_sieve(P, [i for i in P if P.leq(i, 1)])
    assert not is_sieve(P, [3])
    assert is_cosieve(P, [3])
    assert not is_cosieve(P, [0])


def test_comma_over_identity_is_downset():
    P = subset_lattice(2)
    C, inc = comma_over(identity(P), 1)
    assert set(inc.assignment) == {0, 1}


def test_comma_over_constant_bottom_is_everything():
    P = subset_lattice(2)
    f = constant(P, P, 0)
    C, _ = comma_over(f, 2)
    assert len(C) == len(P)


def test_comma_over_top_section_is_empty():
    P = subset_lattice(2)
    top = MonotoneMap(point(), P, (3,))
    assert len(comma_over(top, 1)[0]) == 0


def test_comma_under_examples():
    P = subset_lattice(2)
    assert set(comma_under(1, identity(P))[1].assignment) == {1, 3}
    assert len(comma_under(2, constant(P, P, 3))[0]) == len(P)
    assert len(comma_under(2, MonotoneMap(point(), P, (0,)))[0]) == 0


# --- covers, subdivision, skeleta ------------------------------------------------


def test_covers_examples():
    assert covers(chain_poset(2)) == [(0, 1), (1, 2)]
    assert covers(antichain(3)) == []
    assert len(covers(subset_lattice(2))) == 4


def test_subdivision_of_two_chain():
    sP, mx = subdivision(chain_poset(1))
    assert [c.members for c in sP.labels] == [(0,), (1,), (0, 1)]
    assert mx.assignment == (0, 1, 1)


def test_subdivision_of_b2_count():
    P = subset_lattice(2)
    assert len(subdivision(P)[0]) == len(brute_chains(P)) == 11


def test_subdivision_of_antichain():
    sP, mx = subdivision(antichain(3))
    assert len(sP) == 3 and sorted(mx.assignment) == [0, 1, 2]
    assert relation_set(sP) == {(i, i) for i in range(3)}


def test_skeleton_examples():
    sP, _ = subdivision(chain_poset(1))
    sk = skeleton(sP, 0)
    assert len(sk.lower) == 2 and relation_set(sk.lower) == {(0, 0), (1, 1)}
    sB, _ = subdivision(subset_lattice(2))
    level = skeleton(sB, 1).level
    assert len(level) == sum(1 for c in brute_chains(subset_lattice(2)) if len(c) == 2) == 5
    assert len(skeleton(sB, 10).lower) == len(sB)
    with pytest.raises(PosetError):
        skeleton(sB, -1)


# --- pi0 and mapping posets ----------------------------------------------------


def test_pi0_examples():
    assert len(pi0(antichain(2))) == 2
    zigzag = build_poset("abc", [(0, 1), (2, 1)])
    assert len(pi0(zigzag)) == 1


def test_mapping_poset_two_chain():
    I = chain_poset(1)
    M, maps = mapping_poset(I, I)
    # oracle: all 4 functions, keep monotone ones
    expected = [f for f in itertools.product(range(2), repeat=2) if f[0] <= f[1]]
    assert [m.assignment for m in maps] == expected == [(0, 0), (0, 1), (1, 1)]
    assert M.leq(0, 1) and M.leq(1, 2) and not M.leq(2, 0)


def test_mapping_poset_from_point_and_to_point():
    Q = subset_lattice(2)
    M, _ = mapping_poset(point(), Q)
    assert relation_set(M) == relation_set(Q)
    M2, _ = mapping_poset(Q, point())
    assert len(M2) == 1


def test_mapping_poset_budget():
    with pytest.raises(BudgetError):
        mapping_poset(antichain(7), antichain(7), budget=1000)


def test_map_algebra():
    I = chain_poset(1)
    f = MonotoneMap(I, I, (0, 0))
    assert compose(f, identity(I)) == f == compose(identity(I), f)
    assert map_leq(f, identity(I))
    S, inc = induced_subposet(subset_lattice(2), [0, 3])
    assert is_embedding(inc)
    with pytest.raises(PosetError):
        MonotoneMap(I, I, (1, 0))
    with pytest.raises(PosetError):
        compose(f, MonotoneMap(point(), subset_lattice(1), (0,)))


# --- formats -------------------------------------------------------------------


def test_json_round_trip_uses_covers():
    P = subset_lattice(2)
    obj = poset_to_json(P)
    assert obj["pairs"] == [list(c) for c in covers(P)]
    Q = poset_from_json(json.dumps(obj))
    assert relation_set(Q) == relation_set(P)


def test_malformed_json():
    with pytest.raises(PosetError):
        poset_from_json({"pairs": []})


def test_dot_export():
    text = to_dot(subset_lattice(2))
    assert text.startswith("digraph") and text.count("->") == 4
    assert text.count("rank=same") == 3


# --- invariants ------------------------------------------------------------------


@given(posets(max_size=7))
def test_constructed_posets_satisfy_axioms(P):
    assert axioms_hold(P)
    assert axioms_hold(dual(P))


@given(posets(max_size=7))
def test_dual_involution(P):
    assert dual(dual(P)) == P


@given(posets(max_size=3), posets(max_size=3), posets(max_size=3))
def test_product_associative_and_unital(P, Q, R):
    left = product(product(P, Q), R)
    right = product(P, product(Q, R))
    # both index (p, q, r) as p*|Q||R| + q*|R| + r
    assert relation_set(left) == relation_set(right)
    assert relation_set(product(point(), P)) == relation_set(P)
    assert relation_set(product(P, point())) == relation_set(P)


@given(posets(max_size=7))
def test_covers_round_trip(P):
    assert build_poset(P.labels, covers(P)) == P


@given(st.data())
def test_comma_dual_transport(data):
    P = data.draw(posets(max_size=4))
    Q = data.draw(posets(min_size=1, max_size=4))
    f = data.draw(monotone_maps(P, Q))
    q = data.draw(st.integers(0, len(Q) - 1))
    fd = MonotoneMap(dual(P), dual(Q), f.assignment)
    assert comma_over(f, q)[1].assignment == comma_under(q, fd)[1].assignment


@given(st.data())
def test_subdivision_naturality_and_functoriality(data):
    P = data.draw(posets(max_size=4))
    Q = data.draw(posets(min_size=1, max_size=4))
    R = data.draw(posets(min_size=1, max_size=3))
    f = data.draw(monotone_maps(P, Q))
    g = data.draw(monotone_maps(Q, R))
    _, maxP = subdivision(P)
    _, maxQ = subdivision(Q)
    sf = subdivision_map(f)
    assert compose(maxQ, sf) == compose(f, maxP)
    assert subdivision_map(identity(P)) == identity(subdivision(P)[0])
    assert subdivision_map(compose(g, f)) == compose(subdivision_map(g), sf)


@given(posets(max_size=4), posets(max_size=4))
def test_pi0_products_and_coproducts(P, Q):
    assert len(pi0(product(P, Q))) == len(pi0(P)) * len(pi0(Q))
    assert len(pi0(disjoint_union(P, Q))) == len(pi0(P)) + len(pi0(Q))


@given(posets(max_size=5), st.integers(0, 4))
def test_skeleta(P, d):
    sP, _ = subdivision(P)
    sk = skeleton(sP, d)
    assert is_sieve(sP, sk.embedding.assignment)
    assert relation_set(sk.level) == {(i, i) for i in sk.level}
    assert all(c.dim == d for c in sk.level.labels)


@given(posets(max_size=6))
def test_subdivision_matches_brute_chains(P):
    sP, mx = subdivision(P)
    assert sorted(c.members for c in sP.labels) == sorted(brute_chains(P))
    for i in sP:
        c = sP.labels[i]
        assert all(P.leq(x, mx(i)) for x in c.members)
