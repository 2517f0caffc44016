"""Homomorphism counters, walk counts, tuple vectors, distinguishers.

Frozen constants below were derived by hand or by the flat oracle in
conftest before the implementation existed; they must never be regenerated
from package output.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import flat_hom_count, rand_graph, rand_tree
from modhom.counting import (
    HomCount,
    ZpScalar,
    count_homs,
    count_homs_subdivided,
    count_walks,
    enumerate_homs,
    find_distinguisher,
    state_budget_default,
    tuple_vector,
    vec_combine,
    zp,
)
from modhom.errors import BudgetExceededError, InputError
from modhom.graphs import (
    DistinguishedGraph,
    Graph,
    Multigraph,
    PartiallyLabelledGraph,
    complete_graph,
    cycle_graph,
    path_graph,
    star_graph,
)

RNG_SEED = 0x5EED01


# ---------------------------------------------------------------------------
# field scalars


def test_scalar_canonicalization_and_arithmetic():
    a = ZpScalar.of(17, 5)
    assert a.value == 2
    b = zp(-1, 5)
    assert b.value == 4
    assert (a + b).value == 1
    assert (a - b).value == 3
    assert (a * b).value == 3
    assert (a**3).value == 3
    assert a.inverse().value == 3  # 2*3 = 6 = 1 (mod 5)
    assert zp(0, 7).is_zero()


def test_scalar_rejects_bad_moduli_and_mixing():
    with pytest.raises(InputError):
        ZpScalar.of(1, 4)
    with pytest.raises(InputError):
        ZpScalar.of(1, 1)
    with pytest.raises(InputError):
        zp(1, 3) + zp(1, 5)
    with pytest.raises(InputError):
        zp(0, 3).inverse()


@given(st.integers(), st.sampled_from([2, 3, 5, 7, 11]))
@settings(max_examples=80, deadline=None)
def test_scalar_matches_python_mod(x, p):
    assert ZpScalar.of(x, p).value == x % p


def test_hom_count_consistency_enforced():
    HomCount(exact=16, residue=zp(1, 5))
    with pytest.raises(InputError):
        HomCount(exact=16, residue=zp(2, 5))
    with pytest.raises(InputError):
        HomCount(exact=None, residue=None)
    with pytest.raises(InputError):
        HomCount(exact=-1, residue=None)


# ---------------------------------------------------------------------------
# counting: frozen values


def test_edge_into_path_count():
    # by hand: one hom per orientation of each P4 edge
    assert count_homs(path_graph(2), path_graph(4)).exact == 6


def test_more_frozen_counts():
    assert count_homs(path_graph(1), path_graph(4)).exact == 4
    assert count_homs(cycle_graph(3), complete_graph(3)).exact == 6
    assert count_homs(path_graph(3), complete_graph(3)).exact == 12
    # odd cycle into bipartite target: nothing
    assert count_homs(cycle_graph(3), path_graph(4)).exact == 0
    # empty source: exactly the empty map
    assert count_homs(Graph.make(0), path_graph(4)).exact == 1
    # any source into empty target: none (unless source is empty too)
    assert count_homs(path_graph(2), Graph.make(0)).exact == 0


def test_walk_counts_on_p4():
    p4 = path_graph(4)
    total = sum(
        count_walks(p4, x, y, 3) for x in range(4) for y in range(4)
    )
    assert total == 16
    assert count_walks(p4, 0, 3, 3) == 1
    assert count_walks(p4, 0, 0, 3) == 0
    with pytest.raises(InputError):
        count_walks(p4, 0, 9, 2)


def test_pinned_counts():
    p4 = path_graph(4)
    j = PartiallyLabelledGraph.make(path_graph(2), {0: 1})
    assert count_homs(j, p4).exact == 2  # neighbours of vertex 1
    j2 = PartiallyLabelledGraph.make(path_graph(2), {0: 1, 1: 3})
    assert count_homs(j2, p4).exact == 0
    with pytest.raises(InputError):
        count_homs(PartiallyLabelledGraph.make(path_graph(2), {0: 7}), p4)


def test_residue_accompanies_exact():
    hc = count_homs(path_graph(2), path_graph(4), 5)
    assert hc.exact == 6 and hc.residue == zp(1, 5)
    with pytest.raises(InputError):
        count_homs(path_graph(2), path_graph(4), 6)


def test_multigraph_base_rejected():
    with pytest.raises(InputError):
        count_homs(
            PartiallyLabelledGraph.make(Multigraph.make(2, [(0, 1)]), {}),
            path_graph(2),
        )


# ---------------------------------------------------------------------------
# counting: oracle agreement


def test_counter_matches_flat_oracle_on_seeded_corpus():
    rng = random.Random(RNG_SEED)
    for _ in range(40):
        g = rand_graph(rng, rng.randint(1, 5), rng.uniform(0.2, 0.8))
        h = rand_graph(rng, rng.randint(1, 4), rng.uniform(0.2, 0.9))
        pins = {}
        if rng.random() < 0.5 and g.n and h.n:
            pins = {rng.randrange(g.n): rng.randrange(h.n)}
        got = count_homs(PartiallyLabelledGraph.make(g, pins), h).exact
        assert got == flat_hom_count(g, h, pins)


def test_enumerate_homs_is_the_full_set():
    g = path_graph(3)
    h = cycle_graph(3)
    maps = list(enumerate_homs(g, h))
    assert len(maps) == count_homs(g, h).exact == 12
    assert len({tuple(sorted(m.items())) for m in maps}) == 12
    for m in maps:
        for u, v in g.edges:
            assert h.has_edge(m[u], m[v])


def test_state_budget_guard():
    with pytest.raises(BudgetExceededError):
        count_homs(complete_graph(6), complete_graph(5), state_budget=10)
    # pinned vertices are not free; a full pinning always fits
    j = PartiallyLabelledGraph.make(path_graph(2), {0: 0, 1: 1})
    assert count_homs(j, path_graph(2), state_budget=1).exact == 1


def test_budget_env_override(monkeypatch):
    monkeypatch.delenv("MODHOM_BUDGET_STATES", raising=False)
    assert state_budget_default() == 10**8
    monkeypatch.setenv("MODHOM_BUDGET_STATES", "123")
    assert state_budget_default() == 123
    monkeypatch.setenv("MODHOM_BUDGET_STATES", "bogus")
    with pytest.raises(InputError):
        state_budget_default()
    monkeypatch.setenv("MODHOM_BUDGET_STATES", "0")
    with pytest.raises(InputError):
        state_budget_default()


# ---------------------------------------------------------------------------
# subdivided skeletons


def test_subdivided_count_matches_expanded_graph():
    """Replacing skeleton edges by paths of declared lengths must agree
    with counting on the explicitly expanded graph."""
    rng = random.Random(RNG_SEED + 1)
    for _ in range(12):
        sk = rand_tree(rng, rng.randint(2, 4))
        h = rand_graph(rng, rng.randint(2, 4), 0.7)
        p = rng.choice([3, 5])
        lengths = {}
        expanded_edges = []
        nxt = sk.n
        for u, v in sorted(sk.edges):
            k = rng.randint(1, 3)
            lengths[(u, v)] = k
            prev = u
            for _ in range(k - 1):
                expanded_edges.append((prev, nxt))
                prev = nxt
                nxt += 1
            expanded_edges.append((prev, v))
        pins = {0: rng.randrange(h.n)}
        expanded = Graph.make(nxt, expanded_edges)
        want = count_homs(
            PartiallyLabelledGraph.make(expanded, pins), h, p
        ).residue
        got = count_homs_subdivided(sk, lengths, pins, h, p)
        assert got == want


def test_subdivided_rejects_missing_length():
    sk = path_graph(3)
    with pytest.raises(InputError):
        count_homs_subdivided(sk, {(0, 1): 2}, {}, path_graph(2), 3)


# ---------------------------------------------------------------------------
# tuple vectors


def test_tuple_vector_of_pendant_edge():
    """One mark on an edge: the entry at target t is deg(t) mod p."""
    g = DistinguishedGraph(path_graph(2), (0,))
    vec = tuple_vector(g, path_graph(4), 5)
    assert [e.value for e in vec.entries] == [1, 2, 2, 1]
    assert vec.arity == 1 and not vec.contracted


def test_tuple_vector_sum_is_total_count():
    g = DistinguishedGraph(path_graph(2), (0,))
    vec = tuple_vector(g, path_graph(4), 5)
    total = sum(e.value for e in vec.entries) % 5
    assert total == count_homs(path_graph(2), path_graph(4), 5).residue.value


def test_tuple_vector_contraction():
    g = DistinguishedGraph(path_graph(2), (0,))
    vec = tuple_vector(g, path_graph(4), 3, contract=True)
    assert vec.contracted
    assert vec.orbit_sizes == (2, 2)
    assert [e.value for e in vec.entries] == [1, 2]
    # contraction refuses targets with an order-p symmetry
    with pytest.raises(InputError):
        tuple_vector(g, path_graph(4), 2, contract=True)


def test_tuple_vector_budget():
    g = DistinguishedGraph(path_graph(2), (0,) * 8)
    with pytest.raises(BudgetExceededError):
        tuple_vector(g, complete_graph(5), 3)


def test_vec_combine_componentwise():
    g1 = DistinguishedGraph(path_graph(2), (0,))
    g2 = DistinguishedGraph(path_graph(3), (0,))
    v1 = tuple_vector(g1, path_graph(4), 5)
    v2 = tuple_vector(g2, path_graph(4), 5)
    s = vec_combine("add", v1, v2)
    m = vec_combine("mul", v1, v2)
    for i in range(4):
        assert s.entries[i] == v1.entries[i] + v2.entries[i]
        assert m.entries[i] == v1.entries[i] * v2.entries[i]
    with pytest.raises(InputError):
        vec_combine("xor", v1, v2)
    with pytest.raises(InputError):
        vec_combine("add", v1, tuple_vector(g1, path_graph(4), 3))


# ---------------------------------------------------------------------------
# distinguishers


def test_distinguisher_on_p4_inner_vs_outer():
    res = find_distinguisher(path_graph(4), (0,), (1,), 3)
    assert res is not None
    assert res.probe.base.n <= 2
    assert res.value_a != res.value_b


def test_distinguisher_rejects_isomorphic_marks():
    with pytest.raises(InputError):
        find_distinguisher(path_graph(4), (0,), (3,), 3)


def test_distinguisher_rejects_order_p_symmetry():
    # P4 has an involution, so counts mod 2 cannot separate anything
    with pytest.raises(InputError):
        find_distinguisher(path_graph(4), (0,), (1,), 2)


def test_distinguisher_budget_exhaustion_returns_none():
    """A size-1 probe never separates single marks (every pinned count is
    1), so budget=1 must come back empty rather than raise."""
    assert find_distinguisher(star_graph(2), (0,), (1,), 5, budget=1) is None
