import random

import pytest
from hypothesis import given, settings, strategies as st

from thln.embed import (
    EmbedRequest, base_case_solve, embed, embed_balanced, embed_heavy_left, embed_path,
    hamiltonian_path, length_range, spectrum,
)
from thln.errors import (
    BudgetExceeded, DimensionTooSmall, FaultyQueryVertex, InvalidLength, NoPathFound, WeakPairRequested,
)
from thln.faults import FaultSet, SurvivorView, classify_pair, min_survivor_degree, random_fault_set
from thln.graphs import crossed_cube, locally_twisted_cube, make_graph, random_thln, twisted_cube
from thln.oracle import validate_path


def weak_instance(g, w=0, k=None):
    """Fault k-1... neighbours of w so that w keeps exactly two survivor neighbours."""
    nb = list(g.neighbors(w))
    faults = FaultSet(frozenset(nb[2:]))
    return faults, nb[0], nb[1]


def check(g, faults, res, u, v, l):
    ok, why = validate_path(g, faults, res.vertices, u, v, l)
    assert ok, why
    assert res.length == l


def test_length_range_examples():
    g = crossed_cube(5)
    assert length_range(g, FaultSet(), 0, 1) == (15, 31)
    f = FaultSet(frozenset([3, 12]), frozenset([(0, 1)]))
    assert not classify_pair(SurvivorView(g, f), 5, 30).is_weak
    assert length_range(g, f, 5, 30) == (15, 29)
    wf, w1, w2 = weak_instance(g)
    assert wf.f_v == 3
    assert length_range(g, wf, w1, w2) == (15, 27)


def test_length_range_errors():
    with pytest.raises(DimensionTooSmall):
        length_range(crossed_cube(4), FaultSet(), 0, 1)
    g = crossed_cube(5)
    with pytest.raises(BudgetExceeded):
        length_range(g, FaultSet(frozenset([1, 2, 3, 4])), 0, 5)
    with pytest.raises(FaultyQueryVertex):
        length_range(g, FaultSet(frozenset([1])), 1, 5)


def test_embed_path_examples():
    g = crossed_cube(5)
    res = embed_path(EmbedRequest(g, FaultSet(), 0, 1, 15))
    check(g, FaultSet(), res, 0, 1, 15)
    res = embed_path(EmbedRequest(g, FaultSet(), 0, 1, 31))
    assert sorted(res.vertices) == list(range(32))
    with pytest.raises(InvalidLength):
        embed_path(EmbedRequest(g, FaultSet(), 0, 1, 14))
    with pytest.raises(InvalidLength):
        embed(g, FaultSet(), 0, 1, 32)


def test_embed_balanced_same_half_full_length():
    g = crossed_cube(6)
    res = embed_balanced(g, FaultSet(), 0, 5, 63)
    check(g, FaultSet(), res, 0, 5, 63)
    assert res.case_trace[0] == "1.1"


def test_embed_balanced_opposite_halves_split():
    g = crossed_cube(6)
    u, v = 0, 0b100111
    res = embed_balanced(g, FaultSet(), u, v, 31)
    check(g, FaultSet(), res, u, v, 31)
    assert res.case_trace[0] == "1.2"
    # first 16 vertices stay in L, the rest in R
    side = [g.side(x) for x in res.vertices]
    assert side == [0] * 16 + [1] * 16


def test_embed_balanced_upper_end_with_faults():
    g = crossed_cube(6)
    rng = random.Random(5)
    for _ in range(10):
        left = [x for x in g.vertices() if g.side(x) == 0]
        right = [x for x in g.vertices() if g.side(x) == 1]
        f = FaultSet(frozenset(rng.sample(left, 2) + rng.sample(right, 2)))
        u, v = rng.sample([x for x in g.vertices() if x not in f.vertices], 2)
        lo, hi = length_range(g, f, u, v)
        for l in (hi - 1, hi):
            check(g, f, embed(g, f, u, v, l), u, v, l)


def _heavy_instances(g, seed, vertex_faults):
    rng = random.Random(seed)
    left = [x for x in g.vertices() if g.side(x) == 0]
    edges = [e for e in g.edges() if g.side(e[0]) == g.side(e[1]) == 0]
    n = g.n
    while True:
        k = vertex_faults if vertex_faults is not None else rng.randint(1, n - 2)
        f = FaultSet(frozenset(rng.sample(left, k)), frozenset(rng.sample(edges, n - 2 - k)))
        alive = [x for x in g.vertices() if x not in f.vertices]
        u, v = rng.sample(alive, 2)
        yield f, u, v


def _find_case(g, case, seed=0, vertex_faults=None, limit=3000):
    for i, (f, u, v) in zip(range(limit), _heavy_instances(g, seed, vertex_faults)):
        lo, hi = length_range(g, f, u, v)
        for l in range(lo, hi + 1):
            res = embed(g, f, u, v, l)
            if case in res.case_trace:
                return f, u, v, l, res
    raise AssertionError(f"no instance reached case {case}")


def test_heavy_left_vertex_faults_both_ends_in_l():
    g = crossed_cube(6)
    left = [x for x in g.vertices() if g.side(x) == 0]
    f = FaultSet(frozenset(left[:4]))
    u, v = left[10], left[20]
    lo, hi = length_range(g, f, u, v)
    for l in (lo, (lo + hi) // 2, hi - 1):
        res = embed_heavy_left(g, f, u, v, l)
        check(g, f, res, u, v, l)
        assert res.case_trace[0] == "2.1.1"


def test_heavy_left_edge_faults_swap_recorded():
    g = crossed_cube(6)
    x = 0b000101
    edges = frozenset((min(x, y), max(x, y)) for y in g.neighbors(x) if g.side(y) == 0)
    f = FaultSet(edges=frozenset(sorted(edges)[:4]))
    u, v = 0b001000, 0b010011
    res = embed_heavy_left(g, f, u, v, 40)
    check(g, f, res, u, v, 40)
    assert res.case_trace[0] == "2.2.1"
    swap = res.swaps[0]
    assert swap["vertex"] == g.label(x) and swap["min_degree"] >= 3
    f1 = FaultSet(frozenset([x]), f.edges - {tuple(g.vertex(s) for s in swap["edge"])})
    assert min_survivor_degree(SurvivorView(g, f1)) >= 3
    assert res.to_dict(g)["swaps"][0]["case"] == "2.2.1"


def test_case_2121_ends_with_cross_edge():
    g = crossed_cube(6)
    f, u, v, l, res = _find_case(g, "2.1.2.1", seed=1)
    check(g, f, res, u, v, l)
    a, b = res.vertices[-2], res.vertices[-1]
    assert g.side(a) != g.side(b) and g.cross_neighbor(a) == b


@pytest.mark.parametrize("case", ["2.1.2.2", "2.1.3", "2.1.3.1", "2.1.3.2"])
def test_heavy_cases_reached(case):
    g = locally_twisted_cube(6)
    f, u, v, l, res = _find_case(g, case, seed=3)
    check(g, f, res, u, v, l)


def test_case_222_swaps_at_endpoint():
    g = crossed_cube(6)
    u = 0b000110
    inner = sorted(y for y in g.neighbors(u) if g.side(y) == 0)
    f = FaultSet(edges=frozenset((min(u, y), max(u, y)) for y in inner[:3]))
    f = f.with_edges(add=[(inner[3], g.neighbors(inner[3])[0])])
    v = 0b011001
    lo, hi = length_range(g, f, u, v)
    for l in range(lo, hi + 1):
        res = embed(g, f, u, v, l)
        check(g, f, res, u, v, l)
        if l < hi:
            assert res.case_trace[0] == "2.2.2"
            y = g.vertex(res.swaps[0]["vertex"])
            assert y in g.neighbors(u)
            f1 = FaultSet(frozenset([y]), f.edges - {(min(u, y), max(u, y))})
            assert not classify_pair(SurvivorView(g, f1), u, v).is_weak


def test_orientation_heavy_right():
    g = crossed_cube(6)
    right = [x for x in g.vertices() if g.side(x) == 1]
    f = FaultSet(frozenset(right[:4]))
    u, v = 0, right[9]
    lo, hi = length_range(g, f, u, v)
    for l in range(lo, hi + 1):
        check(g, f, embed_heavy_left(g, f, u, v, l), u, v, l)


def test_wrong_distribution_rejected():
    g = crossed_cube(6)
    with pytest.raises(ValueError):
        embed_heavy_left(g, FaultSet(), 0, 1, 40)
    left = [x for x in g.vertices() if g.side(x) == 0]
    with pytest.raises(ValueError):
        embed_balanced(g, FaultSet(frozenset(left[:4])), left[5], left[6], 40)


def test_hamiltonian_examples():
    g = crossed_cube(5)
    res = hamiltonian_path(g, FaultSet(), 0, 31)
    assert res.length == 31 and sorted(res.vertices) == list(range(32))
    f = FaultSet(frozenset([3, 12]), frozenset([(0, 1)]))
    res = hamiltonian_path(g, f, 5, 30)
    assert res.length == 29
    assert set(res.vertices) == set(g.vertices()) - f.vertices
    wf, w1, w2 = weak_instance(g)
    with pytest.raises(WeakPairRequested):
        hamiltonian_path(g, wf, w1, w2)


def test_base_case_examples():
    g = crossed_cube(5)
    check(g, FaultSet(), base_case_solve(g, FaultSet(), 3, 17, 15), 3, 17, 15)
    lt = locally_twisted_cube(5)
    rng = random.Random(4)
    f = FaultSet(edges=frozenset(rng.sample(sorted(lt.edges()), 3)))
    u, v = 0, 9
    assert not classify_pair(SurvivorView(lt, f), u, v).is_weak
    check(lt, f, base_case_solve(lt, f, u, v, 28), u, v, 28)
    tq = twisted_cube(5)
    wf, w1, w2 = weak_instance(tq, w=6)
    with pytest.raises(NoPathFound) as exc:
        base_case_solve(tq, wf, w1, w2, 32 - wf.f_v - 1)
    assert exc.value.instance["l"] == 28
    with pytest.raises(DimensionTooSmall):
        base_case_solve(crossed_cube(6), FaultSet(), 0, 1, 40)


def test_spectrum_sizes_and_validity():
    g = crossed_cube(5)
    spec = spectrum(g, FaultSet(), 0, 7)
    assert sorted(spec) == list(range(15, 32))
    f = FaultSet(frozenset([9]))
    spec = spectrum(g, f, 0, 7)
    assert sorted(spec) == list(range(15, 31))
    for l, res in spec.items():
        check(g, f, res, 0, 7, l)


def test_weak_pair_ceiling():
    g = crossed_cube(5)
    wf, w1, w2 = weak_instance(g, w=12)
    spec = spectrum(g, wf, w1, w2)
    assert max(spec) == 32 - wf.f_v - 2
    assert all(12 not in r.vertices for r in spec.values())


def test_deterministic_paths():
    g = crossed_cube(6)
    f = FaultSet(frozenset([1, 40]), frozenset([(2, 3)]))
    a = spectrum(g, f, 0, 63)
    b = spectrum(g, f, 0, 63)
    assert {l: r.to_dict(g) for l, r in a.items()} == {l: r.to_dict(g) for l, r in b.items()}


def test_to_dict_format():
    g = crossed_cube(5)
    doc = embed(g, FaultSet(), 0, 1, 15).to_dict(g)
    assert set(doc) == {"u", "v", "l", "vertices", "case_trace"}
    assert doc["u"] == "00000" and doc["l"] == 15 and len(doc["vertices"]) == 16


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["cq", "ltq", "mq0", "mq1", "generic"]), st.integers(0, 4), st.integers(0, 10 ** 6))
def test_random_n6_spectrum_valid(variant, k, seed):
    g = random_thln(6, seed) if variant == "generic" else make_graph(variant, 6)
    rng = random.Random(seed)
    f = random_fault_set(g, k, rng)
    u, v = rng.sample([x for x in g.vertices() if x not in f.vertices], 2)
    for l, res in spectrum(g, f, u, v).items():
        check(g, f, res, u, v, l)


def test_tq7_heavy_spectrum():
    g = twisted_cube(7)
    for f, u, v in [next(_heavy_instances(g, s, None)) for s in range(3)]:
        for l, res in spectrum(g, f, u, v).items():
            check(g, f, res, u, v, l)
