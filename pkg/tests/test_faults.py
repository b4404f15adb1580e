import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from thln.errors import EmptySurvivor, FaultyQueryVertex, InvalidFaultSet, OverlayConflict
from thln.faults import (
    NORMAL, FaultSet, SurvivorView, classify_pair, fault_elements, find_weak_vertices,
    from_elements, min_survivor_degree, parse_inline, random_fault_set, survivor_degree,
)
from thln.graphs import crossed_cube, locally_twisted_cube, make_graph

from conftest import FIGURES


@pytest.fixture(scope="module")
def fig2():
    g = crossed_cube(4)
    d = FIGURES["fig2"]
    lab = {k: g.vertex(d[k]) for k in ("w", "w1", "w2", "a", "b")}
    return g, FaultSet.build(g, [lab["a"], lab["b"]]), lab


def test_fig2_weak_vertex(fig2):
    g, faults, lab = fig2
    view = SurvivorView(g, faults)
    assert survivor_degree(view, lab["w"]) == 2
    assert min_survivor_degree(view) == 2
    pc = classify_pair(view, lab["w1"], lab["w2"])
    assert pc.is_weak and pc.witness == lab["w"] and pc.alpha == 1
    weak = dict(find_weak_vertices(view))
    assert weak[lab["w"]] == tuple(sorted((lab["w1"], lab["w2"])))


def test_fig2_drawing_has_a_second_weak_vertex(fig2):
    # a and b share two common neighbours in the drawing, so both drop to degree 2
    g, faults, lab = fig2
    weak = find_weak_vertices(SurvivorView(g, faults))
    common = set(g.neighbors(lab["a"])) & set(g.neighbors(lab["b"]))
    assert {w for w, _ in weak} == common and len(common) == 2


def test_survivor_degree_basics():
    g = crossed_cube(5)
    assert all(survivor_degree(SurvivorView(g), x) == 5 for x in g.vertices())
    x = 7
    y = g.neighbors(x)[0]
    view = SurvivorView(g, FaultSet(frozenset([y])))
    assert survivor_degree(view, x) == 4
    with pytest.raises(FaultyQueryVertex):
        survivor_degree(view, y)
    view = SurvivorView(g, FaultSet(edges=frozenset([(x, y)])))
    assert survivor_degree(view, x) == 4 and survivor_degree(view, y) == 4


def test_min_degree_empty_survivor():
    g = crossed_cube(3)
    with pytest.raises(EmptySurvivor):
        min_survivor_degree(SurvivorView(g, FaultSet(frozenset(g.vertices()))))
    assert min_survivor_degree(SurvivorView(crossed_cube(5))) == 5


def test_counts_and_splits():
    g = crossed_cube(5)
    f = FaultSet.build(g, [0b00001, 0b10000], [(0b00000, 0b00010), (0b00000, 0b10000)])
    assert (f.f_v, f.f_e, f.size, len(f)) == (2, 2, 4, 4)
    c = f.split_counts(g)
    assert c == {"F_L": 2, "F_R": 1, "F_C": 1, "fv_L": 1, "fv_R": 1}
    assert c["fv_L"] + c["fv_R"] == f.f_v


def test_edge_fault_may_coexist_with_endpoint_fault():
    g = crossed_cube(5)
    f = FaultSet.build(g, [0], [(0, 1)])
    assert f.size == 2


def test_invalid_fault_elements():
    g = crossed_cube(4)
    with pytest.raises(InvalidFaultSet):
        FaultSet.build(g, [16])
    with pytest.raises(InvalidFaultSet):
        FaultSet.build(g, [], [(0, 15)])


def test_json_and_inline_round_trip():
    g = locally_twisted_cube(5)
    f = parse_inline(g, "v:00101,e:00000-00001")
    assert f == FaultSet(frozenset([5]), frozenset([(0, 1)]))
    assert FaultSet.from_json(g, f.to_json(g)) == f
    assert f.to_dict(g) == {"vertices": ["00101"], "edges": [["00000", "00001"]]}
    with pytest.raises(ValueError):
        parse_inline(g, "x:00101")


def test_restrict_to_half():
    g = crossed_cube(5)
    left, right = g.halves
    f = FaultSet.build(g, [0b10011], [(0b00000, 0b00001), (0b00000, 0b10000)])
    assert f.restrict(left) == FaultSet(edges=frozenset([(0, 1)]))
    assert f.restrict(right) == FaultSet(frozenset([0b0011]))


def test_overlay_semantics():
    g = crossed_cube(5)
    x = 3
    f = FaultSet(frozenset([x]))
    view = SurvivorView(g, f)
    before = {y: survivor_degree(view, y) for y in g.neighbors(x)}
    lifted = view.with_overlay(mark_faultless=[x])
    assert all(survivor_degree(lifted, y) == before[y] + 1 for y in g.neighbors(x))
    assert view.faults == f and lifted.faults == f
    assert view.with_overlay() == view
    back = lifted.with_overlay(mark_faulty=[x])
    assert all(back.neighbors(y) == view.neighbors(y) for y in back.alive())
    v1, v = 10, 11
    blocked = view.with_overlay(mark_faulty=[v1, v])
    assert v1 not in blocked.alive() and v not in blocked.alive()
    with pytest.raises(OverlayConflict):
        view.with_overlay(mark_faultless=[4])
    with pytest.raises(OverlayConflict):
        view.with_overlay(mark_faulty=[x])
    with pytest.raises(OverlayConflict):
        view.with_overlay(mark_faultless=[x], mark_faulty=[x])


def test_restricted_view_uses_overlay():
    g = crossed_cube(5)
    left, _ = g.halves
    view = SurvivorView(g, FaultSet(frozenset([1]))).with_overlay(mark_faultless=[1], mark_faulty=[2])
    local = view.restrict(left)
    assert local.faulty_vertices == frozenset([2])


def test_classify_normal_and_errors():
    g = crossed_cube(5)
    view = SurvivorView(g)
    assert classify_pair(view, 0, 31) is NORMAL
    with pytest.raises(ValueError):
        classify_pair(view, 0, 0)
    with pytest.raises(FaultyQueryVertex):
        classify_pair(SurvivorView(g, FaultSet(frozenset([0]))), 0, 1)


def _direct_weak(g, faults):
    out = set()
    bad = faults.vertices
    for w in g.vertices():
        if w in bad:
            continue
        nb = [y for y in g.neighbors(w) if y not in bad and not faults.edge_faulty(w, y)]
        if len(nb) == 2:
            out.add((w, tuple(sorted(nb))))
    return out


def test_cq4_exhaustive_classification_agrees_with_definition():
    g = crossed_cube(4)
    for combo in itertools.combinations(fault_elements(g), 2):
        f = from_elements(combo)
        view = SurvivorView(g, f)
        direct = _direct_weak(g, f)
        assert set(find_weak_vertices(view)) == direct
        for w, (a, b) in direct:
            pc = classify_pair(view, a, b)
            assert pc.is_weak and set(view.neighbors(pc.witness)) == {a, b}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["cq", "ltq", "mq0", "mq1", "tq"]), st.integers(0, 3), st.integers(0, 10 ** 6))
def test_classification_properties(variant, k, seed):
    g = make_graph(variant, 5)
    rng = random.Random(seed)
    f = random_fault_set(g, k, rng)
    view = SurvivorView(g, f)
    alive = view.alive()
    u, v = rng.sample(alive, 2)
    a, b = classify_pair(view, u, v), classify_pair(view, v, u)
    assert a.kind == b.kind
    if a.is_weak:
        assert set(view.neighbors(a.witness)) == {u, v}
    if k <= 2:
        assert min_survivor_degree(view) >= 3 and not find_weak_vertices(view)
    assert len(find_weak_vertices(view)) <= 1


def test_search_tables_mask_dead_entries():
    g = crossed_cube(4)
    f = FaultSet(frozenset([1]), frozenset([(0, 2)]))
    table, alive = SurvivorView(g, f).search_tables
    assert not alive[1] and alive.sum() == 15
    assert 1 not in table[0] and 2 not in table[0]
    assert sorted(y for y in table[0] if y >= 0) == sorted(SurvivorView(g, f).neighbors(0))
