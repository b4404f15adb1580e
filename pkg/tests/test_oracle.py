import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from thln.embed import embed
from thln.errors import DimensionError, EnumerationTooLarge
from thln.faults import FaultSet, SurvivorView, random_fault_set
from thln.graphs import base_thln3, crossed_cube, make_graph, twisted_cube
from thln.oracle import (
    Found, NotFound, Skipped, VerificationReport, exhaustive_weak_pairs, exists_path_of_length,
    validate_path, verify_spectrum,
)


def test_validate_path_diagnoses():
    g = crossed_cube(5)
    path = list(embed(g, FaultSet(), 0, 1, 15).vertices)
    assert validate_path(g, FaultSet(), path, 0, 1, 15) == (True, "ok")
    bad = path[:]
    bad[5] = bad[2]
    ok, why = validate_path(g, FaultSet(), bad, 0, 1, 15)
    assert not ok and why == "repeat at index 5"
    a, b = path[3], path[4]
    ok, why = validate_path(g, FaultSet(edges=frozenset([(min(a, b), max(a, b))])), path, 0, 1, 15)
    assert not ok and why == "faulty edge at index 3"
    ok, why = validate_path(g, FaultSet(frozenset([path[7]])), path, 0, 1, 15)
    assert not ok and why == "faulty vertex at index 7"
    assert validate_path(g, FaultSet(), path, 0, 1, 16)[1] == "length 15 != 16"
    assert validate_path(g, FaultSet(), path, 2, 1, 15)[1] == "wrong start at index 0"
    assert not validate_path(g, FaultSet(), [0, 31], 0, 31, 1)[0]


def test_exists_examples():
    g = base_thln3()
    res = exists_path_of_length(g, FaultSet(), 0, 7, 7)
    assert isinstance(res, Found)
    assert validate_path(g, FaultSet(), res.path, 0, 7, 7)[0]
    assert isinstance(exists_path_of_length(g, FaultSet(), 0, 7, 7, budget=0), Skipped)
    assert isinstance(exists_path_of_length(g, FaultSet(), 0, 7, 8), NotFound)
    with pytest.raises(ValueError):
        exists_path_of_length(g, FaultSet(), 0, 7, 0)


def test_exists_weak_pair_hamiltonian_not_found():
    g = twisted_cube(5)
    nb = g.neighbors(9)
    f = FaultSet(frozenset(nb[2:]))
    assert isinstance(exists_path_of_length(g, f, nb[0], nb[1], 32 - 3 - 1), NotFound)
    assert isinstance(exists_path_of_length(g, f, nb[0], nb[1], 32 - 3 - 2), Found)


def test_exists_tiny_budget_skips():
    g = crossed_cube(6)
    res = exists_path_of_length(g, FaultSet(), 0, 63, 63, budget=5)
    assert isinstance(res, (Skipped, Found))


def test_oracle_rejects_large_graphs():
    with pytest.raises(DimensionError):
        exists_path_of_length(crossed_cube(7), FaultSet(), 0, 1, 70)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["cq", "ltq", "mq0", "mq1", "tq"]), st.integers(0, 3), st.integers(0, 10 ** 6),
       st.integers(1, 31))
def test_found_paths_always_valid(variant, k, seed, l):
    g = make_graph(variant, 5)
    rng = random.Random(seed)
    f = random_fault_set(g, k, rng)
    u, v = rng.sample([x for x in g.vertices() if x not in f.vertices], 2)
    res = exists_path_of_length(g, f, u, v, l)
    if isinstance(res, Found):
        assert validate_path(g, f, res.path, u, v, l)[0]


def test_short_lengths_match_brute_force():
    # tiny graph: compare against plain enumeration of simple paths
    g = make_graph("cq", 4)
    f = FaultSet(frozenset([5]), frozenset([(0, 1)]))

    def lengths_from(u):
        out = {}
        stack = [(u, (u,))]
        while stack:
            x, path = stack.pop()
            out.setdefault((path[-1], len(path) - 1), True)
            for y in g.neighbors(x):
                if y not in path and y not in f.vertices and not f.edge_faulty(x, y):
                    stack.append((y, path + (y,)))
        return out

    reach = lengths_from(0)
    for v in range(1, 16):
        if v in f.vertices:
            continue
        for l in range(1, 15):
            got = exists_path_of_length(g, f, 0, v, l)
            assert isinstance(got, Found) == ((v, l) in reach), (v, l)


def test_verify_spectrum_examples():
    g = crossed_cube(5)
    rep = verify_spectrum(g, FaultSet(), 3, 28)
    assert rep.ok and rep.counts["Found"] == 17 and not rep.disagreements
    f = FaultSet(frozenset([1, 2, 4]))
    u, v = 8, 30
    rep = verify_spectrum(g, f, u, v)
    assert sorted(rep.outcomes) == list(range(15, 29))
    assert rep.ok


def test_verify_spectrum_flags_mutation():
    g = crossed_cube(5)

    def corrupt(path):
        path[3] = path[0]
        return path

    rep = verify_spectrum(g, FaultSet(), 3, 28, mutate=corrupt)
    assert len(rep.disagreements) == 17
    assert rep.disagreements[0]["engine"].startswith("invalid: repeat")
    assert not rep.ok


def test_report_json_lines():
    g = crossed_cube(5)
    rep = verify_spectrum(g, FaultSet(), 3, 28, cross_check=False)
    line = rep.to_json_line()
    doc = json.loads(line)
    assert "\n" not in line and doc["counts"]["Found"] == 17 and "elapsed" in doc
    assert "elapsed" not in json.loads(rep.to_json_line(timing=False))
    assert isinstance(rep, VerificationReport)


def test_exhaustive_weak_pairs_cq4():
    g = crossed_cube(4)
    hits = exhaustive_weak_pairs(g, 2)
    assert hits
    for fs, w, (a, b) in hits:
        assert fs.size == 2
        assert set(SurvivorView(g, fs).neighbors(w)) == {a, b}
    assert exhaustive_weak_pairs(g, 0) == []


def test_exhaustive_weak_pairs_sampled_n5_unique():
    g = crossed_cube(5)
    hits = exhaustive_weak_pairs(g, 3, samples=3000, seed=11)
    per_set = {}
    for fs, w, _ in hits:
        per_set[fs] = per_set.get(fs, 0) + 1
    assert per_set and max(per_set.values()) == 1
    assert hits == exhaustive_weak_pairs(g, 3, samples=3000, seed=11)


def test_exhaustive_too_large():
    with pytest.raises(EnumerationTooLarge):
        exhaustive_weak_pairs(crossed_cube(6), 4, exhaustive=True)
