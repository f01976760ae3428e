import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from finitecsp.homs import (
    BudgetExhausted,
    Homomorphism,
    InvalidHomomorphism,
    SearchOptions,
    SignatureMismatch,
    check_homomorphism,
    count_homs,
    enumerate_homs,
    find_hom,
    finitely_solvable_up_to,
    hom_equivalent,
    identity_hom,
)
from finitecsp.structures import Structure, complete_graph, cycle_graph, path_graph, three_lin2

from oracles import brute_hom_exists, brute_homs, random_structure

K2, K3, C5 = complete_graph(2), complete_graph(3), cycle_graph(5)


def lex_key(D, m, X):
    return [D.index(m[x]) for x in X.universe]


def test_find_hom_examples():
    h = find_hom(C5, K3)
    assert h is not None
    check_homomorphism(C5, K3, h.mapping)
    assert find_hom(K3, K2) is None
    assert find_hom(C5, C5) is not None


def test_find_hom_returns_least_solution():
    rng = random.Random(7)
    for _ in range(40):
        X = random_structure(rng, [("E", 2)], rng.randint(1, 5), 6)
        D = random_structure(rng, [("E", 2)], rng.randint(1, 3), 5, prefix="d")
        sols = brute_homs(X, D)
        h = find_hom(X, D)
        if not sols:
            assert h is None
            continue
        assert lex_key(D, h.mapping, X) == min(lex_key(D, m, X) for m in sols)


def test_degree_order_still_sound():
    opts = SearchOptions(variable_order="degree")
    h = find_hom(C5, K3, opts)
    check_homomorphism(C5, K3, h.mapping)
    assert find_hom(complete_graph(4), K3, opts) is None


def test_enumerate_examples():
    assert len(enumerate_homs(K2, K2)) == 2
    single = Structure([("E", 2)], ["v"], {})
    assert len(enumerate_homs(single, K3)) == 3
    assert len(enumerate_homs(K3, K3)) == 6
    assert len(enumerate_homs(K3, K3, limit=2)) == 2
    assert count_homs(C5, K3) == len(brute_homs(C5, K3))


def test_enumerate_matches_brute_force_with_ternary_symbols():
    rng = random.Random(3)
    lin = three_lin2()
    for _ in range(25):
        X = random_structure(rng, [("S0", 3), ("S1", 3)], rng.randint(1, 5), 3)
        got = {tuple(h.mapping[x] for x in X.universe) for h in enumerate_homs(X, lin)}
        want = {tuple(m[x] for x in X.universe) for m in brute_homs(X, lin)}
        assert got == want


def test_repeated_variables_in_tuples():
    loop = Structure([("E", 2)], ["a"], {"E": [("a", "a")]})
    assert find_hom(loop, K3) is None
    assert find_hom(loop, loop) is not None
    X = Structure([("E", 2)], ["a", "b"], {"E": [("a", "a"), ("a", "b")]})
    D = Structure([("E", 2)], ["0", "1"], {"E": [("0", "0"), ("0", "1")]})
    assert [h.mapping for h in enumerate_homs(X, D)] == brute_homs(X, D)


def test_empty_target_and_empty_instance():
    empty = Structure([("E", 2)], [], {})
    assert find_hom(empty, K2).mapping == {}
    point = Structure([("E", 2)], ["v"], {})
    assert find_hom(point, empty) is None


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        find_hom(K3, three_lin2())


def test_budget_exhaustion_is_unknown_not_absent():
    with pytest.raises(BudgetExhausted) as info:
        find_hom(complete_graph(6), complete_graph(5), SearchOptions(budget=20))
    assert info.value.nodes >= 20


def test_parallel_agrees_with_sequential():
    opts = SearchOptions(parallel=2)
    for X, D in [(C5, K3), (cycle_graph(7), K2), (complete_graph(4), K3), (path_graph(4), K2)]:
        a, b = find_hom(X, D), find_hom(X, D, opts)
        assert (a is None) == (b is None)
        if a is not None:
            assert a.mapping == b.mapping


def test_homomorphism_validation():
    with pytest.raises(InvalidHomomorphism, match="E"):
        Homomorphism(K3, K3, {"0": "0", "1": "0", "2": "1"})
    with pytest.raises(InvalidHomomorphism):
        Homomorphism(K2, K2, {"0": "0"})
    h = identity_hom(C5)
    assert h.then(h).mapping == h.mapping


def test_finitely_solvable_examples():
    K4 = complete_graph(4)
    assert finitely_solvable_up_to(K4, K3, 3).ok
    res = finitely_solvable_up_to(K4, K3, 4)
    assert not res.ok and set(res.witness) == set(K4.universe)
    assert finitely_solvable_up_to(C5, K2, 4).ok
    res = finitely_solvable_up_to(C5, K2, 5)
    assert not res.ok and len(res.witness) == 5
    with pytest.raises(ValueError):
        finitely_solvable_up_to(C5, K2, 6)


def test_hom_equivalent_examples():
    P3 = path_graph(3)
    pair = hom_equivalent(K2, P3)
    assert pair is not None
    check_homomorphism(K2, P3, pair[0].mapping)
    check_homomorphism(P3, K2, pair[1].mapping)
    assert hom_equivalent(K2, K3) is None
    assert hom_equivalent(K3, K3) is not None


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(1, 3),
    st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=8),
    st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)), max_size=9),
)
def test_find_hom_agrees_with_brute_force(nx_, nd, xe, de):
    X = Structure([("E", 2)], [f"x{i}" for i in range(nx_)],
                  {"E": [(f"x{a}", f"x{b}") for a, b in xe if a < nx_ and b < nx_]})
    D = Structure([("E", 2)], [f"d{i}" for i in range(nd)],
                  {"E": [(f"d{a}", f"d{b}") for a, b in de if a < nd and b < nd]})
    assert (find_hom(X, D) is not None) == brute_hom_exists(X, D)


def test_composition_closure():
    rng = random.Random(11)
    for _ in range(30):
        X = random_structure(rng, [("E", 2)], rng.randint(1, 5), 6)
        D = random_structure(rng, [("E", 2)], rng.randint(1, 3), 5, prefix="d")
        D2 = random_structure(rng, [("E", 2)], rng.randint(1, 3), 6, prefix="e")
        f, g = find_hom(X, D), find_hom(D, D2)
        if f is not None and g is not None:
            check_homomorphism(X, D2, f.then(g).mapping)


def test_solvable_instances_are_finitely_solvable():
    rng = random.Random(12)
    for _ in range(30):
        X = random_structure(rng, [("E", 2)], rng.randint(1, 5), 6)
        D = random_structure(rng, [("E", 2)], rng.randint(1, 3), 5, prefix="d")
        if find_hom(X, D) is not None:
            assert all(finitely_solvable_up_to(X, D, k).ok for k in range(len(X) + 1))
