import json
import pickle

import pytest
from hypothesis import given, settings, strategies as st

from finitecsp.structures import (
    Signature,
    Structure,
    StructureError,
    builtin,
    complete_graph,
    cycle_graph,
    dump_structure,
    induced_substructure,
    load_structure,
    path_graph,
    power,
    quotient,
    structure_from_dict,
    structure_to_dict,
    three_lin2,
)

from oracles import power_edges

GRAPH = [("E", 2)]


def test_signature_equality_ignores_order():
    assert Signature([("A", 1), ("B", 2)]) == Signature([("B", 2), ("A", 1)])
    assert Signature([("A", 1)]) != Signature([("A", 2)])


def test_structure_rejects_bad_tuples():
    with pytest.raises(StructureError):
        Structure(GRAPH, ["a"], {"E": [("a", "b")]})
    with pytest.raises(StructureError):
        Structure(GRAPH, ["a", "b"], {"E": [("a",)]})
    with pytest.raises(StructureError):
        Structure(GRAPH, ["a", "a"], {})
    with pytest.raises(StructureError):
        Structure(GRAPH, ["a"], {"F": []})


def test_power_one_is_isomorphic():
    K3 = complete_graph(3)
    P = power(K3, 1)
    assert P.universe == K3.universe
    assert set(P.relation("E")) == set(K3.relation("E"))


def test_power_k2_squared():
    P = power(complete_graph(2), 2)
    assert len(P) == 4
    assert set(P.relation("E")) == {("0,0", "1,1"), ("1,1", "0,0"), ("0,1", "1,0"), ("1,0", "0,1")}


def test_power_k3_squared():
    P = power(complete_graph(3), 2)
    assert len(P) == 9
    assert P.num_tuples() == 36
    for v in P.universe:
        assert sum(1 for (a, _) in P.relation("E") if a == v) == 4


@pytest.mark.parametrize("D", [complete_graph(2), complete_graph(3), path_graph(3), cycle_graph(4)])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_power_matches_coordinatewise_oracle(D, n):
    if len(D) ** n > 70:
        pytest.skip("too large for the brute-force oracle")
    assert set(power(D, n).relation("E")) == power_edges(D, n)


def test_power_rejects_zero():
    with pytest.raises(StructureError):
        power(complete_graph(2), 0)


def test_induced_substructure_examples():
    C5 = cycle_graph(5)
    assert induced_substructure(C5, C5.universe) == C5
    K3 = complete_graph(3)
    sub = induced_substructure(K3, ["0", "1"])
    assert sub == complete_graph(2)
    path = induced_substructure(C5, ["0", "1", "2"])
    assert path.num_tuples() == 4  # two undirected edges
    assert not path.holds("E", ("0", "2"))
    with pytest.raises(StructureError):
        induced_substructure(C5, ["9"])


def test_quotient_examples():
    X = cycle_graph(4)
    same = quotient(X, [[u] for u in X.universe])
    assert same.rename({f"{{{u}}}": u for u in X.universe}) == X

    arrow = Structure(GRAPH, ["a", "b"], {"E": [("a", "b")]})
    q = quotient(arrow, [["a", "b"]])
    assert len(q) == 1 and q.relation("E") == (("{a,b}", "{a,b}"),)

    q = quotient(X, [["0", "2"], ["1", "3"]])
    assert len(q) == 2
    assert set(q.relation("E")) == {("{0,2}", "{1,3}"), ("{1,3}", "{0,2}")}


def test_quotient_validates_partition():
    X = cycle_graph(4)
    with pytest.raises(StructureError):
        quotient(X, [["0", "1"], ["1", "2", "3"]])
    with pytest.raises(StructureError):
        quotient(X, [["0", "1"]])
    with pytest.raises(StructureError):
        quotient(X, [["0", "1", "2", "3"], []])


def test_builtins():
    assert builtin("builtin:K3") == complete_graph(3)
    assert builtin("Kn:5") == complete_graph(5)
    assert builtin("C5") == cycle_graph(5)
    assert builtin("Pn:3") == path_graph(3)
    lin = three_lin2()
    assert len(lin.relation("S0")) == 4 and len(lin.relation("S1")) == 4
    with pytest.raises(StructureError):
        builtin("nope")


def test_json_round_trip(tmp_path):
    for X in [complete_graph(3), three_lin2(), cycle_graph(5)]:
        text = dump_structure(X)
        assert structure_from_dict(json.loads(text)) == X
        path = tmp_path / "x.json"
        path.write_text(text)
        assert load_structure(str(path)) == X


def test_json_rejects_unknown_keys():
    obj = structure_to_dict(complete_graph(2))
    obj["colour"] = 1
    with pytest.raises(StructureError, match="colour"):
        structure_from_dict(obj)


def test_pickle_round_trip():
    X = three_lin2()
    assert pickle.loads(pickle.dumps(X)) == X


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=12))
def test_structure_equality_ignores_tuple_order(edges):
    V = [str(i) for i in range(5)]
    E = [(str(a), str(b)) for a, b in edges]
    assert Structure(GRAPH, V, {"E": E}) == Structure(GRAPH, V, {"E": list(reversed(E))})
    X = Structure(GRAPH, V, {"E": E})
    assert structure_from_dict(structure_to_dict(X)) == X


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)), max_size=9), st.integers(1, 3))
def test_power_product_rule(size, edges, n):
    V = [str(i) for i in range(size)]
    D = Structure(GRAPH, V, {"E": [(str(a), str(b)) for a, b in edges if a < size and b < size]})
    P = power(D, n)
    assert len(P) == len(D) ** n
    assert P.num_tuples() == D.num_tuples() ** n


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=15), st.sets(st.integers(0, 5)), st.sets(st.integers(0, 5)))
def test_induced_substructure_is_monotone(edges, s, t):
    V = [str(i) for i in range(6)]
    X = Structure(GRAPH, V, {"E": [(str(a), str(b)) for a, b in edges]})
    S = {str(i) for i in s}
    T = S | {str(i) for i in t}
    assert set(induced_substructure(X, S).relation("E")) <= set(induced_substructure(X, T).relation("E"))


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=15), st.lists(st.integers(0, 2), min_size=6, max_size=6))
def test_quotient_is_idempotent(edges, labels):
    V = [str(i) for i in range(6)]
    X = Structure(GRAPH, V, {"E": [(str(a), str(b)) for a, b in edges]})
    blocks = [[v for v, l in zip(V, labels) if l == k] for k in range(3)]
    Q = quotient(X, [b for b in blocks if b])
    again = quotient(Q, [[u] for u in Q.universe], names=list(Q.universe))
    assert again == Q
