"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` (or as a script) to see
the report lines.
"""

import itertools
import random
import sys
import time

import pytest

from finitecsp.cli import dispatch
from finitecsp.homs import Homomorphism, check_homomorphism, enumerate_homs, find_hom
from finitecsp.polymorphisms import (
    Polymorphism,
    cyclic_orbits,
    decide_star,
    essential_coordinates,
    find_cyclic_polymorphism,
    is_cyclic,
    star_prime,
)
from finitecsp.reduction import (
    Atom,
    PPPower,
    PPPowerReduction,
    PPRelationDef,
    VarRef,
    compose_reductions,
    finite_cover,
    hom_equiv_reduction,
    identity_pp,
)
from finitecsp.structures import Structure, complete_graph, path_graph, power, three_lin2
from finitecsp.symmetry import (
    GeneratedAction,
    Permutation,
    invariant_hom_exists,
    is_invariant,
    make_invariant,
    schreier_instance,
    symmetrize,
)
from finitecsp.ultrafilter import (
    SetFilter,
    check_ultrafilter,
    coloring_as_polymorphism,
    disagreement_graph,
    extract_family,
    filter_report,
)

from catalog import catalog, instances
from oracles import brute_homs, brute_invariant_homs_by_component, burnside, random_structure

K2, K3, LIN = complete_graph(2), complete_graph(3), three_lin2()
SEED = 20240611


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail, started):
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[{status}] criterion {criterion}: {detail} ({time.perf_counter() - started:.2f}s)")
        assert ok, detail

    return emit


def table(D, p, fn):
    return {t: fn(t) for t in itertools.product(D.universe, repeat=p)}


# 1 ------------------------------------------------------------------------

def test_criterion_1_decide_star(report):
    t0 = time.perf_counter()
    problems = []

    def witness_ok(D, expected_fn):
        p = star_prime(D)
        f = find_cyclic_polymorphism(D, p)
        if f is None:
            return False
        check_homomorphism(power(D, p), D, f.as_mapping())
        return is_cyclic(f) and f.table == table(D, p, expected_fn)

    small = time.perf_counter()
    if not decide_star(K2) or not witness_ok(K2, lambda t: max(set(t), key=t.count)):
        problems.append("K2 witness is not majority")
    if not decide_star(LIN) or not witness_ok(LIN, lambda t: str(sum(map(int, t)) % 2)):
        problems.append("3LIN2 witness is not x+y+z mod 2")
    small = time.perf_counter() - small
    if small >= 1.0:
        problems.append(f"small cases took {small:.2f}s")

    big = time.perf_counter()
    orbits = len(cyclic_orbits(3, star_prime(K3)))
    refuted = not decide_star(K3)
    big = time.perf_counter() - big
    if not refuted or orbits != 51 or big > 300:
        problems.append(f"K3: refuted={refuted}, orbits={orbits}, {big:.2f}s")
    report(1, not problems, "; ".join(problems) or
           f"K2 majority, 3LIN2 xor3, K3 refuted at arity 5 over {orbits} orbits in {big:.3f}s", t0)


# 2 ------------------------------------------------------------------------

def _soundness(red, X, cover_sizes=None):
    """Criterion 2 checks for one instance; returns a failure message or None."""
    E, D = red.source, red.target
    f = find_hom(X, E)
    g = find_hom(red.gamma(X), D)
    if (f is None) != (g is None):
        return f"(a) fails on {X!r}"
    if f is not None:
        forward = red.phi(f, X)  # validated on construction
        if red.psi(forward, X).mapping != f.mapping:
            return f"(c) fails on {X!r}"
        red.psi(g, X)
    if cover_sizes is not None:
        out = red.compile(X)
        for r in cover_sizes:
            for H in itertools.combinations(out.compiled.universe, r):
                F, theta = finite_cover(out, H)  # theta validated on construction
                if not set(F) <= set(X.universe):
                    return f"(d) F escapes the instance on {X!r}"
    return None


def test_criterion_2_reduction_soundness(report):
    t0 = time.perf_counter()
    failures, solvable, total = [], 0, 0
    for name, pp in catalog().items():
        red = PPPowerReduction(pp)
        for X in instances(pp.signature, 50, seed=SEED):
            total += 1
            solvable += find_hom(X, red.source) is not None
            msg = _soundness(red, X, cover_sizes=range(5))
            if msg:
                failures.append(f"{name}: {msg}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed <= 120
    report(2, ok, failures[0] if failures else
           f"{total} instances over 4 pp-powers ({solvable} solvable), covers for all |H| <= 4", t0)


# 3 ------------------------------------------------------------------------

def walk3_k2():
    """K2 defined from K2 through two witnesses: odd walks of length 3."""
    z, w = VarRef.z, VarRef.w
    d = PPRelationDef(2, (Atom("E", (z(1, 1), w(1))), Atom("E", (w(1), w(2))), Atom("E", (w(2), z(2, 1)))))
    return PPPower(K2, 1, [("E", 2)], {"E": d}, "K2")


def edge_with_witness_k3():
    """K3 defined from K3: an edge together with a common neighbour."""
    z, w = VarRef.z, VarRef.w
    d = PPRelationDef(1, (Atom("E", (z(1, 1), z(2, 1))), Atom("E", (z(1, 1), w(1))), Atom("E", (w(1), z(2, 1)))))
    return PPPower(K3, 1, [("E", 2)], {"E": d}, "K3")


def test_criterion_3_transitivity(report):
    t0 = time.perf_counter()
    failures, total = [], 0
    for name, pp in catalog().items():
        first = PPPowerReduction(pp)
        stage = walk3_k2() if first.target == K2 else edge_with_witness_k3()
        seconds = [PPPowerReduction(stage), PPPowerReduction(identity_pp(first.target))]
        for second in seconds:
            assert second.source == first.target
            both = compose_reductions(first, second)
            for X in instances(pp.signature, 50, seed=SEED):
                total += 1
                msg = _soundness(both, X)
                if msg:
                    failures.append(f"{name}: {msg}")
    ok = not failures and time.perf_counter() - t0 <= 60
    report(3, ok, failures[0] if failures else f"{total} composed-bundle checks", t0)


# 4 ------------------------------------------------------------------------

def random_graph(rng, size):
    V = [f"v{i}" for i in range(size)]
    E = set()
    for a, b in itertools.combinations(V, 2):
        if rng.random() < 0.4:
            E |= {(a, b), (b, a)}
    return Structure([("E", 2)], V, {"E": E})


def test_criterion_4_hom_equivalence(report):
    t0 = time.perf_counter()
    P3 = path_graph(3)
    theta1 = find_hom(K2, P3)
    theta2 = find_hom(P3, K2)
    red = hom_equiv_reduction(theta1, theta2)
    rng = random.Random(SEED)
    failures, directions = [], 0
    for _ in range(20):
        X = random_graph(rng, rng.randint(2, 6))
        f = find_hom(X, P3)
        g = find_hom(X, K2)
        if (f is None) != (g is None):
            failures.append(f"solvability differs on {X!r}")
        if f is not None:
            red.phi(f, X)
            red.psi(g, X)
            directions += 2
    report(4, not failures, failures[0] if failures else f"20 instances, {directions} transfers re-validated", t0)


# 5 ------------------------------------------------------------------------

def rotated_triangles(count):
    universe, s1 = [], []
    for k in range(count):
        a, b, c = (f"t{k}_{i}" for i in range(3))
        universe += [a, b, c]
        s1 += [(a, b, c), (b, c, a), (c, a, b)]
    X = Structure(LIN.signature, universe, {"S1": s1})
    gens = [Permutation.cycle(universe, [f"t{k}_{i}" for i in range(3)]) for k in range(count)]
    return X, GeneratedAction(tuple(universe), tuple(gens))


def test_criterion_5_symmetrization(report):
    t0 = time.perf_counter()
    xor3 = Polymorphism(LIN, 3, table(LIN, 3, lambda t: str(sum(map(int, t)) % 2)))
    X, action = rotated_triangles(1)
    rot = action.generators[0]
    h = symmetrize(Homomorphism(X, LIN, {"t0_0": "1", "t0_1": "0", "t0_2": "0"}), rot, xor3)
    single = h.mapping == {"t0_0": "1", "t0_1": "1", "t0_2": "1"} and is_invariant(h, rot)

    X2, action2 = rotated_triangles(2)
    g1, g2 = action2.generators
    h0 = Homomorphism(X2, LIN, {u: ("1" if u.endswith("_0") else "0") for u in X2.universe})
    after_first = symmetrize(h0, g1, xor3)
    after_second = symmetrize(after_first, g2, xor3)
    kept = is_invariant(after_first, g1) and is_invariant(after_second, g1) and is_invariant(after_second, g2)
    kept = kept and make_invariant(h0, action2, {3: xor3}) == after_second
    report(5, single and kept, f"(1,0,0) -> {tuple(h.as_tuple())}; first invariance kept after second step: {kept}", t0)


# 6 ------------------------------------------------------------------------

def test_criterion_6_schreier(report, tmp_path):
    t0 = time.perf_counter()
    primes = [3, 5, 7]
    graph_file, action_file = str(tmp_path / "graph.json"), str(tmp_path / "action.json")
    made = dispatch(["schreier", "--primes", "3,5,7", "--out", graph_file, "--action-out", action_file])
    solved = dispatch(["solve", graph_file, "builtin:K3"])
    graph, action = schreier_instance(primes)
    invariant = invariant_hom_exists(graph, action, K3)
    components = [[u for u in graph.universe if u.startswith(f"c{i}_")] for i in range(len(primes))]
    brute = brute_invariant_homs_by_component(graph, action.generators, K3, components)
    ok = made.code == 0 and solved.code == 0 and not invariant and brute == []
    report(6, ok, f"solve exit {solved.code}, invariant_hom_exists={invariant}, "
                  f"brute-force invariant homs={len(brute)}", t0)


# 7 ------------------------------------------------------------------------

def test_criterion_7_dictatorship(report):
    t0 = time.perf_counter()
    problems = []
    for n, want in ((1, (6, 1, 0)), (2, (12, 2, 0))):
        result = dispatch(["ultra", "--demo", str(n)])
        got = (result.payload["colorings"], result.payload["normalized"], result.payload["violations"])
        ground = [f"x{i}" for i in range(1, n + 1)]
        G = disagreement_graph(SetFilter(ground))
        oracle = len(brute_homs(G, K3))
        if result.code != 0 or got != want or got[0] != oracle or got[0] != len(enumerate_homs(G, K3)):
            problems.append(f"demo {n}: {got}, oracle {oracle}")
    x = ["x1", "x2"]
    for base in ([x], [["x1"]]):
        F = SetFilter(x, base)
        rep = filter_report(F)
        for c, _, _ in rep["_checks"]:
            if len(essential_coordinates(coloring_as_polymorphism(c))) != 1 and base == [x]:
                problems.append("normalized coloring with more than one essential coordinate")
            ok, why = check_ultrafilter(extract_family(c, x), F)
            if not ok:
                problems.append(f"base {base}: {why}")
    report(7, not problems, "; ".join(problems) or "demo 1 = 6/1/0, demo 2 = 12/2/0; ultrafilters for bases {X}, {{x1}}", t0)


# 8 ------------------------------------------------------------------------

def graph_family(seed, count):
    rng = random.Random(seed)
    pairs = []
    while len(pairs) < count:
        X = random_structure(rng, [("E", 2)], rng.randint(1, 4), rng.randint(0, 8))
        D = random_structure(rng, [("E", 2)], rng.randint(1, 3), rng.randint(0, 6), prefix="d")
        pairs.append((X, D))
    return pairs


def test_criterion_8_oracle_equivalence(report):
    t0 = time.perf_counter()
    pairs = graph_family(SEED, 250)
    mismatches, positives = 0, 0
    for X, D in pairs:
        h = find_hom(X, D)
        brute = brute_homs(X, D)
        positives += bool(brute)
        every = sorted(tuple(g.mapping[x] for x in X.universe) for g in enumerate_homs(X, D))
        if (h is not None) != bool(brute) or every != sorted(tuple(m[x] for x in X.universe) for m in brute):
            mismatches += 1
        elif h is not None:
            check_homomorphism(X, D, h.mapping)
    ok = mismatches == 0 and time.perf_counter() - t0 <= 120
    report(8, ok, f"{len(pairs)} pairs, {positives} solvable, {mismatches} mismatches", t0)


# 9 ------------------------------------------------------------------------

def test_criterion_9_burnside(report):
    t0 = time.perf_counter()
    got = {(d, p): len(cyclic_orbits(d, p)) for d, p in ((3, 5), (3, 2))}
    ok = got[(3, 5)] == 51 == burnside(3, 5) and got[(3, 2)] == 6 == burnside(3, 2)
    report(9, ok, f"cyclic_orbits(3,5)={got[(3, 5)]}, cyclic_orbits(3,2)={got[(3, 2)]}", t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
