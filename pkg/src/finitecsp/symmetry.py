"""Group actions on instances and invariant solutions.

Permutations act on the universe of an instance.  Given a cyclic polymorphism
of arity ``p`` and a permutation ``g`` with ``g^p = 1`` preserving the
instance, any solution ``h0`` can be averaged along the ``g``-orbits::

    h(x) = f(h0(x), h0(g^-1 x), ..., h0(g^-(p-1) x))

which is again a solution, and ``g``-invariant.  Applying this generator by
generator to a commuting family yields a solution invariant under all of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .homs import DEFAULT_OPTIONS, Homomorphism, SearchOptions, find_hom
from .polymorphisms import Polymorphism, is_cyclic, is_prime
from .structures import Structure, StructureError, quotient

__all__ = [
    "Permutation",
    "GeneratedAction",
    "preserves",
    "is_invariant",
    "symmetrize",
    "make_invariant",
    "schreier_instance",
    "orbit_partition",
    "find_invariant_hom",
    "invariant_hom_exists",
    "action_from_dict",
]


class Permutation:
    """A bijection of a finite set with its exact order.

    If ``order`` is given it must be the true order of the permutation.
    """

    def __init__(self, mapping: Mapping[str, str], order: int | None = None):
        mapping = {str(k): str(v) for k, v in mapping.items()}
        if sorted(mapping) != sorted(mapping.values()):
            raise ValueError("permutation is not a bijection of its domain")
        self.mapping = mapping
        self.inverse = {v: k for k, v in mapping.items()}
        true_order = self._order()
        if order is not None and order != true_order:
            raise ValueError(f"declared order {order} but the permutation has order {true_order}")
        self.order = true_order

    def _order(self) -> int:
        from math import lcm

        seen: set[str] = set()
        result = 1
        for start in self.mapping:
            if start in seen:
                continue
            length, x = 0, start
            while x not in seen:
                seen.add(x)
                x = self.mapping[x]
                length += 1
            result = lcm(result, length)
        return result

    @classmethod
    def identity(cls, universe: Sequence[str]) -> "Permutation":
        return cls({u: u for u in universe})

    @classmethod
    def cycle(cls, universe: Sequence[str], cycle: Sequence[str]) -> "Permutation":
        mapping = {u: u for u in universe}
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            mapping[a] = b
        return cls(mapping)

    @property
    def domain(self) -> set[str]:
        return set(self.mapping)

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def power(self, k: int) -> "Permutation":
        """``self**k`` for any integer ``k`` (negative powers use the inverse)."""
        step = self.mapping if k >= 0 else self.inverse
        out = {}
        for x in self.mapping:
            y = x
            for _ in range(abs(k) % self.order):
                y = step[y]
            out[x] = y
        return Permutation(out)

    def commutes_with(self, other: "Permutation") -> bool:
        return all(self(other(x)) == other(self(x)) for x in self.mapping)

    def to_dict(self) -> dict:
        return {"order": self.order, "map": dict(self.mapping)}

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.mapping == other.mapping

    def __repr__(self):
        return f"<Permutation order={self.order} on {len(self.mapping)} points>"


@dataclass
class GeneratedAction:
    """A finite group given by generators acting on ``universe``."""

    universe: tuple[str, ...]
    generators: tuple[Permutation, ...]
    commutative: bool = True

    def __post_init__(self):
        self.universe = tuple(self.universe)
        self.generators = tuple(self.generators)
        for g in self.generators:
            if g.domain != set(self.universe):
                raise ValueError("generator does not act on the action's universe")
        if self.commutative:
            for i, g in enumerate(self.generators):
                for h in self.generators[i + 1:]:
                    if not g.commutes_with(h):
                        raise ValueError("commutative flag set but two generators do not commute")

    def to_dict(self) -> dict:
        return {"generators": [g.to_dict() for g in self.generators], "commutative": self.commutative}


def action_from_dict(obj: dict, universe: Sequence[str]) -> GeneratedAction:
    extra = set(obj) - {"generators", "commutative"}
    if extra:
        raise StructureError(f"action: unknown keys {sorted(extra)}")
    gens = []
    for i, g in enumerate(obj["generators"]):
        if set(g) - {"order", "map"}:
            raise StructureError(f"action.generators[{i}]: unknown keys {sorted(set(g) - {'order', 'map'})}")
        mapping = {u: u for u in universe}
        mapping.update(g["map"])
        gens.append(Permutation(mapping, g.get("order")))
    return GeneratedAction(tuple(universe), tuple(gens), bool(obj.get("commutative", True)))


def dump_action(action: GeneratedAction) -> str:
    return json.dumps(action.to_dict(), sort_keys=True)


def preserves(g: Permutation, X: Structure) -> bool:
    """True iff ``g`` maps every relation of ``X`` onto itself."""
    if g.domain != set(X.universe):
        raise ValueError("permutation does not act on the universe of the structure")
    return all(X.holds(name, tuple(g(e) for e in t)) for name, t in X.tuples())


def is_invariant(h: Homomorphism, g: Permutation) -> bool:
    """``h(g x) == h(x)`` for every ``x``."""
    return all(h(g(x)) == h(x) for x in h.source.universe)


def symmetrize(h0: Homomorphism, g: Permutation, f: Polymorphism) -> Homomorphism:
    """Average ``h0`` along ``g`` using the cyclic polymorphism ``f``.

    Needs ``g`` to preserve the instance, ``g`` to have order dividing the
    (prime) arity of ``f``, and ``f`` to be cyclic on the target of ``h0``.
    """
    X, D = h0.source, h0.target
    p = f.arity
    if not is_prime(p):
        raise ValueError(f"polymorphism arity {p} is not prime")
    if f.template != D:
        raise ValueError("polymorphism is not defined on the target of h0")
    if not is_cyclic(f):
        raise ValueError("polymorphism is not cyclic")
    if p % g.order:
        raise ValueError(f"permutation order {g.order} does not divide arity {p}")
    if not preserves(g, X):
        raise ValueError("permutation does not preserve the instance")
    h = {}
    for x in X.universe:
        args = []
        y = x
        for _ in range(p):
            args.append(h0(y))
            y = g.inverse[y]
        h[x] = f(*args)
    return Homomorphism(X, D, h)


def make_invariant(
    h0: Homomorphism, action: GeneratedAction, polys: Mapping[int, Polymorphism]
) -> Homomorphism:
    """Symmetrize along each generator in turn.

    Commuting generators keep earlier invariances intact, so the result is
    invariant under the whole generated group.
    """
    if not action.commutative:
        raise ValueError("make_invariant needs commuting generators")
    h = h0
    for g in action.generators:
        if g.order == 1:
            continue
        if g.order not in polys:
            raise ValueError(f"no cyclic polymorphism supplied for order {g.order}")
        h = symmetrize(h, g, polys[g.order])
    return h


def schreier_instance(primes: Sequence[int]) -> tuple[Structure, GeneratedAction]:
    """Disjoint cycles of the given odd prime lengths with one rotation each.

    Vertex ``c{i}_{j}`` is point ``j`` on cycle ``i``; rotation ``i`` sends it
    to ``c{i}_{j+1 mod p_i}`` and fixes the other cycles.
    """
    primes = list(primes)
    if not primes:
        raise ValueError("at least one prime is required")
    for p in primes:
        if p == 2 or not is_prime(p):
            raise ValueError(f"{p} is not an odd prime")
    if any(a >= b for a, b in zip(primes, primes[1:])):
        raise ValueError("primes must be strictly increasing")
    universe = [f"c{i}_{j}" for i, p in enumerate(primes) for j in range(p)]
    edges = []
    gens = []
    for i, p in enumerate(primes):
        cyc = [f"c{i}_{j}" for j in range(p)]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            edges += [(a, b), (b, a)]
        gens.append(Permutation.cycle(universe, cyc))
    graph = Structure([("E", 2)], universe, {"E": edges})
    return graph, GeneratedAction(tuple(universe), tuple(gens), True)


def orbit_partition(action: GeneratedAction) -> list[list[str]]:
    """Orbits of the group generated by ``action.generators``."""
    seen: set[str] = set()
    orbits = []
    for start in action.universe:
        if start in seen:
            continue
        orbit, stack = [], [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            orbit.append(x)
            for g in action.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        orbits.append(orbit)
    return orbits


def find_invariant_hom(
    X: Structure, action: GeneratedAction, D: Structure, opts: SearchOptions = DEFAULT_OPTIONS
) -> Homomorphism | None:
    """A homomorphism ``X -> D`` invariant under every generator, if any.

    Invariant maps are exactly the maps constant on orbits, so the search
    runs on the quotient of ``X`` by the orbit partition.
    """
    if set(action.universe) != set(X.universe):
        raise ValueError("action does not act on the universe of the instance")
    for g in action.generators:
        if not preserves(g, X):
            raise ValueError("a generator does not preserve the instance")
    orbits = orbit_partition(action)
    names = [f"orbit:{min(o, key=X.index)}" for o in orbits]
    q = find_hom(quotient(X, orbits, names), D, opts)
    if q is None:
        return None
    return Homomorphism(X, D, {x: q(name) for o, name in zip(orbits, names) for x in o})


def invariant_hom_exists(
    X: Structure, action: GeneratedAction, D: Structure, opts: SearchOptions = DEFAULT_OPTIONS
) -> bool:
    return find_invariant_hom(X, action, D, opts) is not None
