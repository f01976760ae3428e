"""Polymorphisms: cyclic search, WNU checks and essential coordinates.

A cyclic polymorphism of arity ``p`` is constant on the orbits of the shift
``(x0, ..., x_{p-1}) -> (x1, ..., x_{p-1}, x0)``.  Searching for one amounts
to finding a homomorphism from the *orbit-collapsed indicator structure* (one
element per orbit, relations the images of those of ``D^p``) into ``D``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .homs import DEFAULT_OPTIONS, Homomorphism, SearchOptions, check_homomorphism, find_hom
from .structures import Structure, StructureError, power, power_element

__all__ = [
    "Polymorphism",
    "CyclicOrbitIndex",
    "cyclic_orbits",
    "indicator_structure",
    "find_cyclic_polymorphism",
    "decide_star",
    "star_prime",
    "dump_polymorphism",
    "essential_coordinates",
    "is_essentially_projection",
    "is_wnu",
    "is_cyclic",
    "is_prime",
    "next_prime",
    "projection",
    "polymorphism_from_dict",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    p = n + 1
    while not is_prime(p):
        p += 1
    return p


class Polymorphism:
    """An ``arity``-ary operation on a template, validated as ``D^arity -> D``."""

    def __init__(self, template: Structure, arity: int, table: Mapping[Sequence[str], str]):
        if arity < 1:
            raise ValueError("arity must be >= 1")
        table = {tuple(k): str(v) for k, v in table.items()}
        expected = set(itertools.product(template.universe, repeat=arity))
        if set(table) != expected:
            raise ValueError(f"table must be defined on exactly the {len(expected)} {arity}-tuples")
        self.template = template
        self.arity = arity
        self.table = table
        check_homomorphism(power(template, arity), template, self.as_mapping())

    def __call__(self, *args: str) -> str:
        return self.table[tuple(args)]

    def as_mapping(self) -> dict[str, str]:
        """The table keyed by :func:`power_element` names."""
        return {power_element(k): v for k, v in self.table.items()}

    def as_homomorphism(self) -> Homomorphism:
        return Homomorphism(power(self.template, self.arity), self.template, self.as_mapping())

    def to_dict(self) -> dict:
        return {
            "arity": self.arity,
            "table": {",".join(k): self.table[k] for k in sorted(self.table, key=self._key)},
        }

    def _key(self, t):
        return tuple(self.template.index(e) for e in t)

    def __eq__(self, other):
        if not isinstance(other, Polymorphism):
            return NotImplemented
        return self.template == other.template and self.arity == other.arity and self.table == other.table

    def __repr__(self):
        return f"<Polymorphism arity={self.arity} on {len(self.template)} elements>"


def polymorphism_from_dict(obj: dict, template: Structure) -> Polymorphism:
    extra = set(obj) - {"arity", "table"}
    if extra:
        raise StructureError(f"polymorphism: unknown keys {sorted(extra)}")
    arity = int(obj["arity"])
    table = {}
    for key, value in obj["table"].items():
        args = tuple(key.split(","))
        if len(args) != arity:
            raise StructureError(f"polymorphism.table: key {key!r} does not have {arity} entries")
        table[args] = value
    return Polymorphism(template, arity, table)


def projection(template: Structure, arity: int, coordinate: int) -> Polymorphism:
    """The ``coordinate``-th projection (1-based) of the given arity."""
    if not 1 <= coordinate <= arity:
        raise ValueError(f"coordinate {coordinate} out of range 1..{arity}")
    return Polymorphism(
        template, arity, {t: t[coordinate - 1] for t in itertools.product(template.universe, repeat=arity)}
    )


@dataclass(frozen=True)
class CyclicOrbitIndex:
    """Partition of ``range(domain_size)**p`` into cyclic-shift orbits.

    ``orbit_of`` maps each tuple to the position of its orbit in ``orbits``;
    each orbit is listed starting from its lexicographically least member,
    which serves as the canonical representative.
    """

    domain_size: int
    p: int
    orbits: tuple[tuple[tuple[int, ...], ...], ...]
    orbit_of: Mapping[tuple[int, ...], int]

    def representative(self, i: int) -> tuple[int, ...]:
        return self.orbits[i][0]

    def __len__(self) -> int:
        return len(self.orbits)


def cyclic_orbits(domain_size: int, p: int) -> CyclicOrbitIndex:
    if not is_prime(p):
        raise ValueError(f"arity {p} is not prime")
    if domain_size < 1:
        raise ValueError("domain_size must be >= 1")
    orbit_of: dict[tuple[int, ...], int] = {}
    orbits = []
    for t in itertools.product(range(domain_size), repeat=p):
        if t in orbit_of:
            continue
        members = []
        s = t
        while s not in orbit_of:
            orbit_of[s] = len(orbits)
            members.append(s)
            s = s[1:] + s[:1]
        orbits.append(tuple(members))
    return CyclicOrbitIndex(domain_size, p, tuple(orbits), orbit_of)


def _orbit_name(rep: Sequence[str]) -> str:
    return power_element(rep)


def indicator_structure(D: Structure, p: int, index: CyclicOrbitIndex | None = None) -> Structure:
    """Orbit-collapsed image of ``D^p``: one element per cyclic orbit."""
    if index is None:
        index = cyclic_orbits(len(D), p)
    U = D.universe
    names = [_orbit_name([U[i] for i in index.representative(k)]) for k in range(len(index))]
    relations = {}
    for name, k in D.signature:
        rows = [tuple(D.index(e) for e in t) for t in D.relation(name)]
        rel = set()
        for choice in itertools.product(rows, repeat=p):
            rel.add(tuple(names[index.orbit_of[col]] for col in zip(*choice)))
        relations[name] = rel
    return Structure(D.signature, names, relations)


def find_cyclic_polymorphism(
    D: Structure, p: int, opts: SearchOptions = DEFAULT_OPTIONS
) -> Polymorphism | None:
    """A cyclic polymorphism of prime arity ``p`` or ``None`` if none exists.

    Absence is certified by exhaustive search; a budget overrun raises
    :class:`~finitecsp.homs.BudgetExhausted`.
    """
    if p < 2 or not is_prime(p):
        raise ValueError(f"arity {p} is not a prime >= 2")
    index = cyclic_orbits(len(D), p)
    h = find_hom(indicator_structure(D, p, index), D, opts)
    if h is None:
        return None
    U = D.universe
    table = {}
    for t, k in index.orbit_of.items():
        rep = _orbit_name([U[i] for i in index.representative(k)])
        table[tuple(U[i] for i in t)] = h(rep)
    return Polymorphism(D, p, table)


def star_prime(D: Structure) -> int:
    """The arity :func:`decide_star` searches: the smallest prime above ``|D|``."""
    return next_prime(max(len(D), 1))


def decide_star(D: Structure, opts: SearchOptions = DEFAULT_OPTIONS) -> bool:
    """Decide whether ``D`` has cyclic polymorphisms of every prime arity above ``|D|``.

    Only :func:`star_prime` is searched: for finite structures, a cyclic
    polymorphism at one prime above ``|D|`` implies one at every such prime.
    """
    return find_cyclic_polymorphism(D, star_prime(D), opts) is not None


def is_cyclic(f: Polymorphism) -> bool:
    return f.arity >= 2 and all(f.table[t] == f.table[t[1:] + t[:1]] for t in f.table)


def essential_coordinates(f: Polymorphism) -> set[int]:
    """Coordinates (1-based) on which ``f`` actually depends."""
    U = f.template.universe
    out = set()
    for i in range(f.arity):
        for t, value in f.table.items():
            if any(f.table[t[:i] + (u,) + t[i + 1:]] != value for u in U):
                out.add(i + 1)
                break
    return out


def is_essentially_projection(f: Polymorphism) -> bool:
    return len(essential_coordinates(f)) <= 1


def is_wnu(f: Polymorphism) -> bool:
    """Weak near-unanimity: idempotent, and ``f(y,x,..,x) = f(x,y,..,x) = ... = f(x,..,x,y)``."""
    if f.arity < 2:
        raise ValueError("WNU needs arity >= 2")
    n = f.arity
    for x in f.template.universe:
        if f.table[(x,) * n] != x:
            return False
        for y in f.template.universe:
            values = {f.table[(x,) * i + (y,) + (x,) * (n - i - 1)] for i in range(n)}
            if len(values) > 1:
                return False
    return True


def dump_polymorphism(f: Polymorphism) -> str:
    return json.dumps(f.to_dict(), sort_keys=True)
