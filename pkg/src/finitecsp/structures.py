"""Finite relational structures.

A :class:`Structure` is an immutable triple of a signature, an ordered universe
of string element identifiers, and one relation (a set of tuples) per symbol.
Relations are kept sorted by the universe order of their entries so that every
traversal, and therefore every search built on top, is reproducible.
"""

from __future__ import annotations

import itertools
import json
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Signature",
    "Structure",
    "StructureError",
    "power",
    "power_element",
    "induced_substructure",
    "quotient",
    "builtin",
    "structure_to_dict",
    "structure_from_dict",
    "load_structure",
    "dump_structure",
]

TUPLE_SEP = ","


class StructureError(ValueError):
    """Raised for malformed signatures, structures, partitions or files."""


class Signature:
    """Ordered list of ``(name, arity)`` pairs with unique names."""

    __slots__ = ("_symbols", "_arity")

    def __init__(self, symbols: Iterable[tuple[str, int]]):
        symbols = tuple((str(name), int(arity)) for name, arity in symbols)
        arity: dict[str, int] = {}
        for name, k in symbols:
            if name in arity:
                raise StructureError(f"duplicate relation symbol {name!r}")
            if k < 1:
                raise StructureError(f"symbol {name!r} has arity {k}; arities must be >= 1")
            arity[name] = k
        self._symbols = symbols
        self._arity = arity

    @property
    def symbols(self) -> tuple[tuple[str, int], ...]:
        return self._symbols

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self._symbols)

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise StructureError(f"unknown relation symbol {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return name in self._arity

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self._symbols)

    def __len__(self) -> int:
        return len(self._symbols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        # symbol order is presentation only
        return self._arity == other._arity

    def __hash__(self) -> int:
        return hash(frozenset(self._arity.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}/{k}" for n, k in self._symbols)
        return f"Signature({inner})"

    def to_list(self) -> list[dict]:
        return [{"name": n, "arity": k} for n, k in self._symbols]


class Structure:
    """An immutable finite relational structure.

    Parameters
    ----------
    signature : Signature or iterable of (name, arity)
    universe : sequence of element identifiers (coerced to ``str``)
    relations : mapping from symbol name to an iterable of tuples. Symbols of
        the signature missing from the mapping are interpreted as empty.

    Examples
    --------
    >>> K2 = Structure([("E", 2)], ["0", "1"], {"E": [("0", "1"), ("1", "0")]})
    >>> len(K2), K2.relation("E")
    (2, (('0', '1'), ('1', '0')))
    """

    __slots__ = ("_signature", "_universe", "_index", "_relations", "_sets", "_hash")

    def __init__(
        self,
        signature: Signature | Iterable[tuple[str, int]],
        universe: Iterable,
        relations: Mapping[str, Iterable[Sequence]] | None = None,
    ):
        if not isinstance(signature, Signature):
            signature = Signature(signature)
        universe = tuple(str(u) for u in universe)
        index = {u: i for i, u in enumerate(universe)}
        if len(index) != len(universe):
            dupes = sorted({u for u in universe if universe.count(u) > 1})
            raise StructureError(f"universe entries are not unique: {dupes}")
        relations = dict(relations or {})
        for name in relations:
            if name not in signature:
                raise StructureError(f"relation {name!r} is not in the signature")
        rels: dict[str, tuple[tuple[str, ...], ...]] = {}
        sets: dict[str, frozenset] = {}
        for name, k in signature:
            tuples = set()
            for t in relations.get(name, ()):
                t = tuple(str(e) for e in t)
                if len(t) != k:
                    raise StructureError(
                        f"tuple {t} in relation {name!r} has length {len(t)}, expected {k}"
                    )
                for e in t:
                    if e not in index:
                        raise StructureError(
                            f"tuple {t} in relation {name!r} mentions unknown element {e!r}"
                        )
                tuples.add(t)
            rels[name] = tuple(sorted(tuples, key=lambda t: tuple(index[e] for e in t)))
            sets[name] = frozenset(tuples)
        self._signature = signature
        self._universe = universe
        self._index = index
        self._relations = rels
        self._sets = sets
        self._hash = None

    @property
    def signature(self) -> Signature:
        return self._signature

    @property
    def universe(self) -> tuple[str, ...]:
        return self._universe

    @property
    def relations(self) -> dict[str, tuple[tuple[str, ...], ...]]:
        return dict(self._relations)

    def relation(self, name: str) -> tuple[tuple[str, ...], ...]:
        try:
            return self._relations[name]
        except KeyError:
            raise StructureError(f"unknown relation symbol {name!r}") from None

    def holds(self, name: str, t: Sequence[str]) -> bool:
        return tuple(t) in self._sets[name]

    def index(self, element: str) -> int:
        return self._index[element]

    def __contains__(self, element: object) -> bool:
        return element in self._index

    def __len__(self) -> int:
        return len(self._universe)

    def __iter__(self) -> Iterator[str]:
        return iter(self._universe)

    def tuples(self) -> Iterator[tuple[str, tuple[str, ...]]]:
        """Yield every ``(symbol, tuple)`` pair in deterministic order."""
        for name, _ in self._signature:
            for t in self._relations[name]:
                yield name, t

    def num_tuples(self) -> int:
        return sum(len(ts) for ts in self._relations.values())

    def same_signature(self, other: "Structure") -> bool:
        return self._signature == other._signature

    def rename(self, mapping: Mapping[str, str]) -> "Structure":
        """Return the isomorphic copy with elements renamed by ``mapping``."""
        return Structure(
            self._signature,
            [mapping[u] for u in self._universe],
            {n: [tuple(mapping[e] for e in t) for t in ts] for n, ts in self._relations.items()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self._signature == other._signature
            and set(self._universe) == set(other._universe)
            and self._sets == other._sets
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self._signature, frozenset(self._universe), frozenset(self._sets.items()))
            )
        return self._hash

    def __repr__(self) -> str:
        sizes = ", ".join(f"{n}:{len(ts)}" for n, ts in self._relations.items())
        return f"<Structure |U|={len(self._universe)} {sizes}>"

    def __getstate__(self):
        return (self._signature.symbols, self._universe, self._relations)

    def __setstate__(self, state):
        symbols, universe, relations = state
        self.__init__(symbols, universe, relations)


def power_element(parts: Sequence[str]) -> str:
    """Name of the element of a categorical power with the given coordinates."""
    return TUPLE_SEP.join(parts)


def power(D: Structure, n: int) -> Structure:
    """Categorical power ``D^n``.

    The universe is all ``n``-tuples over ``D`` in lexicographic order, each
    named by :func:`power_element`.  A tuple of such elements is related iff
    it is related in every coordinate.
    """
    if n < 1:
        raise StructureError(f"power exponent must be >= 1, got {n}")
    universe = [power_element(p) for p in itertools.product(D.universe, repeat=n)]
    relations = {}
    for name, k in D.signature:
        rel = []
        for rows in itertools.product(D.relation(name), repeat=n):
            # rows[j] is the j-th coordinate tuple; transpose into k elements
            rel.append(tuple(power_element(col) for col in zip(*rows)))
        relations[name] = rel
    return Structure(D.signature, universe, relations)


def induced_substructure(X: Structure, subset: Iterable[str]) -> Structure:
    """Restrict ``X`` to ``subset``, keeping only tuples lying entirely inside it."""
    subset = set(subset)
    unknown = subset.difference(X.universe)
    if unknown:
        raise StructureError(f"elements not in the universe: {sorted(unknown)}")
    universe = [u for u in X.universe if u in subset]
    relations = {
        name: [t for t in X.relation(name) if all(e in subset for e in t)]
        for name in X.signature.names
    }
    return Structure(X.signature, universe, relations)


def _block_name(block: Sequence[str]) -> str:
    return "{" + TUPLE_SEP.join(block) + "}"


def quotient(
    X: Structure,
    blocks: Iterable[Iterable[str]],
    names: Sequence[str] | None = None,
) -> Structure:
    """Quotient of ``X`` by a partition of its universe.

    Each block becomes one element; a tuple of blocks is related iff some
    tuple of representatives is related in ``X``.  Blocks are named
    ``{a,b,...}`` (members in universe order) unless ``names`` is given.
    """
    blocks = [sorted(set(b), key=X.index) for b in blocks]
    owner: dict[str, int] = {}
    for i, b in enumerate(blocks):
        if not b:
            raise StructureError("partition has an empty block")
        for e in b:
            if e not in X:
                raise StructureError(f"partition mentions unknown element {e!r}")
            if e in owner:
                raise StructureError(f"element {e!r} occurs in more than one block")
            owner[e] = i
    missing = [u for u in X.universe if u not in owner]
    if missing:
        raise StructureError(f"partition does not cover {missing}")
    if names is None:
        names = [_block_name(b) for b in blocks]
    elif len(names) != len(blocks):
        raise StructureError("one name per block required")
    order = sorted(range(len(blocks)), key=lambda i: X.index(blocks[i][0]))
    relations = {
        name: [tuple(names[owner[e]] for e in t) for t in X.relation(name)]
        for name in X.signature.names
    }
    return Structure(X.signature, [names[i] for i in order], relations)


# -- builtins ---------------------------------------------------------------

def complete_graph(n: int) -> Structure:
    if n < 1:
        raise StructureError("K_n needs n >= 1")
    V = [str(i) for i in range(n)]
    return Structure([("E", 2)], V, {"E": [(a, b) for a in V for b in V if a != b]})


def cycle_graph(n: int) -> Structure:
    if n < 3:
        raise StructureError("C_n needs n >= 3")
    V = [str(i) for i in range(n)]
    E = []
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        E += [(a, b), (b, a)]
    return Structure([("E", 2)], V, {"E": E})


def path_graph(n: int) -> Structure:
    """Undirected path on ``n`` vertices ``0 - 1 - ... - n-1``."""
    V = [str(i) for i in range(n)]
    E = []
    for i in range(n - 1):
        E += [(V[i], V[i + 1]), (V[i + 1], V[i])]
    return Structure([("E", 2)], V, {"E": E})


def three_lin2() -> Structure:
    """Linear equations ``x+y+z = 0`` and ``x+y+z = 1`` over GF(2)."""
    triples = list(itertools.product((0, 1), repeat=3))
    return Structure(
        [("S0", 3), ("S1", 3)],
        ["0", "1"],
        {
            "S0": [tuple(map(str, t)) for t in triples if sum(t) % 2 == 0],
            "S1": [tuple(map(str, t)) for t in triples if sum(t) % 2 == 1],
        },
    )


def builtin(name: str) -> Structure:
    """Generate a named template: ``K2``, ``K3``, ``Kn:<n>``, ``Cn:<n>``,
    ``Pn:<n>`` or ``3LIN2``."""
    if name.startswith("builtin:"):
        name = name[len("builtin:"):]
    if name == "3LIN2":
        return three_lin2()
    if len(name) == 2 and name[0] in "KC" and name[1].isdigit():
        name = f"{name[0]}n:{name[1]}"
    kind, _, arg = name.partition(":")
    makers = {"Kn": complete_graph, "Cn": cycle_graph, "Pn": path_graph}
    if kind in makers and arg.isdigit():
        return makers[kind](int(arg))
    raise StructureError(f"unknown builtin structure {name!r}")


# -- serialization ----------------------------------------------------------

def structure_to_dict(X: Structure) -> dict:
    return {
        "signature": X.signature.to_list(),
        "universe": list(X.universe),
        "relations": {n: [list(t) for t in ts] for n, ts in X.relations.items()},
    }


def _check_keys(obj: dict, allowed: set[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise StructureError(f"{what}: expected a JSON object")
    extra = set(obj) - allowed
    if extra:
        raise StructureError(f"{what}: unknown keys {sorted(extra)}")


def structure_from_dict(obj: dict) -> Structure:
    _check_keys(obj, {"signature", "universe", "relations"}, "structure")
    for key in ("signature", "universe"):
        if key not in obj:
            raise StructureError(f"structure: missing field {key!r}")
    symbols = []
    for entry in obj["signature"]:
        _check_keys(entry, {"name", "arity"}, "structure.signature entry")
        symbols.append((entry["name"], entry["arity"]))
    return Structure(symbols, obj["universe"], obj.get("relations", {}))


def load_structure(ref: str) -> Structure:
    """Load a structure from a JSON file path or a ``builtin:<name>`` reference."""
    if ref.startswith("builtin:"):
        return builtin(ref)
    with open(ref) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StructureError(f"{ref}: invalid JSON ({exc})") from None
    return structure_from_dict(obj)


def dump_structure(X: Structure) -> str:
    return json.dumps(structure_to_dict(X), sort_keys=True)
