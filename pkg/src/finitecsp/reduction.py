"""Reductions between homomorphism problems.

Two kinds of reduction are provided, plus their composition:

* pp-powers.  ``E`` lives on ``D^n`` and each relation of ``E`` is defined by
  an existentially quantified conjunction of ``D``-relations and equalities
  over the coordinates of its arguments.  An ``E``-instance ``X`` is compiled
  into a ``D``-instance (:func:`gamma`) with one element per formal coordinate
  (modulo the identifications forced by equality atoms) and one per formal
  witness.  :func:`phi` and :func:`psi` move solutions across, and
  :func:`finite_cover` maps finite pieces of the compiled instance back into
  the compilation of a finite piece of ``X``.
* homomorphic equivalence.  The instance is left alone and solutions are
  composed with the two witnessing homomorphisms.

Variable indices inside pp definitions are 1-based, as in the file format.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .homs import BudgetExhausted, Homomorphism, SignatureMismatch
from .structures import (
    Signature,
    Structure,
    StructureError,
    builtin,
    induced_substructure,
    power_element,
    structure_from_dict,
    structure_to_dict,
)

__all__ = [
    "VarRef",
    "Atom",
    "PPRelationDef",
    "PPPower",
    "GammaOutput",
    "normalize_pp",
    "is_normalized",
    "eval_pp_power",
    "canonical_witnesses",
    "identity_pp",
    "gamma",
    "phi",
    "psi",
    "finite_cover",
    "Reduction",
    "PPPowerReduction",
    "HomEquivReduction",
    "ComposedReduction",
    "hom_equiv_reduction",
    "compose_reductions",
    "pp_from_dict",
    "pp_to_dict",
    "reduction_from_dict",
]

EQ = "="
DEFAULT_EVAL_BUDGET = 10_000_000


@dataclass(frozen=True, order=True)
class VarRef:
    """Variable of a pp definition: ``z_s(j)`` (coordinate ``j`` of argument
    ``s``) or ``w(t)`` (witness ``t``)."""

    kind: str
    s: int = 0
    j: int = 0

    @classmethod
    def z(cls, s: int, j: int) -> "VarRef":
        return cls("z", s, j)

    @classmethod
    def w(cls, t: int) -> "VarRef":
        return cls("w", 0, t)

    @property
    def t(self) -> int:
        return self.j

    def __post_init__(self):
        if self.kind not in ("z", "w"):
            raise StructureError(f"variable kind must be 'z' or 'w', got {self.kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "z":
            return {"kind": "z", "s": self.s, "j": self.j}
        return {"kind": "w", "t": self.j}

    def __str__(self):
        return f"z{self.s}({self.j})" if self.kind == "z" else f"w({self.j})"


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple[VarRef, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if self.rel == EQ and len(self.args) != 2:
            raise StructureError("an equality atom takes exactly two arguments")

    @property
    def is_equality(self) -> bool:
        return self.rel == EQ

    def to_dict(self) -> dict:
        return {"rel": self.rel, "args": [a.to_dict() for a in self.args]}

    def __str__(self):
        if self.is_equality:
            return f"{self.args[0]}={self.args[1]}"
        return f"{self.rel}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class PPRelationDef:
    witnesses: int
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if self.witnesses < 0:
            raise StructureError("witness count must be >= 0")


class PPPower:
    """A pp-power of ``base``: a structure on ``base^n`` with pp-defined relations.

    ``base_ref`` is an optional builtin name kept for serialization.
    """

    def __init__(
        self,
        base: Structure,
        n: int,
        signature: Signature | Iterable[tuple[str, int]],
        defs: Mapping[str, PPRelationDef],
        base_ref: str | None = None,
    ):
        if n < 1:
            raise StructureError("pp-power dimension must be >= 1")
        if not isinstance(signature, Signature):
            signature = Signature(signature)
        self.base = base
        self.n = n
        self.signature = signature
        self.defs = dict(defs)
        self.base_ref = base_ref
        self._validate()
        self._cache: dict = {}

    def _validate(self) -> None:
        missing = [name for name in self.signature.names if name not in self.defs]
        if missing:
            raise StructureError(f"pp-power: no definition for {missing}")
        extra = set(self.defs) - set(self.signature.names)
        if extra:
            raise StructureError(f"pp-power: definitions for unknown symbols {sorted(extra)}")
        for name, k in self.signature:
            d = self.defs[name]
            for atom in d.atoms:
                if atom.rel != EQ:
                    if atom.rel not in self.base.signature:
                        raise StructureError(f"pp-power.defs.{name}: {atom.rel!r} is not a base relation")
                    if len(atom.args) != self.base.signature.arity(atom.rel):
                        raise StructureError(f"pp-power.defs.{name}: wrong arity in atom {atom}")
                for v in atom.args:
                    if v.kind == "z" and not (1 <= v.s <= k and 1 <= v.j <= self.n):
                        raise StructureError(f"pp-power.defs.{name}: {v} out of range")
                    if v.kind == "w" and not (1 <= v.j <= d.witnesses):
                        raise StructureError(f"pp-power.defs.{name}: {v} out of range")

    @property
    def universe(self) -> list[str]:
        """Universe of the defined structure, named as in :func:`power`."""
        return [power_element(p) for p in itertools.product(self.base.universe, repeat=self.n)]

    def coordinates(self, element: str) -> tuple[str, ...]:
        """The ``n`` base coordinates of an element of ``E``."""
        decode = self._cache.get("decode")
        if decode is None:
            decode = self._cache["decode"] = {
                power_element(p): p for p in itertools.product(self.base.universe, repeat=self.n)
            }
        return decode[element]

    def __repr__(self):
        return f"<PPPower n={self.n} over {self.base!r}: {self.signature!r}>"


def identity_pp(D: Structure, base_ref: str | None = None) -> PPPower:
    """``D`` presented as a 1-dimensional pp-power of itself."""
    defs = {
        name: PPRelationDef(0, (Atom(name, tuple(VarRef.z(s, 1) for s in range(1, k + 1))),))
        for name, k in D.signature
    }
    return PPPower(D, 1, D.signature, defs, base_ref)


def is_normalized(pp: PPPower) -> bool:
    return not any(
        atom.is_equality and any(v.kind == "w" for v in atom.args)
        for d in pp.defs.values()
        for atom in d.atoms
    )


def _normalize_def(d: PPRelationDef) -> PPRelationDef:
    atoms = list(d.atoms)
    eliminated: set[int] = set()
    while True:
        for i, atom in enumerate(atoms):
            if atom.is_equality and any(v.kind == "w" for v in atom.args):
                break
        else:
            break
        a, b = atom.args
        del atoms[i]
        if a == b:
            continue
        # drop the witness side; between two witnesses drop the later one
        if a.kind == "w" and (b.kind == "z" or a.j > b.j):
            old, new = a, b
        else:
            old, new = b, a
        eliminated.add(old.j)
        atoms = [Atom(x.rel, tuple(new if v == old else v for v in x.args)) for x in atoms]
    survivors = [t for t in range(1, d.witnesses + 1) if t not in eliminated]
    renumber = {t: i + 1 for i, t in enumerate(survivors)}
    atoms = [
        Atom(x.rel, tuple(VarRef.w(renumber[v.j]) if v.kind == "w" else v for v in x.args))
        for x in atoms
    ]
    return PPRelationDef(len(survivors), tuple(atoms))


def normalize_pp(pp: PPPower) -> PPPower:
    """Eliminate every equality atom that mentions a witness variable.

    The witness is substituted by the other side of the equality and the atom
    deleted, until no such atom is left.  Surviving witnesses are renumbered.
    """
    if is_normalized(pp):
        return pp
    defs = {name: _normalize_def(d) for name, d in pp.defs.items()}
    return PPPower(pp.base, pp.n, pp.signature, defs, pp.base_ref)


def _compile_atoms(pp: PPPower, name: str):
    """Atoms as (relation set or None for '=', flat variable positions)."""
    k = pp.signature.arity(name)
    n = pp.n
    d = pp.defs[name]

    def pos(v: VarRef) -> int:
        return (v.s - 1) * n + (v.j - 1) if v.kind == "z" else k * n + v.j - 1

    D = pp.base
    out = []
    for atom in d.atoms:
        positions = tuple(pos(v) for v in atom.args)
        if atom.is_equality:
            out.append((None, positions))
        else:
            rel = frozenset(tuple(D.index(e) for e in t) for t in D.relation(atom.rel))
            out.append((rel, positions))
    return out, k * n, d.witnesses


def _holds(atoms, values) -> bool:
    for rel, positions in atoms:
        if rel is None:
            if values[positions[0]] != values[positions[1]]:
                return False
        elif tuple(values[p] for p in positions) not in rel:
            return False
    return True


def canonical_witnesses(pp: PPPower, budget: int = DEFAULT_EVAL_BUDGET) -> dict[str, dict]:
    """For each symbol, map every related tuple of ``E`` to its least witness tuple.

    Brute force over all ``|D|^(k*n + r)`` assignments, with ``budget`` bounding
    the number of assignments examined per symbol.  Witness tuples are in
    lexicographic order of the base universe.
    """
    key = ("witnesses", budget)
    if key in pp._cache:
        return pp._cache[key]
    D = pp.base
    m = len(D)
    out = {}
    for name, k in pp.signature:
        atoms, nz, r = _compile_atoms(pp, name)
        zero_w = [a for a in atoms if all(p < nz for p in a[1])]
        table = {}
        examined = 0
        for zvals in itertools.product(range(m), repeat=nz):
            examined += 1
            if budget and examined > budget:
                raise BudgetExhausted(examined - 1)
            if not _holds(zero_w, zvals):
                continue
            for wvals in itertools.product(range(m), repeat=r):
                examined += 1
                if budget and examined > budget:
                    raise BudgetExhausted(examined - 1)
                if _holds(atoms, zvals + wvals):
                    args = tuple(
                        power_element([D.universe[v] for v in zvals[s * pp.n:(s + 1) * pp.n]])
                        for s in range(k)
                    )
                    table[args] = tuple(D.universe[v] for v in wvals)
                    break
        out[name] = table
    pp._cache[key] = out
    return out


def eval_pp_power(pp: PPPower, budget: int = DEFAULT_EVAL_BUDGET) -> Structure:
    """Materialize the structure ``E`` defined by ``pp`` on ``D^n``."""
    key = ("eval", budget)
    if key not in pp._cache:
        table = canonical_witnesses(pp, budget)
        pp._cache[key] = Structure(pp.signature, pp.universe, {name: list(t) for name, t in table.items()})
    return pp._cache[key]


# -- compilation ------------------------------------------------------------

def coordinate_name(x: str, j: int) -> str:
    return f"{x}#{j}"


def class_name(x: str, j: int) -> str:
    return f"[{x}#{j}]"


def witness_name(rel: str, xs: Sequence[str], t: int) -> str:
    return f"{rel}({','.join(xs)})#w{t}"


@dataclass
class GammaOutput:
    """Result of compiling an ``E``-instance into a ``D``-instance.

    Attributes
    ----------
    compiled : the ``D``-instance.
    class_of : formal coordinate ``(x, j)`` -> name of its class in ``compiled``.
    witnesses : ``(R, xs, t)`` -> name of the formal witness element.
    equality_graph : graph on formal coordinates; edges carry the first
        ``(R, xs)`` that produced them under ``"source"``.
    sources : ``(symbol, compiled tuple)`` -> every ``(R, xs, atom index)``
        producing it, least first.
    """

    pp: PPPower
    instance: Structure
    compiled: Structure
    class_of: dict[tuple[str, int], str]
    witnesses: dict[tuple[str, tuple[str, ...], int], str]
    equality_graph: nx.Graph
    sources: dict[tuple[str, tuple[str, ...]], list[tuple[str, tuple[str, ...], int]]] = field(repr=False)

    def members(self, cls: str) -> list[tuple[str, int]]:
        return [c for c, name in self.class_of.items() if name == cls]

    def representative(self, cls: str) -> tuple[str, int]:
        """Least formal coordinate in a class (by instance order, then index)."""
        return min(self.members(cls), key=lambda c: (self.instance.index(c[0]), c[1]))

    def to_dict(self) -> dict:
        return {
            "compiled": structure_to_dict(self.compiled),
            "class_of": {coordinate_name(x, j): c for (x, j), c in self.class_of.items()},
            "witnesses": {
                name: {"rel": rel, "tuple": list(xs), "t": t}
                for (rel, xs, t), name in self.witnesses.items()
            },
        }


def gamma(X: Structure, pp: PPPower) -> GammaOutput:
    """Compile the ``E``-instance ``X`` into a ``D``-instance.

    ``pp`` must be normalized (see :func:`normalize_pp`).  Base symbols that
    no definition uses stay empty in the output, so they never constrain it.
    """
    if not is_normalized(pp):
        raise ValueError("gamma needs a normalized pp-power; call normalize_pp first")
    if X.signature != pp.signature:
        raise SignatureMismatch(f"instance signature {X.signature!r} differs from {pp.signature!r}")
    n = pp.n
    coords = [(x, j) for x in X.universe for j in range(1, n + 1)]
    G = nx.Graph()
    G.add_nodes_from(coords)
    witnesses: dict = {}
    raw: list[tuple[str, tuple, tuple[str, tuple, int]]] = []
    for name, k in pp.signature:
        d = pp.defs[name]
        for xs in X.relation(name):
            for t in range(1, d.witnesses + 1):
                witnesses[(name, xs, t)] = witness_name(name, xs, t)
            for i, atom in enumerate(d.atoms):
                if atom.is_equality:
                    a, b = ((xs[v.s - 1], v.j) for v in atom.args)
                    if a != b and not G.has_edge(a, b):
                        G.add_edge(a, b, source=(name, xs))
                    continue
                elems = tuple(
                    (xs[v.s - 1], v.j) if v.kind == "z" else witnesses[(name, xs, v.j)]
                    for v in atom.args
                )
                raw.append((atom.rel, elems, (name, xs, i)))
    class_of = {}
    rep_key = {}
    for comp in nx.connected_components(G):
        rep = min(comp, key=lambda c: (X.index(c[0]), c[1]))
        rep_key[class_name(*rep)] = (X.index(rep[0]), rep[1])
        for c in comp:
            class_of[c] = class_name(*rep)

    def elem(e):
        return class_of[e] if isinstance(e, tuple) else e

    relations: dict[str, set] = {name: set() for name in pp.base.signature.names}
    sources: dict = {}
    for rel, elems, src in raw:
        t = tuple(elem(e) for e in elems)
        relations[rel].add(t)
        sources.setdefault((rel, t), []).append(src)
    ordered_classes = sorted(rep_key, key=rep_key.get)
    universe = ordered_classes + list(witnesses.values())
    compiled = Structure(pp.base.signature, universe, relations)
    return GammaOutput(pp, X, compiled, class_of, witnesses, G, sources)


def phi(f: Homomorphism, out: GammaOutput) -> Homomorphism:
    """Send a solution ``X -> E`` to a solution of the compiled instance.

    Classes take the matching coordinate of the image; formal witnesses take
    the canonical (least) witness of the image tuple.
    """
    pp = out.pp
    E = eval_pp_power(pp)
    if f.source != out.instance or f.target != E:
        raise ValueError("phi: f must be a homomorphism from the compiled instance into the pp-power")
    mapping: dict[str, str] = {}
    for (x, j), cls in out.class_of.items():
        value = pp.coordinates(f(x))[j - 1]
        if mapping.setdefault(cls, value) != value:
            raise AssertionError(f"phi: class {cls} is not constant under f")
    table = canonical_witnesses(pp)
    for (rel, xs, t), name in out.witnesses.items():
        mapping[name] = table[rel][tuple(f(x) for x in xs)][t - 1]
    return Homomorphism(out.compiled, pp.base, mapping)


def psi(g: Homomorphism, out: GammaOutput) -> Homomorphism:
    """Read a solution of ``X`` off a solution of the compiled instance."""
    pp = out.pp
    if g.source != out.compiled or g.target != pp.base:
        raise ValueError("psi: g must be a homomorphism from the compiled instance into the base")
    mapping = {
        x: power_element([g(out.class_of[(x, j)]) for j in range(1, pp.n + 1)])
        for x in out.instance.universe
    }
    return Homomorphism(out.instance, eval_pp_power(pp), mapping)


def finite_cover(out: GammaOutput, H: Iterable[str]) -> tuple[tuple[str, ...], Homomorphism]:
    """Find ``F`` within the instance and a homomorphism from ``Γ(X)|H`` to ``Γ(F)``.

    Every related tuple of the induced piece ``H`` is traced back to the least
    instance tuple producing it; all coordinates of that instance tuple are
    collected, and each equality class met more than once is joined by
    shortest paths of the equality graph whose generating tuples also go into
    ``F``.  Elements of ``H`` in no relation are sent to their own
    counterparts, so ``F`` picks up a representative for them too.

    Returns ``(F, theta)`` with ``F`` in instance order.
    """
    X = out.instance
    Hbar = induced_substructure(out.compiled, H)
    witness_names = {name: key for key, name in out.witnesses.items()}
    coord_set: set[tuple[str, int]] = set()
    F: set[str] = set()
    rep_of: dict[str, tuple[str, int]] = {}  # element of H -> representative coordinate
    covered: set[str] = set()
    for sym, t in Hbar.tuples():
        name, xs, i = out.sources[(sym, t)][0]
        atom = out.pp.defs[name].atoms[i]
        coord_set.update((x, j) for x in xs for j in range(1, out.pp.n + 1))
        for u, v in zip(t, atom.args):
            covered.add(u)
            if v.kind == "z":
                rep_of.setdefault(u, (xs[v.s - 1], v.j))
    # join coordinates of one class through the equality graph
    by_class: dict[str, list] = {}
    for c in coord_set:
        by_class.setdefault(out.class_of[c], []).append(c)
    path_edges = []
    key = lambda c: (X.index(c[0]), c[1])
    for members in by_class.values():
        members.sort(key=key)
        root = members[0]
        for other in members[1:]:
            path = nx.shortest_path(out.equality_graph, root, other)
            path_edges.extend(zip(path, path[1:]))
            coord_set.update(path)
    F.update(x for x, _ in coord_set)
    for a, b in path_edges:
        _, xs = out.equality_graph.edges[a, b]["source"]
        F.update(xs)
    for u in Hbar.universe:
        if u in covered:
            continue
        if u in witness_names:
            F.update(witness_names[u][1])
        else:
            rep_of[u] = out.representative(u)
            F.add(rep_of[u][0])
    F_sorted = tuple(sorted(F, key=X.index))
    target = gamma(induced_substructure(X, F_sorted), out.pp)
    theta = {}
    for u in Hbar.universe:
        theta[u] = u if u in witness_names else target.class_of[rep_of[u]]
    return F_sorted, Homomorphism(Hbar, target.compiled, theta)


# -- reduction bundles ------------------------------------------------------

class Reduction:
    """Instance compiler plus two-way solution transfer.

    ``source`` is the template whose instances are compiled; ``target`` is
    the template the compiled instances are solved against.
    """

    source: Structure
    target: Structure

    def gamma(self, X: Structure) -> Structure:
        raise NotImplementedError

    def phi(self, f: Homomorphism, X: Structure) -> Homomorphism:
        raise NotImplementedError

    def psi(self, g: Homomorphism, X: Structure) -> Homomorphism:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


class PPPowerReduction(Reduction):
    def __init__(self, pp: PPPower):
        self.pp = normalize_pp(pp)
        self.source = eval_pp_power(self.pp)
        self.target = self.pp.base
        self._compiled: dict[Structure, GammaOutput] = {}

    def compile(self, X: Structure) -> GammaOutput:
        out = self._compiled.get(X)
        if out is None:
            out = self._compiled[X] = gamma(X, self.pp)
        return out

    def gamma(self, X):
        return self.compile(X).compiled

    def phi(self, f, X):
        return phi(f, self.compile(X))

    def psi(self, g, X):
        return psi(g, self.compile(X))

    def cover(self, X, H):
        return finite_cover(self.compile(X), H)

    def to_dict(self):
        return {"kind": "pp-power", "pp": pp_to_dict(self.pp)}


class HomEquivReduction(Reduction):
    """Reduction from ``E`` to ``D`` given ``theta1: D -> E`` and ``theta2: E -> D``."""

    def __init__(self, theta1: Homomorphism, theta2: Homomorphism):
        if theta1.source != theta2.target or theta1.target != theta2.source:
            raise ValueError("hom-equivalence witnesses must go D -> E and E -> D")
        self.theta1 = theta1
        self.theta2 = theta2
        self.source = theta2.source
        self.target = theta1.source

    def gamma(self, X):
        return X

    def phi(self, f, X):
        return f.then(self.theta2)

    def psi(self, g, X):
        return g.then(self.theta1)

    def to_dict(self):
        return {
            "kind": "hom-equiv",
            "D": structure_to_dict(self.target),
            "E": structure_to_dict(self.source),
            "theta1": self.theta1.to_dict()["map"],
            "theta2": self.theta2.to_dict()["map"],
        }


class ComposedReduction(Reduction):
    """``first`` reduces ``E`` to ``D``; ``second`` reduces ``D`` to ``C``."""

    def __init__(self, first: Reduction, second: Reduction):
        if first.target != second.source:
            raise SignatureMismatch("composition: the first reduction's target is not the second's source")
        self.first = first
        self.second = second
        self.source = first.source
        self.target = second.target

    def gamma(self, X):
        return self.second.gamma(self.first.gamma(X))

    def phi(self, f, X):
        return self.second.phi(self.first.phi(f, X), self.first.gamma(X))

    def psi(self, g, X):
        return self.first.psi(self.second.psi(g, self.first.gamma(X)), X)

    def to_dict(self):
        return {"kind": "composed", "first": self.first.to_dict(), "second": self.second.to_dict()}


def hom_equiv_reduction(theta1: Homomorphism, theta2: Homomorphism) -> HomEquivReduction:
    return HomEquivReduction(theta1, theta2)


def compose_reductions(first: Reduction, second: Reduction) -> ComposedReduction:
    return ComposedReduction(first, second)


# -- serialization ----------------------------------------------------------

def _var_from_dict(obj: dict, where: str) -> VarRef:
    kind = obj.get("kind")
    if kind == "z":
        if set(obj) != {"kind", "s", "j"}:
            raise StructureError(f"{where}: a 'z' variable needs exactly the keys kind, s, j")
        return VarRef.z(int(obj["s"]), int(obj["j"]))
    if kind == "w":
        if set(obj) != {"kind", "t"}:
            raise StructureError(f"{where}: a 'w' variable needs exactly the keys kind, t")
        return VarRef.w(int(obj["t"]))
    raise StructureError(f"{where}.kind: expected 'z' or 'w', got {kind!r}")


def pp_from_dict(obj: dict, base: Structure | None = None) -> PPPower:
    allowed = {"base", "n", "signature_E", "defs"}
    extra = set(obj) - allowed
    if extra:
        raise StructureError(f"pp-power: unknown keys {sorted(extra)}")
    base_ref = None
    if base is None:
        ref = obj.get("base")
        if isinstance(ref, str):
            base = builtin(ref)
            base_ref = ref
        elif isinstance(ref, dict):
            base = structure_from_dict(ref)
        else:
            raise StructureError("pp-power.base: expected a builtin name or a structure object")
    signature = [(e["name"], e["arity"]) for e in obj["signature_E"]]
    defs = {}
    for name, d in obj["defs"].items():
        extra = set(d) - {"witnesses", "atoms"}
        if extra:
            raise StructureError(f"pp-power.defs.{name}: unknown keys {sorted(extra)}")
        atoms = []
        for i, a in enumerate(d.get("atoms", [])):
            where = f"pp-power.defs.{name}.atoms[{i}]"
            if set(a) - {"rel", "args"}:
                raise StructureError(f"{where}: unknown keys {sorted(set(a) - {'rel', 'args'})}")
            atoms.append(Atom(a["rel"], tuple(_var_from_dict(v, where) for v in a["args"])))
        defs[name] = PPRelationDef(int(d.get("witnesses", 0)), tuple(atoms))
    return PPPower(base, int(obj["n"]), signature, defs, base_ref)


def pp_to_dict(pp: PPPower) -> dict:
    return {
        "base": pp.base_ref if pp.base_ref else structure_to_dict(pp.base),
        "n": pp.n,
        "signature_E": pp.signature.to_list(),
        "defs": {
            name: {"witnesses": d.witnesses, "atoms": [a.to_dict() for a in d.atoms]}
            for name, d in pp.defs.items()
        },
    }


def reduction_from_dict(obj: dict) -> Reduction:
    kind = obj.get("kind")
    if kind == "pp-power":
        return PPPowerReduction(pp_from_dict(obj["pp"]))
    if kind == "hom-equiv":
        D = structure_from_dict(obj["D"])
        E = structure_from_dict(obj["E"])
        return HomEquivReduction(Homomorphism(D, E, obj["theta1"]), Homomorphism(E, D, obj["theta2"]))
    if kind == "composed":
        return ComposedReduction(reduction_from_dict(obj["first"]), reduction_from_dict(obj["second"]))
    raise StructureError(f"reduction.kind: unknown kind {kind!r}")


def dump_pp(pp: PPPower) -> str:
    return json.dumps(pp_to_dict(pp), sort_keys=True)
