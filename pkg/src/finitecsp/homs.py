"""Homomorphism search between finite structures.

The engine is a depth-first search over the source universe with generalized
arc consistency (GAC) on every relation tuple of the source.  Domains are
stored as integer bitmasks over the target universe.  With the default fixed
orders the first solution found is the lexicographically least map (source
universe order, then target universe order), because GAC only removes values
that cannot extend to any solution.

Running out of the node budget raises :class:`BudgetExhausted`.  It is never
reported as "no homomorphism".
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Mapping, NamedTuple

from .structures import Structure, StructureError, induced_substructure

__all__ = [
    "Homomorphism",
    "InvalidHomomorphism",
    "SignatureMismatch",
    "BudgetExhausted",
    "SearchOptions",
    "check_homomorphism",
    "is_homomorphism",
    "find_hom",
    "enumerate_homs",
    "count_homs",
    "finitely_solvable_up_to",
    "Solvability",
    "hom_equivalent",
    "identity_hom",
]


class SignatureMismatch(StructureError):
    pass


class InvalidHomomorphism(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    """The node budget ran out before the search finished.

    The question is left open: this is the "unknown" outcome.
    """

    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


def check_homomorphism(source: Structure, target: Structure, mapping: Mapping[str, str]) -> None:
    """Raise :class:`InvalidHomomorphism` naming the first violated condition."""
    if not source.same_signature(target):
        raise SignatureMismatch(
            f"signatures differ: {source.signature!r} vs {target.signature!r}"
        )
    for x in source.universe:
        if x not in mapping:
            raise InvalidHomomorphism(f"map is undefined on {x!r}")
        if mapping[x] not in target:
            raise InvalidHomomorphism(f"{x!r} is sent to {mapping[x]!r}, not a target element")
    extra = set(mapping) - set(source.universe)
    if extra:
        raise InvalidHomomorphism(f"map is defined outside the source: {sorted(extra)}")
    for name, t in source.tuples():
        image = tuple(mapping[e] for e in t)
        if not target.holds(name, image):
            raise InvalidHomomorphism(f"{name}{t} is sent to {name}{image}, which does not hold")


def is_homomorphism(source: Structure, target: Structure, mapping: Mapping[str, str]) -> bool:
    try:
        check_homomorphism(source, target, mapping)
    except InvalidHomomorphism:
        return False
    return True


@dataclass(frozen=True)
class Homomorphism:
    """A validated homomorphism ``source -> target``.

    Construction re-checks every relation tuple, so holding an instance is a
    validity certificate.
    """

    source: Structure
    target: Structure
    mapping: Mapping[str, str] = field(compare=True)

    def __post_init__(self):
        mapping = {str(k): str(v) for k, v in dict(self.mapping).items()}
        check_homomorphism(self.source, self.target, mapping)
        object.__setattr__(self, "mapping", mapping)

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """Composite ``other ∘ self``."""
        if other.source != self.target:
            raise InvalidHomomorphism("composite: target of the first map is not the source of the second")
        return Homomorphism(self.source, other.target, {x: other(y) for x, y in self.mapping.items()})

    def as_tuple(self) -> tuple[str, ...]:
        return tuple(self.mapping[x] for x in self.source.universe)

    def to_dict(self) -> dict:
        return {"map": {x: self.mapping[x] for x in self.source.universe}}


def identity_hom(X: Structure) -> Homomorphism:
    return Homomorphism(X, X, {x: x for x in X.universe})


@dataclass(frozen=True)
class SearchOptions:
    """Knobs for :func:`find_hom` and friends.

    ``budget`` counts branching decisions; 0 means unbounded.  ``parallel``
    is the number of worker processes (0 or 1 runs in-process).
    """

    variable_order: str = "fixed"
    value_order: str = "fixed"
    budget: int = 0
    parallel: int = 0

    def __post_init__(self):
        if self.variable_order not in ("fixed", "degree"):
            raise ValueError(f"unknown variable order {self.variable_order!r}")
        if self.value_order != "fixed":
            raise ValueError(f"unknown value order {self.value_order!r}")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")


DEFAULT_OPTIONS = SearchOptions()


class _Problem:
    """Index-level CSP compiled from a (source, target) pair."""

    def __init__(self, X: Structure, D: Structure, opts: SearchOptions):
        if not X.same_signature(D):
            raise SignatureMismatch(f"signatures differ: {X.signature!r} vs {D.signature!r}")
        self.n = len(X)
        self.m = len(D)
        full = (1 << self.m) - 1
        tables: dict[str, list[tuple[int, ...]]] = {
            name: [tuple(D.index(e) for e in t) for t in D.relation(name)] for name in D.signature.names
        }
        scopes: dict[tuple, list] = {}
        for name, t in X.tuples():
            scope = tuple(X.index(e) for e in t)
            allowed = tables[name]
            if len(set(scope)) < len(scope):
                allowed = [a for a in allowed if _respects_repeats(scope, a)]
            key = scope
            if key in scopes:
                # several symbols on the same scope: intersect
                keep = set(allowed)
                scopes[key] = [a for a in scopes[key] if a in keep]
            else:
                scopes[key] = list(allowed)
        self.constraints = [(scope, allowed) for scope, allowed in scopes.items()]
        self.watch: list[list[int]] = [[] for _ in range(self.n)]
        for ci, (scope, _) in enumerate(self.constraints):
            for v in set(scope):
                self.watch[v].append(ci)
        self.domains = [full] * self.n
        if opts.variable_order == "degree":
            self.order = sorted(range(self.n), key=lambda v: (-len(self.watch[v]), v))
        else:
            self.order = list(range(self.n))
        self.budget = opts.budget
        self.nodes = 0

    def propagate(self, doms: list[int], queue: list[int]) -> bool:
        """Enforce GAC in place; return False on a wipe-out."""
        pending = set(queue)
        queue = list(queue)
        constraints = self.constraints
        while queue:
            ci = queue.pop()
            pending.discard(ci)
            scope, allowed = constraints[ci]
            support = [0] * len(scope)
            for a in allowed:
                for v, val in zip(scope, a):
                    if not (doms[v] >> val) & 1:
                        break
                else:
                    for i, val in enumerate(a):
                        support[i] |= 1 << val
            for v, sup in zip(scope, support):
                new = doms[v] & sup
                if new != doms[v]:
                    if not new:
                        return False
                    doms[v] = new
                    for cj in self.watch[v]:
                        if cj != ci and cj not in pending:
                            pending.add(cj)
                            queue.append(cj)
        return True

    def initial(self) -> list[int] | None:
        doms = list(self.domains)
        if not self.propagate(doms, list(range(len(self.constraints)))):
            return None
        return doms

    def _branch_var(self, doms: list[int]) -> int | None:
        for v in self.order:
            if doms[v] & (doms[v] - 1):
                return v
        return None

    def solutions(self, doms: list[int]) -> Iterator[list[int]]:
        """Yield complete assignments (lists of value indices) in order."""
        v = self._branch_var(doms)
        if v is None:
            yield [d.bit_length() - 1 for d in doms]
            return
        dom = doms[v]
        val = 0
        while dom:
            if dom & 1:
                self.nodes += 1
                if self.budget and self.nodes > self.budget:
                    raise BudgetExhausted(self.nodes - 1)
                child = list(doms)
                child[v] = 1 << val
                if self.propagate(child, self.watch[v]):
                    yield from self.solutions(child)
            dom >>= 1
            val += 1

    def split(self, doms: list[int]) -> list[list[int]]:
        """Children of the root branching variable, in value order."""
        v = self._branch_var(doms)
        if v is None:
            return [doms]
        out = []
        for val in range(self.m):
            if (doms[v] >> val) & 1:
                child = list(doms)
                child[v] = 1 << val
                out.append(child)
        return out


def _respects_repeats(scope: tuple[int, ...], a: tuple[int, ...]) -> bool:
    seen: dict[int, int] = {}
    for v, val in zip(scope, a):
        if seen.setdefault(v, val) != val:
            return False
    return True


def _first_in_subtree(args):
    problem, doms = args
    if not problem.propagate(doms, list(range(len(problem.constraints)))):
        return ("absent", None)
    try:
        for sol in problem.solutions(doms):
            return ("found", sol)
    except BudgetExhausted as exc:
        return ("unknown", exc.nodes)
    return ("absent", None)


def _to_hom(X: Structure, D: Structure, sol: list[int]) -> Homomorphism:
    return Homomorphism(X, D, {x: D.universe[sol[i]] for i, x in enumerate(X.universe)})


def find_hom(X: Structure, D: Structure, opts: SearchOptions = DEFAULT_OPTIONS) -> Homomorphism | None:
    """Return a homomorphism ``X -> D`` or ``None`` if none exists.

    Raises :class:`BudgetExhausted` when ``opts.budget`` runs out, and
    :class:`SignatureMismatch` if the signatures differ.
    """
    problem = _Problem(X, D, opts)
    if problem.n and not problem.m:
        return None
    doms = problem.initial()
    if doms is None:
        return None
    if opts.parallel > 1:
        subtrees = problem.split(doms)
        with ProcessPoolExecutor(max_workers=opts.parallel) as pool:
            results = list(pool.map(_first_in_subtree, [(problem, d) for d in subtrees]))
        # first subtree in canonical order decides, exactly as the sequential search would
        for status, payload in results:
            if status == "found":
                return _to_hom(X, D, payload)
            if status == "unknown":
                raise BudgetExhausted(payload)
        return None
    for sol in problem.solutions(doms):
        return _to_hom(X, D, sol)
    return None


def enumerate_homs(
    X: Structure,
    D: Structure,
    limit: int | None = None,
    opts: SearchOptions = DEFAULT_OPTIONS,
) -> list[Homomorphism]:
    """All homomorphisms ``X -> D`` in search order, truncated at ``limit``."""
    problem = _Problem(X, D, opts)
    out: list[Homomorphism] = []
    if limit == 0 or (problem.n and not problem.m):
        return out
    doms = problem.initial()
    if doms is None:
        return out
    for sol in problem.solutions(doms):
        out.append(_to_hom(X, D, sol))
        if limit is not None and len(out) >= limit:
            break
    return out


def count_homs(X: Structure, D: Structure, opts: SearchOptions = DEFAULT_OPTIONS) -> int:
    problem = _Problem(X, D, opts)
    if problem.n and not problem.m:
        return 0
    doms = problem.initial()
    if doms is None:
        return 0
    return sum(1 for _ in problem.solutions(doms))


class Solvability(NamedTuple):
    ok: bool
    witness: tuple[str, ...] | None  # minimal failing subset when not ok


def finitely_solvable_up_to(
    X: Structure, D: Structure, k: int, opts: SearchOptions = DEFAULT_OPTIONS
) -> Solvability:
    """Check that every induced substructure on at most ``k`` elements maps to ``D``.

    Subsets are tried by increasing size, so a reported witness is minimal:
    each of its proper subsets passed.
    """
    if not X.same_signature(D):
        raise SignatureMismatch(f"signatures differ: {X.signature!r} vs {D.signature!r}")
    if k > len(X):
        raise ValueError(f"k={k} exceeds the universe size {len(X)}")
    for size in range(k + 1):
        for subset in itertools.combinations(X.universe, size):
            if find_hom(induced_substructure(X, subset), D, opts) is None:
                return Solvability(False, subset)
    return Solvability(True, None)


def hom_equivalent(
    D: Structure, E: Structure, opts: SearchOptions = DEFAULT_OPTIONS
) -> tuple[Homomorphism, Homomorphism] | None:
    """Witnesses ``(D -> E, E -> D)`` if both directions exist, else ``None``."""
    forth = find_hom(D, E, opts)
    if forth is None:
        return None
    back = find_hom(E, D, opts)
    if back is None:
        return None
    return forth, back
