"""Ultrafilters from 3-colorings of disagreement graphs.

For a finite ground set ``X`` and a filter ``F`` on it, the disagreement graph
has the functions ``X -> {0,1,2}`` as vertices, two of them adjacent when the
set where they differ belongs to ``F``.  A proper 3-coloring ``c`` that fixes
the three constant functions yields the family ``{A : c(1_A) = 1}``, which is
an ultrafilter extending ``F``.  With ``F = {X}`` the graph is ``K3^|X|`` and
the statement becomes: every polymorphism of ``K3`` is essentially a
projection.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .homs import DEFAULT_OPTIONS, Homomorphism, SearchOptions, enumerate_homs
from .polymorphisms import Polymorphism, essential_coordinates
from .structures import Structure, StructureError, complete_graph

__all__ = [
    "SetFilter",
    "ExtractedFamily",
    "disagreement_graph",
    "vertex",
    "indicator",
    "normalize_coloring",
    "is_normalized",
    "extract_family",
    "check_ultrafilter",
    "coloring_as_polymorphism",
    "filter_report",
    "dictatorship_check",
    "filter_from_dict",
    "MAX_GROUND",
    "dump_report",
]

MAX_GROUND = 5
COLORS = ("0", "1", "2")


class SetFilter:
    """The filter on ``ground`` generated by ``base``.

    On a finite set this is the family of supersets of the intersection of
    the base sets (all of ``ground`` when the base is empty).
    """

    def __init__(self, ground: Sequence[str], base: Iterable[Iterable[str]] = ()):
        self.ground = tuple(str(x) for x in ground)
        if len(set(self.ground)) != len(self.ground):
            raise StructureError("filter ground set has repeated elements")
        self.base = [frozenset(b) for b in base]
        for b in self.base:
            if not b <= set(self.ground):
                raise StructureError(f"filter base set {sorted(b)} is not inside the ground set")
        core = frozenset(self.ground)
        for b in self.base:
            core &= b
        if not core:
            raise StructureError("filter base generates the empty set; not a proper filter")
        self.core = core

    def __contains__(self, A: Iterable[str]) -> bool:
        return self.core <= frozenset(A)

    def members(self) -> list[frozenset]:
        return [A for A in _all_subsets(self.ground) if A in self]

    def to_dict(self) -> dict:
        return {"ground": list(self.ground), "base": [sorted(b, key=self.ground.index) for b in self.base]}


def filter_from_dict(obj: dict) -> SetFilter:
    extra = set(obj) - {"ground", "base"}
    if extra:
        raise StructureError(f"filter: unknown keys {sorted(extra)}")
    if "ground" not in obj:
        raise StructureError("filter: missing field 'ground'")
    return SetFilter(obj["ground"], obj.get("base", []))


def _all_subsets(ground: Sequence[str]) -> list[frozenset]:
    return [
        frozenset(c) for r in range(len(ground) + 1) for c in itertools.combinations(ground, r)
    ]


@dataclass
class ExtractedFamily:
    ground: tuple[str, ...]
    members: list[frozenset]

    def __contains__(self, A) -> bool:
        return frozenset(A) in set(self.members)


def vertex(values: Sequence[int | str]) -> str:
    """Name of the vertex for the function with the given values."""
    return "".join(str(v) for v in values)


def indicator(ground: Sequence[str], A: Iterable[str]) -> str:
    A = set(A)
    return vertex(1 if x in A else 0 for x in ground)


def disagreement_graph(F: SetFilter, max_ground: int = MAX_GROUND) -> Structure:
    """Graph on ``{0,1,2}^X`` joining functions whose disagreement set is in ``F``."""
    X = F.ground
    if len(X) > max_ground:
        raise ValueError(f"|X| = {len(X)} exceeds the bound {max_ground} (3^|X| vertices)")
    V = [vertex(v) for v in itertools.product(COLORS, repeat=len(X))]
    edges = []
    for f in V:
        for g in V:
            if {x for x, a, b in zip(X, f, g) if a != b} in F and f != g:
                edges.append((f, g))
    return Structure([("E", 2)], V, {"E": edges})


def _constants(n: int) -> list[str]:
    return [c * n for c in COLORS]


def is_normalized(c: Homomorphism) -> bool:
    n = len(c.source.universe[0])
    return all(c(k) == k[0] for k in _constants(n))


def normalize_coloring(c: Homomorphism) -> Homomorphism:
    """Permute colors so that each constant function gets its own value."""
    G = c.source
    n = len(G.universe[0])
    consts = _constants(n)
    for a, b in itertools.combinations(consts, 2):
        if not G.holds("E", (a, b)):
            raise ValueError("constant functions are not pairwise adjacent; X is not in the filter")
    sigma = {c(k): k[0] for k in consts}
    return Homomorphism(G, c.target, {v: sigma[col] for v, col in c.mapping.items()})


def extract_family(c: Homomorphism, ground: Sequence[str]) -> ExtractedFamily:
    """``{A : c(1_A) = 1}`` for a normalized coloring ``c``."""
    ground = tuple(ground)
    members = [A for A in _all_subsets(ground) if c(indicator(ground, A)) == "1"]
    return ExtractedFamily(ground, members)


def check_ultrafilter(U: ExtractedFamily, F: SetFilter | None = None) -> tuple[bool, str | None]:
    """Check the ultrafilter axioms (and ``F ⊆ U``); report the first failure."""
    ground = frozenset(U.ground)
    fam = set(U.members)
    if frozenset() in fam:
        return False, "empty set is a member"
    for A in fam:
        for B in _all_subsets(U.ground):
            if A <= B and B not in fam:
                return False, f"not upward closed: {sorted(A)} in, superset {sorted(B)} out"
    for A, B in itertools.combinations(fam, 2):
        if A & B not in fam:
            return False, f"not closed under intersection: {sorted(A)} and {sorted(B)}"
    if F is not None:
        for A in F.members():
            if A not in fam:
                return False, f"filter set {sorted(A)} missing"
    for A in _all_subsets(U.ground):
        if (A in fam) == ((ground - A) in fam):
            return False, f"exactly one of {sorted(A)} and its complement must be a member"
    return True, None


def coloring_as_polymorphism(c: Homomorphism) -> Polymorphism:
    """Read a coloring of ``K3^n`` (vertex ``"012"`` = tuple (0,1,2)) as an operation."""
    K3 = complete_graph(3)
    return Polymorphism(K3, len(c.source.universe[0]), {tuple(v): col for v, col in c.mapping.items()})


def filter_report(F: SetFilter, opts: SearchOptions = DEFAULT_OPTIONS) -> dict:
    """Enumerate every proper 3-coloring of the disagreement graph of ``F``.

    Each coloring is normalized and its family checked to be an ultrafilter
    containing ``F``.  ``normalized`` counts the distinct normalized colorings.
    """
    G = disagreement_graph(F)
    colorings = enumerate_homs(G, complete_graph(3), opts=opts)
    normalized = {}
    for c in colorings:
        nc = normalize_coloring(c)
        normalized[tuple(sorted(nc.mapping.items()))] = nc
    checks = []
    principal = []
    for nc in normalized.values():
        U = extract_family(nc, F.ground)
        ok, why = check_ultrafilter(U, F)
        checks.append((nc, ok, why))
        if ok:
            principal.append(sorted(frozenset.intersection(*U.members), key=F.ground.index))
    return {
        "colorings": len(colorings),
        "normalized": len(normalized),
        "violations": sum(1 for _, ok, _ in checks if not ok),
        "principal_points": principal,
        "_checks": checks,
    }


def dictatorship_check(n: int, opts: SearchOptions = DEFAULT_OPTIONS, allow_large: bool = False) -> dict:
    """Every proper 3-coloring of ``K3^n`` depends on exactly one coordinate.

    Works on the disagreement graph with ``F = {X}``; a coloring counts as a
    violation if, once normalized, it has more or fewer than one essential
    coordinate or its family fails the ultrafilter check.  Returns
    ``{"colorings", "normalized", "violations"}``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > 3 and not allow_large:
        raise ValueError("n > 3 needs allow_large=True")
    ground = [f"x{i}" for i in range(1, n + 1)]
    F = SetFilter(ground, [ground])
    rep = filter_report(F, opts)
    violations = sum(
        1
        for nc, ok, _ in rep["_checks"]
        if not ok or len(essential_coordinates(coloring_as_polymorphism(nc))) != 1
    )
    return {"colorings": rep["colorings"], "normalized": rep["normalized"], "violations": violations}


def dump_report(report: dict) -> str:
    return json.dumps({k: v for k, v in report.items() if not k.startswith("_")}, sort_keys=True)
