"""Command-line front end.

Exit codes: 0 found / true, 1 not found / false, 2 error, 3 unknown (the
search budget ran out).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import homs, polymorphisms, reduction, symmetry, ultrafilter
from .homs import BudgetExhausted, Homomorphism, InvalidHomomorphism, SearchOptions
from .structures import (
    Structure,
    StructureError,
    load_structure,
    structure_from_dict,
    structure_to_dict,
)

FOUND, NOT_FOUND, ERROR, UNKNOWN = 0, 1, 2, 3


@dataclass
class CommandResult:
    code: int
    summary: str
    payload: dict | None = field(default=None)
    payload_path: str | None = None
    as_json: bool = False

    @property
    def text(self) -> str:
        return _dumps(self.payload if self.payload is not None else {})


class CLIError(Exception):
    pass


def _read_json(path: str, what: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CLIError(f"{what}: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CLIError(f"{what}: {path} is not valid JSON ({exc})") from None


def _structure(ref: str) -> Structure:
    """A structure reference: ``builtin:<name>``, a structure file, or a
    ``reduce`` output (its compiled instance is used)."""
    if ref.startswith("builtin:"):
        return load_structure(ref)
    obj = _read_json(ref, "structure")
    if isinstance(obj, dict) and "compiled" in obj:
        obj = obj["compiled"]
    return structure_from_dict(obj)


def _hom_payload(h: Homomorphism, source_ref: str | None = None, target_ref: str | None = None) -> dict:
    out = h.to_dict()
    if source_ref:
        out["source"] = source_ref
    if target_ref:
        out["target"] = target_ref
    return out


def _load_hom(path: str, source: Structure | None, target: Structure | None) -> Homomorphism:
    obj = _read_json(path, "homomorphism")
    extra = set(obj) - {"map", "source", "target"}
    if extra:
        raise CLIError(f"homomorphism: unknown keys {sorted(extra)}")
    if "map" not in obj:
        raise CLIError("homomorphism: missing field 'map'")
    if source is None:
        if "source" not in obj:
            raise CLIError("homomorphism: no source given")
        source = _structure(obj["source"])
    if target is None:
        if "target" not in obj:
            raise CLIError("homomorphism: no target given")
        target = _structure(obj["target"])
    return Homomorphism(source, target, obj["map"])


def _options(args) -> SearchOptions:
    return SearchOptions(
        variable_order=getattr(args, "order", "fixed"),
        budget=args.budget,
        parallel=args.parallel,
    )


def _fmt_map(mapping: dict) -> str:
    return " ".join(f"{k}->{v}" for k, v in mapping.items())


def _dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


# -- commands ---------------------------------------------------------------

def cmd_solve(args) -> CommandResult:
    X, D = _structure(args.instance), _structure(args.template)
    h = homs.find_hom(X, D, _options(args))
    if h is None:
        return CommandResult(NOT_FOUND, "no homomorphism", {"found": False})
    return CommandResult(FOUND, _fmt_map(h.mapping), _hom_payload(h, args.instance, args.template))


def cmd_enumerate(args) -> CommandResult:
    X, D = _structure(args.instance), _structure(args.template)
    found = homs.enumerate_homs(X, D, args.limit, _options(args))
    lines = [f"{len(found)} homomorphism(s)"] + [_fmt_map(h.mapping) for h in found]
    payload = {"count": len(found), "maps": [h.to_dict()["map"] for h in found]}
    return CommandResult(FOUND if found else NOT_FOUND, "\n".join(lines), payload)


def cmd_finsolv(args) -> CommandResult:
    X, D = _structure(args.instance), _structure(args.template)
    res = homs.finitely_solvable_up_to(X, D, args.k, _options(args))
    if res.ok:
        return CommandResult(FOUND, f"every substructure on <= {args.k} elements is solvable", {"ok": True})
    return CommandResult(
        NOT_FOUND,
        f"unsolvable substructure on {list(res.witness)}",
        {"ok": False, "witness": list(res.witness)},
    )


def cmd_poly(args) -> CommandResult:
    D = _structure(args.template)
    if not args.cyclic:
        raise CLIError("poly: only --cyclic search is supported")
    f = polymorphisms.find_cyclic_polymorphism(D, args.arity, _options(args))
    if f is None:
        return CommandResult(NOT_FOUND, f"no cyclic polymorphism of arity {args.arity}", {"found": False})
    return CommandResult(FOUND, f"cyclic polymorphism of arity {args.arity} found", f.to_dict())


def cmd_decide_star(args) -> CommandResult:
    D = _structure(args.template)
    p = polymorphisms.star_prime(D)
    f = polymorphisms.find_cyclic_polymorphism(D, p, _options(args))
    if f is None:
        return CommandResult(NOT_FOUND, f"(*) fails: no cyclic polymorphism of arity {p}", {"star": False, "prime": p})
    return CommandResult(
        FOUND, f"(*) holds: cyclic polymorphism of arity {p}", {"star": True, "prime": p, "witness": f.to_dict()}
    )


def _pp(path: str) -> reduction.PPPower:
    return reduction.normalize_pp(reduction.pp_from_dict(_read_json(path, "pp-power")))


def cmd_reduce(args) -> CommandResult:
    pp = _pp(args.pp)
    X = _structure(args.instance)
    out = reduction.gamma(X, pp)
    return CommandResult(
        FOUND,
        f"compiled instance: {len(out.compiled)} elements, {out.compiled.num_tuples()} tuples",
        out.to_dict(),
    )


def cmd_transfer(args) -> CommandResult:
    pp = _pp(args.pp)
    X = _structure(args.instance)
    out = reduction.gamma(X, pp)
    E = reduction.eval_pp_power(pp)
    if args.phi:
        f = _load_hom(args.phi, X, E)
        g = reduction.phi(f, out)
        return CommandResult(FOUND, _fmt_map(g.mapping), {"map": g.to_dict()["map"]})
    g = _load_hom(args.psi, out.compiled, pp.base)
    f = reduction.psi(g, out)
    return CommandResult(FOUND, _fmt_map(f.mapping), _hom_payload(f, args.instance))


def cmd_cover(args) -> CommandResult:
    pp = _pp(args.pp)
    X = _structure(args.instance)
    out = reduction.gamma(X, pp)
    H = [h for h in args.subset.split(";") if h] if args.subset else []
    F, theta = reduction.finite_cover(out, H)
    return CommandResult(FOUND, f"F = {list(F)}; theta: {_fmt_map(theta.mapping)}", {"F": list(F), "theta": theta.mapping})


def _action(path: str, X: Structure) -> symmetry.GeneratedAction:
    return symmetry.action_from_dict(_read_json(path, "action"), X.universe)


def cmd_symmetrize(args) -> CommandResult:
    X, D = _structure(args.instance), _structure(args.template)
    h0 = _load_hom(args.hom, X, D)
    action = _action(args.action, X)
    polys = {}
    for path in args.poly:
        f = polymorphisms.polymorphism_from_dict(_read_json(path, "polymorphism"), D)
        polys[f.arity] = f
    if not args.poly:
        for g in action.generators:
            if g.order > 1 and g.order not in polys:
                f = polymorphisms.find_cyclic_polymorphism(D, g.order, _options(args))
                if f is None:
                    return CommandResult(NOT_FOUND, f"no cyclic polymorphism of arity {g.order}", {"found": False})
                polys[g.order] = f
    h = symmetry.make_invariant(h0, action, polys)
    return CommandResult(FOUND, _fmt_map(h.mapping), _hom_payload(h, args.instance, args.template))


def cmd_invariant_solve(args) -> CommandResult:
    X, D = _structure(args.instance), _structure(args.template)
    action = _action(args.action, X)
    h = symmetry.find_invariant_hom(X, action, D, _options(args))
    if h is None:
        return CommandResult(NOT_FOUND, "no invariant homomorphism", {"found": False})
    return CommandResult(FOUND, _fmt_map(h.mapping), _hom_payload(h, args.instance, args.template))


def cmd_schreier(args) -> CommandResult:
    try:
        primes = [int(p) for p in args.primes.split(",") if p]
    except ValueError:
        raise CLIError(f"--primes: expected comma-separated integers, got {args.primes!r}") from None
    graph, action = symmetry.schreier_instance(primes)
    if args.action_out:
        with open(args.action_out, "w") as fh:
            fh.write(_dumps(action.to_dict()) + "\n")
    return CommandResult(
        FOUND,
        f"{len(graph)} vertices, {len(action.generators)} generators",
        {"structure": structure_to_dict(graph), "action": action.to_dict()} if not args.action_out
        else structure_to_dict(graph),
    )


def cmd_ultra(args) -> CommandResult:
    if args.filter:
        F = ultrafilter.filter_from_dict(_read_json(args.filter, "filter"))
        rep = ultrafilter.filter_report(F, _options(args))
    else:
        rep = ultrafilter.dictatorship_check(args.demo, _options(args), allow_large=args.allow_large)
    payload = {k: v for k, v in rep.items() if not k.startswith("_")}
    summary = f"colorings={rep['colorings']} normalized={rep['normalized']} violations={rep['violations']}"
    return CommandResult(FOUND if rep["violations"] == 0 else NOT_FOUND, summary, payload)


def cmd_verify(args) -> CommandResult:
    X, D = _structure(args.instance), _structure(args.template)
    try:
        _load_hom(args.hom, X, D)
    except InvalidHomomorphism as exc:
        return CommandResult(NOT_FOUND, f"invalid: {exc}", {"valid": False, "reason": str(exc)})
    return CommandResult(FOUND, "valid homomorphism", {"valid": True})


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=0, help="search node budget (0 = unbounded)")
    common.add_argument("--parallel", type=int, default=0, help="worker processes for search")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps (none are randomized yet)")
    common.add_argument("--out", help="write the JSON payload to this path")
    common.add_argument("--json", action="store_true", help="print the JSON payload instead of the summary")

    parser = argparse.ArgumentParser(prog="finitecsp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    p = add("solve", cmd_solve, "find a homomorphism X -> D")
    p.add_argument("instance")
    p.add_argument("template")
    p.add_argument("--order", choices=["fixed", "degree"], default="fixed")

    p = add("enumerate", cmd_enumerate, "list homomorphisms X -> D")
    p.add_argument("instance")
    p.add_argument("template")
    p.add_argument("--limit", type=int)

    p = add("finsolv", cmd_finsolv, "check all substructures up to size k")
    p.add_argument("instance")
    p.add_argument("template")
    p.add_argument("--k", type=int, required=True)

    p = add("poly", cmd_poly, "search for a cyclic polymorphism")
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("template")

    p = add("decide-star", cmd_decide_star, "cyclic polymorphism at the smallest prime above |D|")
    p.add_argument("template")

    p = add("reduce", cmd_reduce, "compile an instance of a pp-power")
    p.add_argument("--pp", required=True)
    p.add_argument("instance")

    p = add("transfer", cmd_transfer, "move a solution across a pp-power reduction")
    p.add_argument("--pp", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--phi", metavar="HOM", help="solution X -> E to send forward")
    g.add_argument("--psi", metavar="HOM", help="solution of the compiled instance to send back")
    p.add_argument("instance")

    p = add("cover", cmd_cover, "finite cover of a piece of the compiled instance")
    p.add_argument("--pp", required=True)
    p.add_argument("--subset", default="", help="';'-separated elements of the compiled instance")
    p.add_argument("instance")

    p = add("symmetrize", cmd_symmetrize, "make a solution invariant under an action")
    p.add_argument("--hom", required=True)
    p.add_argument("--action", required=True)
    p.add_argument("--poly", action="append", default=[], help="cyclic polymorphism file (repeatable)")
    p.add_argument("instance")
    p.add_argument("template")

    p = add("invariant-solve", cmd_invariant_solve, "find a solution invariant under an action")
    p.add_argument("--action", required=True)
    p.add_argument("instance")
    p.add_argument("template")

    p = add("schreier", cmd_schreier, "disjoint prime cycles with their rotations")
    p.add_argument("--primes", required=True)
    p.add_argument("--action-out", help="write the action here; the payload is then the bare structure")

    p = add("ultra", cmd_ultra, "ultrafilters from colorings of disagreement graphs")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--demo", type=int, metavar="N", help="dictatorship check on K3^N")
    g.add_argument("--filter", metavar="FILE", help="check every coloring for this filter")
    p.add_argument("--allow-large", action="store_true", help="permit --demo above 3")

    p = add("verify", cmd_verify, "check a homomorphism file")
    p.add_argument("hom")
    p.add_argument("instance")
    p.add_argument("template")
    return parser


def dispatch(argv: list[str]) -> CommandResult:
    """Parse ``argv``, run the subcommand and write ``--out`` if requested."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed usage or help
        return CommandResult(0 if exc.code == 0 else ERROR, "")
    try:
        result = args.func(args)
    except BudgetExhausted as exc:
        result = CommandResult(UNKNOWN, f"unknown: {exc}", {"unknown": True, "nodes": exc.nodes})
    except KeyError as exc:
        return CommandResult(ERROR, f"error: missing field {exc.args[0]!r}")
    except (CLIError, StructureError, InvalidHomomorphism, ValueError) as exc:
        return CommandResult(ERROR, f"error: {exc}")
    result.as_json = args.json
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(result.text + "\n")
        except OSError as exc:
            return CommandResult(ERROR, f"--out: cannot write {args.out}: {exc.strerror}")
        result.payload_path = args.out
    return result


def main(argv: list[str] | None = None) -> int:
    result = dispatch(sys.argv[1:] if argv is None else argv)
    if result.code == ERROR:
        if result.summary:
            print(result.summary, file=sys.stderr)
    elif result.summary or result.payload is not None:
        print(result.text if result.as_json else result.summary)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
