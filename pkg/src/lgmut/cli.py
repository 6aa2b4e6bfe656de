"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 a verification failed.  Payloads go
to stdout as JSON (or DOT for ``explore --format dot``); diagnostics go to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .analysis import (
    critical_report,
    is_minimal,
    locus_report,
    newton,
    normal_form_2d,
)
from .explorer import LaurentPhenomenonViolation, explore, export_graph
from .laurent import LaurentPoly, NonLaurent, ParseError, format_poly, parse_poly
from .seeds import CATALOG_NAMES, LGSeed, catalog, is_lg_seed, seed_mutate
from . import toric

OK, INPUT_ERROR, FAILED = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_json(path: str):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_seed(args) -> LGSeed:
    if getattr(args, "catalog", None):
        if args.catalog not in CATALOG_NAMES:
            raise InputError(f"unknown catalog seed {args.catalog!r}")
        return catalog(args.catalog)
    if not args.seed:
        raise InputError("give a seed file or --catalog NAME")
    try:
        return LGSeed.from_json(_load_json(args.seed))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed seed: {exc}") from exc


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(a) for a in text.replace(" ", "").split(",") if a != "")
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _rationals(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(a) for a in text.replace(" ", "").split(",") if a != "")
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"expected comma-separated rationals, got {text!r}") from exc


def _seed_payload(s: LGSeed) -> dict:
    out = s.to_json()
    out["text"] = format_poly(s.potential)
    return out


# -- subcommands ---------------------------------------------------------------------


def cmd_mutate(args) -> int:
    s = _load_seed(args)
    if not 0 <= args.index < len(s.directions):
        raise InputError(f"--index {args.index} out of range for {len(s.directions)} directions")
    result = seed_mutate(s, args.index)
    if isinstance(result, NonLaurent):
        _emit(result.to_json())
        print(f"mutation along {s.directions[args.index]} is not Laurent", file=sys.stderr)
        return FAILED
    _emit(_seed_payload(result))
    return OK


def cmd_verify(args) -> int:
    s = _load_seed(args)
    verdict = is_lg_seed(s)
    if not verdict.ok:
        _emit({"ok": False, "seeds_verified": 0, "failure": verdict.to_json()})
        print(f"direction {verdict.direction} fails at iterate {verdict.iterate}", file=sys.stderr)
        return FAILED
    if not args.depth:
        _emit({"ok": True, "seeds_verified": 1})
        return OK
    try:
        graph = explore(s, args.depth)
    except LaurentPhenomenonViolation as exc:
        _emit({"ok": False, "path": exc.path, "failure": exc.witness.to_json()})
        print(str(exc), file=sys.stderr)
        return FAILED
    for node in graph.nodes:
        v = is_lg_seed(node.seed)
        if not v.ok:
            _emit({"ok": False, "node": node.id, "failure": v.to_json()})
            return FAILED
    _emit({"ok": True, "seeds_verified": len(graph.nodes), "depth": args.depth})
    return OK


def cmd_explore(args) -> int:
    s = _load_seed(args)
    try:
        graph = explore(s, args.depth, workers=args.workers, reflections=not args.oriented)
    except LaurentPhenomenonViolation as exc:
        _emit({"ok": False, "path": exc.path, "failure": exc.witness.to_json()})
        print(str(exc), file=sys.stderr)
        return FAILED
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sys.stdout.write(export_graph(graph, args.format).decode())
    return OK


def cmd_catalog(args) -> int:
    if not args.name:
        _emit({"seeds": list(CATALOG_NAMES)})
        return OK
    if args.name not in CATALOG_NAMES:
        raise InputError(f"unknown catalog seed {args.name!r}")
    _emit(_seed_payload(catalog(args.name)))
    return OK


def _load_polytope(spec: str):
    name = spec.lower()
    if name in toric.TORIC_POLYTOPES or (name.startswith("cp") and name[2:].isdigit()):
        return toric.toric_polytope(name)
    data = _load_json(spec)
    try:
        normals = data["normals"]
        n = int(data.get("n", len(normals[0]) if normals else 0))
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise InputError(f"malformed polytope: {exc}") from exc
    return toric.validate(normals, n)


def cmd_toric(args) -> int:
    p = _load_polytope(args.polytope)
    if args.product:
        if isinstance(p, toric.MonotonePolytope):
            p = toric.product_with_interval(p)
    if isinstance(p, list):
        _emit({"valid": False, "violations": [v.to_json() for v in p]})
        for v in p:
            print(str(v), file=sys.stderr)
        return FAILED
    if args.action == "check":
        _emit({"valid": True, "n": p.n, "normals": [list(e) for e in p.normals], "vertices": [list(v) for v in p.vertices]})
        return OK
    if args.action == "potential":
        w = toric.toric_potential(p)
        _emit({"n": p.n, "potential": w.to_json(), "text": format_poly(w)})
        return OK
    if args.action == "configs":
        _emit({"configurations": [c.to_json() for c in toric.mutation_configurations(p)]})
        return OK
    # mutate
    if args.facets is None or args.point is None:
        raise InputError("toric mutate needs --facets and --point")
    try:
        c = toric.configuration(p, _ints(args.facets), _ints(args.point))
        basis = None
        if args.basis:
            basis = [_ints(part) for part in args.basis.split(";") if part.strip()]
        result = toric.toric_mutate(p, c, basis)
        a = toric.standard_form(p, c) if c.interior else None
    except toric.InvalidConfiguration as exc:
        raise InputError(str(exc)) from exc
    payload = {"configuration": c.to_json()}
    if isinstance(result, NonLaurent):
        payload.update(result.to_json())
        if not c.interior:
            payload["diagnosis"] = f"point {list(c.point)} lies on facets {sorted(p.active(c.point))}, not only on the face"
        _emit(payload)
        print("toric mutation is not Laurent", file=sys.stderr)
        return FAILED
    payload["potential"] = result.to_json()
    payload["text"] = format_poly(result)
    if a is not None:
        std = toric.to_standard_coordinates(result, a)
        payload["standard_form"] = {"matrix": a.tolist(), "det": a.det, "potential": std.to_json(), "text": format_poly(std)}
    _emit(payload)
    return OK


def _potential(args) -> LaurentPoly:
    try:
        return parse_poly(args.potential, args.n)
    except ParseError as exc:
        raise InputError(f"cannot parse potential: {exc}") from exc


def cmd_analyze(args) -> int:
    if args.potential is None:
        raise InputError("--potential is required")
    w = _potential(args)
    if args.action in ("newton", "normalform", "minimal") and w.is_zero():
        raise InputError("the zero polynomial has no Newton polytope")
    if args.action == "newton":
        _emit(newton(w).to_json())
        return OK
    if args.action == "normalform":
        if w.n != 2:
            raise InputError("normal forms are implemented in two variables")
        nf = normal_form_2d(newton(w))
        _emit({"vertices": [list(v) for v in nf.vertices], "signature": nf.signature()})
        return OK
    if args.action == "minimal":
        p = newton(w)
        if w.n != 2 or p.dim != 2:
            raise InputError("minimality needs a two-dimensional Newton polygon")
        ok = is_minimal(p)
        _emit({"minimal": ok})
        return OK if ok else FAILED
    if args.action == "critical":
        if args.point is None:
            raise InputError("critical needs --point")
        pt = _rationals(args.point)
        if len(pt) != w.n or 0 in pt:
            raise InputError(f"--point must have {w.n} nonzero coordinates")
        rep = critical_report(w, pt)
        _emit(rep.to_json())
        return OK if rep.is_morse else FAILED
    # locus
    if args.divisor is None or args.order is None:
        raise InputError("locus needs --divisor and --order")
    try:
        g = parse_poly(args.divisor, args.n)
    except ParseError as exc:
        raise InputError(f"cannot parse divisor: {exc}") from exc
    if g.is_constant():
        raise InputError("the divisor must be nonconstant")
    rep = locus_report(w, g, args.shift, args.order)
    _emit(rep.to_json())
    return OK if rep.passed else FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lgmut", description="Mutations of Landau-Ginzburg seeds and toric potentials.")
    parser.add_argument("--version", action="version", version=f"lgmut {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def seed_args(p):
        p.add_argument("seed", nargs="?", help="seed JSON file, or - for stdin")
        p.add_argument("--catalog", help="use a built-in seed instead of a file")

    p = sub.add_parser("mutate", help="mutate a seed in one direction")
    seed_args(p)
    p.add_argument("--index", type=int, required=True)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("verify", help="check the LG-seed condition, optionally on all mutations to a depth")
    seed_args(p)
    p.add_argument("--depth", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("explore", help="breadth-first mutation graph")
    seed_args(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--oriented", action="store_true", help="do not identify mirror-image seeds")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("catalog", help="list or print built-in seeds")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("toric", help="monotone polytopes and toric mutation")
    p.add_argument("action", choices=("check", "potential", "configs", "mutate"))
    p.add_argument("polytope", help="polytope JSON file or a built-in name (cpN, p1xp1, bl1, bl2, bl3)")
    p.add_argument("--product", action="store_true", help="multiply the polytope by [-1, 1] first")
    p.add_argument("--facets", help="comma-separated facet indices of the face")
    p.add_argument("--point", help="comma-separated coordinates of the lattice point")
    p.add_argument("--basis", help="semicolon-separated basis vectors, e.g. '1,0,1'")
    p.set_defaults(func=cmd_toric)

    p = sub.add_parser("analyze", help="Newton polytopes, critical points and vanishing loci")
    p.add_argument("action", choices=("newton", "normalform", "critical", "locus", "minimal"))
    p.add_argument("--potential")
    p.add_argument("--n", type=int, default=2, help="number of variables")
    p.add_argument("--point")
    p.add_argument("--divisor")
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--order", type=int)
    p.set_defaults(func=cmd_analyze)
    return parser


_VECTOR_FLAGS = ("--point", "--basis", "--facets")


def _join_vector_flags(argv: list[str]) -> list[str]:
    # "--point -1,-1" would otherwise read "-1,-1" as an option
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in _VECTOR_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_vector_flags(list(sys.argv[1:] if argv is None else argv)))
    try:
        return args.func(args)
    except InputError as exc:
        print(f"lgmut: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
