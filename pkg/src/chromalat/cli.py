"""Command-line front end: ``chromalat <subcommand> ...``.

Exit codes: 0 success, 1 internal failure or failed check, 2 input error,
3 negative answer (not realizable, not cofinal/final, not contractible).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import __version__
from .expr import ExprError, evaluate
from .homotopy import is_homotopy_cofinal, is_homotopy_final, reduce_to_core
from .monoid import (
    MonoidError,
    UpSet,
    catalogue3,
    enumerate_q,
    is_thread_realizable,
    kappa,
    q_poset,
    submonoid_closure,
    thread_set,
)
from .poset import (
    BudgetError,
    MonotoneMap,
    PosetError,
    pi0,
    poset_from_json,
    poset_to_json,
    subdivision,
    to_dot,
)
from .verify import PROPERTIES, run_property, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(args, payload: Any, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _names(n: int) -> dict[UpSet, str]:
    return {u: k for k, u in catalogue3().items()} if n == 3 else {}


def _upset_json(U: UpSet) -> dict[str, Any]:
    return {"n": U.n_star, "upset": str(U), "minimal": [str(s) for s in U.minimal()], "size": len(U)}


def cmd_enum(args) -> int:
    elems = enumerate_q(args.n)
    names = _names(args.n) if args.names else {}
    if args.dot:
        P = q_poset(args.n)
        if names:
            P = P.relabel([names[u] for u in P.labels])
        sys.stdout.write(to_dot(P, "Q"))
        return EXIT_OK
    rows = []
    for i, u in enumerate(elems):
        row = {"index": i, "upset": str(u)}
        if names:
            row["name"] = names[u]
        rows.append(row)
    lines = [f"|Q| = {len(elems)}"]
    for r in rows:
        lines.append(f"{r['index']:>5}  {r.get('name', ''):<5} {r['upset']}".rstrip())
    _emit(args, {"n": args.n, "size": len(elems), "elements": rows}, "\n".join(lines))
    return EXIT_OK


def cmd_eval(args) -> int:
    U = evaluate(args.expr, args.n)
    name = _names(args.n).get(U)
    payload = _upset_json(U) | ({"name": name} if name else {})
    _emit(args, payload, str(U) + (f"  ({name})" if name else ""))
    return EXIT_OK


def cmd_kappa(args) -> int:
    U = evaluate(args.expr, args.n)
    K = kappa(U)
    _emit(args, {"upset": str(U), "kappa": str(K)}, str(K))
    return EXIT_OK


def cmd_closure(args) -> int:
    gens = [evaluate(e, args.n) for e in args.exprs]
    res = submonoid_closure(gens, args.n)
    names = _names(args.n)

    def word(w):
        return "*".join(f"g{k}" for k in w) or "1"

    if args.json:
        payload = {
            "generators": [str(g) for g in gens],
            "size": len(res),
            "elements": [
                {"index": i, "upset": str(u), "word": list(res.witnesses[i]), **({"name": names[u]} if u in names else {})}
                for i, u in enumerate(res.elements)
            ],
            "cayley": [list(r) for r in res.cayley],
        }
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return EXIT_OK
    lines = [f"generators: " + ", ".join(f"g{k} = {g}" for k, g in enumerate(gens)), f"|closure| = {len(res)}"]
    for i, u in enumerate(res.elements):
        extra = f"  ({names[u]})" if u in names else ""
        lines.append(f"  e{i:<3} = {word(res.witnesses[i]):<12} {u}{extra}")
    lines.append("cayley table (row * column):")
    width = len(str(len(res))) + 1
    lines.append(" " * (width + 3) + " ".join(f"e{j:<{width - 1}}" for j in range(len(res))))
    for i, row in enumerate(res.cayley):
        lines.append(f"  e{i:<{width}}" + " ".join(f"e{j:<{width - 1}}" for j in row))
    print("\n".join(lines))
    return EXIT_OK


def cmd_realize(args) -> int:
    U = evaluate(args.expr, args.n)
    witness = is_thread_realizable(U)
    if witness is None:
        _emit(args, {"upset": str(U), "realizable": False}, f"{U}: not realizable")
        return EXIT_NEGATIVE
    check = thread_set(witness)
    if check != U:
        raise RuntimeError(f"witness {witness} evaluates to {check}, not {U}")
    _emit(
        args,
        {"upset": str(U), "realizable": True, "witness": [str(a) for a in witness.entries]},
        f"{U} = {witness}",
    )
    return EXIT_OK


def cmd_check(args) -> int:
    exhaustive = args.exhaustive or args.samples is None
    rec = run_property(args.property, args.n, exhaustive, args.samples or 0, args.seed)
    _emit(args, rec.to_json(), rec.line())
    return EXIT_OK if rec.ok else EXIT_FAIL


def cmd_verify_paper(args) -> int:
    show = None if args.json else (lambda r: print(r.line(), flush=True))
    records = run_suite(show)
    ok = all(r.ok for r in records)
    if args.json:
        print(json.dumps({"ok": ok, "records": [r.to_json() for r in records]}, indent=2, ensure_ascii=False))
    else:
        total = sum(r.elapsed for r in records)
        print(f"{sum(r.ok for r in records)}/{len(records)} checks passed in {total:.1f}s")
    return EXIT_OK if ok else EXIT_FAIL


def _load_json(source: str) -> Any:
    text = source
    if not source.lstrip().startswith("{"):
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _load_map(dom, source: str) -> MonotoneMap:
    obj = _load_json(source)
    try:
        cod = poset_from_json(obj["cod"]) if "cod" in obj else dom
        return MonotoneMap(dom, cod, tuple(int(x) for x in obj["assignment"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed map JSON: {exc}") from exc


def cmd_poset(args) -> int:
    P = poset_from_json(_load_json(args.poset))
    if args.action == "core":
        red = reduce_to_core(P)
        payload = {"size": len(P), "core": poset_to_json(red.core), "core_size": len(red.core),
                   "contractible": len(red.core) == 1,
                   "removed": [[P.label_text(x), P.label_text(y)] for x, y in red.removed]}
        text = f"core has {len(red.core)} element(s): " + ", ".join(red.core.label_text(i) for i in red.core)
        _emit(args, payload, text)
        return EXIT_OK
    if args.action in ("cofinal", "final"):
        f = _load_map(P, args.map) if args.map else subdivision(P)[1]
        rep = is_homotopy_cofinal(f) if args.action == "cofinal" else is_homotopy_final(f)
        lines = [f"verdict: {rep.verdict}"]
        for e in rep.to_json()["evidence"]:
            mark = "contractible" if e["contractible"] else f"NOT contractible (core size {e['core_size']})"
            lines.append(f"  {e['element']}: comma size {e['comma_size']}, {mark}")
        _emit(args, rep.to_json(), "\n".join(lines))
        return EXIT_OK if rep.holds else EXIT_NEGATIVE
    if args.action == "subdivide":
        sP, mx = subdivision(P)
        payload = {"poset": poset_to_json(sP), "max": list(mx.assignment)}
        text = f"s(P) has {len(sP)} chains\n" + "\n".join(
            f"  {sP.label_text(i)} -> {P.label_text(mx(i))}" for i in sP
        )
        _emit(args, payload, text)
        return EXIT_OK
    comps = pi0(P)
    payload = {"count": len(comps), "components": [[P.label_text(i) for i in c] for c in comps]}
    _emit(args, payload, f"{len(comps)} component(s): " + "; ".join(
        "{" + ",".join(P.label_text(i) for i in c) + "}" for c in comps))
    return EXIT_OK


def cmd_hasse(args) -> int:
    if args.poset:
        P = poset_from_json(_load_json(args.poset))
    else:
        P = q_poset(args.n)
        names = _names(args.n)
        if names:
            P = P.relabel([names[u] for u in P.labels])
    sys.stdout.write(to_dot(P, "P" if args.poset else "Q"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=3, help="number of levels n* (default 3)")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--dot", action="store_true", help="emit Graphviz DOT where supported")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--exhaustive", action="store_true")

    parser = argparse.ArgumentParser(prog="chromalat", description="Up-set monoid and finite poset homotopy toolkit.")
    parser.add_argument("--version", action="version", version=f"chromalat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enum", parents=[common], help="list every up-set")
    p.add_argument("--names", action="store_true", help="attach catalogue names (n*=3)")
    p.set_defaults(func=cmd_enum)

    for name, func, helptext in (
        ("eval", cmd_eval, "evaluate an up-set expression"),
        ("kappa", cmd_kappa, "levels n with {n} in the up-set"),
        ("realize", cmd_realize, "find a thread list realizing an up-set"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("expr")
        p.set_defaults(func=func)

    p = sub.add_parser("closure", parents=[common], help="submonoid generated by expressions")
    p.add_argument("exprs", nargs="*")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("check", parents=[common], help="run one invariant sweep")
    p.add_argument("property", choices=sorted(PROPERTIES))
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-paper", parents=[common], help="run the full reproduction suite")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("poset", parents=[common], help="finite poset tools")
    p.add_argument("action", choices=["core", "cofinal", "final", "subdivide", "pi0"])
    p.add_argument("poset", help="poset JSON file or inline JSON")
    p.add_argument("--map", help="map JSON {assignment, cod}; default for cofinal/final is max: s(P) -> P")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("hasse", parents=[common], help="DOT Hasse diagram of a poset (default: Q)")
    p.add_argument("poset", nargs="?")
    p.set_defaults(func=cmd_hasse)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ExprError, MonoidError, PosetError, BudgetError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if os.environ.get("CHROMALAT_DEBUG"):
            raise
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
