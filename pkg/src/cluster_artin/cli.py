"""Command-line surface: mutate, present, verify, enumerate, cycles, opposite.

Inputs are JSON files holding either a diagram {"n": ..., "edges": [[i, j, w],
...]} or an exchange matrix {"B": [[...], ...]}; matrices are converted on
ingestion.  All output is deterministic for a fixed invocation.  The
environment variable ARTIN_MUTATE_THREADS caps worker threads in the library
layers.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys

from .diagram import (
    BudgetExceededError,
    Diagram,
    DiagramError,
    chordless_cycles,
    mutate_diagram,
    mutation_class,
    opposite,
)
from .mapping import GroupMap
from .presentation import (
    PresentationError,
    Word,
    affine_artin_presentation,
    artin_presentation,
    coxeter_presentation,
    load_t4_patterns,
)
from .verifier import (
    EXIT_CODES,
    FAIL,
    INCONCLUSIVE,
    PASS,
    SearchBudget,
    VerifierError,
    fuzz_soundness,
    todd_coxeter,
    verify_homomorphism,
    verify_mutation_invariance,
)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_diagram(path: str) -> Diagram:
    return Diagram.from_json(_load_json(path))


def _emit(obj, fmt: str, text_renderer=None) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        assert text_renderer is not None
        sys.stdout.write(text_renderer(obj))


def _presenter(args):
    if args.mode == "affine":
        patterns = ()
        if getattr(args, "patterns", None):
            patterns = load_t4_patterns(_load_json(args.patterns))
        return functools.partial(affine_artin_presentation, t4_patterns=patterns)
    return functools.partial(artin_presentation,
                             minimal_t3=getattr(args, "minimal_t3", False))


def _budget(args) -> SearchBudget:
    return SearchBudget(max_nodes=args.budget_nodes, len_slack=args.budget_len)


def cmd_mutate(args) -> int:
    G = _load_diagram(args.input)
    for k in args.vertices:
        G = mutate_diagram(G, k)
    if args.format == "dot":
        sys.stdout.write(G.to_dot())
    else:
        _emit(G.to_json(), "json")
    return 0


def cmd_opposite(args) -> int:
    G = opposite(_load_diagram(args.input))
    if args.format == "dot":
        sys.stdout.write(G.to_dot())
    else:
        _emit(G.to_json(), "json")
    return 0


def cmd_cycles(args) -> int:
    G = _load_diagram(args.input)
    cycles = chordless_cycles(G, affine=args.mode == "affine")
    payload = {
        "diagram": G.to_json(),
        "cycles": [
            {
                "vertices": list(c.vertices),
                "weights": list(c.weights),
                "oriented": c.oriented,
                "class": c.cycle_class.value,
            }
            for c in cycles
        ],
    }

    def render(obj) -> str:
        lines = []
        for c in obj["cycles"]:
            lines.append(
                f"{tuple(c['vertices'])} weights={tuple(c['weights'])} "
                f"class={c['class']}" + ("" if c["oriented"] else " (unoriented)")
            )
        return "\n".join(lines) + "\n" if lines else "no chordless cycles\n"

    _emit(payload, args.format, render)
    return 0


def cmd_present(args) -> int:
    G = _load_diagram(args.input)
    if args.kind == "coxeter":
        P = coxeter_presentation(G)
    else:
        P = _presenter(args)(G)
    if args.format == "text":
        sys.stdout.write(P.to_text())
    else:
        _emit(P.to_json(), "json")
    return 0


def cmd_enumerate(args) -> int:
    G = _load_diagram(args.input)
    members = mutation_class(G, cap=args.cap)
    census = []
    orders = set()
    for D in members:
        counts: dict[str, int] = {}
        for c in chordless_cycles(D):
            counts[c.cycle_class.value] = counts.get(c.cycle_class.value, 0) + 1
        table = todd_coxeter(coxeter_presentation(D), args.coset_cap)
        orders.add(table.order)
        census.append({"diagram": D.to_json(), "cycles": counts,
                       "coxeter_order": table.order})
    if len(orders) != 1:
        raise VerifierError(f"mutation class produced several orders: {orders}")
    payload = {
        "count": len(members),
        "coxeter_order": orders.pop(),
        "members": census,
    }

    def render(obj) -> str:
        lines = [f"class size {obj['count']}, coxeter order {obj['coxeter_order']}"]
        for m in obj["members"]:
            lines.append(f"  {m['diagram']['edges']} cycles={m['cycles']}")
        return "\n".join(lines) + "\n"

    _emit(payload, args.format, render)
    return 0


def _verify_map_fixture(args, obj: dict) -> int:
    G = Diagram.from_json(obj["diagram"])
    k = int(obj["k"])
    presenter = _presenter(args)
    source = presenter(mutate_diagram(G, k))
    target = presenter(G)
    images = tuple(Word.from_json(w) for w in obj["images"])
    gmap = GroupMap(source, target, images, obj.get("label", "fixture-map"))
    report = verify_homomorphism(gmap, _budget(args), args.coset_cap)
    payload = report.to_json()

    def render(obj) -> str:
        return f"{obj['map']}: {obj['status']}\n"

    _emit(payload, args.format, render)
    return EXIT_CODES[report.status]


def cmd_verify(args) -> int:
    obj = _load_json(args.input)
    if "images" in obj:
        return _verify_map_fixture(args, obj)
    G = Diagram.from_json(obj)
    diagrams = mutation_class(G, cap=args.cap) if args.mutation_class else (G,)
    presenter = _presenter(args)
    budget = _budget(args)
    results = []
    worst = PASS
    rank = {PASS: 0, INCONCLUSIVE: 1, FAIL: 2}
    for D in diagrams:
        vertices = range(1, D.n + 1) if args.all_vertices else [args.vertex]
        if not args.all_vertices and args.vertex is None:
            raise DiagramError("pass -k VERTEX or --all-vertices")
        for k in vertices:
            report = verify_mutation_invariance(
                D, k, budget, args.coset_cap, presenter
            )
            results.append(report)
            if rank[report.status] > rank[worst]:
                worst = report.status
    payload = {
        "status": worst,
        "results": [r.to_json() for r in results],
    }
    if args.fuzz:
        stats = fuzz_soundness(
            presenter(G), args.fuzz, seed=args.seed, coset_cap=args.coset_cap
        )
        payload["fuzz"] = stats

    def render(obj) -> str:
        lines = []
        for r in obj["results"]:
            edges = r["diagram"]["edges"]
            lines.append(f"{r['status']} diagram={edges} k={r['vertex']}")
        lines.append(f"overall: {obj['status']}")
        if "fuzz" in obj:
            lines.append(f"fuzz: {obj['fuzz']}")
        return "\n".join(lines) + "\n"

    _emit(payload, args.format, render)
    return EXIT_CODES[worst]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="artin-mutate",
        description="Diagram mutation, group presentations, and certified "
        "mutation-invariance checking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_choices=("json", "text")):
        p.add_argument("input", help="diagram or matrix JSON file")
        p.add_argument("--format", choices=fmt_choices, default="json")

    p = sub.add_parser("mutate", help="apply a mutation sequence")
    common(p, ("json", "dot"))
    p.add_argument("-k", dest="vertices", type=int, action="append",
                   required=True, help="vertex to mutate at (repeatable)")

    p = sub.add_parser("opposite", help="reverse all arrows")
    common(p, ("json", "dot"))

    p = sub.add_parser("cycles", help="list chordless cycles")
    common(p)
    p.add_argument("--mode", choices=("finite", "affine"), default="finite")

    p = sub.add_parser("present", help="emit a group presentation")
    common(p)
    p.add_argument("--kind", choices=("artin", "coxeter"), default="artin")
    p.add_argument("--mode", choices=("finite", "affine"), default="finite")
    p.add_argument("--minimal-t3", action="store_true",
                   help="one (T3) relator per cycle, leaning on the "
                   "redundancy lemmas")
    p.add_argument("--patterns", help="(T4) pattern library JSON (affine mode)")

    p = sub.add_parser("verify", help="verify mutation invariance or a map fixture")
    common(p)
    p.add_argument("-k", dest="vertex", type=int, help="vertex to mutate at")
    p.add_argument("--all-vertices", action="store_true")
    p.add_argument("--class", dest="mutation_class", action="store_true",
                   help="verify every member of the mutation class")
    p.add_argument("--mode", choices=("finite", "affine"), default="finite")
    p.add_argument("--minimal-t3", action="store_true")
    p.add_argument("--patterns", help="(T4) pattern library JSON (affine mode)")
    p.add_argument("--budget-nodes", type=int, default=1_000_000,
                   help="insertion attempts per word search")
    p.add_argument("--budget-len", type=int, default=16,
                   help="extra letters allowed beyond each start word")
    p.add_argument("--coset-cap", type=int, default=1_000_000)
    p.add_argument("--cap", type=int, default=20_000,
                   help="mutation class budget for --class")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for --fuzz word generation")
    p.add_argument("--fuzz", type=int, default=0,
                   help="also run N random-word soundness checks")

    p = sub.add_parser("enumerate",
                       help="mutation class census with Coxeter orders")
    common(p)
    p.add_argument("--cap", type=int, default=20_000)
    p.add_argument("--coset-cap", type=int, default=1_000_000)

    return parser


_HANDLERS = {
    "mutate": cmd_mutate,
    "opposite": cmd_opposite,
    "cycles": cmd_cycles,
    "present": cmd_present,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (DiagramError, PresentationError, BudgetExceededError,
            VerifierError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
