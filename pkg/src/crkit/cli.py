"""Unified command-line frontend.

Exit codes: 0 positive verdict / success, 1 negative verdict, 2 usage or
parse error, 3 budget exceeded. Every subcommand accepts --json for a
machine-readable run report with stable field order.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__, amenability, cells, fractional, mcvp, oracles, sweeps, tinhofer
from .errors import BudgetExceededError, GraphFormatError
from .graphs import ColoredGraph, load, random_gnm, save, standard_graph
from .refinement import stable_partition

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class _Budget:
    def __init__(self, ms):
        self.deadline = (time.monotonic() + ms / 1000.0) if ms is not None else None

    def check(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceededError("--budget-ms exceeded")


def _read_graph(path: str) -> tuple[ColoredGraph, str]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return load(text), hashlib.sha256(text.encode()).hexdigest()[:16]


def _report(args, command, digest, verdicts, t0, seed=None):
    rep = {
        "command": command,
        "input": digest,
        "verdicts": verdicts,
        "elapsed_ms": round(1000 * (time.monotonic() - t0), 2),
        "seed": seed,
        "version": __version__,
    }
    if args.json:
        print(json.dumps(rep))
    else:
        for key, val in verdicts.items():
            print(f"{key}: {val}")
    return rep


def _cmd_refine(args, budget, seed):
    t0 = time.monotonic()
    g, digest = _read_graph(args.file)
    part, trace = stable_partition(g)
    if args.trace and not args.json:
        for rnd, k in enumerate(trace.class_counts):
            print(f"round {rnd}: {k} classes")
    verdicts = {
        "classes": len(part.classes),
        "rounds": trace.rounds,
        "class_counts": list(trace.class_counts),
        "discrete": part.is_discrete,
    }
    if args.json:
        verdicts["partition"] = [list(c) for c in part.classes]
    else:
        for cid, cls in enumerate(part.classes):
            print(f"class {cid} (size {len(cls)}): {' '.join(map(str, cls))}")
    _report(args, "refine", digest, verdicts, t0, seed)
    return EXIT_OK


def _cmd_cellgraph(args, budget, seed):
    t0 = time.monotonic()
    g, digest = _read_graph(args.file)
    part, _ = stable_partition(g)
    data = cells.build(g, part)
    lines = []
    for cid, lab in enumerate(data.cell_labels):
        lines.append(f"cell {cid}: size={lab.size} degree={lab.degree} kind={lab.kind.value}")
    for (i, j) in sorted(data.pair_labels):
        lab = data.pair_labels[(i, j)]
        lines.append(f"pair ({i},{j}): kind={lab.kind.value} d=({lab.d_xy},{lab.d_yx})")
    for idx, comp in enumerate(data.components):
        lines.append(f"component {idx}: cells={list(comp.cells)} tree={comp.is_tree}")
    if args.dot:
        dot = ["graph cells {"]
        for cid, lab in enumerate(data.cell_labels):
            dot.append(f'  c{cid} [label="{cid}:{lab.kind.value}({lab.size})"];')
        for (i, j) in sorted(data.pair_labels):
            lab = data.pair_labels[(i, j)]
            style = "" if lab.anisotropic else " [style=dashed]"
            dot.append(f"  c{i} -- c{j}{style};")
        dot.append("}")
        print("\n".join(dot))
    elif not args.json:
        print("\n".join(lines))
    _report(args, "cellgraph", digest, {"cells": data.cell_count,
                                        "components": len(data.components)}, t0, seed)
    return EXIT_OK


def _cmd_amenable(args, budget, seed):
    t0 = time.monotonic()
    g, digest = _read_graph(args.file)
    verdict = amenability.is_amenable(g)
    budget.check()
    verdicts = {"amenable": verdict.amenable}
    if verdict.violation is not None and args.witness:
        verdicts["violation"] = {
            "condition": verdict.violation.condition,
            "cells": [list(c) for c in verdict.violation.cells],
            "detail": verdict.violation.detail,
        }
    if args.cross_check:
        other = amenability.check_CDEF(g)
        verdicts["cross_check"] = other.amenable
        if other.amenable != verdict.amenable:
            raise AssertionError("is_amenable and check_CDEF disagree")
    _report(args, "amenable", digest, verdicts, t0, seed)
    return EXIT_OK if verdict.amenable else EXIT_NEGATIVE


def _cmd_iso(args, budget, seed):
    t0 = time.monotonic()
    g, dg = _read_graph(args.fileg)
    h, dh = _read_graph(args.fileh)
    policy = {"det": tinhofer.POLICY_DETERMINISTIC, "rand": tinhofer.POLICY_RANDOM}[args.policy]
    res = tinhofer.tinhofer_iso(g, h, policy=policy, seed=seed)
    verdicts = {"isomorphic": res.isomorphic}
    if res.isomorphic and args.json:
        verdicts["mapping"] = list(res.mapping)
    if args.transcript:
        verdicts["transcript"] = [[s.round, s.class_id, s.u, s.v] for s in res.transcript]
    _report(args, "iso", f"{dg}+{dh}", verdicts, t0, seed)
    return EXIT_OK if res.isomorphic else EXIT_NEGATIVE


def _cmd_canon(args, budget, seed):
    t0 = time.monotonic()
    g, digest = _read_graph(args.file)
    order = tinhofer.canonical_form(g)
    canon = tinhofer.canonical_graph(g)
    h = hashlib.sha256(save(canon).encode()).hexdigest()
    _report(args, "canon", digest, {"order": list(order), "canonical_sha256": h}, t0, seed)
    return EXIT_OK


def _cmd_fractiso(args, budget, seed):
    t0 = time.monotonic()
    g, dg = _read_graph(args.fileg)
    h, dh = _read_graph(args.fileh)
    if g.n != h.n:
        feasible = False
    else:
        feasible = fractional.is_fractionally_isomorphic(g, h)
    _report(args, "fractiso", f"{dg}+{dh}", {"fractionally_isomorphic": feasible}, t0, seed)
    return EXIT_OK if feasible else EXIT_NEGATIVE


def _cmd_compact(args, budget, seed):
    t0 = time.monotonic()
    g, digest = _read_graph(args.file)
    verdicts = {}
    amenable = amenability.is_amenable(g).amenable if g.is_simple else False
    if amenable:
        verdicts["compact"] = "certified"
        verdicts["reason"] = "amenable graphs are compact"
        result = EXIT_OK
    else:
        probe = fractional.compact_probe(g, trials=args.trials, seed=seed)
        budget.check()
        if probe.non_compact:
            verdicts["compact"] = "no"
            verdicts["witness_trial"] = probe.trial
            if args.witness:
                text = probe.witness.format_grid()
                if args.json:
                    verdicts["witness"] = text.splitlines()
                else:
                    print(text)
            result = EXIT_NEGATIVE
        else:
            verdicts["compact"] = "no-counterexample"
            verdicts["trials"] = probe.trials_run
            result = EXIT_OK
    _report(args, "compact", digest, verdicts, t0, seed)
    return result


def _cmd_classify(args, budget, seed):
    t0 = time.monotonic()
    g, digest = _read_graph(args.file)
    part, _ = stable_partition(g)
    verdicts = {"discrete": part.is_discrete}
    if g.is_simple:
        verdicts["amenable"] = amenability.is_amenable(g).amenable
        if verdicts["amenable"]:
            verdicts["compact"] = "certified(theorem)"
        else:
            probe = fractional.compact_probe(g, trials=args.trials, seed=seed)
            verdicts["compact"] = "no" if probe.non_compact else "no-counterexample"
        budget.check()
        try:
            verdicts["godsil"] = oracles.is_godsil(g, budget=args.oracle_budget)
        except BudgetExceededError:
            verdicts["godsil"] = "budget-exceeded"
        budget.check()
        try:
            tin = oracles.is_tinhofer_bruteforce(g, budget=args.oracle_budget)
            verdicts["tinhofer"] = tin is True
        except BudgetExceededError:
            verdicts["tinhofer"] = "budget-exceeded"
    budget.check()
    try:
        verdicts["refinable"] = oracles.is_refinable(g)
    except BudgetExceededError:
        verdicts["refinable"] = "budget-exceeded"
    _report(args, "classify", digest, verdicts, t0, seed)
    return EXIT_OK


def _cmd_reduce(args, budget, seed):
    t0 = time.monotonic()
    with open(args.circuit, "r", encoding="utf-8") as fh:
        text = fh.read()
    circuit = mcvp.parse_circuit(text)
    out = mcvp.reduce_circuit(circuit, args.variant)
    graph_text = save(out.graph)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(graph_text)
    else:
        sys.stdout.write(graph_text)
    digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    _report(args, "reduce", digest, {
        "gates": circuit.size,
        "value": mcvp.evaluate(circuit),
        "vertices": out.graph.n,
        "edges": out.graph.m,
        "variant": args.variant,
    }, t0, seed)
    return EXIT_OK


def _cmd_bench(args, budget, seed):
    t0 = time.monotonic()
    times = []
    for trial in range(args.trials):
        g = random_gnm(args.n, args.m, seed + trial)
        t1 = time.monotonic()
        part, trace = stable_partition(g)
        times.append(time.monotonic() - t1)
        budget.check()
    verdicts = {
        "n": args.n,
        "m": args.m,
        "trials": args.trials,
        "times_s": [round(t, 4) for t in times],
        "mean_s": round(sum(times) / len(times), 4),
    }
    _report(args, "bench", f"gnm({args.n},{args.m})", verdicts, t0, seed)
    return EXIT_OK


def _cmd_sweep(args, budget, seed):
    t0 = time.monotonic()
    rep = sweeps.sweep(args.n)
    budget.check()
    verdicts = {
        "n": rep.n,
        "labeled_total": rep.labeled_total,
        "iso_classes": rep.iso_class_total,
        "counts": rep.labeled_counts,
        "bruteforce_amenable": rep.bruteforce_amenable_labeled,
        "inclusion_violations": rep.inclusion_violations,
    }
    _report(args, "sweep", f"n={args.n}", verdicts, t0, seed)
    return EXIT_OK if rep.inclusion_violations == 0 else EXIT_NEGATIVE


def _cmd_generate(args, budget, seed):
    t0 = time.monotonic()
    params = {}
    for item in args.param or []:
        key, _, val = item.partition("=")
        params[key] = int(val)
    g = standard_graph(args.name, **params)
    text = save(g)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    _report(args, "generate", args.name, {"n": g.n, "m": g.m}, t0, seed)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON run report")
    common.add_argument("--seed", type=int, default=None,
                        help="seed (default: CRKIT_SEED env var, else 0)")
    common.add_argument("--budget-ms", type=int, default=None, help="soft time budget")
    ap = argparse.ArgumentParser(prog="crkit", description=__doc__, parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("refine", help="stable partition and per-round class counts")
    p.add_argument("file")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=_cmd_refine)

    p = add_parser("cellgraph", help="cells, pair labels, anisotropic components")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(fn=_cmd_cellgraph)

    p = add_parser("amenable", help="amenability recognizer (exit 0 amenable, 1 not)")
    p.add_argument("file")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--cross-check", action="store_true")
    p.set_defaults(fn=_cmd_amenable)

    p = add_parser("iso", help="Tinhofer isomorphism test")
    p.add_argument("fileg")
    p.add_argument("fileh")
    p.add_argument("--policy", choices=("det", "rand"), default="det")
    p.add_argument("--transcript", action="store_true")
    p.set_defaults(fn=_cmd_iso)

    p = add_parser("canon", help="canonical ordering and adjacency hash")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_canon)

    p = add_parser("fractiso", help="fractional isomorphism feasibility")
    p.add_argument("fileg")
    p.add_argument("fileh")
    p.set_defaults(fn=_cmd_fractiso)

    p = add_parser("compact", help="compactness: certified via amenability, else probed")
    p.add_argument("file")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--witness", action="store_true")
    p.set_defaults(fn=_cmd_compact)

    p = add_parser("classify", help="membership vector over the class hierarchy")
    p.add_argument("file")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--oracle-budget", type=int, default=10)
    p.set_defaults(fn=_cmd_classify)

    p = add_parser("reduce", help="monotone circuit to colored graph")
    p.add_argument("circuit")
    p.add_argument("--variant", choices=mcvp.VARIANTS, default="Gpp")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_reduce)

    p = add_parser("bench", help="time stable_partition on random graphs")
    p.add_argument("what", choices=("refine",))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, default=3)
    p.set_defaults(fn=_cmd_bench)

    p = add_parser("sweep", help="class counts over all labeled graphs on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_cmd_sweep)

    p = add_parser("generate", help="write a standard graph file")
    p.add_argument("name")
    p.add_argument("--param", action="append", metavar="key=value")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_generate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    seed = args.seed if args.seed is not None else int(os.environ.get("CRKIT_SEED", "0"))
    budget = _Budget(args.budget_ms)
    try:
        return args.fn(args, budget, seed)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GraphFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
