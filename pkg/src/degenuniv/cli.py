"""Command-line driver.

Exit codes: 0 success, 1 usage error, 2 precondition failure,
3 invariant breach (including an embedding that does not verify).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .analysis import bounds_report, bounds_table
from .blockmodel import BlockModelParams, HostGraph, audit_edges, derive_params, sample_host
from .embedder import EmbedOptions, embed, embedding_from_text, embedding_to_text, trace_to_text
from .errors import DegenunivError, InvariantBreach, PreconditionError
from .experiment import ExperimentConfig, run_experiment
from .generators import CorpusSpec, write_corpus
from .graph import degeneracy_order, read_edge_list, verify_embedding

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_BREACH = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--block-constant", type=float)
    p.add_argument("--prob-boost", type=float)
    p.add_argument("--subblock-count", type=int)


def _params(args) -> BlockModelParams:
    return derive_params(
        args.n,
        args.d,
        block_constant=args.block_constant,
        prob_boost=args.prob_boost,
        subblock_count=args.subblock_count,
    )


def _load_host(directory: str, seed: Optional[int] = None) -> HostGraph:
    d = Path(directory)
    params = BlockModelParams.from_dict(json.loads((d / "params.json").read_text()))
    return HostGraph.from_texts(
        (d / "host.edges").read_text(), (d / "host.labels").read_text(), params, seed
    )


def cmd_params(args) -> int:
    params = _params(args)
    if args.json:
        print(params.to_json(), end="")
        return EXIT_OK
    rep = bounds_report(params)
    print(f"n = {params.n}   d = {params.d}   levels N = {params.levels}")
    print(f"block_constant = {params.block_constant:g}   prob_boost = {params.prob_boost:.6g}")
    print(f"overrides = {params.overrides if params.overrides else 'none (default constants)'}")
    print("Delta = " + ", ".join(f"{x:.6g}" for x in params.delta))
    print("p =")
    for row in params.prob:
        print("  " + " ".join(f"{x:10.6g}" for x in row))
    print(f"sub-blocks per block J = {params.subblock_count}")
    for k, (w, row) in enumerate(zip(params.block_sizes, params.subblock_sizes), start=1):
        print(f"  |W_{k}| = {w}   sub-blocks = {list(row)}")
    print(f"total vertices = {params.total_vertices}")
    print(f"expected edges = {rep.expected_edges:.6g}   model bound = {rep.model_edge_bound:.6g}")
    for name, ok in params.size_checks().items():
        print(f"  check {name}: {'pass' if ok else 'warn'}")
    return EXIT_OK


def cmd_sample(args) -> int:
    params = _params(args)
    host = sample_host(params, args.seed, max_vertices=args.max_vertices)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "params.json").write_text(params.to_json())
    (out / "host.edges").write_text(host.to_edge_list())
    (out / "host.labels").write_text(host.labels_text())
    print(f"host: {host.vertex_count} vertices, {host.edge_count} edges -> {out}")
    return EXIT_OK


def cmd_gen(args) -> int:
    knobs = {"mode": args.mode} if args.mode else {}
    spec = CorpusSpec(args.n, args.d, args.family, args.count, args.seed, knobs)
    manifest = write_corpus(spec, args.out)
    print(f"wrote {len(manifest['files'])} graphs to {args.out}")
    return EXIT_OK


def cmd_embed(args) -> int:
    guest = read_edge_list(Path(args.guest).read_text())
    host = _load_host(args.host)
    order = degeneracy_order(guest)
    res = embed(guest, order, host, EmbedOptions(args.choice, args.seed))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trace.txt").write_text(trace_to_text(res.trace))
    if res.ok:
        (out / "embedding.txt").write_text(embedding_to_text(res.embedding))
        print(f"embedded {guest.vertex_count} vertices -> {out / 'embedding.txt'}")
    else:
        (out / "failure.json").write_text(json.dumps(res.failure.to_dict(), indent=2) + "\n")
        print(f"embedding failed at step {res.failure.step} (band {res.failure.band})")
    return EXIT_OK


def cmd_verify(args) -> int:
    guest = read_edge_list(Path(args.guest).read_text())
    host = _load_host(args.host)
    m = embedding_from_text(Path(args.embedding).read_text(), guest.vertex_count)
    violation = verify_embedding(guest, host, m)
    if violation is None:
        print("ok")
        return EXIT_OK
    print(f"violation: {violation}")
    return EXIT_BREACH


def cmd_audit(args) -> int:
    host = _load_host(args.host)
    audit = audit_edges(host, threshold=args.threshold)
    text = audit.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    if audit.flagged:
        print(f"flagged: max |z| = {audit.max_abs_z:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.n is not None:
        ns = [args.n]
    else:
        if args.n_min is None or args.n_max is None:
            raise PreconditionError("give --n or both --n-min and --n-max")
        if args.points < 0:
            raise PreconditionError("invalid range: negative point count")
        if args.n_min > args.n_max or args.points == 0:
            ns = []
        elif args.points == 1:
            ns = [args.n_min]
        else:
            ns = np.logspace(np.log10(args.n_min), np.log10(args.n_max), args.points).tolist()
    if any(n < 16 for n in ns):
        raise PreconditionError("invalid range: n must be >= 16")
    rows = bounds_table(ns, args.d)
    fields = [
        "n", "d", "lower_bound", "budget", "model_edge_bound",
        "budget_over_lower", "model_over_lower",
    ]
    dest = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(dest, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: repr(float(v)) if isinstance(v, float) else v for k, v in r.items()})
    finally:
        if args.out:
            dest.close()
    return EXIT_OK


def cmd_experiment(args) -> int:
    data = json.loads(Path(args.config).read_text())
    if args.out:
        data["out"] = args.out
    if args.assert_level:
        data["assert_level"] = args.assert_level
    config = ExperimentConfig.from_dict(data)
    if not config.out:
        raise PreconditionError("experiment needs an output directory (--out or config 'out')")
    result = run_experiment(config)
    for seed in sorted(set(config.host_seeds)):
        print(f"host {seed}: success rate {result.success_rate(seed):.3f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="degenuniv", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("params", help="print derived block-model parameters")
    _add_model_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("sample", help="sample a host graph")
    _add_model_args(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-vertices", type=int, default=16_000)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("gen", help="generate a guest corpus")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["full", "varied"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("embed", help="embed a guest into a sampled host")
    p.add_argument("--guest", required=True)
    p.add_argument("--host", required=True, help="directory written by 'sample'")
    p.add_argument("--choice", choices=["lowest", "random"], default="lowest")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="check an embedding file")
    p.add_argument("--guest", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--embedding", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="per block-pair edge audit")
    p.add_argument("--host", required=True)
    p.add_argument("--threshold", type=float, default=5.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bounds", help="edge-count bounds as CSV")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=float)
    p.add_argument("--n-min", type=float)
    p.add_argument("--n-max", type=float)
    p.add_argument("--points", type=int, default=9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("experiment", help="run a configured sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--assert-level", choices=["strict", "diagnostic"])
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except (DegenunivError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
