"""Seeded sweeps: one host per seed, every corpus guest embedded into it."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .blockmodel import BlockModelParams, audit_edges, derive_params, default_prob_boost, sample_host
from .embedder import (
    EmbedOptions,
    assert_ledger,
    embed,
    embedding_to_text,
    ledger,
    ledger_margins,
    trace_to_text,
    well_behaved_report,
)
from .errors import InvariantBreach, PreconditionError
from .generators import CorpusSpec, generate_corpus
from .graph import Graph, degeneracy_order, verify_embedding, write_edge_list

log = logging.getLogger(__name__)

FORMAT_VERSION = 1

CSV_COLUMNS = [
    "host_seed",
    "guest_index",
    "family",
    "guest_n",
    "guest_m",
    "degeneracy",
    "success",
    "verified",
    "fail_step",
    "fail_guest",
    "fail_band",
    "host_vertices",
    "host_edges",
    "audit_max_abs_z",
    "audit_flagged",
    "max_occupancy",
    "ledger_min_margin",
    "ledger_breach_step",
    "nb_violations",
]


@dataclass
class ExperimentConfig:
    n: int
    d: int
    corpus: list[CorpusSpec]
    host_seeds: list[int]
    overrides: dict[str, float] = field(default_factory=dict)
    embed_choice: str = "lowest"
    embed_seed: Optional[int] = None
    out: Optional[str] = None
    assert_level: str = "diagnostic"
    write_artifacts: bool = False
    max_vertices: int = 16_000
    audit_threshold: float = 5.0

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        data = dict(data)
        n, d = data["n"], data["d"]
        corpus = [
            CorpusSpec(
                n=c.get("n", n),
                d=c.get("d", d),
                family=c["family"],
                count=c.get("count", 1),
                seed=c.get("seed", 0),
                knobs=c.get("knobs", {}),
            )
            for c in data.pop("corpus")
        ]
        embed_opts = data.pop("embed", {})
        if data.get("assert_level", "diagnostic") not in ("strict", "diagnostic"):
            raise PreconditionError("assert_level must be 'strict' or 'diagnostic'")
        return cls(
            corpus=corpus,
            embed_choice=embed_opts.get("choice", "lowest"),
            embed_seed=embed_opts.get("seed"),
            **data,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "d": self.d,
            "overrides": dict(self.overrides),
            "corpus": [c.to_dict() for c in self.corpus],
            "host_seeds": list(self.host_seeds),
            "embed": {"choice": self.embed_choice, "seed": self.embed_seed},
            "assert_level": self.assert_level,
            "write_artifacts": self.write_artifacts,
            "max_vertices": self.max_vertices,
            "audit_threshold": self.audit_threshold,
        }

    def config_hash(self) -> str:
        blob = json.dumps(
            {"format_version": FORMAT_VERSION, "config": self.to_dict()}, sort_keys=True
        )
        return hashlib.sha256(blob.encode()).hexdigest()

    def params(self) -> BlockModelParams:
        """Resolve overrides; ``prob_boost_factor`` multiplies the default boost."""
        ov = dict(self.overrides)
        factor = ov.pop("prob_boost_factor", None)
        if factor is not None:
            if "prob_boost" in ov:
                raise PreconditionError("give prob_boost or prob_boost_factor, not both")
            ov["prob_boost"] = factor * default_prob_boost(self.n, self.d)
        if "subblock_count" in ov:
            ov["subblock_count"] = int(ov["subblock_count"])
        return derive_params(self.n, self.d, **ov)


@dataclass
class ExperimentResult:
    rows: list[dict[str, Any]]
    failures: list[dict[str, Any]]
    timings: list[tuple[int, int, float]]
    manifest: dict[str, Any]

    def success_rate(self, host_seed: int) -> float:
        rows = [r for r in self.rows if r["host_seed"] == host_seed]
        return sum(r["success"] for r in rows) / len(rows)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(self.rows)
        return buf.getvalue()


def _format_occupancy(occ: np.ndarray) -> str:
    return ";".join(f"{k + 1}.{j + 1}={int(occ[k, j])}" for k, j in zip(*np.nonzero(occ)))


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Sample each host once and embed the whole corpus into it.

    Every success is re-verified; a verification failure raises
    InvariantBreach. In strict mode (default constants only) ledger and
    well-behavedness breaches also raise.
    """
    params = config.params()
    strict = config.assert_level == "strict"
    if strict and not params.uses_defaults:
        raise PreconditionError("strict assertions require the default constants")
    led = ledger(params)
    if strict and led.bound_violations():
        raise InvariantBreach(f"ledger caps exceed sub-block room: {led.bound_violations()}")

    guests: list[tuple[str, Graph]] = []
    for spec in config.corpus:
        guests.extend((spec.family, g) for g in generate_corpus(spec))
    orders = [degeneracy_order(g) for _, g in guests]
    options = EmbedOptions(config.embed_choice, config.embed_seed)

    out = Path(config.out) if config.out else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        if config.write_artifacts:
            (out / "params.json").write_text(params.to_json())
            for gi, (_, g) in enumerate(guests):
                (out / f"guest_{gi:04d}.edges").write_text(write_edge_list(g))

    rows, failures, timings = [], [], []
    for seed in sorted(config.host_seeds):
        host = sample_host(params, seed, max_vertices=config.max_vertices)
        audit = audit_edges(host, threshold=config.audit_threshold)
        if out is not None and config.write_artifacts:
            (out / f"host_{seed}.edges").write_text(host.to_edge_list())
            (out / f"host_{seed}.labels").write_text(host.labels_text())
        for gi, ((family, g), order) in enumerate(zip(guests, orders)):
            t0 = time.perf_counter()
            res = embed(g, order, host, options)
            verified = False
            nb: dict = {}
            breach = None
            if res.ok:
                violation = verify_embedding(g, host, res.embedding)
                if violation is not None:
                    raise InvariantBreach(f"host {seed} guest {gi}: {violation}")
                verified = True
                nb = well_behaved_report(res, g, order, params)
                breach = assert_ledger(res.trace, led)
                if strict and (nb or breach):
                    raise InvariantBreach(f"host {seed} guest {gi}: ledger {breach}, NB {nb}")
            else:
                failures.append({"host_seed": seed, "guest_index": gi, **res.failure.to_dict()})
            margins = ledger_margins(res.occupancy, led)
            rows.append(
                {
                    "host_seed": seed,
                    "guest_index": gi,
                    "family": family,
                    "guest_n": g.vertex_count,
                    "guest_m": g.edge_count,
                    "degeneracy": order.degeneracy,
                    "success": int(res.ok),
                    "verified": int(verified),
                    "fail_step": res.failure.step if res.failure else "",
                    "fail_guest": res.failure.guest if res.failure else "",
                    "fail_band": res.failure.band if res.failure else "",
                    "host_vertices": host.vertex_count,
                    "host_edges": host.edge_count,
                    "audit_max_abs_z": f"{audit.max_abs_z:.6f}",
                    "audit_flagged": int(audit.flagged),
                    "max_occupancy": _format_occupancy(res.occupancy),
                    "ledger_min_margin": f"{float(margins.min()):.6g}",
                    "ledger_breach_step": breach.i if breach else "",
                    "nb_violations": ";".join(
                        f"{k}.{j}:{v.condition}" for (k, j), v in sorted(nb.items())
                    ),
                }
            )
            timings.append((seed, gi, time.perf_counter() - t0))
            if out is not None and config.write_artifacts and res.ok:
                (out / f"embed_{seed}_{gi:04d}.txt").write_text(embedding_to_text(res.embedding))
                (out / f"trace_{seed}_{gi:04d}.txt").write_text(trace_to_text(res.trace))
        log.info("host %d: %d/%d embedded", seed, sum(r["success"] for r in rows[-len(guests):]), len(guests))

    manifest = {
        "format_version": FORMAT_VERSION,
        "tool_version": __version__,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "params": params.to_dict(),
        "rows": len(rows),
        "files": ["results.csv", "failures.jsonl", "timings.csv"],
    }
    result = ExperimentResult(rows, failures, timings, manifest)
    if out is not None:
        (out / "results.csv").write_text(result.csv_text())
        (out / "failures.jsonl").write_text(
            "".join(json.dumps(f, sort_keys=True) + "\n" for f in failures)
        )
        (out / "timings.csv").write_text(
            "host_seed,guest_index,seconds\n"
            + "".join(f"{s},{g},{t:.6f}\n" for s, g, t in timings)
        )
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return result
