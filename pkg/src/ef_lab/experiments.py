"""Desk-scale empirical studies: truth frequencies on random graphs,
majority-diagonal subsequence extraction, and parity-observable sweeps.

Every experiment returns a self-contained record (parameters, seed, version,
per-trial outputs) so its table can be regenerated bit-for-bit.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .graphs import random_graph
from .logic import evaluate, parse_sentence, print_formula
from .metric_games import evaluate_psi

__all__ = [
    "ExperimentRecord",
    "DiagonalResult",
    "zero_one_trial",
    "zero_one_sweep",
    "diagonal_subsequence",
    "psi_sweep",
    "rerun",
    "record_to_csv",
]


@dataclass(frozen=True)
class ExperimentRecord:
    """outputs are fully determined by parameters; timings are advisory and
    kept separate so records can be compared bit-for-bit."""

    kind: str
    parameters: dict
    outputs: list
    summary: dict
    wall_time: float
    timings: list | None = None
    version: str = __version__

    def to_json(self):
        return {
            "kind": self.kind,
            "parameters": self.parameters,
            "outputs": self.outputs,
            "summary": self.summary,
            "wall_time": self.wall_time,
            "timings": self.timings,
            "version": self.version,
        }


@dataclass(frozen=True)
class DiagonalResult:
    indices: list
    sentences_processed: int


def _sample_seed(master, index):
    # derive one child seed per trial; SeedSequence spawning is stable
    return np.random.SeedSequence((master, index)).generate_state(1)[0]


def zero_one_trial(f, m, samples, seed, p=0.5):
    """Fraction of G(m, p) samples on which the sentence holds (fair-coin
    edges by default)."""
    if isinstance(f, str):
        f = parse_sentence(f)
    hits = 0
    for i in range(samples):
        g = random_graph(m, p, _sample_seed(seed, i))
        if evaluate(g, f):
            hits += 1
    return hits / samples


def zero_one_sweep(sentences, sizes, samples, seed):
    """Truth frequency of each sentence at each graph size; one record."""
    parsed = [(s, parse_sentence(s)) if isinstance(s, str) else (print_formula(s), s) for s in sentences]
    start = time.perf_counter()
    outputs = []
    for text, f in parsed:
        for m in sizes:
            freq = zero_one_trial(f, m, samples, seed)
            outputs.append({"sentence": text, "m": m, "samples": samples, "frequency": freq})
    wall = time.perf_counter() - start
    return ExperimentRecord(
        kind="zero-one",
        parameters={"sentences": [t for t, _ in parsed], "sizes": list(sizes), "samples": samples, "seed": seed},
        outputs=outputs,
        summary={"rows": len(outputs)},
        wall_time=wall,
    )


def diagonal_subsequence(graphs, sentences):
    """Nested majority refinement: for each sentence keep the subsequence
    agreeing with the current majority truth value (ties keep the true side).
    All surviving graphs agree on every processed sentence."""
    indices = list(range(len(graphs)))
    processed = 0
    for f in sentences:
        if not indices:
            break  # pathological input: report the prefix handled so far
        truths = [evaluate(graphs[i], f) for i in indices]
        trues = sum(truths)
        keep = trues * 2 >= len(indices)
        indices = [i for i, t in zip(indices, truths) if t == keep]
        processed += 1
    return DiagonalResult(indices, processed)


def psi_sweep(dims, restarts=64, max_steps=400, seed=0):
    """Best-found parity-observable value per dimension."""
    dims = list(dims)
    if any(d > 32 for d in dims):
        raise ValueError("sweep dimensions are capped at 32")
    start = time.perf_counter()
    outputs = []
    timings = []
    for m in dims:
        t0 = time.perf_counter()
        res = evaluate_psi(m, restarts=restarts, max_steps=max_steps, seed=seed)
        outputs.append(
            {"m": m, "value": res.value, "restarts": res.restarts, "seed": res.seed, "warning": res.warning}
        )
        timings.append(time.perf_counter() - t0)
    wall = time.perf_counter() - start
    return ExperimentRecord(
        kind="psi-sweep",
        parameters={"dims": dims, "restarts": restarts, "max_steps": max_steps, "seed": seed},
        outputs=outputs,
        summary={"max_even": max((r["value"] for r in outputs if r["m"] % 2 == 0), default=None),
                 "min_odd": min((r["value"] for r in outputs if r["m"] % 2 == 1), default=None)},
        wall_time=wall,
        timings=timings,
    )


def rerun(record):
    """Re-execute an experiment from its recorded parameters."""
    if record.kind == "zero-one":
        p = record.parameters
        return zero_one_sweep(p["sentences"], p["sizes"], p["samples"], p["seed"])
    if record.kind == "psi-sweep":
        p = record.parameters
        return psi_sweep(p["dims"], restarts=p["restarts"], max_steps=p["max_steps"], seed=p["seed"])
    raise ValueError(f"unknown experiment kind {record.kind!r}")


def record_to_csv(record):
    """Delimited rows for the record's outputs (stable column order).

    Per-row timings, when recorded, are appended as a wall_time column."""
    if not record.outputs:
        return ""
    columns = list(record.outputs[0].keys())
    timings = record.timings if record.timings and len(record.timings) == len(record.outputs) else None
    if timings is not None:
        columns = columns + ["wall_time"]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for i, row in enumerate(record.outputs):
        if timings is not None:
            row = dict(row, wall_time=timings[i])
        writer.writerow(row)
    return buf.getvalue()
