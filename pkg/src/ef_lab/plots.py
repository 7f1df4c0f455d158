"""Figure rendering for experiment records; every figure lands next to the CSV."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["psi_sweep_figure", "zero_one_figure", "save_record_figure"]


def psi_sweep_figure(record, path):
    rows = record.outputs
    even = [(r["m"], r["value"]) for r in rows if r["m"] % 2 == 0]
    odd = [(r["m"], r["value"]) for r in rows if r["m"] % 2 == 1]
    fig, ax = plt.subplots(figsize=(6, 4))
    if even:
        ax.plot(*zip(*even), "o-", label="even dimension", color="tab:blue")
    if odd:
        ax.plot(*zip(*odd), "s-", label="odd dimension", color="tab:red")
    ax.set_xlabel("matrix dimension m")
    ax.set_ylabel("best found defect value")
    ax.set_title("Parity observable over the operator unit ball")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def zero_one_figure(record, path):
    rows = record.outputs
    sentences = []
    for r in rows:
        if r["sentence"] not in sentences:
            sentences.append(r["sentence"])
    fig, ax = plt.subplots(figsize=(6, 4))
    for s in sentences:
        pts = [(r["m"], r["frequency"]) for r in rows if r["sentence"] == s]
        label = s if len(s) <= 40 else s[:37] + "..."
        ax.plot(*zip(*pts), "o-", label=label)
    ax.set_xlabel("graph size m")
    ax.set_ylabel("truth frequency on G(m, 1/2)")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title("Almost-sure truth values emerging with size")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_record_figure(record, path):
    if record.kind == "psi-sweep":
        return psi_sweep_figure(record, path)
    if record.kind == "zero-one":
        return zero_one_figure(record, path)
    raise ValueError(f"no figure renderer for experiment kind {record.kind!r}")
