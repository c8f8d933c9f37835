"""Matplotlib renderers for traces, density estimates, limit-set
estimates and correlation reports.

Figures are written next to the delimited output of the CLI report
commands.  SVG output is made reproducible by pinning the hash salt and
stripping the creation date, so re-running a command yields
byte-identical files.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .averaging import DensityEstimate  # noqa: E402
from .chowla import CorrelationReport  # noqa: E402
from .limitsets import FrequencyTrace, LimitSetEstimate  # noqa: E402
from .symbolic import word_to_str  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "genlab"


def save_figure(fig, path: str) -> None:
    metadata = {"Date": None} if str(path).endswith(".svg") else None
    fig.savefig(path, bbox_inches="tight", metadata=metadata)
    plt.close(fig)


def _mass_series(trace: FrequencyTrace, word) -> list:
    return [float(mu.mass_of(word)) for _, mu in trace.entries]


def plot_traces(traces: Sequence[FrequencyTrace], path: str, title: str = "") -> None:
    """Cylinder masses against N (log x), one line per (mode, word)."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for trace in traces:
        alphabet = trace.entries[0][1].alphabet
        words = sorted({w for _, mu in trace.entries for w in mu.mass})
        ns = list(trace.grid)
        for word in words:
            label = f"{trace.mode} {word_to_str(alphabet, word)}"
            style = "-" if trace.mode == "cesaro" else "--"
            ax.plot(ns, _mass_series(trace, word), style, label=label, linewidth=1.2)
    ax.set_xscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("cylinder mass")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, ncol=2)
    ax.grid(True, alpha=0.3)
    save_figure(fig, path)


def plot_density(est: DensityEstimate, path: str, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ns = list(est.grid)
    ax.plot(ns, est.freqs, "-", label="Cesaro frequency", linewidth=1.2)
    ax.plot(ns, est.logfreqs, "--", label="harmonic frequency", linewidth=1.2)
    for value, name in (
        (est.lower_asymptotic, "lower asymptotic"),
        (est.upper_asymptotic, "upper asymptotic"),
        (est.lower_logarithmic, "lower logarithmic"),
        (est.upper_logarithmic, "upper logarithmic"),
    ):
        ax.axhline(value, color="gray", linewidth=0.6, alpha=0.6)
        ax.annotate(
            name, (ns[0], value), fontsize=6, va="bottom", color="gray"
        )
    if est.tail_start < len(ns):
        ax.axvline(ns[est.tail_start], color="red", linewidth=0.6, alpha=0.5)
    ax.set_xscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("frequency")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    save_figure(fig, path)


def plot_limitset(
    trace: FrequencyTrace,
    estimate: LimitSetEstimate,
    path: str,
    title: str = "",
) -> None:
    """Trace masses with the representative measures marked."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    alphabet = trace.entries[0][1].alphabet
    words = sorted({w for _, mu in trace.entries for w in mu.mass})
    ns = list(trace.grid)
    for word in words:
        ax.plot(
            ns,
            _mass_series(trace, word),
            "-",
            linewidth=1.0,
            label=word_to_str(alphabet, word),
        )
    for rep in estimate.representatives:
        for word in rep.measure.mass:
            ax.plot(
                [rep.witnesses[-1]],
                [float(rep.measure.mass_of(word))],
                "o",
                markersize=4,
                color="black",
            )
    ax.set_xscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("cylinder mass")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, ncol=2)
    ax.grid(True, alpha=0.3)
    save_figure(fig, path)


def plot_correlations(report: CorrelationReport, path: str, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for spec, row, pred in zip(report.specs, report.values, report.predictions):
        label = f"a={list(spec.shifts)} j={list(spec.exponents)}"
        (line,) = ax.plot(list(report.grid), list(row), "-o", markersize=3, label=label)
        if pred is not None and pred.kind == "mirsky":
            ax.axhline(
                pred.value, color=line.get_color(), linewidth=0.6, linestyle=":"
            )
    ax.set_xscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("correlation")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=7, ncol=2)
    ax.grid(True, alpha=0.3)
    save_figure(fig, path)
