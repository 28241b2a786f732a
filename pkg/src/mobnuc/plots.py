"""Figure rendering for the CLI report paths.

Figures are a convenience view of the delimited output that accompanies
them; the byte-determinism promise applies to the JSON/CSV, not the PNGs.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def convergence_figure(report_dict: dict, path: str) -> str:
    """Residual versus truncation dimension for one verification sweep."""
    fig, ax = plt.subplots(figsize=(5, 3.4))
    dims = report_dict["dims_tested"]
    res = [max(r, 1e-18) for r in report_dict["residuals"]]
    ax.semilogy(dims, res, "o-", label="residual")
    ax.axhline(report_dict["tolerance"], color="crimson", ls="--", lw=1,
               label="tolerance")
    ax.set_xlabel("truncation dimension N")
    ax.set_ylabel("max-abs residual")
    ax.set_title(f"{report_dict['identity']}: {report_dict['verdict']}")
    ax.legend(frameon=False)
    return _finish(fig, path)


def partition_figure(rows, d: int, path: str) -> str:
    """Partition-function curve; overlays the closed form when present."""
    fig, ax = plt.subplots(figsize=(5, 3.4))
    s = [r[0] for r in rows]
    ax.loglog(s, [r[1] for r in rows], "o-", ms=3, label="series")
    if rows and len(rows[0]) > 2:
        ax.loglog(s, [r[2] for r in rows], "k--", lw=1, label="closed form")
    ax.set_xlabel("s")
    ax.set_ylabel("Tr exp(-s L0)")
    ax.set_title(f"one-particle partition function, d = {d}")
    ax.legend(frameon=False)
    return _finish(fig, path)


def fit_figure(fit_dict: dict, path: str) -> str:
    """Log-log data and fitted power law for the growth-exponent fit."""
    fig, ax = plt.subplots(figsize=(5, 3.4))
    grid = fit_dict["grid"]
    ax.loglog(grid, fit_dict["log_trace"], "o", label="log Tr (net)")
    alpha, c = fit_dict["alpha"], fit_dict["const"]
    ax.loglog(grid, [c * s ** (-alpha) for s in grid], "k--", lw=1,
              label=f"fit: {c:.3g} / s^{alpha:.3g}")
    ax.set_xlabel("s")
    ax.set_ylabel("log Tr exp(-s L0)")
    verdict = "met" if fit_dict["kms_criterion_met"] else "inconclusive"
    ax.set_title(f"log-ellipticity fit ({verdict})")
    ax.legend(frameon=False)
    return _finish(fig, path)


def chain_figure(chain_dict: dict, path: str) -> str:
    """Bar view of the computable entries of the nuclearity bound chain."""
    fig, ax = plt.subplots(figsize=(5, 3.4))
    names, values = [], []
    for step in chain_dict["steps"]:
        v = step.get("value", step.get("upper_bound"))
        if v is not None:
            names.append(step["name"].replace("_", "\n"))
            values.append(v)
    ax.bar(range(len(values)), values, color="steelblue")
    ax.set_xticks(range(len(values)), names, fontsize=7)
    ax.set_ylabel("bound value")
    ax.set_title(f"nuclearity chain, lambda = {chain_dict['lambda']:.4g}")
    return _finish(fig, path)
