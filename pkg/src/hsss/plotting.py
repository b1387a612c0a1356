"""Figures for benchmark reports, written to files with the Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def plot_bench(rows, path, phase: str = "recover"):
    """Median time per scheme against threshold, log scale, saved to ``path``."""
    path = Path(path)
    ts = [r.t for r in rows]
    with plt.rc_context(STYLE):
        fig, (ax, ax_ratio) = plt.subplots(1, 2, figsize=(7.0, 2.8))
        ax.plot(ts, [r.hash_us(phase) for r in rows], "o-", label="hash scheme")
        ax.plot(ts, [r.shamir_us(phase) for r in rows], "s--", label="Shamir GF(p)")
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_xlabel("threshold t")
        ax.set_ylabel(f"median {phase} time (us)")
        ax.legend(frameon=False)

        ax_ratio.bar([str(r.t) for r in rows], [r.ratio(phase) for r in rows], color="0.55")
        ax_ratio.axhline(1.0, color="k", lw=0.8)
        ax_ratio.set_xlabel("threshold t")
        ax_ratio.set_ylabel("Shamir / hash")
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)
    return path
