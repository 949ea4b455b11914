"""Figures written next to reports (PNG/PDF/SVG by file suffix)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import claims as cl  # noqa: E402
from . import mod_core as mc  # noqa: E402
from .primality import primes_up_to  # noqa: E402
from .scanner import GiugaCensus  # noqa: E402

FIGSIZE = (7.0, 4.8)
DPI = 150


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def plot_claim_report(report: cl.ClaimReport, path: str | Path) -> Path:
    """Scatter of the stored witnesses (n against k, or k alone), titled with the verdict."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    vs = report.violations
    title = f"{report.claim_id}: {report.verdict} ({report.violation_count} of {report.pairs_checked})"
    if vs and all(v.n is not None and v.k is not None for v in vs):
        n = np.array([v.n for v in vs])
        k = np.array([v.k for v in vs])
        ax.scatter(n, k, s=12, c="tab:red", label="violation")
        ax.plot([report.n_lo, report.n_hi], [report.n_lo - 1, report.n_hi - 1], lw=0.6, c="0.6", label="k = n-1")
        ax.set_xlabel("n")
        ax.set_ylabel("k")
        ax.legend(loc="upper left", frameon=False)
    elif vs:
        xs = [v.n if v.n is not None else v.k for v in vs]
        ax.scatter(xs, [v.observed for v in vs], s=12, c="tab:red")
        ax.set_xlabel("n" if vs[0].n is not None else "k")
        ax.set_ylabel("observed")
    else:
        ax.text(0.5, 0.5, f"no violations\n{report.pairs_checked} pairs, {report.skipped} skipped",
                ha="center", va="center", transform=ax.transAxes)
        ax.set_axis_off()
    ax.set_title(title)
    return _save(fig, path)


def residue_grid(claim_id: str, n_max: int) -> np.ndarray:
    """grid[n, k] = 1 where the claim fails at (n, k), 0 where it holds, -1 off-domain."""
    grid = np.full((n_max + 1, n_max + 1), -1, dtype=np.int8)
    for n in range(3, n_max + 1):
        if claim_id == "thm-ukz":
            for k in range(1, n - 1):
                grid[n, k] = mc.U_mod(k, n).r != 0
        elif claim_id == "cor-hk-h1":
            h1 = mc.H_mod(1, n).r
            for k in range(2, n):
                grid[n, k] = mc.H_mod(k, n).r != h1
        else:
            raise ValueError(f"no residue map for claim {claim_id!r}")
    return grid


def plot_residue_map(claim_id: str, n_max: int, path: str | Path) -> Path:
    grid = residue_grid(claim_id, n_max)
    masked = np.ma.masked_less(grid.T.astype(float), 0)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.imshow(masked, origin="lower", cmap="Reds", vmin=0, vmax=1, interpolation="nearest", aspect="auto")
    for p in primes_up_to(max(n_max, 2)).primes():
        ax.axvline(p, lw=0.3, c="tab:blue", alpha=0.4)
    ax.set_xlim(2, n_max)
    ax.set_ylim(0.5, n_max)
    ax.set_xlabel("n (blue: prime)")
    ax.set_ylabel("k")
    ax.set_title(f"{claim_id}: failing (n, k) in red")
    return _save(fig, path)


def plot_census(census: GiugaCensus, path: str | Path) -> Path:
    x = census.bound
    table = primes_up_to(max(x - 1, 2))
    n = np.arange(x)
    counts = np.cumsum(table.membership[:x])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.step(n, counts, where="post", lw=1, label="prime satisfiers")
    comp = np.array(census.composite_satisfiers, dtype=np.int64)
    if comp.size:
        ax.scatter(comp, np.searchsorted(comp, comp, side="right"), c="tab:red", s=20,
                   label="composite satisfiers")
    ax.set_xlabel("n")
    ax.set_ylabel("count below n")
    ax.set_title(f"Giuga congruence below {x}: G = {census.G}, primes = {census.prime_satisfiers}")
    ax.legend(loc="upper left", frameon=False)
    return _save(fig, path)
