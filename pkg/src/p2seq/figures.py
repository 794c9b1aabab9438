"""Figure rendering for the experiment runner.

Every report mode drops a PNG next to its CSV output.  Rendering is kept
deliberately plain: one figure per mode, labeled axes, no styling beyond
a fixed size.
"""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_FIGSIZE = (7.0, 4.2)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_reference(x, values, derivs, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=_FIGSIZE)
    ax1.plot(x, values)
    ax1.set_xlabel("x")
    ax1.set_ylabel("E")
    ax2.plot(x, derivs)
    ax2.set_xlabel("x")
    ax2.set_ylabel("E'")
    _save(fig, path)


def render_series(orders, log10_delta, path):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(orders, log10_delta, marker=".", linestyle="none")
    ax.axhline(-7.0, color="gray", linewidth=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel("log10 delta_n")
    _save(fig, path)


def render_abc(orders, a_n, b_n, c_n, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=_FIGSIZE)
    ax1.plot(orders, a_n, marker=".", label="a_n")
    ax1.plot(orders, b_n, marker=".", label="b_n")
    ax1.set_xlabel("n")
    ax1.legend()
    ax2.plot(orders, c_n, marker=".", color="tab:green")
    ax2.set_xlabel("n")
    ax2.set_ylabel("C_n")
    _save(fig, path)


def render_profiles(groups, path):
    """groups: list of (label, z, y) triples; the first is the reference."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for i, (label, z, y) in enumerate(groups):
        lw = 1.8 if i == 0 else 0.9
        ax.plot(z, y, label=label, linewidth=lw)
    ax.set_xlabel("z")
    ax.set_ylabel("y")
    if len(groups) <= 10:
        ax.legend(fontsize=8)
    _save(fig, path)


def render_direct(orders, discrepancies, path):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    d = np.asarray(discrepancies, dtype=float)
    finite = np.isfinite(d) & (d > 0)
    ax.semilogy(np.asarray(orders)[finite], d[finite], marker=".")
    ax.set_xlabel("n")
    ax.set_ylabel("sup discrepancy")
    _save(fig, path)


def render_sweep(mu, a, b, c, path):
    fig, axes = plt.subplots(1, 3, figsize=(9.5, 3.4))
    for ax, vals, name in zip(axes, (a, b, c), ("a", "b", "C")):
        ax.plot(mu, vals, marker=".")
        ax.set_xlabel("mu")
        ax.set_ylabel(name)
    _save(fig, path)
