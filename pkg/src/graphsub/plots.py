"""Figure rendering for the reporting commands. Headless, PNG output."""

from __future__ import annotations

from pathlib import Path

import numpy as np

_DPI = 120


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_spectrum_figure(path, frame, sample_rate, entries) -> None:
    """Panel column: the analyzed frame, then magnitudes per requested k.

    entries is a list of (k, eigenvalues, magnitudes) triples.
    """
    plt = _pyplot()
    rows = len(entries) + 1
    fig, axes = plt.subplots(rows, 1, figsize=(7.0, 1.9 * rows), sharex=False)
    axes = np.atleast_1d(axes)
    t = np.arange(frame.size) / sample_rate * 1000.0
    axes[0].plot(t, frame, lw=0.8, color="tab:blue")
    axes[0].set_xlabel("time (ms)")
    axes[0].set_ylabel("amplitude")
    axes[0].set_title("analyzed frame")
    for ax, (k, _eigenvalues, magnitudes) in zip(axes[1:], entries):
        ax.plot(np.arange(magnitudes.size), magnitudes, lw=0.8, color="tab:red")
        ax.set_xlabel("bin")
        ax.set_ylabel("magnitude")
        ax.set_title(f"k = {k}")
    fig.tight_layout()
    fig.savefig(Path(path), dpi=_DPI)
    plt.close(fig)


def save_eval_figure(path, rows, method) -> None:
    """Scatter of output SNR against input SNR with the break-even diagonal."""
    plt = _pyplot()
    x = [r.input_snr_db for r in rows]
    y = [r.output_snr_db for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    ax.scatter(x, y, s=24, color="tab:blue", label=method)
    finite = [v for v in x + y if np.isfinite(v)]
    if finite:
        lo, hi = min(finite), max(finite)
        pad = 0.05 * (hi - lo) if hi > lo else 1.0
        span = (lo - pad, hi + pad)
        ax.plot(span, span, ls="--", lw=0.8, color="gray", label="no change")
    ax.set_xlabel("input SNR (dB)")
    ax.set_ylabel("output SNR (dB)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(Path(path), dpi=_DPI)
    plt.close(fig)
