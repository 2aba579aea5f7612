"""Optional PNG rendering of report series (needs the ``plot`` extra)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .errors import ConfigError


def plot_series(series: dict[str, Sequence[tuple[float, float]]], path: str | Path,
                title: str = "", ylabel: str = "value", reference: float | None = None) -> Path:
    """Draw one line per named series of ``(n, value)`` pairs and save to ``path``."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise ConfigError("--plot needs matplotlib (install the 'plot' extra)") from None
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, pts in series.items():
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        ax.plot(xs, ys, marker="." if len(xs) < 60 else None, label=label)
    if reference is not None:
        ax.axhline(reference, color="grey", linestyle="--", linewidth=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    out = Path(path)
    # fixed metadata keeps the bytes reproducible across runs
    fig.savefig(out, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return out
