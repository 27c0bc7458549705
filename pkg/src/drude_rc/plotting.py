"""Deterministic SVG plots of the harness CSV files.

Figures have a fixed size and the SVG backend is given a fixed hash salt
and no date metadata, so the same CSV always renders to the same bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .harness import (  # noqa: E402
    CONVERGENCE_COLUMNS,
    HISTORY_COLUMNS,
    SCAN_COLUMNS,
    SNAPSHOT1D_COLUMNS,
    SNAPSHOT_COLUMNS,
    read_csv,
)

KINDS = {
    "history": HISTORY_COLUMNS,
    "convergence": CONVERGENCE_COLUMNS,
    "scan": SCAN_COLUMNS,
    "snapshot": SNAPSHOT_COLUMNS,
    "snapshot1d": SNAPSHOT1D_COLUMNS,
}


class SchemaError(ValueError):
    """The CSV header does not match the requested plot kind."""


def _floats(rows, col: int) -> np.ndarray:
    return np.array([float(r[col]) for r in rows])


def _plot_history(ax, rows) -> None:
    t, e = _floats(rows, 0), _floats(rows, 1)
    if len(t):
        ax.semilogy(t, np.maximum(e, np.finfo(float).tiny), lw=1)
    ax.set_xlabel("t")
    ax.set_ylabel("max error")


def _plot_convergence(ax, rows) -> None:
    series: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for r in rows:
        series.setdefault((r[3], r[4]), []).append((float(r[1]), float(r[5])))
    hs = []
    for (fname, norm), pts in series.items():
        h, e = np.array(pts).T
        hs.extend(h)
        ax.loglog(h, e, "o-", ms=3, lw=1, label=f"{fname} {norm}")
    if hs:
        # reference slopes anchored at the largest error of the finest grid
        h = np.array(sorted(set(hs)))
        e_ref = max(float(r[5]) for r in rows if float(r[1]) == h[0])
        for p, style in ((2, ":"), (4, "--")):
            ax.loglog(h, e_ref * (h / h[0]) ** p, "k" + style, lw=0.8, label=f"slope {p}")
        ax.legend(fontsize=6)
    ax.set_xlabel("h")
    ax.set_ylabel("error")


def _plot_scan(ax, rows) -> None:
    if rows:
        L, O, A = _floats(rows, 0), _floats(rows, 1), _floats(rows, 4)
        # worst case over Gamma and class for each (Lambda, Omega)
        worst: dict[tuple[float, float], float] = {}
        for key, a in zip(zip(L, O), A):
            worst[key] = max(worst.get(key, -np.inf), a)
        Ls = sorted({k[0] for k in worst})
        Os = sorted({k[1] for k in worst})
        Z = np.full((len(Os), len(Ls)), np.nan)
        for (lv, ov), a in worst.items():
            Z[Os.index(ov), Ls.index(lv)] = a - 1
        im = ax.imshow(Z, origin="lower", aspect="auto", extent=(min(Ls), max(Ls), min(Os), max(Os)))
        plt.colorbar(im, ax=ax, label="max |A| - 1")
    ax.set_xlabel("Lambda")
    ax.set_ylabel("Omega")


def _plot_snapshot(ax, rows) -> None:
    if rows:
        x, y, err = _floats(rows, 0), _floats(rows, 1), _floats(rows, 5)
        sc = ax.scatter(x, y, c=err, s=2, marker="s", linewidths=0)
        plt.colorbar(sc, ax=ax, label="error in Ey")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def _plot_snapshot1d(ax, rows) -> None:
    if rows:
        ax.plot(_floats(rows, 0), _floats(rows, 2), lw=1)
    ax.set_xlabel("x")
    ax.set_ylabel("error")


_DRAW = {
    "history": _plot_history,
    "convergence": _plot_convergence,
    "scan": _plot_scan,
    "snapshot": _plot_snapshot,
    "snapshot1d": _plot_snapshot1d,
}


def plot_emit(csv_path: str | Path, kind: str, out: str | Path | None = None) -> Path:
    """Render ``csv_path`` as an SVG of the given ``kind``.

    Raises
    ------
    SchemaError
        If ``kind`` is unknown or the CSV header does not match it.
    """
    if kind not in KINDS:
        raise SchemaError(f"unknown plot kind {kind!r}; expected one of {sorted(KINDS)}")
    header, rows = read_csv(csv_path)
    if tuple(header) != KINDS[kind]:
        raise SchemaError(f"{csv_path} has columns {header}, expected {list(KINDS[kind])}")
    out = Path(out) if out is not None else Path(csv_path).with_suffix(".svg")
    with plt.rc_context({"svg.hashsalt": "drude-rc", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        _DRAW[kind](ax, rows)
        fig.tight_layout()
        fig.savefig(out, format="svg", metadata={"Date": None})
        plt.close(fig)
    return out
