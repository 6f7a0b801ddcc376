"""CSV and SVG writers for run results and comparison tables."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .experiment import CompareTable, RunResult

LEARNING_CURVE = ("iteration", "mse_raw", "mse_smooth", "estimate_error")
TAPS = ("index", "true_gain", "estimated_gain", "active_flag")
ACTIVE_COUNT = ("iteration", "count")
EQUALIZER_OUTPUT = ("symbol_index", "soft", "decision", "truth", "error_flag")


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows) -> Path:
    """Write rows with shortest round-trip float formatting."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path) -> tuple[list, list]:
    """Parse a file written by :func:`write_csv`; numeric cells become numbers."""

    def parse(cell: str):
        try:
            return int(cell)
        except ValueError:
            pass
        try:
            return float(cell)
        except ValueError:
            return cell

    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        header = next(r, [])
        return header, [[parse(c) for c in row] for row in r]


def export_run(result: RunResult, out_dir) -> list:
    out = Path(out_dir)
    n = result.mse_raw.size
    files = [
        write_csv(out / "learning_curve.csv", LEARNING_CURVE,
                  zip(range(1, n + 1), result.mse_raw, result.mse_smooth, result.estimate_error)),
        write_csv(out / "taps.csv", TAPS,
                  zip(range(len(result.truth)), result.truth.taps, result.estimate.taps,
                      result.estimate.active_mask)),
        write_csv(out / "active_count.csv", ACTIVE_COUNT, result.active_count),
        write_csv(out / "equalizer_output.csv", EQUALIZER_OUTPUT,
                  zip(range(result.soft.size), result.soft, result.decisions,
                      result.data_symbols, result.decisions != result.data_symbols)),
    ]
    return files


def export_compare(table: CompareTable, path) -> Path:
    return write_csv(path, CompareTable.COLUMNS,
                     ([r[c] for c in CompareTable.COLUMNS] for r in table.rows))


def export_csv(obj, path):
    """Write a run (directory of CSVs) or a comparison table (single CSV)."""
    if isinstance(obj, RunResult):
        return export_run(obj, path)
    if isinstance(obj, CompareTable):
        return export_compare(obj, path)
    raise TypeError(f"cannot export {type(obj).__name__}")


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "adgdfe"
    return plt


def _save(fig, path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    finally:
        _pyplot().close(fig)
    return path


def plot_run(result: RunResult, path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(2, 2, figsize=(11, 8))
    it = np.arange(1, result.mse_raw.size + 1)
    ax[0, 0].semilogy(it, result.mse_smooth, label="prediction error (smoothed)")
    ax[0, 0].semilogy(it, result.estimate_error_smooth, label="channel estimate error (smoothed)")
    ax[0, 0].set(xlabel="iteration", ylabel="MSE", title="Learning curves")
    ax[0, 0].legend()

    idx = np.arange(len(result.truth))
    ax[0, 1].stem(idx - 0.1, result.truth.taps, linefmt="C0-", markerfmt="C0o", basefmt="k-", label="true")
    ax[0, 1].stem(idx + 0.1, result.estimate.taps, linefmt="C3-", markerfmt="C3^", basefmt="k-", label="estimate")
    ax[0, 1].set(xlabel="tap", ylabel="gain", title="Channel taps")
    ax[0, 1].legend()

    if result.active_count:
        its, counts = zip(*result.active_count)
        ax[1, 0].step(its, counts, where="post")
    ax[1, 0].set(xlabel="iteration", ylabel="active taps", title="Active tap count")

    ax[1, 1].plot(result.squared_difference, lw=0.6)
    ax[1, 1].set(xlabel="symbol", ylabel="(sent - soft)^2", title="Equalizer squared difference")
    fig.tight_layout()
    return _save(fig, path)


def plot_compare(table: CompareTable, path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 5))
    colours = {"plain": "C0", "adg": "C2", "adg_td": "C3"}
    for variant, curve in table.curves.items():
        ax.semilogy(np.arange(1, curve.size + 1), curve, color=colours.get(variant), label=variant)
    ax.set(xlabel="iteration", ylabel="mean channel estimate error", title="Variant comparison")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def emit_plot(obj, path) -> Path:
    if isinstance(obj, RunResult):
        return plot_run(obj, path)
    if isinstance(obj, CompareTable):
        return plot_compare(obj, path)
    raise TypeError(f"cannot plot {type(obj).__name__}")
