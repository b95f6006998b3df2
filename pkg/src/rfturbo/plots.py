"""Optional figure rendering for experiment outputs.

Plots are strictly opt-in (--plot): the delimited output is the
interface contract, and figures are written alongside it as PNG files
with the same stem.  matplotlib is imported lazily with the Agg
backend so headless runs never touch a display.
"""

import math


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_simulate(rows, png_path):
    """Predicted/empirical MSE and trace against burst size."""
    plt = _pyplot()
    pairs = [r["pairs"] for r in rows if r["pairs"] != ""]
    pred = [r["predicted_mse"] if r["predicted_mse"] != "" else math.nan
            for r in rows if r["pairs"] != ""]
    emp = [r["empirical_mse"] if r["empirical_mse"] != "" else math.nan
           for r in rows if r["pairs"] != ""]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(pairs, pred, "o-", label="predicted")
    if any(not math.isnan(v) for v in emp):
        ax.plot(pairs, emp, "s--", label="empirical")
    ax.set_xlabel("erased pairs")
    ax.set_ylabel("total MSE")
    ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return png_path


def plot_sweep(rows, png_path):
    """Distribution of mean trace and recoverable fraction across seeds."""
    plt = _pyplot()
    traces = [r["trace_mean"] for r in rows if r["trace_mean"] != ""]
    fracs = [r["recoverable_frac"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    if traces:
        ax1.hist(traces, bins=min(30, max(5, len(traces) // 4)))
    ax1.set_xlabel("mean trace((T_r^T T_r)^-1)")
    ax1.set_ylabel("seeds")
    ax2.hist(fracs, bins=min(30, max(5, len(fracs) // 4)))
    ax2.set_xlabel("recoverable fraction")
    ax2.set_ylabel("seeds")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return png_path


def plot_verify(report_dict, png_path):
    """Per-start maximum recoverable burst, when the report carries it."""
    per_start = report_dict.get("witnesses", {}).get("per_start_max")
    if not per_start:
        return None
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(1, len(per_start) + 1), per_start)
    ax.axhline(report_dict["claimed_bound"], color="k", ls="--",
               label="claimed bound")
    ax.set_xlabel("burst start (1-based)")
    ax.set_ylabel("max recoverable pairs")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return png_path
