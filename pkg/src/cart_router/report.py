"""Figure rendering for bench reports.

Renders the benchmark summary to PNG files next to the CSVs: mean power
bars, distance/time bars (with 95% CI whiskers) and the per-policy
empirical CDF of instantaneous power.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_POLICY_COLORS = {
    "work": "tab:blue",
    "impedance": "tab:green",
    "distance": "tab:orange",
}


def _bars(ax, summaries, value_attr: str, ci_attr: str, ylabel: str) -> None:
    usable = [s for s in summaries if getattr(s, value_attr) is not None]
    xs = range(len(usable))
    values = [getattr(s, value_attr) for s in usable]
    errs = [getattr(s, ci_attr) or 0.0 for s in usable]
    colors = [_POLICY_COLORS.get(s.policy, "tab:gray") for s in usable]
    ax.bar(xs, values, yerr=errs, capsize=4, color=colors)
    ax.set_xticks(list(xs))
    ax.set_xticklabels([s.policy for s in usable])
    ax.set_ylabel(ylabel)
    ax.grid(axis="y", alpha=0.3)


def render_mean_power_figure(summaries, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    _bars(ax, summaries, "mean_power_w", "ci95_power_w", "mean power (W)")
    ax.set_title("Mean power by policy")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_distance_time_figure(summaries, path: str | Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.5))
    _bars(ax1, summaries, "mean_distance_m", "ci95_distance_m", "distance (m)")
    ax1.set_title("Mean route distance")
    _bars(ax2, summaries, "mean_time_s", "ci95_time_s", "time (s)")
    ax2.set_title("Mean travel time")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_cdf_figure(cdfs: dict[str, list[tuple[float, float]]],
                      path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    for policy, cdf in cdfs.items():
        if not cdf:
            continue
        xs = [x for x, _ in cdf]
        ys = [y for _, y in cdf]
        ax.step(xs, ys, where="post", label=policy,
                color=_POLICY_COLORS.get(policy, None))
    ax.set_xlabel("instantaneous power (W)")
    ax.set_ylabel("cumulative probability")
    ax.set_title("Empirical CDF of instantaneous power")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_bench_figures(summaries, cdfs, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    paths = [
        render_mean_power_figure(summaries, out / "mean_power.png"),
        render_distance_time_figure(summaries, out / "distance_time.png"),
    ]
    if cdfs:
        paths.append(render_cdf_figure(cdfs, out / "cdf.png"))
    return paths
