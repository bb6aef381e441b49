"""Figure rendering for the CLI report paths.

Figures are quick-look companions to the delimited output, written
straight to files with the Agg backend; the CSV/JSON stream stays the
authoritative record.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

RC_PARAMS = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.labelsize": 11,
    "legend.fontsize": 9,
    "font.family": "DejaVu Sans",
}


def _styled():
    return plt.rc_context(RC_PARAMS)


def save_series_figure(rows, path: str, d: int, label: str = "critical") -> None:
    """Log-log magnetization decay with the square-root reference slope."""
    ns = [float(n) for n, _, _ in rows]
    ms = [float(m) for _, _, m in rows]
    with _styled():
        fig, ax = plt.subplots()
        ax.loglog(ns, ms, "o-", ms=3, lw=1, label=f"d={d}, {label}")
        if ns:
            ref = [ms[0] * (ns[0] / n) ** 0.5 for n in ns]
            ax.loglog(ns, ref, "--", lw=1, color="gray", label="slope -1/2 reference")
        ax.set_xlabel("height n")
        ax.set_ylabel("root magnetization")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def save_fit_figure(rows, fit, path: str, d: int) -> None:
    """Fit window samples with the fitted power law overlaid."""
    import math

    ns = [float(n) for n, _, _ in rows]
    ms = [float(m) for _, _, m in rows]
    with _styled():
        fig, ax = plt.subplots()
        ax.loglog(ns, ms, "o", ms=3, label=f"samples (d={d})")
        if ns:
            lo, hi = fit.window
            xs = [x for x in ns if lo <= x <= hi]
            amp = math.exp(
                sum(math.log(m) + fit.rho_hat * math.log(n) for n, m in zip(ns, ms)) / len(ns)
            )
            ax.loglog(xs, [amp * x ** (-fit.rho_hat) for x in xs], "-", lw=1.2,
                      label=f"fit: rho = {fit.rho_hat:.4f}")
        ax.set_xlabel("height n")
        ax.set_ylabel("root magnetization")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def save_scan_figure(rows, path: str, d: int, n: int) -> None:
    """Magnetization against inverse temperature across the scanned grid."""
    betas = [float(b) for b, _ in rows]
    ms = [float(m) for _, m in rows]
    with _styled():
        fig, ax = plt.subplots()
        ax.plot(betas, ms, "o-", ms=3, lw=1)
        ax.set_xlabel("inverse temperature beta")
        ax.set_ylabel(f"magnetization at height {n}")
        ax.set_title(f"d = {d}")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
