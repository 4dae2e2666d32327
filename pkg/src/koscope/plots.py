"""Rendering of solution profiles and sweep tables to PNG files.

Matplotlib is imported lazily (with the Agg backend) so that the rest of the
package stays import-light; figures are written to files, never shown.
"""

from __future__ import annotations

from fractions import Fraction

from .core import Aborted, BlowUp, Global


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_profile(profile, path) -> None:
    """Two-panel log-log picture of a solution profile: the value and its
    derivative against radius, annotated with the terminal status."""
    plt = _pyplot()
    fig, (ax_v, ax_d) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    r = profile.grid
    ax_v.plot(r, profile.v, color="tab:blue", lw=1.2)
    ax_v.set_xscale("log")
    if (profile.v > 0).all():
        ax_v.set_yscale("log")
    ax_v.set_xlabel("r")
    ax_v.set_ylabel("v")
    ax_d.plot(r, profile.vprime, color="tab:orange", lw=1.2)
    ax_d.set_xscale("log")
    if (profile.vprime > 0).all():
        ax_d.set_yscale("log")
    ax_d.set_xlabel("r")
    ax_d.set_ylabel("v'")
    status = profile.status
    if isinstance(status, BlowUp):
        title = f"blow-up, R ~ {status.R_estimate:.6g}"
    elif isinstance(status, Global):
        title = f"global out to r = {status.r_horizon:.6g}"
    elif isinstance(status, Aborted):
        title = "aborted"
    else:
        title = ""
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110, format="png")
    plt.close(fig)


_VERDICT_COLORS = {
    "yes": "tab:green",
    "no": "tab:red",
    "conditional": "tab:orange",
    "error": "tab:gray",
}


def plot_sweep(rows, path) -> None:
    """Scatter of sweep rows: the nonlinearity parameter against the weight
    exponent, colored by the existence verdict; disagreements with the solver
    are circled."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for row in rows:
        x = float(Fraction(row["d"]))
        y = float(Fraction(row["alpha"]))
        color = _VERDICT_COLORS.get(row["verdict"], "tab:gray")
        ax.scatter([x], [y], color=color, s=48, zorder=3)
        if row["agrees"] == "no":
            ax.scatter([x], [y], facecolors="none", edgecolors="black",
                       s=160, zorder=4)
    ax.set_xlabel("nonlinearity parameter")
    ax.set_ylabel("alpha")
    handles = [
        plt.Line2D([], [], marker="o", linestyle="", color=c, label=v)
        for v, c in _VERDICT_COLORS.items()
    ]
    ax.legend(handles=handles, loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110, format="png")
    plt.close(fig)
