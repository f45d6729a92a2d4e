"""Matplotlib figure rendering for the CLI report paths.

Every CSV-emitting subcommand can also render a PNG next to its table.
The Agg backend is forced so the CLI works headless.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_profile_plot(profile, path, title="sweepout area profile"):
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    ax1.plot(profile.t, profile.area, lw=1.2, color="tab:blue")
    ax1.set_ylabel("total area")
    ax1.set_title(title)
    ax1.grid(alpha=0.3)
    mask = ~np.isnan(profile.min_theta)
    if np.any(mask):
        ax2.plot(profile.t[mask], profile.min_theta[mask], lw=1.0, color="tab:red")
        ax2.axhline(2 * np.pi, color="k", ls="--", lw=0.8, label="2*pi")
        ax2.legend(loc="best", fontsize=8)
    ax2.set_xlabel("t")
    ax2.set_ylabel("inserted-vertex angle sum")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_scan_plot(rows, header, path, title):
    rows = np.asarray(rows, dtype=float)
    fig, ax1 = plt.subplots(figsize=(7, 4.5))
    ax1.plot(rows[:, 0], rows[:, header.index("area")], "o-", ms=3,
             color="tab:blue", label="area")
    ax1.set_xlabel(header[0])
    ax1.set_ylabel("area", color="tab:blue")
    ax2 = ax1.twinx()
    ax2.plot(rows[:, 0], rows[:, header.index("volume")], "s-", ms=3,
             color="tab:orange", label="volume")
    ax2.set_ylabel("volume", color="tab:orange")
    ax1.set_title(title)
    ax1.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_curve_plot(curve, ball, path, title="isoperimetric profile"):
    fig, ax = plt.subplots(figsize=(6, 5))
    psi = np.linspace(-np.pi / 2, np.pi / 2, 400)
    rho_b, z_b = ball.boundary_point(psi)
    ax.plot(rho_b, z_b, color="k", lw=1.0, label="ball boundary")
    ax.plot(curve.nodes[:, 0], curve.nodes[:, 1], "o-", ms=2.5, lw=1.2,
            color="tab:blue", label="profile")
    ax.axhline(0.0, color="gray", ls=":", lw=0.8)
    ax.set_xlabel("rho")
    ax.set_ylabel("z")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_trace_plot(trace, path, title="optimizer trace"):
    trace = np.asarray(trace, dtype=float)
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    ax1.plot(trace[:, 0], trace[:, 1], lw=1.0, color="tab:blue")
    ax1.set_ylabel("area")
    ax1.set_title(title)
    ax1.grid(alpha=0.3)
    ax2.semilogy(trace[:, 0], np.abs(trace[:, 2]) + 1e-18, lw=1.0,
                 color="tab:orange", label="|volume error|")
    ax2.semilogy(trace[:, 0], trace[:, 3] + 1e-18, lw=1.0,
                 color="tab:green", label="gradient norm")
    ax2.set_xlabel("iteration")
    ax2.legend(loc="best", fontsize=8)
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
