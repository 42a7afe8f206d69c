"""Figure files for the report path: Bode, Nyquist, reduction overlay."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from sfgkit.analysis import FrequencyPoint


def save_bode(points: list[FrequencyPoint], path: str, title: str = "Bode plot") -> str:
    w = [p.omega for p in points]
    fig, (ax_mag, ax_ph) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    ax_mag.semilogx(w, [p.mag_db for p in points], lw=1.5)
    ax_mag.set_ylabel("magnitude [dB]")
    ax_mag.grid(True, which="both", alpha=0.4)
    ax_mag.set_title(title)
    ax_ph.semilogx(w, [p.phase_deg for p in points], lw=1.5, color="tab:orange")
    ax_ph.set_ylabel("phase [deg]")
    ax_ph.set_xlabel("omega [rad/s]")
    ax_ph.grid(True, which="both", alpha=0.4)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.path.abspath(path)


def save_nyquist(points: list[FrequencyPoint], path: str,
                 title: str = "Nyquist plot") -> str:
    re = [p.value.real for p in points]
    im = [p.value.imag for p in points]
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(re, im, lw=1.5)
    ax.plot(re, [-v for v in im], lw=1.0, ls="--", color="tab:gray")
    ax.plot([-1], [0], "r+", markersize=10)
    ax.set_xlabel("Re G(jω)")
    ax.set_ylabel("Im G(jω)")
    ax.set_title(title)
    ax.grid(True, alpha=0.4)
    ax.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.path.abspath(path)


def save_reduction_overlay(full: list[FrequencyPoint], reduced: list[FrequencyPoint],
                           path: str, title: str = "Order reduction") -> str:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.semilogx([p.omega for p in full], [p.mag_db for p in full],
                lw=1.5, label="full")
    ax.semilogx([p.omega for p in reduced], [p.mag_db for p in reduced],
                lw=1.5, ls="--", label="reduced")
    ax.set_xlabel("omega [rad/s]")
    ax.set_ylabel("magnitude [dB]")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.path.abspath(path)
