"""Hamiltonian builders for the driven NV ground-state triplet.

Lab frame (basis (|+1>, |0>, |-1>), angular frequencies):

    H(t) = D Sz^2 + muB Sz
           + omega_x cos(w_c t - alpha) Sx - omega_y cos(w_c t - beta) Sy
           + Ez Sz^2 + Ex (Sx^2 - Sy^2) - Ey (Sx Sy + Sy Sx)

with carrier w_c = D + Ez (the spectroscopically calibrated drive
frequency).  The signs of the y-drive and of the transverse-strain
operators are fixed by requiring that the rotating-wave average of H(t)
reproduces the interaction-picture forms below exactly; with right-handed
spin-1 matrices the naive `+omega_y cos * Sy` / `Ex (Sy^2 - Sx^2)` choices
land on the opposite transverse-axis convention (a 90-degree relabeling of
the in-plane field direction with no physical consequence).

Interaction picture with respect to (D + Ez) Sz^2, after the RWA:

    H_rwa = Ex (P+ - P-)
            + [(muB + i Ey) |-><+| + h.c.]
            + [(omega_x/2) e^{i alpha} |+><0|
               + i (omega_y/2) e^{i beta} |-><0| + h.c.]

which specializes to the plain effective-Raman form when Ex = Ey = 0 and
omega_y = 0, where |B_a> = (muB |-> + e^{-i a} (omega/2) |0>) / obar is the
bright state, the dark state |D_a> is annihilated, and the dynamics is a
Rabi oscillation between |+> and |B_a> at frequency obar.
"""

from __future__ import annotations

import math

import numpy as np

from .pulses import PulseSegment
from .spin import (KET_0, KET_M1, KET_MINUS, KET_P1, KET_PLUS, SX, SY, SZ,
                   SZ2, SystemParams)

__all__ = [
    "hamiltonian_lab",
    "hamiltonian_rwa",
    "static_hamiltonian",
    "lab_drive_operators",
    "bright_dark_vectors",
]

# transverse strain operators; the (0,2)/(2,0) entries couple |+1> and |-1>
_OP_EX = SX @ SX - SY @ SY                 # == |+1><-1| + |-1><+1|
_OP_EY = -(SX @ SY + SY @ SX)              # == i|+1><-1| - i|-1><+1|
_P_PLUS = np.outer(KET_PLUS, KET_PLUS.conj())
_P_MINUS = np.outer(KET_MINUS, KET_MINUS.conj())
for _a in (_OP_EX, _OP_EY, _P_PLUS, _P_MINUS):
    _a.setflags(write=False)


def static_hamiltonian(p: SystemParams) -> np.ndarray:
    """Lab Hamiltonian with the drive off (the spectroscopy target)."""
    return (
        (p.D + p.Ez) * SZ2
        + p.muB * SZ
        + p.Ex * _OP_EX
        + p.Ey * _OP_EY
    )


def lab_drive_operators(seg: PulseSegment) -> tuple[np.ndarray, np.ndarray]:
    """Constant coupling matrices multiplying the two drive quadratures."""
    return seg.omega_x * SX, -seg.omega_y * SY


def hamiltonian_lab(p: SystemParams, seg: PulseSegment, t: float) -> np.ndarray:
    """Full lab-frame Hamiltonian at (global) time ``t`` during ``seg``.

    Counter-rotating terms are retained; this is the reference model the
    rotating-wave results are benchmarked against.
    """
    wc = p.carrier
    ax, ay = lab_drive_operators(seg)
    return (
        static_hamiltonian(p)
        + math.cos(wc * t - seg.alpha) * ax
        + math.cos(wc * t - seg.beta) * ay
    )


def hamiltonian_rwa(p: SystemParams, seg: PulseSegment) -> np.ndarray:
    """Time-independent rotating-wave Hamiltonian for one segment.

    Returns the plain Raman form, its transverse-strain extension, or the
    two-tone form, depending on which of (Ex, Ey, omega_y) are nonzero.
    Ez never appears: it is absorbed into the interaction picture
    (D + Ez) Sz^2 together with the matching carrier.
    """
    h = p.muB * SZ.copy()  # == muB (|-><+| + |+><-|) on the DQ doublet
    drive = (seg.omega_x / 2.0) * np.exp(1j * seg.alpha) * np.outer(KET_PLUS, KET_0.conj())
    if seg.omega_y != 0.0:
        drive = drive + 1j * (seg.omega_y / 2.0) * np.exp(1j * seg.beta) * np.outer(
            KET_MINUS, KET_0.conj()
        )
    h += drive + drive.conj().T
    if p.Ex != 0.0:
        h += p.Ex * (_P_PLUS - _P_MINUS)
    if p.Ey != 0.0:
        dq = 1j * p.Ey * np.outer(KET_P1, KET_M1.conj())
        h += dq + dq.conj().T
    return h


def bright_dark_vectors(muB: float, omega: float, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Raw bright/dark amplitude vectors of the plain Raman problem.

    |B_a> = (muB |-> + e^{-i a} (omega/2) |0>) / obar
    |D_a> = (-muB |0> + e^{i a} (omega/2) |->) / obar
    """
    obar = math.sqrt(muB**2 + omega**2 / 4.0)
    if obar == 0.0:
        raise ValueError("bright/dark states undefined for muB = omega = 0")
    b = (muB * KET_MINUS + np.exp(-1j * alpha) * (omega / 2.0) * KET_0) / obar
    d = (-muB * KET_0 + np.exp(1j * alpha) * (omega / 2.0) * KET_MINUS) / obar
    return b, d
