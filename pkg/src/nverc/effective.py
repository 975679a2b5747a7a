"""Reduction of transverse-field / two-tone systems to the plain Raman form.

Any rotating-wave Hamiltonian of this package that satisfies the resonance
condition

    Ex (omega_x^2 - omega_y^2) + 2 Ey omega_x omega_y = 0      (beta = alpha)

can be written G H_plain(muB_eff, omega_eff) G^dag with a dressing unitary
G that acts only inside the {|+>, |->} doublet (it leaves |0> untouched, so
ground-state populations and depletion times are those of the plain system).
G is the product of a drive-alignment rotation (angle set by
omega_y / omega_x) and a phase on |->, the latter being a rotation of the
DQ Bloch sphere about its x axis.
"""

from __future__ import annotations

import math

import numpy as np

from .spin import KET_0, KET_MINUS, KET_PLUS, SystemParams

__all__ = [
    "raman_resonant",
    "residual_detuning",
    "effective_field_angle",
    "dressing_matrix",
]


def residual_detuning(p: SystemParams) -> float:
    """Left-hand side of the resonance condition (zero when reducible)."""
    return p.Ex * (p.omega_x**2 - p.omega_y**2) + 2.0 * p.Ey * p.omega_x * p.omega_y


def raman_resonant(p: SystemParams, tol: float = 1e-9) -> bool:
    """True when the drive restores (or never broke) the Raman resonance."""
    scale = (abs(p.Ex) + abs(p.Ey)) * (p.omega_x**2 + p.omega_y**2)
    return abs(residual_detuning(p)) <= tol * max(scale, 1e-300)


def effective_field_angle(p: SystemParams) -> float:
    """Signed DQ-frame rotation angle atan2(E_tilde, muB).

    E_tilde is the imaginary part of the dressed doublet coupling; it
    reduces to Ey when only a transverse-y field is present, and its
    magnitude is sqrt(Ex^2 + Ey^2) on resonance.
    """
    om = p.omega_eff()
    if om == 0.0:
        c, s = 1.0, 0.0
    else:
        c, s = p.omega_x / om, p.omega_y / om
    e_tilde = p.Ey * (c * c - s * s) - p.Ex * (2.0 * c * s)
    return math.atan2(e_tilde, p.muB)


def dressing_matrix(p: SystemParams) -> np.ndarray:
    """Unitary G with H_rwa(p) = G H_rwa(plain muB_eff, omega_eff) G^dag.

    Only meaningful on resonance (callers validate); for a plain system G
    is the identity.
    """
    om = p.omega_eff()
    if om == 0.0:
        c, s = 1.0, 0.0
    else:
        c, s = p.omega_x / om, p.omega_y / om
    e_tilde = p.Ey * (c * c - s * s) - p.Ex * (2.0 * c * s)
    mu_eff = math.hypot(p.muB, e_tilde)
    u = (p.muB + 1j * e_tilde) / mu_eff if mu_eff > 0.0 else 1.0

    p0 = np.outer(KET_0, KET_0.conj())
    pp = np.outer(KET_PLUS, KET_PLUS.conj())
    pm = np.outer(KET_MINUS, KET_MINUS.conj())
    rot = p0 + c * (pp + pm) + 1j * s * (
        np.outer(KET_MINUS, KET_PLUS.conj()) + np.outer(KET_PLUS, KET_MINUS.conj())
    )
    phase = p0 + pp + u * pm
    return rot @ phase
