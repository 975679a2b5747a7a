"""Independent numerical propagator for the driven three-level system.

Serves as the oracle the closed forms are checked against: integrates the
time-dependent lab-frame Schrodinger equation (counter-rotating terms
retained) with a fixed-step RK4 kernel or an adaptive embedded scheme, and
propagates the time-independent rotating-wave Hamiltonians by exact matrix
exponentiation per segment.

Lab-frame accuracy is controlled by ``max_step``; the default of one
twentieth of a carrier period is adequate for quick looks, while
quantitative rotating-wave comparisons want 100+ steps per period (RK4
phase error scales as T D^5 h^4).  The raw RK4 propagator is projected
onto the unitary group after every segment and the projection distance is
reported as ``norm_drift``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels
from .errors import StepSizeUnderflow
from .ham import hamiltonian_lab, hamiltonian_rwa, lab_drive_operators, static_hamiltonian
from .pulses import PulseSequence
from .spin import SZ2, FrameTag, StateVector3, SystemParams, Unitary3

__all__ = [
    "IntegratorConfig",
    "PropagationResult",
    "propagate",
    "frame_transform",
    "rwa_segment_unitary",
]

@dataclass(frozen=True)
class IntegratorConfig:
    """Error targets and stepping scheme for lab-frame integration.

    ``max_step = None`` selects one twentieth of a carrier period.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float | None = None
    scheme: str = "fixed_rk4"

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not (0.0 < v <= 1e-3):
                raise ValueError(f"{name} must lie in (0, 1e-3], got {v}")
        if self.max_step is not None and not self.max_step > 0.0:
            raise ValueError(f"max_step must be positive, got {self.max_step}")
        if self.scheme not in ("fixed_rk4", "adaptive_embedded"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    def lab_step(self, carrier: float) -> float:
        return self.max_step if self.max_step is not None else (2.0 * math.pi / carrier) / 20.0


@dataclass(frozen=True)
class PropagationResult:
    state: StateVector3
    unitary: Unitary3
    norm_drift: float


def rwa_segment_unitary(p: SystemParams, seg, duration: float | None = None) -> np.ndarray:
    """Exact exp(-i H_rwa t) via Hermitian eigendecomposition."""
    h = hamiltonian_rwa(p, seg)
    w, v = np.linalg.eigh(h)
    t = seg.duration if duration is None else duration
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def _project_unitary(u: np.ndarray) -> tuple[np.ndarray, float]:
    """Nearest unitary (polar factor) and the operator-norm distance to it."""
    w, s, vh = np.linalg.svd(u)
    proj = w @ vh
    return proj, float(np.linalg.norm(u - proj, 2))


def _lab_segment(p, seg, t0, cfg, u):
    hs = static_hamiltonian(p)
    ax, ay = lab_drive_operators(seg)
    if cfg.scheme == "fixed_rk4":
        n = max(1, int(math.ceil(seg.duration / cfg.lab_step(p.carrier))))
        return _kernels.rk4_lab_segment(
            hs, ax, ay, p.carrier, seg.alpha, seg.beta, t0, seg.duration, n, u
        )
    return _lab_segment_adaptive(p, seg, t0, cfg, u)


def _lab_segment_adaptive(p, seg, t0, cfg, u):
    from scipy.integrate import solve_ivp

    def rhs(t, y):
        return (-1j * hamiltonian_lab(p, seg, t) @ y.reshape(3, 3)).ravel()

    sol = solve_ivp(
        rhs,
        (t0, t0 + seg.duration),
        u.ravel().astype(complex),
        method="DOP853",
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step or np.inf,
        dense_output=False,
    )
    if not sol.success:
        raise StepSizeUnderflow(f"adaptive integrator failed: {sol.message}", sol.t[-1])
    return sol.y[:, -1].reshape(3, 3)


def propagate(
    p: SystemParams,
    seq: PulseSequence,
    s: StateVector3,
    frame: FrameTag = FrameTag.INTERACTION_D,
    cfg: IntegratorConfig | None = None,
) -> PropagationResult:
    """Propagate a state through a pulse program in the requested frame.

    Interaction frames use exact per-segment matrix exponentials of the
    time-independent rotating-wave Hamiltonian; the lab frame integrates
    the full time-dependent Hamiltonian with a coherent carrier across
    segments.  Returns the final state, the accumulated propagator and the
    worst per-segment unitarity defect that was projected away.
    """
    cfg = cfg or IntegratorConfig()
    frame = FrameTag(frame)
    u = np.eye(3, dtype=complex)
    drift = 0.0
    t = 0.0
    for seg in seq:
        if seg.duration == 0.0:
            continue
        if frame == FrameTag.LAB:
            u = _lab_segment(p, seg, t, cfg, u)
            u, d = _project_unitary(u)
            drift = max(drift, d)
        else:
            u = rwa_segment_unitary(p, seg) @ u
        t += seg.duration
    uni = Unitary3(u, frame)
    return PropagationResult(state=uni.apply(s), unitary=uni, norm_drift=drift)


def _frame_rate(tag: FrameTag, p: SystemParams) -> float:
    if tag == FrameTag.LAB:
        return 0.0
    if tag == FrameTag.INTERACTION_D:
        return p.D
    return p.D + p.Ez


def _phase_matrix(rate: float, t: float) -> np.ndarray:
    return np.diag(np.exp(1j * rate * np.diag(SZ2) * t))


def frame_transform(obj, t_start: float, t_end: float, frm: FrameTag, to: FrameTag,
                    p: SystemParams):
    """Re-express a state or propagator in a different frame.

    Frames differ by diagonal phases exp(+i w Sz^2 t) relative to the lab,
    with w = D or D + Ez.  States transform with the phases at ``t_end``;
    a propagator U(t_end <- t_start) picks up phases at both endpoints.
    The round trip is the identity.
    """
    frm, to = FrameTag(frm), FrameTag(to)
    w_from = _frame_rate(frm, p)
    w_to = _frame_rate(to, p)
    dw = w_to - w_from
    if isinstance(obj, StateVector3):
        return StateVector3(_phase_matrix(dw, t_end) @ obj.amps)
    if isinstance(obj, Unitary3):
        if obj.frame != frm:
            raise ValueError(f"object is in frame {obj.frame}, not {frm}")
        m = _phase_matrix(dw, t_end) @ obj.m @ _phase_matrix(dw, t_start).conj().T
        return Unitary3(m, to)
    raise TypeError(f"cannot frame-transform object of type {type(obj)!r}")
