"""Time-dependent Schrodinger integration along a schedule.

Both the reduced two-level model and the dense N-level model are advanced
with the classical fixed-step fourth-order Runge-Kutta scheme, with the
Hamiltonian sampled at t, t + dt/2 and t + dt. The number of steps is
rounded up so that the last step lands exactly on T.

The reduced kernel is compiled with numba (no GIL, so sweeps can run on a
thread pool). The dense kernel is plain numpy and deliberately shares no
code with it, so that full runs can serve as an independent check of the
reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from . import _csv
from .errors import ConfigurationError, IntegrityError
from .model import (
    FullSearchModel,
    _check_r,
    build_full_hamiltonian,
    state_from_projective,
)

MAX_DT = 0.1
NORM_TOLERANCE = 1e-6
_POLE_TOLERANCE = 1e-14


@dataclass(frozen=True)
class EvolutionConfig:
    steps_per_unit_time: float = 100.0
    record_stride: int = 10
    renormalize: bool = True

    def __post_init__(self):
        if not (self.steps_per_unit_time > 0 and math.isfinite(self.steps_per_unit_time)):
            raise ConfigurationError("steps_per_unit_time must be positive")
        if self.dt > MAX_DT:
            raise ConfigurationError(f"dt = {self.dt:g} exceeds the stability guard {MAX_DT}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ConfigurationError("record_stride must be a positive integer")

    @property
    def dt(self) -> float:
        return 1.0 / self.steps_per_unit_time

    def n_steps(self, total_time: float) -> int:
        # guard against 1000.0000000001 -> 100001
        return max(1, math.ceil(total_time * self.steps_per_unit_time - 1e-9))

    def step_size(self, total_time: float) -> float:
        return total_time / self.n_steps(total_time)

    def record_steps(self, total_time: float) -> np.ndarray:
        n = self.n_steps(total_time)
        return np.unique(np.append(np.arange(0, n, self.record_stride), n))


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution.

    ``states`` holds the integrated vectors (2 or N components);
    ``reduced_states`` their (psi_u, psi_m) coordinates in the symmetric
    plane, identical to ``states`` for reduced runs.
    """

    times: np.ndarray
    states: np.ndarray
    s_values: np.ndarray
    reduced_states: np.ndarray
    r: float
    step_size: float
    renormalized: bool
    marked_mask: np.ndarray | None = None
    path: object = None
    meta: dict = field(default_factory=dict)

    @property
    def total_time(self) -> float:
        return float(self.times[-1])

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    @property
    def projective(self) -> tuple[np.ndarray, np.ndarray]:
        """(p, q) at every sample; p wrapped to [0, 2pi)."""
        return projective_from_state(self.reduced_states)

    @property
    def p_unwrapped(self) -> np.ndarray:
        return np.unwrap(self.projective[0])

    def projector(self) -> np.ndarray:
        if self.marked_mask is None:
            return np.diag([0.0, 1.0])
        return np.diag(self.marked_mask.astype(float))

    @property
    def error(self) -> float:
        """Intrinsic computational error of the final state."""
        return compute_error(self.final_state, self.projector())

    def instantaneous_error(self) -> np.ndarray:
        """1 - |<ground(s)|psi>|^2 at every sample, from the reduced coordinates."""
        return _excited_population(self.r, self.s_values, self.reduced_states)

    def to_csv(self, path):
        p, q = self.projective
        delta = self.instantaneous_error()
        rows = (
            (
                _csv.amp(t), _csv.amp(s),
                _csv.amp(psi[0].real), _csv.amp(psi[0].imag),
                _csv.amp(psi[1].real), _csv.amp(psi[1].imag),
                _csv.amp(pp), _csv.amp(qq), _csv.sci(dd),
            )
            for t, s, psi, pp, qq, dd in zip(self.times, self.s_values, self.reduced_states, p, q, delta)
        )
        header = ("t", "s", "re_psi_u", "im_psi_u", "re_psi_m", "im_psi_m", "p", "q", "delta_inst")
        return _csv.write_rows(path, header, rows)


def _ground_p(r: float, s):
    return np.arctan2(2 * math.sqrt((1 - r) * r) * (1 - s), 2 * r * s - 2 * r - 2 * s + 1)


def _excited_population(r: float, s, reduced_states: np.ndarray) -> np.ndarray:
    # the excited state sits antipodal to the ground state: (p_bar + pi, 1/2)
    excited = state_from_projective(_ground_p(r, np.asarray(s)) + math.pi, 0.5)
    norms2 = np.sum(np.abs(reduced_states) ** 2, axis=-1)
    overlap = np.sum(np.conj(excited) * reduced_states, axis=-1)
    return np.abs(overlap) ** 2 / norms2


def projective_from_state(state) -> tuple:
    """Canonical coordinates (p, q) of a two-component state.

    ``state`` may be a single 2-vector or an array with components on the
    last axis. p is reported in [0, 2pi), and as 0 where q is within 1e-14
    of 0 or 1 (the phase is undefined there).
    """
    psi = np.asarray(state, dtype=complex)
    norm = np.linalg.norm(psi, axis=-1)
    if np.any(np.abs(norm - 1) > NORM_TOLERANCE):
        raise IntegrityError("projective coordinates need a unit-norm state")
    psi = psi / norm[..., None] if psi.ndim > 1 else psi / norm
    l1 = (psi[..., 0] - 1j * psi[..., 1]) / math.sqrt(2)
    l2 = (psi[..., 0] + 1j * psi[..., 1]) / math.sqrt(2)
    q = np.abs(l2) ** 2
    p = np.mod(np.angle(l2) - np.angle(l1), 2 * math.pi)
    p = np.where((q < _POLE_TOLERANCE) | (q > 1 - _POLE_TOLERANCE) | (p >= 2 * math.pi), 0.0, p)
    if psi.ndim == 1:
        return float(p), float(q)
    return p, q


def compute_error(final_state: np.ndarray, projector: np.ndarray) -> float:
    """delta = 1 - <psi|P|psi>.

    Evaluated as <psi|(1 - P)|psi> / <psi|psi>, which equals the definition
    for unit-norm states but keeps full relative precision when delta is far
    below machine epsilon.
    """
    psi = np.asarray(final_state, dtype=complex)
    norm2 = float(np.vdot(psi, psi).real)
    if abs(math.sqrt(norm2) - 1) > NORM_TOLERANCE:
        raise IntegrityError(f"state norm {math.sqrt(norm2):.3e} deviates from 1")
    outside = psi - projector @ psi
    delta = float(np.vdot(psi, outside).real) / norm2
    return min(max(delta, 0.0), 1.0)


@numba.njit(cache=True, nogil=True)
def _rk4_reduced(r, s_half, h, n_steps, record, renormalize, u0, m0):
    # s_half[k] = s(k * h / 2)
    g = math.sqrt(r * (1.0 - r))
    out = np.empty((record.shape[0], 2), dtype=np.complex128)
    u = u0
    m = m0
    j = 0
    if record[0] == 0:
        out[0, 0] = u
        out[0, 1] = m
        j = 1
    for k in range(n_steps):
        sa = s_half[2 * k]
        sb = s_half[2 * k + 1]
        sc = s_half[2 * k + 2]

        a = r * (1.0 - sa) + sa
        d = (1.0 - r) * (1.0 - sa)
        b = -g * (1.0 - sa)
        ku1 = -1j * (a * u + b * m)
        km1 = -1j * (b * u + d * m)

        a = r * (1.0 - sb) + sb
        d = (1.0 - r) * (1.0 - sb)
        b = -g * (1.0 - sb)
        uu = u + 0.5 * h * ku1
        mm = m + 0.5 * h * km1
        ku2 = -1j * (a * uu + b * mm)
        km2 = -1j * (b * uu + d * mm)
        uu = u + 0.5 * h * ku2
        mm = m + 0.5 * h * km2
        ku3 = -1j * (a * uu + b * mm)
        km3 = -1j * (b * uu + d * mm)

        a = r * (1.0 - sc) + sc
        d = (1.0 - r) * (1.0 - sc)
        b = -g * (1.0 - sc)
        uu = u + h * ku3
        mm = m + h * km3
        ku4 = -1j * (a * uu + b * mm)
        km4 = -1j * (b * uu + d * mm)

        u = u + h / 6.0 * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4)
        m = m + h / 6.0 * (km1 + 2.0 * km2 + 2.0 * km3 + km4)
        if renormalize:
            nrm = math.sqrt(u.real**2 + u.imag**2 + m.real**2 + m.imag**2)
            u = u / nrm
            m = m / nrm
        if j < record.shape[0] and record[j] == k + 1:
            out[j, 0] = u
            out[j, 1] = m
            j += 1
    return out


def _half_step_schedule(path, n_steps: int, h: float) -> np.ndarray:
    t = np.arange(2 * n_steps + 1) * (h / 2)
    t[-1] = path.total_time
    return np.asarray(path(t), dtype=float)


def evolve_reduced(r: float, path, config: EvolutionConfig | None = None) -> Trajectory:
    """Integrate the two-level search dynamics from the s = 0 ground state.

    ``path`` is any object with ``total_time`` and a vectorised ``__call__``
    (a ``SchedulePath`` normally).
    """
    _check_r(r)
    config = config or EvolutionConfig()
    T = float(path.total_time)
    n = config.n_steps(T)
    h = T / n
    s_half = _half_step_schedule(path, n, h)
    record = config.record_steps(T)
    states = _rk4_reduced(
        r, s_half, h, n, record, config.renormalize, complex(math.sqrt(1 - r)), complex(math.sqrt(r))
    )
    times = record * h
    times[-1] = T
    return Trajectory(
        times=times,
        states=states,
        s_values=s_half[2 * record],
        reduced_states=states,
        r=r,
        step_size=h,
        renormalized=config.renormalize,
        path=path,
        meta={"n_steps": n, "model": "reduced"},
    )


def evolve_full(model: FullSearchModel, path, config: EvolutionConfig | None = None) -> Trajectory:
    """Integrate the dense N-level search dynamics from the uniform superposition."""
    config = config or EvolutionConfig()
    T = float(path.total_time)
    n = config.n_steps(T)
    h = T / n
    s_half = _half_step_schedule(path, n, h)
    record = config.record_steps(T)

    h0 = build_full_hamiltonian(model, 0.0)
    dh = build_full_hamiltonian(model, 1.0) - h0

    def rhs(psi, s):
        return -1j * (h0 @ psi + s * (dh @ psi))

    psi = model.initial_state()
    out = np.empty((len(record), model.n_items), dtype=complex)
    j = 0
    if record[0] == 0:
        out[0] = psi
        j = 1
    for k in range(n):
        sa, sb, sc = s_half[2 * k], s_half[2 * k + 1], s_half[2 * k + 2]
        k1 = rhs(psi, sa)
        k2 = rhs(psi + 0.5 * h * k1, sb)
        k3 = rhs(psi + 0.5 * h * k2, sb)
        k4 = rhs(psi + h * k3, sc)
        psi = psi + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if config.renormalize:
            psi = psi / np.linalg.norm(psi)
        if j < len(record) and record[j] == k + 1:
            out[j] = psi
            j += 1

    times = record * h
    times[-1] = T
    return Trajectory(
        times=times,
        states=out,
        s_values=s_half[2 * record],
        reduced_states=np.array([model.reduce_state(v) for v in out]),
        r=model.r,
        step_size=h,
        renormalized=config.renormalize,
        marked_mask=model.marked_mask,
        path=path,
        meta={"n_steps": n, "model": "full", "n_items": model.n_items, "n_marked": model.n_marked},
    )
