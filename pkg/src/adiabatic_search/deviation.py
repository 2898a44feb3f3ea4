"""Hierarchical deviation of the driven state from the adiabatic fixed point.

Writing p = p_bar(s) + dp, q = 1/2 + dq, a slowly driven state oscillates
around a displaced centre (A, B) that is expanded in powers of the driving
rate. With the canonical equations dq/dt = dH_c/dp, dp/dt = -dH_c/dq (the
flow generated by i d/dt psi = H psi in these coordinates) the first two
centres are

    A1 = 0,   B1 = -sdot sqrt(r(1-r)) / lam^(3/2)
    A2 = 2 sqrt(r(1-r)) (3 sdot^2 (r-1)(2-4s) - lam sddot) / lam^3,   B2 = 0

The centre B1 is also obtained independently by linearising the flow at the
fixed point (``gamma0_matrix``) and solving against the fixed-point drift
(``gamma0_center``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _csv
from .dynamics import Trajectory
from .errors import DegeneracyError, DomainError
from .model import _check_r, _field, fixed_point_p, gap_lambda
from .schedule import eval_path_derivative

DEGENERACY_TOLERANCE = 1e-14


@dataclass(frozen=True)
class DeviationCenter:
    order: int
    a: float
    b: float


def _root(r: float) -> float:
    return math.sqrt(r * (1 - r))


def first_order_b(r: float, s, s_dot):
    """B1 (vectorised)."""
    return -np.asarray(s_dot) * _root(r) / gap_lambda(r, s) ** 1.5


def second_order_a(r: float, s, s_dot, s_ddot, sdot_power: int = 2):
    """A2 (vectorised).

    ``sdot_power=1`` evaluates the velocity term with a bare sdot instead of
    sdot^2, for comparison against the squared reading.
    """
    if sdot_power not in (1, 2):
        raise DomainError("sdot_power must be 1 or 2")
    lam = gap_lambda(r, s)
    s = np.asarray(s)
    drive = 3 * np.asarray(s_dot) ** sdot_power * (r - 1) * (2 - 4 * s) - lam * np.asarray(s_ddot)
    return 2 * _root(r) * drive / lam**3


def first_order_center(r: float, s: float, s_dot: float) -> DeviationCenter:
    _check_r(r, 0.5)
    return DeviationCenter(order=1, a=0.0, b=float(first_order_b(r, s, s_dot)))


def second_order_center(
    r: float, s: float, s_dot: float, s_ddot: float, sdot_power: int = 2
) -> DeviationCenter:
    _check_r(r, 0.5)
    return DeviationCenter(order=2, a=float(second_order_a(r, s, s_dot, s_ddot, sdot_power)), b=0.0)


def classical_gradient(p, q, r: float, s: float):
    """(dH_c/dp, dH_c/dq)."""
    a, b = _field(r, s)
    w = np.sqrt(q * (1 - q))
    field = a * np.cos(p) + b * np.sin(p)
    dfield = -a * np.sin(p) + b * np.cos(p)
    return w * dfield, (1 - 2 * q) / (2 * w) * field


def classical_hessian(p, q, r: float, s: float):
    """Analytic (H_pp, H_pq, H_qq) of the classical Hamiltonian."""
    a, b = _field(r, s)
    w = np.sqrt(q * (1 - q))
    field = a * np.cos(p) + b * np.sin(p)
    dfield = -a * np.sin(p) + b * np.cos(p)
    h_pp = -w * field
    h_pq = (1 - 2 * q) / (2 * w) * dfield
    h_qq = -field / (4 * w**3)
    return h_pp, h_pq, h_qq


def gamma0_matrix(r: float, s: float) -> np.ndarray:
    """Linearised Hamilton flow of (dp, dq) at the fixed point."""
    _check_r(r, 0.5)
    p_bar = fixed_point_p(r, s)
    h_pp, h_pq, h_qq = classical_hessian(p_bar, 0.5, r, s)
    g = np.array([[-h_pq, -h_qq], [h_pp, h_pq]], dtype=float)
    if abs(np.linalg.det(g)) < DEGENERACY_TOLERANCE:
        raise DegeneracyError(f"Gamma0 is singular at r={r}, s={s}")
    return g


def fixed_point_p_ds(r: float, s):
    """d p_bar / ds, differentiated from the atan2 form of p_bar."""
    _check_r(r, 0.5)
    s = np.asarray(s, dtype=float)
    y = 2 * _root(r) * (1 - s)
    x = 2 * r * s - 2 * r - 2 * s + 1
    dy = -2 * _root(r)
    dx = 2 * r - 2
    out = (x * dy - y * dx) / (x * x + y * y)
    return float(out) if out.ndim == 0 else out


def gamma0_center(r: float, s: float, s_dot: float) -> DeviationCenter:
    """First-order centre from the linearised flow: Gamma0^-1 (dp_bar/ds, dq_bar/ds) sdot."""
    g = gamma0_matrix(r, s)
    drift = np.array([fixed_point_p_ds(r, s), 0.0]) * s_dot
    a, b = np.linalg.solve(g, drift)
    return DeviationCenter(order=1, a=float(a), b=float(b))


@dataclass(frozen=True)
class Residual:
    """Per-sample comparison of a two-level trajectory with the deviation centres."""

    order: int
    t: np.ndarray
    s: np.ndarray
    p: np.ndarray
    q: np.ndarray
    p_bar: np.ndarray
    a1: np.ndarray
    b1: np.ndarray
    a2: np.ndarray
    b2: np.ndarray
    res_p: np.ndarray
    res_q: np.ndarray

    @property
    def q_bar(self) -> np.ndarray:
        return np.full_like(self.q, 0.5)

    @property
    def dp(self) -> np.ndarray:
        """p - p_bar wrapped into (-pi, pi]."""
        return _wrap(self.p - self.p_bar)

    @property
    def dq(self) -> np.ndarray:
        return self.q - 0.5

    def to_csv(self, path):
        cols = (self.t, self.s, self.p, self.q, self.p_bar, self.q_bar,
                self.a1, self.b1, self.a2, self.b2, self.res_p, self.res_q)
        header = ("t", "s", "p", "q", "p_bar", "q_bar", "A1", "B1", "A2", "B2", "res_p", "res_q")
        rows = (tuple(_csv.amp(v) for v in row) for row in zip(*cols))
        return _csv.write_rows(path, header, rows)


def _wrap(x):
    return np.angle(np.exp(1j * np.asarray(x)))


def residual_against_center(trajectory: Trajectory, order: int, path=None) -> Residual:
    """Residual of (p, q) against p_bar + A, 1/2 + B summed up to ``order``.

    Schedule derivatives are taken from ``path`` or, if omitted, from the
    path the trajectory was integrated along.
    """
    if order not in (1, 2):
        raise DomainError("order must be 1 or 2")
    path = path if path is not None else trajectory.path
    if path is None:
        raise DomainError("trajectory carries no path; pass one explicitly")
    r = trajectory.r
    t = trajectory.times
    s = trajectory.s_values
    p, q = trajectory.projective
    s_dot = eval_path_derivative(path, t, 1)
    s_ddot = eval_path_derivative(path, t, 2)
    p_bar = fixed_point_p(r, s)
    a1 = np.zeros_like(t)
    b1 = first_order_b(r, s, s_dot)
    a2 = second_order_a(r, s, s_dot, s_ddot)
    b2 = np.zeros_like(t)
    a = a1 + (a2 if order == 2 else 0.0)
    b = b1 + (b2 if order == 2 else 0.0)
    return Residual(
        order=order, t=t, s=s, p=p, q=q, p_bar=p_bar,
        a1=a1, b1=b1, a2=a2, b2=b2,
        res_p=_wrap(p - p_bar - a), res_q=q - 0.5 - b,
    )


# ---------------------------------------------------------------------------
# oscillation analysis


def local_period(r: float, s) -> np.ndarray:
    """Period 2 pi / gap of small oscillations around the fixed point."""
    return 2 * math.pi / np.sqrt(gap_lambda(r, s))


def period_average(t: np.ndarray, y: np.ndarray, period: np.ndarray) -> np.ndarray:
    """Average of ``y`` over a window of one local ``period`` centred on each sample.

    Windows reaching past either end of the record give NaN.
    """
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))])
    lo = t - period / 2
    hi = t + period / 2
    out = (np.interp(hi, t, cum) - np.interp(lo, t, cum)) / period
    out[(lo < t[0]) | (hi > t[-1])] = np.nan
    return out


def extrema_amplitudes(y: np.ndarray) -> np.ndarray:
    """Half the jump between successive local extrema of ``y``."""
    dy = np.diff(y)
    turning = np.nonzero(np.sign(dy[1:]) * np.sign(dy[:-1]) < 0)[0] + 1
    return 0.5 * np.abs(np.diff(y[turning]))


def dominant_frequency(t: np.ndarray, y: np.ndarray, pad: int = 16) -> float:
    """Angular frequency of the strongest spectral line of a uniformly sampled signal.

    The signal is quadratically detrended and Hann-windowed; the FFT peak is
    refined by parabolic interpolation of the log power.
    """
    dt = t[1] - t[0]
    y = y - np.polyval(np.polyfit(t - t.mean(), y, 2), t - t.mean())
    y = y * np.hanning(len(y))
    n = pad * len(y)
    power = np.abs(np.fft.rfft(y, n)) ** 2
    k = int(np.argmax(power[1:])) + 1
    if 0 < k < len(power) - 1:
        l0, l1, l2 = np.log(power[k - 1 : k + 2])
        k = k + 0.5 * (l0 - l2) / (l0 - 2 * l1 + l2)
    return 2 * math.pi * k / (n * dt)


def kink_time(residual: Residual, r: float) -> float:
    """Time at which the period-averaged ``res_p`` changes fastest.

    The averaging removes the small oscillation so that only the slow
    second-order remainder is left; a kink shows up as its steepest point.
    """
    avg = period_average(residual.t, residual.res_p, local_period(r, residual.s))
    slope = np.abs(np.gradient(avg, residual.t))
    slope[~np.isfinite(slope)] = 0.0
    return float(residual.t[int(np.argmax(slope))])
