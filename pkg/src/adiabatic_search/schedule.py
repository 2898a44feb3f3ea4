"""Adiabatic schedules s(t) on [0, T].

Six named schedules are provided together with user polynomials in the
reduced time u = t/T. Every schedule is clamped: s = 0 for t < 0 and s = 1
for t >= T. Derivatives up to third order are analytic; endpoint derivatives
are classified exactly with sympy so that the "order" of a path never depends
on floating point round-off.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, UnsupportedOrderError

MAX_DERIVATIVE = 3

_HALF_PI = math.pi / 2


class PathKind(str, enum.Enum):
    LINEAR = "linear"
    SINUSOIDAL = "sin"
    SQUARE = "square"
    SINUSOIDAL_SQUARE = "sin2"
    SINUSOIDAL_CUBIC = "sin3"
    CUBIC = "cubic"
    POLYNOMIAL = "poly"


NAMED_KINDS = (
    PathKind.LINEAR,
    PathKind.SINUSOIDAL,
    PathKind.SQUARE,
    PathKind.SINUSOIDAL_SQUARE,
    PathKind.SINUSOIDAL_CUBIC,
    PathKind.CUBIC,
)

# coefficients of u^0, u^1, ... for the polynomial named paths
_POLY_COEFFS = {
    PathKind.LINEAR: (Fraction(0), Fraction(1)),
    PathKind.SQUARE: (Fraction(0), Fraction(0), Fraction(3), Fraction(-2)),
    PathKind.CUBIC: (
        Fraction(0), Fraction(0), Fraction(0), Fraction(10), Fraction(-15), Fraction(6),
    ),
}


@dataclass(frozen=True)
class SchedulePath:
    """A schedule s(t) on [0, total_time].

    ``coefficients`` is only used for ``PathKind.POLYNOMIAL`` and holds the
    exact coefficients of u^0, u^1, ... with u = t / total_time.
    """

    kind: PathKind
    total_time: float
    coefficients: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", PathKind(self.kind))
        if not (math.isfinite(self.total_time) and self.total_time > 0):
            raise DomainError(f"total_time must be positive and finite, got {self.total_time!r}")
        if self.kind is PathKind.POLYNOMIAL:
            if not self.coefficients:
                raise DomainError("polynomial path needs at least one coefficient")
            coeffs = tuple(Fraction(c) for c in self.coefficients)
            object.__setattr__(self, "coefficients", coeffs)
        elif self.coefficients:
            raise DomainError(f"coefficients are only accepted for polynomial paths, not {self.kind.value}")

    @property
    def name(self) -> str:
        if self.kind is PathKind.POLYNOMIAL:
            return "poly:" + ",".join(str(c) for c in self.coefficients)
        return self.kind.value

    def with_time(self, total_time: float) -> SchedulePath:
        return SchedulePath(self.kind, total_time, self.coefficients)

    def __call__(self, t):
        return eval_path(self, t)

    def derivative(self, t, n: int = 1):
        return eval_path_derivative(self, t, n)


def parse_path(spec: str, total_time: float) -> SchedulePath:
    """Build a path from its CLI name (``linear``, ``sin``, ..., ``poly:a0,a1,...``)."""
    spec = spec.strip()
    if spec.startswith("poly:"):
        try:
            coeffs = tuple(Fraction(c.strip()) for c in spec[5:].split(",") if c.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad polynomial coefficients in {spec!r}") from exc
        return SchedulePath(PathKind.POLYNOMIAL, total_time, coeffs)
    try:
        kind = PathKind(spec)
    except ValueError:
        names = ", ".join(k.value for k in NAMED_KINDS)
        raise DomainError(f"unknown path {spec!r}; expected one of {names} or poly:a0,a1,...") from None
    if kind is PathKind.POLYNOMIAL:
        raise DomainError("polynomial paths are written as poly:a0,a1,...")
    return SchedulePath(kind, total_time)


def _poly_coeffs(path: SchedulePath) -> tuple[Fraction, ...] | None:
    if path.kind is PathKind.POLYNOMIAL:
        return path.coefficients
    return _POLY_COEFFS.get(path.kind)


def _u_derivative(path: SchedulePath, u: np.ndarray, n: int) -> np.ndarray:
    """n-th derivative of s with respect to u, using the interior formula."""
    coeffs = _poly_coeffs(path)
    if coeffs is not None:
        c = np.array([float(x) for x in coeffs])
        if n:
            c = np.polynomial.polynomial.polyder(c, n) if len(c) > n else np.zeros(1)
        return np.polynomial.polynomial.polyval(u, c)

    k = _HALF_PI
    # cos(k u) written as sin(k (1 - u)) so that it is exactly 0 at u = 1
    S = np.sin(k * u)
    C = np.sin(k * (1 - u))
    if path.kind is PathKind.SINUSOIDAL:
        return (S, k * C, -(k**2) * S, -(k**3) * C)[n]
    if path.kind is PathKind.SINUSOIDAL_SQUARE:
        return (S**2, 2 * k * S * C, 2 * k**2 * (C**2 - S**2), -8 * k**3 * S * C)[n]
    if path.kind is PathKind.SINUSOIDAL_CUBIC:
        return (S**3, 3 * k * S**2 * C, k**2 * (6 * S - 9 * S**3), k**3 * (27 * C**3 - 21 * C))[n]
    raise AssertionError(path.kind)


def eval_path(path: SchedulePath, t):
    """Evaluate s(t), clamped to 0 before the start and 1 from ``total_time`` on.

    Accepts a scalar or an array of times; returns the same shape.
    """
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)):
        raise DomainError("t must be finite")
    T = path.total_time
    u = np.clip(t_arr / T, 0.0, 1.0)
    s = _u_derivative(path, u, 0)
    s = np.where(t_arr < 0, 0.0, np.where(t_arr >= T, 1.0, s))
    return float(s) if s.ndim == 0 else s


def eval_path_derivative(path: SchedulePath, t, n: int = 1):
    """Analytic d^n s / dt^n for n = 1..3.

    At t = 0 and t = T the one-sided limit from inside the interval is
    returned; outside [0, T] the clamped schedule is constant so the result
    is 0.
    """
    if n not in range(1, MAX_DERIVATIVE + 1):
        raise UnsupportedOrderError(f"derivative order {n} not supported (1..{MAX_DERIVATIVE})")
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)):
        raise DomainError("t must be finite")
    T = path.total_time
    u = np.clip(t_arr / T, 0.0, 1.0)
    d = _u_derivative(path, u, n) / T**n
    d = np.where((t_arr < 0) | (t_arr > T), 0.0, d)
    return float(d) if d.ndim == 0 else d


@dataclass(frozen=True)
class EndpointDerivatives:
    """Endpoint derivatives c_n = s^(n)(0), d_n = s^(n)(T) for n = 1..n_max.

    ``order`` is the path order: all c_m, d_m with m <= order vanish and
    c_{order+1} or d_{order+1} does not. ``balanced`` says whether
    |c_n| = |d_n| holds exactly at that leading n.
    """

    c: tuple[float, ...]
    d: tuple[float, ...]
    order: int
    balanced: bool

    @property
    def leading(self) -> int:
        return self.order + 1


def _sympy_expr(path: SchedulePath, u):
    import sympy as sp

    coeffs = _poly_coeffs(path)
    if coeffs is not None:
        return sum(sp.Rational(c.numerator, c.denominator) * u**i for i, c in enumerate(coeffs))
    x = sp.pi * u / 2
    power = {PathKind.SINUSOIDAL: 1, PathKind.SINUSOIDAL_SQUARE: 2, PathKind.SINUSOIDAL_CUBIC: 3}[path.kind]
    return sp.sin(x) ** power


@lru_cache(maxsize=None)
def _exact_endpoint_table(kind: PathKind, coefficients: tuple[Fraction, ...], n_max: int):
    import sympy as sp

    u = sp.Symbol("u", real=True)
    expr = _sympy_expr(SchedulePath(kind, 1.0, coefficients), u)
    rows = []
    for n in range(1, n_max + 1):
        dn = sp.diff(expr, u, n)
        rows.append((sp.nsimplify(sp.simplify(dn.subs(u, 0))), sp.nsimplify(sp.simplify(dn.subs(u, 1)))))
    return rows


def classify_order(path: SchedulePath, n_max: int = 4) -> EndpointDerivatives:
    """Exact endpoint-derivative classification of ``path``.

    Raises ``UnsupportedOrderError`` if every derivative up to ``n_max``
    vanishes; pass a larger ``n_max`` for such paths.
    """
    if n_max < MAX_DERIVATIVE:
        raise UnsupportedOrderError(f"n_max must be at least {MAX_DERIVATIVE}")
    rows = _exact_endpoint_table(path.kind, path.coefficients, n_max)
    T = path.total_time
    c = tuple(float(cn) / T**n for n, (cn, _) in enumerate(rows, start=1))
    d = tuple(float(dn) / T**n for n, (_, dn) in enumerate(rows, start=1))
    for n, (cn, dn) in enumerate(rows, start=1):
        if cn != 0 or dn != 0:
            import sympy as sp

            balanced = sp.simplify(sp.Abs(cn) - sp.Abs(dn)) == 0
            return EndpointDerivatives(c=c, d=d, order=n - 1, balanced=bool(balanced))
    raise UnsupportedOrderError(f"all endpoint derivatives up to order {n_max} vanish for {path.name}")
