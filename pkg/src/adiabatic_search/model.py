"""Search Hamiltonians, their two-level reduction and its projective picture.

The full Hamiltonian acts on N items with a marked set M:

    H(s) = 1 - (1 - s)/N * sum_ij |i><j| - s * sum_{m in M} |m><m|

Permutation symmetry confines the dynamics started from the uniform state to
span{uniform unmarked, uniform marked}, where it reduces to a real symmetric
2x2 matrix depending only on r = M/N. States in that plane are written as

    psi = l1/sqrt2 (1, i) + l2/sqrt2 (1, -i)

with canonical coordinates q = |l2|^2 and p = arg l2 - arg l1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_MAX_ITEMS = 4096

_SQRT_HALF = 1 / math.sqrt(2)


def _check_r(r: float, upper: float = 1.0) -> None:
    if not (0.0 < r < upper):
        raise DomainError(f"r must lie in (0, {upper:g}), got {r!r}")


def _check_s(s) -> None:
    s_arr = np.asarray(s, dtype=float)
    if not np.all((s_arr >= 0.0) & (s_arr <= 1.0)):
        raise DomainError("s must lie in [0, 1]")


@dataclass(frozen=True)
class FullSearchModel:
    """N items of which ``marked`` (1-based indices) are the search targets."""

    n_items: int
    marked: frozenset[int]
    max_items: int = DEFAULT_MAX_ITEMS

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(int(m) for m in self.marked))
        if self.n_items < 2:
            raise DomainError("need at least two items")
        if not self.marked:
            raise DomainError("marked set must be non-empty")
        if not all(1 <= m <= self.n_items for m in self.marked):
            raise DomainError(f"marked indices must lie in 1..{self.n_items}")
        if not 2 * len(self.marked) <= self.n_items:
            raise DomainError("need M/N <= 1/2")
        if self.n_items > self.max_items:
            raise CapacityError(f"N={self.n_items} exceeds the dense cap of {self.max_items}")

    @classmethod
    def first_marked(cls, n_items: int, n_marked: int, **kw) -> FullSearchModel:
        """Model whose marked items are 1..n_marked."""
        return cls(n_items, frozenset(range(1, n_marked + 1)), **kw)

    @property
    def n_marked(self) -> int:
        return len(self.marked)

    @property
    def r(self) -> float:
        return self.n_marked / self.n_items

    @property
    def marked_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_items, dtype=bool)
        mask[[m - 1 for m in self.marked]] = True
        return mask

    def projector(self) -> np.ndarray:
        """Projector onto the marked subspace as a dense diagonal matrix."""
        return np.diag(self.marked_mask.astype(float))

    def initial_state(self) -> np.ndarray:
        return np.full(self.n_items, 1 / math.sqrt(self.n_items), dtype=complex)

    def reduce_state(self, psi: np.ndarray) -> np.ndarray:
        """Coordinates (psi_u, psi_m) of a state in the symmetric plane."""
        mask = self.marked_mask
        psi_u = psi[~mask].sum() / math.sqrt(self.n_items - self.n_marked)
        psi_m = psi[mask].sum() / math.sqrt(self.n_marked)
        return np.array([psi_u, psi_m])


def initial_hamiltonian(model: FullSearchModel) -> np.ndarray:
    N = model.n_items
    return np.eye(N) - np.full((N, N), 1 / N)


def problem_hamiltonian(model: FullSearchModel) -> np.ndarray:
    return np.eye(model.n_items) - model.projector()


def build_full_hamiltonian(model: FullSearchModel, s: float) -> np.ndarray:
    """Dense real-symmetric N x N search Hamiltonian at adiabatic parameter ``s``."""
    _check_s(s)
    return (1 - s) * initial_hamiltonian(model) + s * problem_hamiltonian(model)


def build_reduced_hamiltonian(r: float, s: float) -> np.ndarray:
    """2x2 Hamiltonian in the (psi_u, psi_m) basis."""
    _check_r(r)
    _check_s(s)
    off = -math.sqrt(r * (1 - r)) * (1 - s)
    return np.array([[r * (1 - s) + s, off], [off, (1 - r) * (1 - s)]])


def reduced_spectrum(r: float, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and eigenvectors (columns) of the reduced Hamiltonian."""
    return np.linalg.eigh(build_reduced_hamiltonian(r, s))


def reduced_ground_state(r: float, s: float) -> np.ndarray:
    """Ground state of the reduced Hamiltonian with a non-negative psi_m component."""
    _, vecs = reduced_spectrum(r, s)
    g = vecs[:, 0]
    if g[1] < 0 or (g[1] == 0 and g[0] < 0):
        g = -g
    return g.astype(complex)


def gap_lambda(r: float, s):
    """Squared gap of the reduced Hamiltonian, 1 + 4(r-1)s - 4(r-1)s^2."""
    _check_r(r)
    s = np.asarray(s, dtype=float)
    lam = 1 + 4 * (r - 1) * s - 4 * (r - 1) * s**2
    return float(lam) if lam.ndim == 0 else lam


def _field(r: float, s):
    """Coefficients (a, b) with H_c = 1/2 + sqrt(q(1-q)) (a cos p + b sin p)."""
    a = 2 * r + 2 * s - 2 * r * s - 1
    b = -2 * math.sqrt(r * (1 - r)) * (1 - s)
    return a, b


def classical_hamiltonian(p, q, r: float, s: float):
    """Expectation of the reduced Hamiltonian in the state with coordinates (p, q)."""
    _check_r(r)
    a, b = _field(r, s)
    w = np.sqrt(np.asarray(q) * (1 - np.asarray(q)))
    return 0.5 + w * (a * np.cos(p) + b * np.sin(p))


@dataclass(frozen=True)
class FixedPoint:
    p_bar: float
    q_bar: float = 0.5


def fixed_point_p(r: float, s):
    """p coordinate of the instantaneous ground state (vectorised over ``s``).

    Written as atan2 of the two branch expressions, which keeps it continuous
    (equal to pi/2) where the scalar-arctan denominator vanishes.
    """
    _check_r(r, 0.5)
    s = np.asarray(s, dtype=float)
    num = 2 * math.sqrt((1 - r) * r) * (1 - s)
    den = 2 * r * s - 2 * r - 2 * s + 1
    p = np.arctan2(num, den)
    return float(p) if p.ndim == 0 else p


def fixed_point(r: float, s: float) -> FixedPoint:
    _check_s(s)
    return FixedPoint(p_bar=fixed_point_p(r, s), q_bar=0.5)


def branch_point(r: float) -> float:
    """Value of s where the ground state passes p = pi/2."""
    return (1 - 2 * r) / (2 - 2 * r)


def state_from_projective(p, q) -> np.ndarray:
    """Two-component state (psi_u, psi_m) with coordinates (p, q), gauge arg l1 = 0.

    Vectorised: for array inputs the last axis holds the two components.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    l1 = np.sqrt(1 - q)
    l2 = np.sqrt(q) * np.exp(1j * p)
    psi_u = _SQRT_HALF * (l1 + l2)
    psi_m = 1j * _SQRT_HALF * (l1 - l2)
    return np.stack([psi_u, psi_m], axis=-1)
