import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adiabatic_search.dynamics import projective_from_state
from adiabatic_search.errors import CapacityError, DomainError
from adiabatic_search.model import (
    FullSearchModel,
    branch_point,
    build_full_hamiltonian,
    build_reduced_hamiltonian,
    classical_hamiltonian,
    fixed_point,
    fixed_point_p,
    gap_lambda,
    reduced_ground_state,
    reduced_spectrum,
    state_from_projective,
)


def test_full_hamiltonian_small_examples():
    model = FullSearchModel(2, frozenset({2}))
    np.testing.assert_allclose(build_full_hamiltonian(model, 1.0), np.diag([1.0, 0.0]), atol=1e-15)
    np.testing.assert_allclose(build_full_hamiltonian(model, 0.0), [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)


def test_full_hamiltonian_is_real_symmetric():
    h = build_full_hamiltonian(FullSearchModel(7, frozenset({2, 5})), 0.37)
    assert h.dtype == np.float64
    np.testing.assert_array_equal(h, h.T)


def test_lowest_full_eigenvalues_match_reduced():
    model = FullSearchModel.first_marked(100, 1)
    full = np.linalg.eigvalsh(build_full_hamiltonian(model, 0.5))
    red = np.linalg.eigvalsh(build_reduced_hamiltonian(0.01, 0.5))
    np.testing.assert_allclose(full[:2], red, atol=1e-12)


@pytest.mark.parametrize("n", [10, 100])
@pytest.mark.parametrize("m", [1, 2])
def test_spectrum_embedding(n, m):
    model = FullSearchModel.first_marked(n, m)
    for s in np.linspace(0, 1, 21):
        full = np.linalg.eigvalsh(build_full_hamiltonian(model, s))
        for e in np.linalg.eigvalsh(build_reduced_hamiltonian(model.r, s)):
            assert np.min(np.abs(full - e)) <= 1e-12


def test_reduced_hamiltonian_examples():
    np.testing.assert_allclose(build_reduced_hamiltonian(0.5, 0.0), [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(build_reduced_hamiltonian(0.01, 1.0), [[1.0, 0.0], [0.0, 0.0]], atol=1e-15)
    e = np.linalg.eigvalsh(build_reduced_hamiltonian(0.01, 0.5))
    assert (e[1] - e[0]) ** 2 == pytest.approx(0.01, abs=1e-12)


def test_reduced_matches_projection_of_full():
    model = FullSearchModel(12, frozenset({3, 8, 11}))
    mask = model.marked_mask
    basis = np.zeros((12, 2))
    basis[~mask, 0] = 1 / math.sqrt(9)
    basis[mask, 1] = 1 / math.sqrt(3)
    for s in (0.0, 0.3, 1.0):
        projected = basis.T @ build_full_hamiltonian(model, s) @ basis
        np.testing.assert_allclose(projected, build_reduced_hamiltonian(model.r, s), atol=1e-14)


@pytest.mark.parametrize("r", [0.0, 1.0, -0.1, 1.5])
def test_reduced_rejects_bad_r(r):
    with pytest.raises(DomainError):
        build_reduced_hamiltonian(r, 0.5)


def test_bad_s_rejected():
    with pytest.raises(DomainError):
        build_reduced_hamiltonian(0.1, 1.5)
    with pytest.raises(DomainError):
        build_full_hamiltonian(FullSearchModel.first_marked(4, 1), -0.1)


def test_model_validation():
    with pytest.raises(DomainError):
        FullSearchModel(1, frozenset({1}))
    with pytest.raises(DomainError):
        FullSearchModel(4, frozenset())
    with pytest.raises(DomainError):
        FullSearchModel(4, frozenset({5}))
    with pytest.raises(DomainError):
        FullSearchModel.first_marked(5, 3)
    with pytest.raises(CapacityError):
        FullSearchModel.first_marked(5000, 1)
    assert FullSearchModel.first_marked(5000, 1, max_items=5000).n_items == 5000


def test_gap_lambda_examples():
    assert gap_lambda(0.01, 0.0) == 1.0
    assert gap_lambda(0.01, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert gap_lambda(0.01, 0.5) == pytest.approx(0.01, abs=1e-15)


@pytest.mark.parametrize("r", [0.01, 0.1, 0.3])
def test_gap_lambda_is_gap_squared(r):
    for s in np.linspace(0, 1, 101):
        e = np.linalg.eigvalsh(build_reduced_hamiltonian(r, s))
        assert abs((e[1] - e[0]) ** 2 - gap_lambda(r, s)) <= 1e-12


def test_classical_hamiltonian_examples():
    assert classical_hamiltonian(1.234, 0.0, 0.1, 0.3) == pytest.approx(0.5)
    assert classical_hamiltonian(math.pi / 2, 0.5, 0.5, 0.0) == pytest.approx(0.0, abs=1e-15)
    ground = np.linalg.eigvalsh(build_reduced_hamiltonian(0.01, 0.7))[0]
    assert classical_hamiltonian(fixed_point_p(0.01, 0.7), 0.5, 0.01, 0.7) == pytest.approx(ground, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(
    p=st.floats(0, 2 * math.pi, exclude_max=True),
    q=st.floats(0, 1),
    r=st.floats(0.001, 0.999),
    s=st.floats(0, 1),
)
def test_classical_hamiltonian_is_expectation(p, q, r, s):
    psi = state_from_projective(p, q)
    expect = np.vdot(psi, build_reduced_hamiltonian(r, s) @ psi).real
    assert classical_hamiltonian(p, q, r, s) == pytest.approx(expect, abs=1e-12)


def test_fixed_point_examples():
    fp = fixed_point(0.01, 1.0)
    assert fp.p_bar == pytest.approx(math.pi) and fp.q_bar == 0.5
    # direct evaluation of the lower branch at s=0
    expected = math.atan(2 * math.sqrt(0.0099) / 0.98)
    assert fixed_point(0.01, 0.0).p_bar == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.2003, abs=5e-5)
    assert fixed_point_p(0.01, branch_point(0.01)) == pytest.approx(math.pi / 2, abs=1e-15)


def test_fixed_point_minimises_classical_hamiltonian():
    from scipy.optimize import minimize

    r, s = 0.01, 0.0
    res = minimize(lambda x: classical_hamiltonian(x[0], x[1], r, s), x0=[0.5, 0.4],
                   bounds=[(0, math.pi), (0.01, 0.99)], tol=1e-14)
    assert res.x[0] == pytest.approx(fixed_point_p(r, s), abs=1e-5)
    assert res.x[1] == pytest.approx(0.5, abs=1e-5)


@pytest.mark.parametrize("r", [0.01, 0.1])
def test_fixed_point_is_stationary(r):
    h = 1e-6
    for s in np.linspace(0, 1, 101):
        p = fixed_point_p(r, s)
        dp = (classical_hamiltonian(p + h, 0.5, r, s) - classical_hamiltonian(p - h, 0.5, r, s)) / (2 * h)
        dq = (classical_hamiltonian(p, 0.5 + h, r, s) - classical_hamiltonian(p, 0.5 - h, r, s)) / (2 * h)
        assert abs(dp) <= 1e-10 and abs(dq) <= 1e-10


@pytest.mark.parametrize("r", [0.01, 0.1, 0.3])
def test_fixed_point_continuous_at_branch(r):
    sb = branch_point(r)
    left = fixed_point_p(r, sb - 1e-12)
    right = fixed_point_p(r, sb + 1e-12)
    assert abs(left - right) <= 1e-8
    assert left == pytest.approx(math.pi / 2, abs=1e-8)


def test_fixed_point_follows_printed_branches():
    r = 0.05
    k = 2 * math.sqrt((1 - r) * r)
    for s in np.linspace(0, 1, 41):
        if abs(s - branch_point(r)) < 1e-9:
            continue
        if s >= branch_point(r):
            printed = math.pi - math.atan(k * (1 - s) / (2 * r + 2 * s - 2 * r * s - 1))
        else:
            printed = math.atan(k * (1 - s) / (2 * r * s - 2 * r - 2 * s + 1))
        assert fixed_point_p(r, s) == pytest.approx(printed, abs=1e-13)


def test_fixed_point_requires_small_r():
    with pytest.raises(DomainError):
        fixed_point(0.5, 0.2)


@pytest.mark.parametrize("r", [0.01, 0.05, 0.3])
def test_ground_state_maps_to_fixed_point(r):
    for s in np.linspace(0, 1, 11):
        p, q = projective_from_state(reduced_ground_state(r, s))
        assert q == pytest.approx(0.5, abs=1e-12)
        assert p == pytest.approx(fixed_point_p(r, s), abs=1e-10)


def test_initial_state_is_ground_state():
    model = FullSearchModel.first_marked(10, 1)
    psi = model.initial_state()
    np.testing.assert_allclose(build_full_hamiltonian(model, 0.0) @ psi, 0.0, atol=1e-15)
    np.testing.assert_allclose(model.reduce_state(psi), [math.sqrt(0.9), math.sqrt(0.1)], atol=1e-15)
    _, vecs = reduced_spectrum(0.1, 0.0)
    assert abs(np.vdot(vecs[:, 0], [math.sqrt(0.9), math.sqrt(0.1)])) == pytest.approx(1.0, abs=1e-14)


def test_state_from_projective_examples():
    np.testing.assert_allclose(state_from_projective(0.0, 0.0), np.array([1, 1j]) / math.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(state_from_projective(0.0, 1.0), np.array([1, -1j]) / math.sqrt(2), atol=1e-15)


def test_projective_roundtrip():
    rng = np.random.default_rng(7)
    p = rng.uniform(0, 2 * math.pi, 100)
    q = rng.uniform(0.001, 0.999, 100)
    psi = state_from_projective(p, q)
    np.testing.assert_allclose(np.linalg.norm(psi, axis=-1), 1.0, atol=1e-15)
    p2, q2 = projective_from_state(psi)
    np.testing.assert_allclose(q2, q, atol=1e-12)
    np.testing.assert_allclose(np.angle(np.exp(1j * (p2 - p))), 0.0, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(p=st.floats(0, 2 * math.pi, exclude_max=True), q=st.floats(1e-6, 1 - 1e-6), phase=st.floats(0, 2 * math.pi))
def test_projective_ignores_global_phase(p, q, phase):
    psi = state_from_projective(p, q) * np.exp(1j * phase)
    p2, q2 = projective_from_state(psi)
    assert q2 == pytest.approx(q, abs=1e-12)
    assert abs(np.angle(np.exp(1j * (p2 - p)))) <= 1e-9
