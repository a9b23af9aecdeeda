import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as nps

from strategies import sphere_point
from qisflow.errors import DimMismatch
from qisflow.sphere import (
    aleh_rhs,
    grad_lambda,
    great_circle,
    in_S_m,
    potential_lambda,
    random_sphere_state,
    random_unit_tangent,
    tangent_project,
)

S = 1 / np.sqrt(2)


def test_rhs_vanishes_at_eigenvectors():
    for k in range(3):
        e = np.eye(3)[k]
        assert np.array_equal(aleh_rhs(e, [3.0, 2.0, 1.0]), np.zeros(3))


def test_rhs_vanishes_for_identity_correlation(rng):
    w = random_sphere_state(4, rng)
    assert np.max(np.abs(aleh_rhs(w, np.ones(4)))) < 1e-15


def test_rhs_hand_example():
    assert np.allclose(aleh_rhs([S, S], [2, 1]), [0.353553, -0.353553], atol=1e-6)
    assert np.allclose(aleh_rhs([S, S], [2, 1]), [0.5 * S, -0.5 * S], atol=1e-15)


def test_potential_examples(rng):
    assert potential_lambda([1, 0], [2, 1]) == -1
    assert abs(potential_lambda(random_sphere_state(5, rng), np.ones(5)) + 0.5) < 1e-15
    assert abs(potential_lambda([S, S], [2, 1]) + 0.75) < 1e-15


def test_grad_examples():
    assert np.array_equal(grad_lambda([1, 0, 0], [1, 2, 3]), np.zeros(3))
    assert np.allclose(grad_lambda([S, S], [2, 1]), [-0.353553, 0.353553], atol=1e-6)


@given(sphere_point(), st.data())
def test_grad_is_exact_negation_of_rhs(w, data):
    c = data.draw(nps.arrays(float, w.size, elements=st.floats(-3, 3)))
    assert np.array_equal(grad_lambda(w, c), -aleh_rhs(w, c))


def test_gradient_matches_great_circle_derivative(rng):
    # d/dtau Lambda(gamma(tau)) at 0 must equal <grad Lambda, u>
    c = np.array([1.3, -0.4, 2.2, 0.7])
    h = 1e-5
    for _ in range(20):
        w = random_sphere_state(4, rng)
        u = random_unit_tangent(w, rng)
        fd = (potential_lambda(great_circle(w, u, h), c) - potential_lambda(great_circle(w, u, -h), c)) / (2 * h)
        assert abs(fd - np.dot(grad_lambda(w, c), u)) < 1e-6


def test_rhs_is_tangent(rng):
    c = rng.uniform(-2, 2, 5)
    w = random_sphere_state(5, rng)
    assert abs(np.dot(w, aleh_rhs(w, c))) < 1e-14


def test_in_S_m_examples():
    assert in_S_m([S, S])
    assert not in_S_m([1, 0])
    assert not in_S_m([1e-13, np.sqrt(1 - 1e-26)])


def test_tangent_project_examples(rng):
    w = random_sphere_state(3, rng)
    v = tangent_project(w, rng.standard_normal(3))
    assert np.max(np.abs(tangent_project(w, v) - v)) < 1e-15
    assert np.max(np.abs(tangent_project(w, w))) < 1e-15
    assert np.array_equal(tangent_project([1, 0, 0], [1, 2, 3]), [0, 2, 3])


@given(sphere_point(), st.data())
def test_hyperplane_invariance(w, data):
    k = data.draw(st.integers(0, w.size - 1))
    w = w.copy()
    w[k] = 0.0
    if np.linalg.norm(w) < 0.1:
        return
    w /= np.linalg.norm(w)
    c = data.draw(nps.arrays(float, w.size, elements=st.floats(-3, 3)))
    assert aleh_rhs(w, c)[k] == 0.0


@given(sphere_point(), st.data())
def test_sign_equivariance(w, data):
    if w.size > 4:
        w = w[:4] / np.linalg.norm(w[:4])
    c = data.draw(nps.arrays(float, w.size, elements=st.floats(-3, 3)))
    base = aleh_rhs(w, c)
    for sigma in itertools.product((-1.0, 1.0), repeat=w.size):
        sigma = np.array(sigma)
        assert np.allclose(aleh_rhs(sigma * w, c), sigma * base, rtol=0, atol=1e-14)


def test_validation():
    with pytest.raises(ValueError):
        aleh_rhs([1, 1], [1, 2])
    with pytest.raises(DimMismatch):
        aleh_rhs([1, 0], [1, 2, 3])
