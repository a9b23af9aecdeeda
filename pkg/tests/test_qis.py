import numpy as np
import pytest

from conftest import random_hermitian
from qisflow.errors import BoundaryRho, DimMismatch
from qisflow.qis import (
    TracePotential,
    fisher_metric,
    fisher_metric_eigenbasis,
    grad_L,
    m_of_L,
    qis_rhs,
    random_interior_density,
    random_tangent,
    sld,
    sld_residual,
    wirtinger_matrix,
)


def sld_by_linear_system(rho, xi):
    """Solve (rho L + L rho)/2 = xi as an m^2 x m^2 system (column-major vec)."""
    m = rho.shape[0]
    eye = np.eye(m)
    op = 0.5 * (np.kron(eye, rho) + np.kron(rho.T, eye))
    vec = np.linalg.solve(op, xi.reshape(-1, order="F"))
    return vec.reshape((m, m), order="F")


def test_sld_commuting_case():
    assert np.allclose(sld(np.diag([0.5, 0.5]), np.diag([0.3, -0.3])), np.diag([0.6, -0.6]), atol=1e-15)


def test_sld_off_diagonal_example():
    ell = sld(np.diag([0.75, 0.25]), [[0, 0.1], [0.1, 0]])
    assert np.allclose(ell, [[0, 0.2], [0.2, 0]], atol=1e-15)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_sld_against_linear_system(rng, m):
    for _ in range(10):
        rho = random_interior_density(m, int(rng.integers(2**31)))
        xi = random_tangent(m, rng)
        ell = sld(rho, xi)
        assert sld_residual(rho, xi, ell) < 1e-9
        assert np.linalg.norm(ell - sld_by_linear_system(rho, xi)) < 1e-8 * max(1.0, np.linalg.norm(ell))
        assert np.linalg.norm(ell - ell.conj().T) < 1e-12


def test_sld_rejects_boundary_and_mismatch(rng):
    with pytest.raises(BoundaryRho):
        sld(np.diag([1.0, 0.0]), np.diag([1.0, -1.0]))
    with pytest.raises(DimMismatch):
        sld(np.eye(3) / 3, np.diag([1.0, -1.0]))
    with pytest.raises(ValueError):
        sld(np.eye(2) / 2, np.diag([1.0, 1.0]))


def test_fisher_examples():
    z = np.diag([1.0, -1.0])
    assert abs(fisher_metric(np.diag([0.5, 0.5]), z, z) - 4) < 1e-12
    x = np.array([[0, 0.1], [0.1, 0]])
    assert abs(fisher_metric(np.diag([0.75, 0.25]), x, x) - 0.04) < 1e-14
    assert abs(fisher_metric_eigenbasis(np.diag([0.75, 0.25]), x, x) - 0.04) < 1e-14


def test_fisher_symmetric_positive_and_forms_agree(rng):
    for m in (2, 3, 5):
        rho = random_interior_density(m, int(rng.integers(2**31)))
        a, b = random_tangent(m, rng), random_tangent(m, rng)
        g_ab = fisher_metric(rho, a, b)
        assert abs(g_ab - fisher_metric(rho, b, a)) < 1e-10 * max(1, abs(g_ab))
        assert fisher_metric(rho, a, a) > 0
        assert abs(g_ab - fisher_metric_eigenbasis(rho, a, b)) < 1e-10 * max(1, abs(g_ab))


def test_fisher_on_diagonal_matches_weighted_sum(rng):
    for m in (2, 3, 5):
        theta = rng.dirichlet(np.ones(m))
        z1, z2 = rng.standard_normal(m), rng.standard_normal(m)
        z1 -= z1.mean()
        z2 -= z2.mean()
        expect = np.sum(z1 * z2 / theta)
        got = fisher_metric(np.diag(theta), np.diag(z1), np.diag(z2))
        assert abs(got - expect) < 1e-12 * max(1.0, abs(expect))


def test_m_of_L_examples():
    assert np.array_equal(m_of_L(TracePotential.aleh([2.0, 1.0])), np.diag([-4.0, -2.0]))
    assert np.array_equal(m_of_L(TracePotential(np.eye(3), 1.0)), np.eye(3))


def test_m_of_L_matches_wirtinger_finite_differences(rng):
    pot = TracePotential(random_hermitian(rng, 3), 0.5)
    rho = random_interior_density(3, 11)
    assert np.max(np.abs(m_of_L(pot) - wirtinger_matrix(pot, rho))) < 1e-7


def test_grad_examples(rng):
    rho = random_interior_density(4, 5)
    assert np.max(np.abs(grad_L(rho, TracePotential(np.eye(4), -1.7)))) < 1e-15
    g = grad_L(np.diag([0.5, 0.5]), TracePotential.aleh([2.0, 1.0]))
    assert np.allclose(g, np.diag([-0.5, 0.5]), atol=1e-15)


def test_grad_is_tangent(rng):
    for m in (2, 3, 5):
        g = grad_L(random_interior_density(m, int(rng.integers(2**31))), TracePotential.aleh(rng.uniform(-1, 2, m)))
        assert np.linalg.norm(g - g.conj().T) < 1e-15
        assert abs(np.trace(g)) < 1e-12


def test_grad_defining_property_direct(rng):
    # <grad L, xi>_rho = dL(xi); the potential is linear so dL(xi) = alpha tr(A xi)
    for _ in range(10):
        rho = random_interior_density(3, int(rng.integers(2**31)))
        pot = TracePotential(random_hermitian(rng, 3), 0.8)
        xi = random_tangent(3, rng)
        lhs = fisher_metric(rho, grad_L(rho, pot), xi)
        rhs = 0.8 * np.trace(pot.coeff @ xi).real
        assert abs(lhs - rhs) < 1e-10 * max(1, abs(rhs))


def test_grad_of_nonlinear_potential_uses_wirtinger_path(rng):
    # L(rho) = tr(rho^2) has Wirtinger matrix 2 rho
    rho = random_interior_density(3, 21)

    def purity(r):
        return float(np.trace(r @ r).real)

    g = grad_L(rho, purity)
    mm = 2 * rho
    expect = 0.5 * (rho @ mm + mm @ rho) - np.trace(rho @ mm).real * rho
    assert np.max(np.abs(g - expect)) < 1e-8


def test_qis_rhs_examples(rng):
    assert np.allclose(qis_rhs(np.diag([0.5, 0.5]), [2.0, 1.0]), np.diag([0.5, -0.5]), atol=1e-15)
    rho = random_interior_density(4, 3)
    assert np.max(np.abs(qis_rhs(rho, np.ones(4)))) < 1e-15


def test_qis_rhs_near_vertex():
    eps, m = 1e-6, 4
    c = np.array([3.0, 1.0, -0.5, 2.0])
    rho = np.diag([1 - eps] + [eps / (m - 1)] * (m - 1))
    assert np.linalg.norm(qis_rhs(rho, c)) < 1e-5 * np.max(np.abs(c))


def test_qis_rhs_keeps_diagonal_exactly(rng):
    theta = rng.dirichlet(np.ones(5))
    out = qis_rhs(np.diag(theta), rng.uniform(-1, 3, 5))
    assert np.all(out[~np.eye(5, dtype=bool)] == 0)


def test_qis_rhs_is_minus_gradient(rng):
    rho = random_interior_density(3, 9)
    c = rng.uniform(0, 2, 3)
    assert np.array_equal(qis_rhs(rho, c), -grad_L(rho, TracePotential.aleh(c)))


def test_random_interior_density():
    for seed in (0, 1, 99):
        rho = random_interior_density(4, seed)
        assert abs(np.trace(rho) - 1) < 1e-12
        assert np.linalg.eigvalsh(rho)[0] > 0
        assert np.array_equal(rho, random_interior_density(4, seed))
