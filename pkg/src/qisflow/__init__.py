"""Oja's averaged learning equation on the sphere and its realization as a
gradient flow on density matrices with the SLD Fisher metric."""

from .errors import (
    BoundaryReached,
    BoundaryRho,
    BoundaryTheta,
    ConfigError,
    DegenerateUpdate,
    DimMismatch,
    EigNoConverge,
    NotInSm,
)
from .flow import (
    IntegratorConfig,
    conjugacy_check,
    finite_diff_gradient_check,
    integrate_qis,
    integrate_sphere,
    replicator_oracle,
)
from .hermitian import adjoint, eig_hermitian, min_eigenvalue, multiply, trace
from .immersion import mu, mu_star, pushforward_grad_lambda, sign_action
from .oja import CorrelationModel, CouplingState, SignalStream, draw_signal, oja_step_normalized, oja_step_truncated, run_learning
from .qis import TracePotential, fisher_metric, grad_L, m_of_L, qis_rhs, random_interior_density, sld
from .sphere import aleh_rhs, grad_lambda, in_S_m, potential_lambda, tangent_project
from .trajectory import Trajectory

__version__ = "0.1.0"
