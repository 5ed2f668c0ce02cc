"""Exact sphere and ball sizes in coordinate-additive metrics, with entropy
and closed-form bounds; the sum-rank (matrix-block rank) metric is the
flagship alphabet."""

from .entropy import (
    BoltzmannModel,
    WindowBound,
    delta_of_epsilon,
    entropy,
    lb_entropy_max,
    lb_entropy_window_sum,
    log_partition,
    q_ary_entropy,
    rho_of_beta,
    saddle_point_direct,
    solve_beta,
    ub_entropy_ball,
    ub_entropy_sphere,
    weight_variance,
)
from .metric_core import (
    DomainError,
    LogValue,
    ParameterError,
    WeightEnumerator,
    WeightSpectrum,
    average_weight,
    ball_size,
    hamming_spectrum,
    lee_spectrum,
    log_q_of_bigint,
    ogf_from_spectrum,
    ogf_pow,
    poly_leq_coefficientwise,
    sphere_size,
    upper_concave_envelope,
)
from .sumrank import (
    BoundKind,
    ChainPolynomials,
    SumRankConstants,
    SumRankParams,
    brute_force_spectrum,
    constants_for,
    exact_sphere_sequence,
    gamma_q,
    gamma_q_m_eta,
    integral_ub_constant,
    kappa,
    kappa_base,
    kappa_log_q,
    lb_chain_polynomials,
    lb_closed_envelope,
    lb_closedform,
    log_concavity_check,
    nm_lower_bound,
    nm_upper_bound,
    num_matrices,
    prime_power_base,
    q_binomial,
    q_binomial_real,
    sumrank_spectrum,
    ub_closedform_kappa,
    ub_integral,
)

__all__ = [name for name in dir() if not name.startswith("_")]
