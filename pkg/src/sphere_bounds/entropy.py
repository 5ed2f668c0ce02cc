"""Boltzmann-weight machinery over a weight spectrum.

Tilting the uniform distribution by base^(-beta * weight) turns the spectrum's
generating polynomial into a partition function Z(beta) = F(base^-beta).  The
mean weight rho(beta) is strictly decreasing from mu (beta -> -infinity) to 0,
so a bisection inverts it; the entropy of the tilted distribution in base-q
units, H_rho = log_q Z + beta * rho, upper-bounds normalized sphere and ball
log-sizes and drives the Chebyshev window lower bounds.  Everything here works
in log_q domain: partition sums use max-factored log-sum-exp so counts of
thousands of bits and tilts of hundreds of orders of magnitude stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .metric_core import (
    DomainError,
    LogValue,
    ParameterError,
    WeightSpectrum,
    average_weight,
    log_q_of_bigint,
)

SOLVER_RHO_TOL = 1e-12
SOLVER_MAX_ITER = 200
SOLVER_BETA_CAP = 2.0**12

Rho = Union[float, Fraction]


def _log_counts(s: WeightSpectrum) -> list[tuple[int, float]]:
    # (weight, log_q count) for the non-empty weights
    return [
        (w, log_q_of_bigint(c, s.log_base).value) for w, c in enumerate(s.counts) if c > 0
    ]


def _tilted_terms(s: WeightSpectrum, beta: float) -> list[tuple[int, float]]:
    return [(w, lc - beta * w) for w, lc in _log_counts(s)]


def log_partition(s: WeightSpectrum, beta: float) -> float:
    """log_q Z(beta) = log_q sum_w counts[w] q^(-beta w), max-factored."""
    lnq = math.log(s.log_base)
    terms = _tilted_terms(s, beta)
    top = max(t for _, t in terms)
    return top + math.log(sum(math.exp((t - top) * lnq) for _, t in terms)) / lnq


def _tilted_moments(s: WeightSpectrum, beta: float) -> tuple[float, float]:
    # (E[w], E[w^2]) under the tilted distribution
    lnq = math.log(s.log_base)
    terms = _tilted_terms(s, beta)
    top = max(t for _, t in terms)
    z = m1 = m2 = 0.0
    for w, t in terms:
        e = math.exp((t - top) * lnq)
        z += e
        m1 += w * e
        m2 += w * w * e
    return m1 / z, m2 / z


def rho_of_beta(s: WeightSpectrum, beta: float) -> float:
    """Mean weight under the tilt: x F'(x)/F(x) at x = base^-beta.

    Strictly decreasing in beta, with range the open interval (0, mu).
    """
    return _tilted_moments(s, beta)[0]


def weight_variance(s: WeightSpectrum, beta: float) -> float:
    """Weight variance under the tilt (non-negative by construction)."""
    m1, m2 = _tilted_moments(s, beta)
    return max(m2 - m1 * m1, 0.0)


@dataclass(frozen=True)
class BoltzmannModel:
    """A solved tilt: beta with rho(beta) equal to the requested mean weight.

    log_z, rho and h are in base-q units, h = log_z + beta * rho.  x is the
    tilt base^-beta (0.0 or inf when beta is too extreme for floats; every
    bound below uses the log-domain fields).
    """

    spectrum: WeightSpectrum
    beta: float
    x: float
    log_z: float
    rho: float
    h: float
    var_w: float


def solve_beta(s: WeightSpectrum, rho: Rho) -> BoltzmannModel:
    """Invert rho(beta) = rho by bisection.

    rho must lie strictly inside (0, mu).  rho equal to the exact average
    weight short-circuits to beta = 0 (the untilted distribution), which is
    why average_weight returns a Fraction.  The bracket starts at [-1, 1] and
    doubles, capped at |beta| = 2^12 as a guard; targets below double
    resolution normally saturate to the nearest representable tilt before
    the cap can fire.
    """
    mu = s.mu
    if not 0 < rho < mu:
        raise DomainError(f"rho = {rho} outside the open interval (0, {mu})")
    w_bar = average_weight(s)
    rho_f = float(rho)
    if rho == w_bar:
        beta = 0.0
        log_z = log_q_of_bigint(s.alphabet_size, s.log_base).value
        return BoltzmannModel(
            spectrum=s,
            beta=beta,
            x=1.0,
            log_z=log_z,
            rho=rho_f,
            h=log_z,
            var_w=weight_variance(s, beta),
        )

    lo, hi = -1.0, 1.0  # rho_of_beta decreases: rho(lo) high, rho(hi) low
    while rho_of_beta(s, lo) < rho_f:
        lo *= 2.0
        if -lo > SOLVER_BETA_CAP:
            raise DomainError(f"rho = {rho} too close to mu = {mu} (beta beyond {SOLVER_BETA_CAP})")
    while rho_of_beta(s, hi) > rho_f:
        hi *= 2.0
        if hi > SOLVER_BETA_CAP:
            raise DomainError(f"rho = {rho} too close to 0 (beta beyond {SOLVER_BETA_CAP})")

    beta = 0.5 * (lo + hi)
    for _ in range(SOLVER_MAX_ITER):
        got = rho_of_beta(s, beta)
        if abs(got - rho_f) <= SOLVER_RHO_TOL:
            break
        if got > rho_f:
            lo = beta
        else:
            hi = beta
        beta = 0.5 * (lo + hi)
    else:
        raise DomainError(f"bisection did not reach |rho' - rho| <= {SOLVER_RHO_TOL} for rho = {rho}")

    try:
        x = math.exp(-beta * math.log(s.log_base))
    except OverflowError:
        x = float("inf")
    log_z = log_partition(s, beta)
    return BoltzmannModel(
        spectrum=s,
        beta=beta,
        x=x,
        log_z=log_z,
        rho=rho_f,
        h=log_z + beta * rho_f,
        var_w=weight_variance(s, beta),
    )


def entropy(model: BoltzmannModel) -> float:
    """H_rho = log_q Z + beta * rho, the tilted distribution's base-q entropy."""
    return model.h


def saddle_point_direct(s: WeightSpectrum, rho: float, y: float) -> float:
    """log_q(F(y) / y^rho) for y > 0; minimized exactly at y = base^-beta(rho),
    where it equals H_rho."""
    if not y > 0.0:
        raise DomainError(f"saddle evaluation needs y > 0, got {y}")
    lnq = math.log(s.log_base)
    log_y = math.log(y) / lnq
    terms = [(w, lc + w * log_y) for w, lc in _log_counts(s)]
    top = max(t for _, t in terms)
    log_f = top + math.log(sum(math.exp((t - top) * lnq) for _, t in terms)) / lnq
    return log_f - rho * log_y


# ---------------------------------------------------------------------------
# sphere and ball upper bounds


def ub_entropy_sphere(s: WeightSpectrum, ell: int, t: int) -> LogValue:
    """H_(t/ell) bounds (1/ell) log_q |S_t| for interior radii 0 < t < mu*ell.

    Boundary radii are the caller's business (the sizes there are 1 and
    counts[mu]^ell); asking for them raises DomainError.
    """
    if ell < 1:
        raise ParameterError(f"ell must be >= 1, got {ell}")
    model = solve_beta(s, Fraction(t, ell))
    return LogValue(model.h, s.log_base)


def ub_entropy_ball(s: WeightSpectrum, ell: int, t: int) -> LogValue:
    """Normalized ball bound: H_(t/ell) while t/ell <= average weight, then
    log_q |alphabet| (balls past the mean hold almost everything)."""
    if ell < 1:
        raise ParameterError(f"ell must be >= 1, got {ell}")
    rho = Fraction(t, ell)
    if not 0 < rho <= s.mu:
        raise DomainError(f"rho = {rho} outside (0, {s.mu}]")
    if rho <= average_weight(s):
        return LogValue(solve_beta(s, rho).h, s.log_base)
    return LogValue(log_q_of_bigint(s.alphabet_size, s.log_base).value, s.log_base)


# ---------------------------------------------------------------------------
# Chebyshev window lower bounds


@dataclass(frozen=True)
class WindowBound:
    """Lower bounds on sphere sizes in the radius window |j| < delta around
    t_center, from a Chebyshev mass bound on the tilted distribution.

    sum_lower_log bounds log_q of the window's total sphere mass
    (unnormalized); max_lower_log bounds max_j (1/ell) log_q |S_(t+j)|.
    delta = sqrt(ell * var_w / (1 - epsilon)) so the window keeps mass at
    least epsilon.
    """

    t_center: int
    ell: int
    epsilon: float
    delta: float
    var_w: float
    beta: float
    sum_lower_log: LogValue
    max_lower_log: LogValue


def delta_of_epsilon(ell: int, var_w: float, epsilon: float) -> float:
    """Window half-width sqrt(ell * var_w / (1 - epsilon))."""
    if ell < 1:
        raise ParameterError(f"ell must be >= 1, got {ell}")
    if var_w < 0.0:
        raise ParameterError(f"variance must be >= 0, got {var_w}")
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    return math.sqrt(ell * var_w / (1.0 - epsilon))


def _window_bound(s: WeightSpectrum, ell: int, t: int, epsilon: float) -> WindowBound:
    if ell < 1:
        raise ParameterError(f"ell must be >= 1, got {ell}")
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    model = solve_beta(s, Fraction(t, ell))
    delta = delta_of_epsilon(ell, model.var_w, epsilon)
    q = s.log_base
    log_eps = math.log(epsilon) / math.log(q)
    sum_lower = log_eps + ell * model.h - abs(model.beta) * delta
    window_count = 2 * math.ceil(delta) - 1
    max_lower = (
        model.h
        - abs(model.beta) * delta / ell
        - (math.log(window_count / epsilon) / math.log(q)) / ell
    )
    return WindowBound(
        t_center=t,
        ell=ell,
        epsilon=epsilon,
        delta=delta,
        var_w=model.var_w,
        beta=model.beta,
        sum_lower_log=LogValue(sum_lower, q),
        max_lower_log=LogValue(max_lower, q),
    )


def lb_entropy_window_sum(s: WeightSpectrum, ell: int, t: int, epsilon: float) -> WindowBound:
    """Window-sum form: sum over |j| < delta of |S_(t+j)| is at least
    epsilon * q^(ell H - |beta| delta)."""
    return _window_bound(s, ell, t, epsilon)


def lb_entropy_max(s: WeightSpectrum, ell: int, t: int, epsilon: float) -> WindowBound:
    """Max form: some radius within |j| < delta has (1/ell) log_q |S_(t+j)|
    at least H - |beta| delta / ell - (1/ell) log_q((2 ceil(delta) - 1)/epsilon).
    The window is clipped to valid radii when verified against exact sizes;
    spheres outside [0, mu*ell] are empty, so clipping changes nothing."""
    return _window_bound(s, ell, t, epsilon)


def q_ary_entropy(q: float, rho: float) -> float:
    """h_q(rho) = -rho log_q(rho/(q-1)) - (1-rho) log_q(1-rho); the Hamming
    specialization of H_rho (with rho in (0,1))."""
    if not q > 1.0:
        raise ParameterError(f"q must exceed 1, got {q}")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho = {rho} outside the open interval (0, 1)")
    lnq = math.log(q)
    return -rho * math.log(rho / (q - 1.0)) / lnq - (1.0 - rho) * math.log(1.0 - rho) / lnq
