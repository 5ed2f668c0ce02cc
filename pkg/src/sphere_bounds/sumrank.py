"""Rank-weight block alphabets over finite fields.

One coordinate is an m x eta matrix over F_q weighted by its rank; ell
coordinates side by side carry the sum of the block ranks.  This module
builds the exact weight spectrum from the q-binomial rank count, evaluates
every closed-form upper and lower bound on sphere sizes in base-q log domain,
verifies log-concavity of the exact sequence, and provides a brute-force
enumeration oracle over small fields (prime powers included) for testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .metric_core import (
    LogValue,
    ParameterError,
    WeightEnumerator,
    WeightSpectrum,
    convolve,
    log_q_of_bigint,
    ogf_from_spectrum,
    ogf_pow,
    upper_concave_envelope,
)

# refuse brute-force enumeration beyond this many matrices
BRUTE_FORCE_LIMIT = 2**24


def prime_power_base(q: int) -> tuple[int, int]:
    """Factor q = p^k with p prime, or reject q as a field size."""
    if not isinstance(q, int) or q < 2:
        raise ParameterError(f"field size must be an integer >= 2, got {q}")
    n = q
    p = None
    d = 2
    while d * d <= n:
        if n % d == 0:
            p = d
            break
        d += 1
    if p is None:
        return q, 1  # q itself is prime
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise ParameterError(f"q = {q} is not a prime power ({p}^{k} * {n})")
    return p, k


@dataclass(frozen=True)
class SumRankParams:
    """Block shape of the sum-rank alphabet: ell blocks of m x eta over F_q."""

    q: int
    m: int
    eta: int
    ell: int

    def __post_init__(self) -> None:
        prime_power_base(self.q)
        for name in ("m", "eta", "ell"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ParameterError(f"{name} must be an integer >= 1, got {v}")

    @property
    def mu(self) -> int:
        """Largest single-block rank, min(m, eta)."""
        return min(self.m, self.eta)

    @property
    def big_m(self) -> int:
        return max(self.m, self.eta)

    @property
    def n(self) -> int:
        """Total column count eta * ell."""
        return self.eta * self.ell


class BoundKind(Enum):
    """One tag per comparison-table column; each maps to one routine."""

    EXACT_LOG = "exact_logq_norm"
    UB_ENTROPY = "ub_entropy"
    LB_ENTROPY_MAX = "lb_entropy_max"
    UB_KAPPA_CLOSED = "ub_kappa_closed"
    UB_INTEGRAL_GAMMA = "ub_integral_gamma"
    UB_INTEGRAL_KAPPA = "ub_integral_kappa"
    LB_CLOSED = "lb_closed"
    LB_CLOSED_ENVELOPE = "lb_closed_env"


# ---------------------------------------------------------------------------
# exact counts


def q_binomial(a: int, b: int, q: int) -> int:
    """Gaussian binomial [a, b]_q = prod_{i=1}^{b} (q^(a-b+i)-1)/(q^i-1), exact.

    Zero outside 0 <= b <= a.  The division is exact because the product of
    the first j numerator factors is divisible by the product of the first j
    denominator factors (subspace counting), so one big divide at the end
    stays in the integers.
    """
    if q < 2:
        raise ParameterError(f"q must be >= 2, got {q}")
    if b < 0 or b > a:
        return 0
    b = min(b, a - b)
    num = 1
    den = 1
    for i in range(1, b + 1):
        num *= q ** (a - b + i) - 1
        den *= q**i - 1
    return num // den


def q_binomial_real(a: int, b: int, x: float) -> float:
    """[a, b]_x by the same product formula for real 0 < x < 1."""
    if not 0.0 < x < 1.0:
        raise ParameterError(f"x must lie in (0, 1), got {x}")
    if b < 0 or b > a:
        return 0.0
    b = min(b, a - b)
    out = 1.0
    for i in range(1, b + 1):
        out *= (1.0 - x ** (a - b + i)) / (1.0 - x**i)
    return out


def num_matrices(q: int, m: int, eta: int, t: int) -> int:
    """Number of m x eta matrices over F_q of rank exactly t.

    [m, t]_q * prod_{i=0}^{t-1} (q^eta - q^i); symmetric in m and eta.
    """
    prime_power_base(q)
    if t < 0:
        raise ParameterError(f"rank must be >= 0, got {t}")
    if t > min(m, eta):
        return 0
    out = q_binomial(m, t, q)
    for i in range(t):
        out *= q**eta - q**i
    return out


def sumrank_spectrum(q: int, m: int, eta: int) -> WeightSpectrum:
    """Weight spectrum of a single m x eta rank-weight block over F_q."""
    mu = min(m, eta)
    counts = tuple(num_matrices(q, m, eta, t) for t in range(mu + 1))
    return WeightSpectrum(counts, float(q))


def exact_sphere_sequence(p: SumRankParams) -> WeightEnumerator:
    """All sphere sizes |S_t| for t = 0..mu*ell, as one exact polynomial."""
    return ogf_pow(ogf_from_spectrum(sumrank_spectrum(p.q, p.m, p.eta)), p.ell)


# ---------------------------------------------------------------------------
# constants


def gamma_q(q: float, rel_tol: float = 1e-12) -> float:
    """1 / prod_{i>=1} (1 - q^-i), truncated once the tail provably drops
    below rel_tol.

    The discarded tail satisfies prod_{i>N} (1 - q^-i) >= 1 - q^-N/(q-1), so
    stopping when q^-N/(q-1) < rel_tol bounds the relative error by rel_tol.
    """
    if not q > 1.0:
        raise ParameterError(f"gamma_q needs q > 1, got {q}")
    if not 0.0 < rel_tol < 1.0:
        raise ParameterError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    product = 1.0
    i = 1
    while True:
        product *= 1.0 - q ** (-i)
        if q ** (-i) / (q - 1.0) < rel_tol:
            return 1.0 / product
        i += 1
        if i > 10**6:
            raise ParameterError(f"gamma_q did not converge for q = {q}")


def gamma_q_m_eta(q: int, m: int, eta: int) -> float:
    """1 / prod over the mu largest j <= max(m, eta) of (1 - q^-j).

    Lies between 1 and gamma_q; equals the block-size-aware sharpening of
    that constant.
    """
    prime_power_base(q)
    mu, big_m = min(m, eta), max(m, eta)
    inv = 1.0
    for j in range(big_m - mu + 1, big_m + 1):
        inv *= 1.0 - q ** (-j)
    return 1.0 / inv


def kappa_base(q: int, m: int, eta: int) -> float:
    """(1 - q^-m)(1 - q^-eta) / (1 - q^-1); kappa(t) is its t-th power.

    No sign convention on its log: the base is below 1 for m = eta = 1 and
    above 1 for larger blocks.
    """
    prime_power_base(q)
    return (1.0 - q ** (-m)) * (1.0 - q ** (-eta)) / (1.0 - 1.0 / q)


def kappa(q: int, m: int, eta: int, t: int) -> float:
    if t < 0:
        raise ParameterError(f"kappa exponent must be >= 0, got {t}")
    return kappa_base(q, m, eta) ** t


def kappa_log_q(q: int, m: int, eta: int, t: int) -> float:
    """log_q kappa(t) = t * log_q kappa_base; additive in t by construction."""
    if t < 0:
        raise ParameterError(f"kappa exponent must be >= 0, got {t}")
    return t * math.log(kappa_base(q, m, eta), q)


@dataclass(frozen=True)
class SumRankConstants:
    """The three block constants every closed-form bound is built from."""

    gamma_q: float
    gamma_qmn: float
    kappa_base: float

    def __post_init__(self) -> None:
        if not self.gamma_q > 1.0:
            raise ParameterError("gamma_q must exceed 1")
        if not 1.0 <= self.gamma_qmn <= self.gamma_q * (1.0 + 1e-12):
            raise ParameterError("gamma_qmn must lie in [1, gamma_q]")
        if not self.kappa_base > 0.0:
            raise ParameterError("kappa_base must be positive")


def constants_for(p: SumRankParams) -> SumRankConstants:
    return SumRankConstants(
        gamma_q=gamma_q(float(p.q)),
        gamma_qmn=gamma_q_m_eta(p.q, p.m, p.eta),
        kappa_base=kappa_base(p.q, p.m, p.eta),
    )


# ---------------------------------------------------------------------------
# single-block bounds


def _log_q(x: float, q: float) -> float:
    return math.log(x) / math.log(q)


def nm_lower_bound(q: int, m: int, eta: int, i: int) -> LogValue:
    """log_q of gamma_{q,m,eta}^(-i/mu) * [mu, i]_{1/q^2} * q^(i(m+eta-i)),
    a lower bound on the rank-i matrix count; exact at i = mu."""
    mu = min(m, eta)
    if not 0 <= i <= mu:
        raise ParameterError(f"rank index {i} outside 0..{mu}")
    g = gamma_q_m_eta(q, m, eta)
    val = (
        -(i / mu) * _log_q(g, q)
        + _log_q(q_binomial_real(mu, i, q ** (-2)), q)
        + i * (m + eta - i)
    )
    return LogValue(val, float(q))


def nm_upper_bound(q: int, m: int, eta: int, t: int) -> LogValue:
    """log_q of kappa(t) * q^(t(m+eta-t)), an upper bound on the rank-t
    matrix count; tight at t = 0 and t = 1."""
    mu = min(m, eta)
    if not 0 <= t <= mu:
        raise ParameterError(f"rank index {t} outside 0..{mu}")
    val = kappa_log_q(q, m, eta, t) + t * (m + eta - t)
    return LogValue(val, float(q))


# ---------------------------------------------------------------------------
# sphere bounds, log_q domain (unnormalized: log_q |S_t|)


def _check_radius(p: SumRankParams, t: int) -> None:
    if not 0 <= t <= p.mu * p.ell:
        raise ParameterError(f"radius {t} outside 0..{p.mu * p.ell}")


def ub_closedform_kappa(p: SumRankParams, t: int, literal_binomial: bool = False) -> LogValue:
    """Upper bound log_q(kappa(t) * C(t+ell-1, ell-1) * q^(t(m+eta-t/ell))).

    The binomial counts weak compositions of t into ell block weights.  With
    literal_binomial=True it is replaced by the constant C(ell+1-1, ell-1) =
    ell; that variant stops dominating the exact sizes at mid-range radii and
    exists so the self-check can demonstrate a corrupted bound being caught.
    """
    _check_radius(p, t)
    if literal_binomial:
        binom = math.comb(p.ell + 1 - 1, p.ell - 1)
    else:
        binom = math.comb(t + p.ell - 1, p.ell - 1)
    val = (
        kappa_log_q(p.q, p.m, p.eta, t)
        + log_q_of_bigint(binom, float(p.q)).value
        + t * (p.m + p.eta - t / p.ell)
    )
    return LogValue(val, float(p.q))


def _integral_constant_log_q(ell: int, q: float) -> float:
    if ell < 1:
        raise ParameterError(f"ell must be >= 1, got {ell}")
    if not q > 1.0:
        raise ParameterError(f"q must exceed 1, got {q}")
    lnq = math.log(q)
    s = 0.0
    for k in range(1, ell):
        s += math.log1p(math.sqrt(k * math.pi / ((k + 1) * lnq)))
    return s / lnq


def integral_ub_constant(ell: int, q: float) -> float:
    """prod_{k=1}^{ell-1} (1 + sqrt(k*pi/((k+1) ln q))), the factor a
    sum-to-integral comparison costs per convolution; empty product for
    ell = 1.  Every factor stays below 1 + sqrt(pi/ln q)."""
    return math.exp(_integral_constant_log_q(ell, q) * math.log(q))


def ub_integral(p: SumRankParams, t: int, variant: str) -> LogValue:
    """Upper bound log_q(C * integral constant * q^(t(m+eta-t/ell))) where the
    per-block factor C is gamma_q^ell (variant "gamma") or kappa(t)
    (variant "kappa")."""
    _check_radius(p, t)
    if variant == "gamma":
        head = p.ell * _log_q(gamma_q(float(p.q)), p.q)
    elif variant == "kappa":
        head = kappa_log_q(p.q, p.m, p.eta, t)
    else:
        raise ParameterError(f'variant must be "gamma" or "kappa", got {variant!r}')
    val = head + _integral_constant_log_q(p.ell, float(p.q)) + t * (p.m + p.eta - t / p.ell)
    return LogValue(val, float(p.q))


def lb_closedform(p: SumRankParams, t: int) -> LogValue:
    """Lower bound with t = t_* ell + r (0 <= r < ell):
    log_q(gamma_{q,m,eta}^(-t/mu) * C(ell, r) * q^(t(m+eta-t/ell) + r^2/ell - r)).
    """
    _check_radius(p, t)
    r = t % p.ell
    val = (
        -(t / p.mu) * _log_q(gamma_q_m_eta(p.q, p.m, p.eta), p.q)
        + log_q_of_bigint(math.comb(p.ell, r), float(p.q)).value
        + t * (p.m + p.eta - t / p.ell)
        + r * r / p.ell
        - r
    )
    return LogValue(val, float(p.q))


def lb_closed_envelope(p: SumRankParams) -> list[LogValue]:
    """Least concave majorant of the closed-form lower bounds over t=0..mu*ell.

    Still a valid lower bound pointwise: the exact log-size sequence is
    concave (see log_concavity_check), sits above the raw bounds, and the
    least concave majorant of the bounds can therefore not cross it.
    """
    raw = [lb_closedform(p, t).value for t in range(p.mu * p.ell + 1)]
    return [LogValue(v, float(p.q)) for v in upper_concave_envelope(raw)]


# ---------------------------------------------------------------------------
# polynomial lower-bound chain


@dataclass(frozen=True)
class ChainPolynomials:
    """Coefficient-wise chain p_low <= f_mid <= f_scaled <= exact spectrum.

    f_exact holds the integer coefficients of prod_{i=1}^{mu}
    (1 + q^(m+eta-2i+1) z); coefficient i equals
    q^(i(m+eta-i)) * [mu, i]_{1/q^2}.  f_mid is gamma_q^-1 times it, f_scaled
    is the same product evaluated at gamma_{q,m,eta}^(-1/mu) z, and p_low
    drops the real q-binomial factor entirely.
    """

    p_low: tuple[float, ...]
    f_mid: tuple[float, ...]
    f_scaled: tuple[float, ...]
    f_exact: tuple[int, ...]


def lb_chain_polynomials(q: int, m: int, eta: int) -> ChainPolynomials:
    prime_power_base(q)
    mu = min(m, eta)
    f_exact = [1]
    for i in range(1, mu + 1):
        f_exact = convolve(f_exact, [1, q ** (m + eta - 2 * i + 1)])
    gq_inv = 1.0 / gamma_q(float(q))
    scale = gamma_q_m_eta(q, m, eta) ** (-1.0 / mu)
    p_low = tuple(gq_inv * float(q ** (i * (m + eta - i))) for i in range(mu + 1))
    f_mid = tuple(gq_inv * float(c) for c in f_exact)
    f_scaled = tuple(float(c) * scale**i for i, c in enumerate(f_exact))
    return ChainPolynomials(p_low, f_mid, f_scaled, tuple(f_exact))


# ---------------------------------------------------------------------------
# log-concavity


def log_concavity_check(p: SumRankParams) -> tuple[bool, int | None]:
    """Verify, in exact arithmetic, that the block counts are strongly
    log-concave and the ell-fold sphere sequence is log-concave.

    For 0 < i < mu the ratio NM(i)^2 / (NM(i-1) NM(i+1)) must equal
    (q^m - q^(i-1))/(q^m - q^i) * (q^eta - q^(i-1))/(q^eta - q^i)
    * q^i (q^(i+1) - 1) / (q^(i-1) (q^i - 1)) and be >= q^2; the convolution
    power then has to satisfy s_i^2 >= s_(i-1) s_(i+1).  Returns (ok, witness
    index of the first failure).
    """
    q, m, eta = p.q, p.m, p.eta
    counts = sumrank_spectrum(q, m, eta).counts
    for i in range(1, p.mu):
        ratio = Fraction(counts[i] ** 2, counts[i - 1] * counts[i + 1])
        closed = (
            Fraction(q**m - q ** (i - 1), q**m - q**i)
            * Fraction(q**eta - q ** (i - 1), q**eta - q**i)
            * Fraction(q**i * (q ** (i + 1) - 1), q ** (i - 1) * (q**i - 1))
        )
        if ratio != closed or ratio < q * q:
            return False, i
    s = exact_sphere_sequence(p).coeffs
    for i in range(1, len(s) - 1):
        if s[i] ** 2 < s[i - 1] * s[i + 1]:
            return False, i
    return True, None


# ---------------------------------------------------------------------------
# brute-force oracle


class _GF:
    """Arithmetic in F_q, q = p^k, elements encoded as 0..q-1 (base-p digits).

    For k > 1 multiplication reduces modulo the lexicographically first monic
    irreducible polynomial of degree k, via a table when q is small.
    """

    def __init__(self, q: int):
        p, k = prime_power_base(q)
        self.q, self.p, self.k = q, p, k
        if k > 1:
            self._modpoly = _first_irreducible(p, k)
            self._mul_table = (
                [[self._mul_poly(a, b) for b in range(q)] for a in range(q)] if q <= 256 else None
            )
        else:
            self._modpoly = None
            self._mul_table = None

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def _encode(self, digits: list[int]) -> int:
        out = 0
        for d in reversed(digits):
            out = out * self.p + d
        return out

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._encode([(x + y) % self.p for x, y in zip(da, db)])

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._encode([(x - y) % self.p for x, y in zip(da, db)])

    def _mul_poly(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = _poly_rem(prod, self._modpoly, self.p)
        rem += [0] * (self.k - len(rem))
        return self._encode(rem[: self.k])

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        # a^(q-2) = a^-1 in the cyclic unit group
        out, base, e = 1, a, self.q - 2
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    # remainder of a modulo monic b, coefficients low to high over F_p
    a = a[:]
    while len(a) >= len(b):
        top = a[-1]
        if top:
            off = len(a) - len(b)
            for i in range(len(b)):
                a[off + i] = (a[off + i] - top * b[i]) % p
        a.pop()
    return a


def _first_irreducible(p: int, k: int) -> list[int]:
    # lexicographically first monic irreducible of degree k over F_p; found by
    # trial division against every monic polynomial of degree 1..k//2
    divisors = []
    for d in range(1, k // 2 + 1):
        for idx in range(p**d):
            coeffs = []
            v = idx
            for _ in range(d):
                v, r = divmod(v, p)
                coeffs.append(r)
            divisors.append(coeffs + [1])
    for idx in range(p**k):
        coeffs = []
        v = idx
        for _ in range(k):
            v, r = divmod(v, p)
            coeffs.append(r)
        cand = coeffs + [1]
        if all(any(_poly_rem(cand, div, p)) for div in divisors):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


def _matrix_rank(rows: list[list[int]], gf: _GF) -> int:
    m = len(rows)
    eta = len(rows[0])
    r = 0
    for c in range(eta):
        pivot = next((i for i in range(r, m) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = gf.inv(rows[r][c])
        for i in range(r + 1, m):
            if rows[i][c]:
                f = gf.mul(rows[i][c], inv)
                ri, rr = rows[i], rows[r]
                for j in range(c, eta):
                    ri[j] = gf.sub(ri[j], gf.mul(f, rr[j]))
        r += 1
        if r == m:
            break
    return r


def brute_force_spectrum(q: int, m: int, eta: int) -> WeightSpectrum:
    """Rank spectrum by enumerating every m x eta matrix over F_q.

    Independent of the q-binomial counting: ranks come from Gaussian
    elimination in an explicitly constructed field.  Refuses beyond
    BRUTE_FORCE_LIMIT matrices.
    """
    total = q ** (m * eta)
    if total > BRUTE_FORCE_LIMIT:
        raise ParameterError(
            f"brute force over {total} matrices exceeds the limit {BRUTE_FORCE_LIMIT}"
        )
    gf = _GF(q)
    counts = [0] * (min(m, eta) + 1)
    for idx in range(total):
        v = idx
        rows = []
        for _ in range(m):
            row = []
            for _ in range(eta):
                v, d = divmod(v, q)
                row.append(d)
            rows.append(row)
        counts[_matrix_rank(rows, gf)] += 1
    return WeightSpectrum(tuple(counts), float(q))
