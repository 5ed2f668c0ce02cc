"""Coordinate-additive metric machinery.

A finite alphabet with a weight function is summarized by its weight spectrum
(how many elements have each weight).  Sphere sizes of the ell-fold product
alphabet under the induced additive weight are coefficients of the ell-th
power of the spectrum's ordinary generating polynomial, computed here exactly
over big integers.  The module also provides the coefficient-wise partial
order, exact average weights, logarithms of big integers, and least concave
majorants of real sequences; everything downstream builds on these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Number = Union[int, float]


class ParameterError(ValueError):
    """A constructor or operation received an invalid parameter."""


class DomainError(ValueError):
    """An argument lies outside an operation's mathematical domain."""


# ---------------------------------------------------------------------------
# log values


@dataclass(frozen=True)
class LogValue:
    """A logarithm log_base(x), carried without ever materializing x.

    The minus-infinity state (log of an empty count) exists only through the
    explicit constructor, never as silent fallout of a log(0) call.
    """

    value: float
    base: float

    def __post_init__(self) -> None:
        if not self.base > 1.0:
            raise ParameterError(f"log base must exceed 1, got {self.base}")
        if math.isnan(self.value):
            raise ParameterError("log value cannot be NaN")

    @classmethod
    def minus_infinity(cls, base: float) -> "LogValue":
        return cls(float("-inf"), base)

    @property
    def is_minus_infinity(self) -> bool:
        return self.value == float("-inf")

    def __float__(self) -> float:
        return self.value


def _log2_of_positive_int(x: int) -> float:
    # floats hold 53 mantissa bits; shift the integer down to that width and
    # account for the shift exactly
    nbits = x.bit_length()
    if nbits <= 53:
        return math.log2(x)
    shift = nbits - 53
    return shift + math.log2(x >> shift)


def log_q_of_bigint(x: int, base: float) -> LogValue:
    """log_base(x) for a positive big integer, relative error below 1e-12.

    Exact-width floats cannot hold x once it passes 2^53; splitting off the
    top 53 bits keeps the error at the float rounding level regardless of
    size.  x <= 0 is a domain error; use LogValue.minus_infinity for empty
    counts.
    """
    if not isinstance(x, int):
        raise ParameterError(f"expected an integer, got {type(x).__name__}")
    if x <= 0:
        raise DomainError(f"logarithm of non-positive integer {x}")
    if not base > 1.0:
        raise ParameterError(f"log base must exceed 1, got {base}")
    if base == 2.0:
        return LogValue(_log2_of_positive_int(x), base)
    return LogValue(_log2_of_positive_int(x) / math.log2(base), base)


# ---------------------------------------------------------------------------
# weight spectra


@dataclass(frozen=True)
class WeightSpectrum:
    """Weight multiset of a finite alphabet.

    counts[w] is the number of alphabet elements of weight w; counts[0] must
    be 1 (exactly the identity has weight zero) and the top entry counts[mu]
    must be positive.  log_base is the base used for every logarithm attached
    to this alphabet.
    """

    counts: tuple[int, ...]
    log_base: float

    def __post_init__(self) -> None:
        if len(self.counts) < 2:
            raise ParameterError("spectrum needs at least one positive weight")
        if self.counts[0] != 1:
            raise ParameterError(f"counts[0] must be 1, got {self.counts[0]}")
        if any(c < 0 for c in self.counts):
            raise ParameterError("weight counts must be non-negative")
        if self.counts[-1] == 0:
            raise ParameterError("trailing zero counts: trim to the true maximum weight")
        if not self.log_base > 1.0:
            raise ParameterError(f"log base must exceed 1, got {self.log_base}")

    @property
    def mu(self) -> int:
        """Maximum weight of a single coordinate."""
        return len(self.counts) - 1

    @property
    def alphabet_size(self) -> int:
        return sum(self.counts)


def hamming_spectrum(q: int) -> WeightSpectrum:
    """Alphabet of q symbols, weight 0 for the zero symbol and 1 otherwise."""
    if q < 2:
        raise ParameterError(f"Hamming alphabet needs q >= 2, got {q}")
    return WeightSpectrum((1, q - 1), float(q))


def lee_spectrum(n: int, log_base: float | None = None) -> WeightSpectrum:
    """Z/nZ under the Lee weight min(a, n - a).

    The log base defaults to the alphabet size n.
    """
    if n < 2:
        raise ParameterError(f"Lee alphabet needs n >= 2, got {n}")
    counts = [0] * (n // 2 + 1)
    for a in range(n):
        counts[min(a, n - a)] += 1
    return WeightSpectrum(tuple(counts), float(n) if log_base is None else float(log_base))


def average_weight(s: WeightSpectrum) -> Fraction:
    """Mean weight of a uniformly random alphabet element, as an exact rational.

    Exactness matters: this is the beta = 0 special input of the Boltzmann
    solver and tests must hit it without float noise.
    """
    return Fraction(sum(w * c for w, c in enumerate(s.counts)), s.alphabet_size)


# ---------------------------------------------------------------------------
# generating polynomials


def convolve(a: Sequence[Number], b: Sequence[Number]) -> list:
    """Product of two coefficient sequences (schoolbook; exact on ints)."""
    if not a or not b:
        raise ParameterError("cannot convolve an empty coefficient sequence")
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def power_sequence(coeffs: Sequence[Number], ell: int) -> list:
    """coeffs**ell by binary exponentiation, one convolution per bit."""
    if ell < 0:
        raise ParameterError(f"polynomial power needs ell >= 0, got {ell}")
    result = [coeffs[0] ** 0]  # multiplicative identity of the coefficient type
    base = list(coeffs)
    e = ell
    while e:
        if e & 1:
            result = convolve(result, base)
        e >>= 1
        if e:
            base = convolve(base, base)
    return result


@dataclass(frozen=True)
class WeightEnumerator:
    """Polynomial with non-negative big-integer coefficients.

    Coefficient t of the ell-th power counts the elements of the product
    alphabet with total weight exactly t.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ParameterError("enumerator needs at least the constant coefficient")
        if any((not isinstance(c, int)) or c < 0 for c in self.coeffs):
            raise ParameterError("enumerator coefficients must be non-negative integers")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, t: int) -> int:
        if t < 0:
            raise ParameterError(f"coefficient index must be >= 0, got {t}")
        return self.coeffs[t] if t <= self.degree else 0

    def coefficient_sum(self) -> int:
        """Value at z = 1: the total number of enumerated elements."""
        return sum(self.coeffs)

    def __mul__(self, other: "WeightEnumerator") -> "WeightEnumerator":
        return WeightEnumerator(tuple(convolve(self.coeffs, other.coeffs)))

    def __pow__(self, ell: int) -> "WeightEnumerator":
        return WeightEnumerator(tuple(power_sequence(self.coeffs, ell)))


def ogf_from_spectrum(s: WeightSpectrum) -> WeightEnumerator:
    """Ordinary generating polynomial sum_w counts[w] z^w of one coordinate."""
    return WeightEnumerator(s.counts)


def ogf_pow(f: WeightEnumerator, ell: int) -> WeightEnumerator:
    """f**ell exactly; the enumerator of ell independent coordinates."""
    return f**ell


def sphere_size(s: WeightSpectrum, ell: int, t: int) -> int:
    """Number of length-ell words of total weight exactly t (0 beyond mu*ell)."""
    if ell < 1:
        raise ParameterError(f"sphere needs ell >= 1, got {ell}")
    if t < 0:
        raise ParameterError(f"sphere radius must be >= 0, got {t}")
    return ogf_pow(ogf_from_spectrum(s), ell).coefficient(t)


def ball_size(s: WeightSpectrum, ell: int, t: int) -> int:
    """Number of length-ell words of total weight at most t."""
    if ell < 1:
        raise ParameterError(f"ball needs ell >= 1, got {ell}")
    if t < 0:
        raise ParameterError(f"ball radius must be >= 0, got {t}")
    coeffs = ogf_pow(ogf_from_spectrum(s), ell).coeffs
    return sum(coeffs[: t + 1])


def poly_leq_coefficientwise(
    f: Union[WeightEnumerator, Sequence[Number]],
    g: Union[WeightEnumerator, Sequence[Number]],
    rel_slack: float = 0.0,
) -> bool:
    """Coefficient-wise f <= g; missing coefficients read as zero.

    rel_slack > 0 admits float evaluation noise on either side: coefficient i
    passes when f_i <= g_i + rel_slack * max(|f_i|, |g_i|).  Exact integer
    comparisons use the default 0.
    """
    fc = f.coeffs if isinstance(f, WeightEnumerator) else list(f)
    gc = g.coeffs if isinstance(g, WeightEnumerator) else list(g)
    n = max(len(fc), len(gc))
    for i in range(n):
        fi = fc[i] if i < len(fc) else 0
        gi = gc[i] if i < len(gc) else 0
        slack = rel_slack * max(abs(fi), abs(gi)) if rel_slack else 0
        if fi > gi + slack:
            return False
    return True


# ---------------------------------------------------------------------------
# concave envelope


def _cross(o: tuple[float, float], a: tuple[float, float], b: tuple[float, float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _envelope_pass(values: list[float]) -> list[float]:
    neg_inf = float("-inf")
    points = [(float(i), v) for i, v in enumerate(values) if v != neg_inf]
    if len(points) <= 2:
        return list(values)

    # upper hull, monotone chain over x-sorted points
    hull: list[tuple[float, float]] = []
    for p in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= 0:
            hull.pop()
        hull.append(p)

    out = list(values)
    k = 0
    for i, v in enumerate(values):
        if v == neg_inf:
            continue
        x = float(i)
        while k + 1 < len(hull) and hull[k + 1][0] < x:
            k += 1
        (x0, y0), (x1, y1) = hull[k], hull[min(k + 1, len(hull) - 1)]
        if x1 == x0:
            env = y0
        else:
            env = y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        # the majorant may never dip below the input by float rounding
        out[i] = max(env, v)
    return out


def upper_concave_envelope(seq: Sequence[float]) -> list[float]:
    """Least concave majorant of the points (i, seq[i]) at the same abscissae.

    Minus-infinity entries mark empty counts: they are excluded from the hull
    and stay minus-infinity in the output.  The hull pass is iterated to a
    fixpoint (each pass only raises values, and raises are whole float steps,
    so the loop terminates fast); that makes the operation literally
    idempotent even when chord interpolation rounds.
    """
    values = [float(v) for v in seq]
    if any(math.isnan(v) for v in values):
        raise DomainError("envelope input contains NaN")
    out = _envelope_pass(values)
    while True:
        nxt = _envelope_pass(out)
        if nxt == out:
            return out
        out = nxt
