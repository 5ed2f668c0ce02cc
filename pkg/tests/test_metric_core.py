import itertools
import math
import random
from fractions import Fraction

import pytest

from sphere_bounds.metric_core import (
    DomainError,
    LogValue,
    ParameterError,
    WeightEnumerator,
    WeightSpectrum,
    average_weight,
    ball_size,
    convolve,
    hamming_spectrum,
    lee_spectrum,
    log_q_of_bigint,
    ogf_from_spectrum,
    ogf_pow,
    poly_leq_coefficientwise,
    power_sequence,
    sphere_size,
    upper_concave_envelope,
)


def brute_hamming_count(q, ell, t):
    # direct enumeration over all q^ell tuples
    total = 0
    for word in itertools.product(range(q), repeat=ell):
        if sum(1 for c in word if c != 0) == t:
            total += 1
    return total


def brute_lee_count(n, ell, t):
    total = 0
    for word in itertools.product(range(n), repeat=ell):
        if sum(min(c, n - c) for c in word) == t:
            total += 1
    return total


def test_hamming_spectrum_counts():
    assert hamming_spectrum(2).counts == (1, 1)
    assert hamming_spectrum(5).counts == (1, 4)
    assert hamming_spectrum(3).mu == 1
    assert hamming_spectrum(3).alphabet_size == 3


def test_hamming_spectrum_rejects_tiny_alphabet():
    with pytest.raises(ParameterError):
        hamming_spectrum(1)


def test_lee_spectrum_examples():
    assert lee_spectrum(5).counts == (1, 2, 2)
    assert lee_spectrum(4).counts == (1, 2, 1)
    assert lee_spectrum(2).counts == (1, 1)
    assert lee_spectrum(9).counts == (1, 2, 2, 2, 2)


@pytest.mark.parametrize("n", range(2, 10))
def test_lee_spectrum_matches_enumeration(n):
    s = lee_spectrum(n)
    mu = n // 2
    assert s.mu == mu
    for t in range(mu + 1):
        assert s.counts[t] == brute_lee_count(n, 1, t)


def test_lee_log_base_defaults_to_alphabet_size():
    assert lee_spectrum(7).log_base == 7.0
    assert lee_spectrum(7, log_base=2.0).log_base == 2.0


def test_spectrum_validation():
    with pytest.raises(ParameterError):
        WeightSpectrum(counts=(2, 1), log_base=2.0)  # zero-weight count must be 1
    with pytest.raises(ParameterError):
        WeightSpectrum(counts=(1, -1), log_base=2.0)
    with pytest.raises(ParameterError):
        WeightSpectrum(counts=(1, 1, 0), log_base=2.0)  # trailing zero
    with pytest.raises(ParameterError):
        WeightSpectrum(counts=(1,), log_base=2.0)
    with pytest.raises(ParameterError):
        WeightSpectrum(counts=(1, 2), log_base=1.0)


def test_average_weight_is_exact_fraction():
    w = average_weight(hamming_spectrum(5))
    assert w == Fraction(4, 5)
    assert isinstance(w, Fraction)
    assert average_weight(lee_spectrum(5)) == Fraction(6, 5)
    assert average_weight(lee_spectrum(4)) == Fraction(1, 1)


def test_convolve_small():
    assert convolve([1, 1], [1, 1]) == [1, 2, 1]
    assert convolve([1, 2, 2], [1, 2, 2]) == [1, 4, 8, 8, 4]
    assert convolve([3], [5]) == [15]


def test_power_sequence_matches_repeated_convolution():
    base = [1, 2, 2]
    direct = [1]
    for k in range(1, 6):
        direct = convolve(direct, base)
        assert power_sequence(base, k) == direct
    assert power_sequence(base, 0) == [1]


def test_weight_enumerator_validation():
    with pytest.raises(ParameterError):
        WeightEnumerator(coeffs=(1, -2))
    with pytest.raises(ParameterError):
        WeightEnumerator(coeffs=())
    f = WeightEnumerator(coeffs=(1, 2, 2))
    assert f.degree == 2
    assert f.coefficient(1) == 2
    assert f.coefficient(7) == 0
    assert f.coefficient_sum() == 5


def test_ogf_pow_additivity():
    for s in (hamming_spectrum(3), lee_spectrum(5), lee_spectrum(8)):
        f = ogf_from_spectrum(s)
        for a in range(0, 4):
            for b in range(0, 4):
                assert (f ** a) * (f ** b) == f ** (a + b)


@pytest.mark.parametrize("q,ell", [(2, 4), (3, 3), (4, 3), (5, 2)])
def test_hamming_sphere_matches_enumeration(q, ell):
    s = hamming_spectrum(q)
    for t in range(ell + 1):
        assert sphere_size(s, ell, t) == brute_hamming_count(q, ell, t)


@pytest.mark.parametrize("n,ell", [(4, 3), (5, 3), (6, 2), (7, 2)])
def test_lee_sphere_matches_enumeration(n, ell):
    s = lee_spectrum(n)
    for t in range(s.mu * ell + 1):
        assert sphere_size(s, ell, t) == brute_lee_count(n, ell, t)


def test_hamming_sphere_closed_form():
    # |S_t| = C(ell, t) (q-1)^t
    for q in (2, 3, 4, 7):
        s = hamming_spectrum(q)
        for ell in (1, 5, 10):
            for t in range(ell + 1):
                assert sphere_size(s, ell, t) == math.comb(ell, t) * (q - 1) ** t


def test_sphere_sizes_sum_to_alphabet_power():
    for s in (hamming_spectrum(4), lee_spectrum(5), lee_spectrum(9)):
        for ell in range(1, 6):
            total = sum(sphere_size(s, ell, t) for t in range(s.mu * ell + 1))
            assert total == s.alphabet_size ** ell


def test_sphere_outside_range_is_zero():
    s = lee_spectrum(5)
    assert sphere_size(s, 3, 7) == 0
    assert sphere_size(s, 3, 100) == 0


def test_sphere_rejects_bad_arguments():
    s = hamming_spectrum(2)
    with pytest.raises(ParameterError):
        sphere_size(s, 0, 0)
    with pytest.raises(ParameterError):
        sphere_size(s, 2, -1)


def test_ball_sizes():
    s = lee_spectrum(5)
    # (1 + 2z + 2z^2)^2 = 1 + 4z + 8z^2 + 8z^3 + 4z^4
    assert ball_size(s, 2, 0) == 1
    assert ball_size(s, 2, 2) == 13
    assert ball_size(s, 2, 4) == 25
    assert ball_size(s, 2, 9) == 25
    h = hamming_spectrum(3)
    assert ball_size(h, 4, 4) == 81


def test_ogf_pow_large_exponent_normalization():
    s = lee_spectrum(5)
    f = ogf_pow(ogf_from_spectrum(s), 40)
    assert f.coefficient_sum() == 5 ** 40
    assert f.degree == 80
    assert f.coefficient(0) == 1


def test_poly_leq_coefficientwise():
    assert poly_leq_coefficientwise([1, 2, 3], [1, 2, 3])
    assert poly_leq_coefficientwise([1, 2], [1, 2, 5])
    assert not poly_leq_coefficientwise([1, 2, 5], [1, 2])
    assert not poly_leq_coefficientwise([2, 1], [1, 9])
    # relative slack forgives tiny float overshoot
    assert poly_leq_coefficientwise([1.0 + 1e-12], [1.0], rel_slack=1e-9)
    assert not poly_leq_coefficientwise([1.0 + 1e-6], [1.0], rel_slack=1e-9)
    f = WeightEnumerator(coeffs=(1, 3, 2))
    g = WeightEnumerator(coeffs=(1, 3, 2, 1))
    assert poly_leq_coefficientwise(f, g)


def test_order_preservation_under_products():
    # coefficientwise f <= g implies f*h <= g*h for non-negative h
    rng = random.Random(20240901)
    for _ in range(50):
        deg = rng.randint(0, 6)
        f = [rng.randint(0, 50) for _ in range(deg + 1)]
        g = [c + rng.randint(0, 20) for c in f]
        h = [rng.randint(0, 30) for _ in range(rng.randint(1, 6))]
        assert poly_leq_coefficientwise(convolve(f, h), convolve(g, h))


def test_log_q_of_bigint_exact_powers():
    v = log_q_of_bigint(2 ** 4096, 2.0)
    assert v.value == 4096.0
    assert v.base == 2.0
    assert log_q_of_bigint(1, 2.0).value == 0.0
    assert log_q_of_bigint(3 ** 100, 3.0).value == pytest.approx(100.0, rel=1e-13)
    assert log_q_of_bigint(10 ** 100, 10.0).value == pytest.approx(100.0, rel=1e-13)


def test_log_q_of_bigint_rejects_nonpositive():
    with pytest.raises(DomainError):
        log_q_of_bigint(0, 2.0)
    with pytest.raises(DomainError):
        log_q_of_bigint(-5, 2.0)


def test_log_q_of_bigint_product_property():
    # log(a*b) == log a + log b up to documented precision
    rng = random.Random(77)
    for _ in range(40):
        a = rng.getrandbits(rng.randint(10, 4096)) | 1
        b = rng.getrandbits(rng.randint(10, 4096)) | 1
        lhs = log_q_of_bigint(a * b, 2.0).value
        rhs = log_q_of_bigint(a, 2.0).value + log_q_of_bigint(b, 2.0).value
        assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-11)


def test_log_value_minus_infinity():
    v = LogValue.minus_infinity(2.0)
    assert v.is_minus_infinity
    assert float(v) == -math.inf
    assert not LogValue(value=3.0, base=2.0).is_minus_infinity


def chord_max_envelope(values):
    # O(n^2) oracle: at index i, max over all chords spanning i
    n = len(values)
    out = list(values)
    for i in range(n):
        if values[i] == -math.inf:
            continue
        best = values[i]
        for a in range(0, i + 1):
            if values[a] == -math.inf:
                continue
            for b in range(i, n):
                if values[b] == -math.inf:
                    continue
                if a == b:
                    cand = values[a]
                else:
                    frac = (i - a) / (b - a)
                    cand = values[a] + frac * (values[b] - values[a])
                if cand > best:
                    best = cand
        out[i] = best
    return out


def test_envelope_examples():
    assert upper_concave_envelope([0.0, 3.0, 1.0, 4.0, 0.0]) == [0.0, 3.0, 3.5, 4.0, 0.0]
    assert upper_concave_envelope([0.0, 0.0, 2.0]) == [0.0, 1.0, 2.0]
    assert upper_concave_envelope([5.0, 1.0, 1.0, 5.0]) == [5.0, 5.0, 5.0, 5.0]
    assert upper_concave_envelope([1.0]) == [1.0]
    assert upper_concave_envelope([]) == []


def test_envelope_matches_chord_oracle():
    rng = random.Random(1234)
    for _ in range(60):
        n = rng.randint(1, 14)
        vals = [rng.uniform(-10, 10) for _ in range(n)]
        env = upper_concave_envelope(vals)
        oracle = chord_max_envelope(vals)
        for e, o in zip(env, oracle):
            assert e == pytest.approx(o, abs=1e-9)


def test_envelope_dominates_input_and_is_idempotent():
    rng = random.Random(99)
    for _ in range(60):
        n = rng.randint(1, 20)
        vals = [rng.uniform(-100, 100) for _ in range(n)]
        env = upper_concave_envelope(vals)
        assert all(e >= v for e, v in zip(env, vals))
        assert upper_concave_envelope(env) == env


def test_envelope_output_is_concave():
    rng = random.Random(5150)
    for _ in range(40):
        n = rng.randint(3, 25)
        vals = [rng.uniform(-50, 50) for _ in range(n)]
        env = upper_concave_envelope(vals)
        diffs = [env[i + 1] - env[i] for i in range(n - 1)]
        for a, b in zip(diffs, diffs[1:]):
            assert b <= a + 1e-9


def test_envelope_preserves_minus_infinity_slots():
    vals = [-math.inf, 0.0, -math.inf]
    assert upper_concave_envelope(vals) == vals
    assert upper_concave_envelope([0.0, -math.inf, 2.0]) == [0.0, -math.inf, 2.0]
    got = upper_concave_envelope([-math.inf, 0.0, 0.0, 4.0, -math.inf])
    assert got == [-math.inf, 0.0, 2.0, 4.0, -math.inf]


def test_envelope_rejects_nan():
    with pytest.raises(DomainError):
        upper_concave_envelope([0.0, math.nan, 1.0])
