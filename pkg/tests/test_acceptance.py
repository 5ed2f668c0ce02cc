"""Acceptance criteria, one printed pass/fail line each.

Run under pytest (lines appear with -s) or directly:
    python tests/test_acceptance.py
"""

import math
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

from sphere_bounds.entropy import (
    lb_entropy_max,
    q_ary_entropy,
    rho_of_beta,
    solve_beta,
    ub_entropy_sphere,
)
from sphere_bounds.metric_core import (
    hamming_spectrum,
    lee_spectrum,
    ogf_from_spectrum,
    ogf_pow,
    poly_leq_coefficientwise,
    power_sequence,
)
from sphere_bounds.sumrank import (
    SumRankParams,
    brute_force_spectrum,
    exact_sphere_sequence,
    gamma_q,
    lb_chain_polynomials,
    lb_closed_envelope,
    lb_closedform,
    num_matrices,
    sumrank_spectrum,
    ub_closedform_kappa,
    ub_integral,
)

SLACK = 1e-9  # log_q units, float evaluation only


@contextmanager
def criterion(line):
    try:
        yield
    except BaseException:
        print(f"{line}: FAIL")
        raise
    print(f"{line}: PASS")


def test_a01_enumeration_matches_formula():
    with criterion("A01 enumerated spectra match the counting formula (q<=3, m,eta<=3, <60s)"):
        start = time.monotonic()
        for q in (2, 3):
            for m in (1, 2, 3):
                for eta in (1, 2, 3):
                    got = brute_force_spectrum(q, m, eta)
                    want = sumrank_spectrum(q, m, eta)
                    assert got.counts == want.counts, (q, m, eta)
        assert time.monotonic() - start < 60.0


def _rank_2x2_gf2(a, b, c, d):
    if a == b == c == d == 0:
        return 0
    return 2 if (a * d - b * c) % 2 else 1


def test_a02_small_sequence_against_pair_enumeration():
    with criterion("A02 two-block sequence (1,18,93,108,36) vs 256-pair enumeration"):
        p = SumRankParams(q=2, m=2, eta=2, ell=2)
        seq = exact_sphere_sequence(p)
        assert seq.coeffs == (1, 18, 93, 108, 36)
        hist = [0] * 5
        blocks = [(a, b, c, d) for a in (0, 1) for b in (0, 1) for c in (0, 1) for d in (0, 1)]
        assert len(blocks) == 16
        for x in blocks:
            for y in blocks:
                hist[_rank_2x2_gf2(*x) + _rank_2x2_gf2(*y)] += 1
        assert tuple(hist) == seq.coeffs


def _verify_sweep_rows(p, epsilon=0.05):
    # every bound column the CSV carries, verified against the exact sizes
    seq = exact_sphere_sequence(p)
    s = sumrank_spectrum(p.q, p.m, p.eta)
    env = lb_closed_envelope(p)
    t_top = p.mu * p.ell
    ell = p.ell
    for t in range(t_top + 1):
        exact = math.log(seq.coefficient(t), p.q) / ell
        lb_c = lb_closedform(p, t).value / ell
        lb_e = env[t].value / ell
        assert lb_c <= lb_e + SLACK, (p, t, "lb_closed vs envelope")
        assert lb_e <= exact + SLACK, (p, t, "envelope vs exact")
        for name, ub in (
            ("ub_kappa_closed", ub_closedform_kappa(p, t).value / ell),
            ("ub_integral_gamma", ub_integral(p, t, "gamma").value / ell),
            ("ub_integral_kappa", ub_integral(p, t, "kappa").value / ell),
        ):
            assert exact <= ub + SLACK, (p, t, name)
        if 0 < t < t_top:
            assert exact <= ub_entropy_sphere(s, ell, t).value + SLACK, (p, t, "ub_entropy")
            wb = lb_entropy_max(s, ell, t, epsilon)
            half = math.ceil(wb.delta) - 1
            window = range(max(0, t - half), min(t_top, t + half) + 1)
            true_max = max(seq.coefficient(j) for j in window)
            assert wb.max_lower_log.value <= math.log(true_max, p.q) / ell + SLACK, (
                p, t, "window max",
            )


def test_a03_radius_sweep_sandwich():
    with criterion("A03 radius sweep q=2 m=eta=5 ell=100: all bounds sandwich exact (<5min)"):
        start = time.monotonic()
        _verify_sweep_rows(SumRankParams(q=2, m=5, eta=5, ell=100))
        assert time.monotonic() - start < 300.0


def test_a04_block_sweep_sandwich():
    with criterion("A04 block sweep q=2 m=40 n=60 t=10: all divisors sandwich exact (<5min)"):
        start = time.monotonic()
        t = 10
        for ell in [d for d in range(1, 61) if 60 % d == 0]:
            eta = 60 // ell
            p = SumRankParams(q=2, m=40, eta=eta, ell=ell)
            seq = exact_sphere_sequence(p)
            s = sumrank_spectrum(2, 40, eta)
            env = lb_closed_envelope(p)
            exact = math.log(seq.coefficient(t), 2) / ell
            assert lb_closedform(p, t).value / ell <= env[t].value / ell + SLACK
            assert env[t].value / ell <= exact + SLACK
            for ub in (
                ub_closedform_kappa(p, t).value,
                ub_integral(p, t, "gamma").value,
                ub_integral(p, t, "kappa").value,
            ):
                assert exact <= ub / ell + SLACK, (ell,)
            assert exact <= ub_entropy_sphere(s, ell, t).value + SLACK, (ell,)
            wb = lb_entropy_max(s, ell, t, 0.05)
            half = math.ceil(wb.delta) - 1
            window = range(max(0, t - half), min(p.mu * ell, t + half) + 1)
            true_max = max(seq.coefficient(j) for j in window)
            assert wb.max_lower_log.value <= math.log(true_max, 2) / ell + SLACK, (ell,)
        # single-block and single-column endpoints have closed forms
        one = exact_sphere_sequence(SumRankParams(q=2, m=40, eta=60, ell=1))
        assert one.coefficient(10) == num_matrices(2, 40, 60, 10)
        sixty = exact_sphere_sequence(SumRankParams(q=2, m=40, eta=1, ell=60))
        assert sixty.coefficient(10) == math.comb(60, 10) * (2**40 - 1) ** 10
        assert time.monotonic() - start < 300.0


def test_a05_entropy_gap_shrinks_with_more_blocks():
    with criterion("A05 entropy bound gap at rho=1 (q=2, m=eta=2): positive, smaller at ell=200"):
        s = sumrank_spectrum(2, 2, 2)
        h = solve_beta(s, 1).h
        gaps = {}
        for ell in (50, 200):
            seq = ogf_pow(ogf_from_spectrum(s), ell)
            gaps[ell] = h - math.log2(seq.coefficient(ell)) / ell
        assert gaps[50] > 0.0
        assert gaps[200] > 0.0
        assert gaps[200] < gaps[50]


def test_a06_tilt_solver_round_trip():
    with criterion("A06 tilt solver round trip <= 1e-10 on 50-point grids, six spectra"):
        spectra = [
            hamming_spectrum(2),
            hamming_spectrum(4),
            lee_spectrum(5),
            lee_spectrum(7),
            sumrank_spectrum(2, 2, 2),
            sumrank_spectrum(2, 5, 5),
        ]
        worst = 0.0
        for s in spectra:
            for k in range(1, 51):
                rho = s.mu * k / 51.0
                model = solve_beta(s, rho)
                worst = max(worst, abs(rho_of_beta(s, model.beta) - rho))
        assert worst <= 1e-10


def test_a07_hamming_entropy_specialization():
    with criterion("A07 Hamming tilt entropy equals h_q(rho) within 1e-10 (q=2,4)"):
        for q in (2, 4):
            s = hamming_spectrum(q)
            for k in range(1, 20):
                rho = k / 20.0
                assert abs(solve_beta(s, rho).h - q_ary_entropy(float(q), rho)) <= 1e-10


def test_a08_log_concavity():
    with criterion("A08 log-concavity: exact block ratios >= q^2, sweep sequence concave"):
        for q in (2, 3):
            for m in range(1, 7):
                for eta in range(1, 7):
                    mu = min(m, eta)
                    for i in range(1, mu):
                        num = Fraction(num_matrices(q, m, eta, i)) ** 2
                        den = Fraction(num_matrices(q, m, eta, i - 1)) * Fraction(
                            num_matrices(q, m, eta, i + 1)
                        )
                        assert num / den >= q * q, (q, m, eta, i)
        seq = exact_sphere_sequence(SumRankParams(q=2, m=5, eta=5, ell=100)).coeffs
        for i in range(1, len(seq) - 1):
            assert seq[i] * seq[i] >= seq[i - 1] * seq[i + 1], i


def test_a09_chain_inequalities():
    with criterion("A09 polynomial chain holds coefficientwise (q<=3, m,eta<=4, ell<=3)"):
        for q in (2, 3):
            for m in range(1, 5):
                for eta in range(1, 5):
                    c = lb_chain_polynomials(q, m, eta)
                    nm = [num_matrices(q, m, eta, i) for i in range(min(m, eta) + 1)]
                    for ell in (1, 2, 3):
                        low = power_sequence(list(c.p_low), ell)
                        mid = power_sequence(list(c.f_mid), ell)
                        scaled = power_sequence(list(c.f_scaled), ell)
                        exact = power_sequence(nm, ell)
                        assert poly_leq_coefficientwise(low, mid, rel_slack=1e-9)
                        assert poly_leq_coefficientwise(mid, scaled, rel_slack=1e-9)
                        assert poly_leq_coefficientwise(scaled, exact, rel_slack=1e-9)


def test_a10_partition_constant_reference_value():
    with criterion("A10 gamma_2 inside [3.46274, 3.46275]"):
        g = gamma_q(2.0)
        assert 3.46274 <= g <= 3.46275


def _run_all():
    names = [n for n in sorted(globals()) if n.startswith("test_a")]
    failed = []
    for name in names:
        try:
            globals()[name]()
        except BaseException as exc:  # keep going; report every criterion
            failed.append((name, exc))
    if failed:
        for name, exc in failed:
            print(f"{name}: {exc!r}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(_run_all())
