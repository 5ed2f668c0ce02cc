"""Comparison sweeps over sphere-size bounds, emitted as CSV.

Subcommands: exact (sizes only), compare-rho (radius sweep at fixed block
shape), compare-ell (block-count sweep at fixed total column count and
radius), selfcheck (internal consistency suite).  Rows are evaluated in
sweep order and written once, so identical configurations produce
byte-identical files; all logging goes to stderr.  Exit codes: 0 success,
1 invalid parameters, 2 invariant violation, 3 infeasible size.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass
from decimal import Decimal
from typing import Optional, Sequence

from .entropy import lb_entropy_max, rho_of_beta, solve_beta, ub_entropy_sphere
from .metric_core import DomainError, ParameterError, hamming_spectrum, log_q_of_bigint
from .sumrank import (
    SumRankParams,
    brute_force_spectrum,
    exact_sphere_sequence,
    lb_closed_envelope,
    lb_closedform,
    log_concavity_check,
    sumrank_spectrum,
    ub_closedform_kappa,
    ub_integral,
)

CSV_HEADER = (
    "ell,eta,t,rho,exact_logq_norm,ub_entropy,lb_entropy_max,"
    "ub_kappa_closed,ub_integral_gamma,ub_integral_kappa,lb_closed,lb_closed_env"
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INVARIANT = 2
EXIT_INFEASIBLE = 3

# exact-computation feasibility thresholds on the output degree mu*ell
FEASIBILITY_WARN = 2000
FEASIBILITY_REFUSE = 20000

SANDWICH_SLACK = 1e-9  # log_q units; covers float evaluation only

DEFAULT_EPSILON = 0.05


class InfeasibleSizeError(RuntimeError):
    """Requested exact computation exceeds the work the CLI will attempt."""


class InvariantViolation(RuntimeError):
    """An emitted row would contradict a proven inequality."""


@dataclass(frozen=True)
class SweepConfig:
    """Parsed parameters of one CSV-emitting command."""

    mode: str  # "rho" or "ell"
    q: int
    m: int
    output_path: str
    eta: int | None = None
    ell: int | None = None
    n: int | None = None
    t: int | None = None
    t_max: int | None = None
    epsilon: float = DEFAULT_EPSILON
    include_exact: bool = True
    include_bounds: bool = True
    literal_binomial: bool = False


@dataclass(frozen=True)
class ComparisonRow:
    """One CSV row; None marks a not-applicable cell (boundary-radius entropy
    bounds, or exact/bounds disabled for the command)."""

    ell: int
    eta: int
    t: int
    rho: float
    exact_logq_norm: Optional[float] = None
    ub_entropy: Optional[float] = None
    lb_entropy_max: Optional[float] = None
    ub_kappa_closed: Optional[float] = None
    ub_integral_gamma: Optional[float] = None
    ub_integral_kappa: Optional[float] = None
    lb_closed: Optional[float] = None
    lb_closed_env: Optional[float] = None


def _format_value(v: Optional[float]) -> str:
    """12 significant digits, '.' separator, positional notation below 10^6."""
    if v is None:
        return ""
    if math.isnan(v) or math.isinf(v):
        raise InvariantViolation(f"non-finite value {v} reached the serializer")
    if v == 0:
        return "0"
    s = f"{v:.12g}"
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
    return s


def _row_line(row: ComparisonRow) -> str:
    return ",".join(
        [
            str(row.ell),
            str(row.eta),
            str(row.t),
            _format_value(row.rho),
            _format_value(row.exact_logq_norm),
            _format_value(row.ub_entropy),
            _format_value(row.lb_entropy_max),
            _format_value(row.ub_kappa_closed),
            _format_value(row.ub_integral_gamma),
            _format_value(row.ub_integral_kappa),
            _format_value(row.lb_closed),
            _format_value(row.lb_closed_env),
        ]
    )


def write_csv(rows: Sequence[ComparisonRow], path: str) -> None:
    lines = [CSV_HEADER]
    lines.extend(_row_line(r) for r in rows)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _row_violation(row: ComparisonRow) -> Optional[str]:
    """First sandwich inequality this row breaks, or None.

    Lower-bound columns may not exceed exact, exact may not exceed
    upper-bound columns, and the raw closed-form lower bound may not exceed
    its own concave envelope; all with SANDWICH_SLACK for float evaluation.
    """
    if (
        row.lb_closed is not None
        and row.lb_closed_env is not None
        and row.lb_closed > row.lb_closed_env + SANDWICH_SLACK
    ):
        return f"t={row.t}: lb_closed exceeds lb_closed_env"
    if row.exact_logq_norm is None:
        return None
    uppers = [
        ("ub_entropy", row.ub_entropy),
        ("ub_kappa_closed", row.ub_kappa_closed),
        ("ub_integral_gamma", row.ub_integral_gamma),
        ("ub_integral_kappa", row.ub_integral_kappa),
    ]
    lowers = [
        ("lb_closed", row.lb_closed),
        ("lb_closed_env", row.lb_closed_env),
        ("lb_entropy_max", row.lb_entropy_max),
    ]
    for name, v in uppers:
        if v is not None and row.exact_logq_norm > v + SANDWICH_SLACK:
            return f"t={row.t}: exact exceeds {name}"
    for name, v in lowers:
        if v is not None and v > row.exact_logq_norm + SANDWICH_SLACK:
            return f"t={row.t}: {name} exceeds exact"
    return None


def _check_rows(rows: Sequence[ComparisonRow]) -> None:
    for row in rows:
        violation = _row_violation(row)
        if violation is not None:
            raise InvariantViolation(violation)


def _feasibility_guard(p: SumRankParams, include_exact: bool) -> None:
    if not include_exact:
        return
    degree = p.mu * p.ell
    if degree > FEASIBILITY_REFUSE:
        bits = p.m * p.eta * p.ell * math.log2(p.q)
        raise InfeasibleSizeError(
            f"exact sequence of degree {degree} needs roughly {degree * degree // 2} "
            f"big-integer multiplications on ~{bits:.0f}-bit integers; "
            f"pass --no-exact or shrink the parameters"
        )
    if degree > FEASIBILITY_WARN:
        print(
            f"warning: exact sequence of degree {degree} may take a while",
            file=sys.stderr,
        )


def _build_rows_for_params(
    p: SumRankParams,
    t_values: Sequence[int],
    epsilon: float,
    include_exact: bool,
    include_bounds: bool,
    literal_binomial: bool,
) -> list[ComparisonRow]:
    t_top = p.mu * p.ell
    spectrum = sumrank_spectrum(p.q, p.m, p.eta)
    exact_seq = exact_sphere_sequence(p) if include_exact else None
    env = lb_closed_envelope(p) if include_bounds else None
    base = float(p.q)
    rows = []
    for t in t_values:
        rho = t / p.ell
        exact_v = None
        if exact_seq is not None:
            exact_v = log_q_of_bigint(exact_seq.coefficient(t), base).value / p.ell
        ub_e = lb_e = ub_k = ub_ig = ub_ik = lb_c = lb_env = None
        if include_bounds:
            if 0 < t < t_top:
                ub_e = ub_entropy_sphere(spectrum, p.ell, t).value
                lb_e = lb_entropy_max(spectrum, p.ell, t, epsilon).max_lower_log.value
            ub_k = ub_closedform_kappa(p, t, literal_binomial).value / p.ell
            ub_ig = ub_integral(p, t, "gamma").value / p.ell
            ub_ik = ub_integral(p, t, "kappa").value / p.ell
            lb_c = lb_closedform(p, t).value / p.ell
            lb_env = env[t].value / p.ell
        rows.append(
            ComparisonRow(
                ell=p.ell,
                eta=p.eta,
                t=t,
                rho=rho,
                exact_logq_norm=exact_v,
                ub_entropy=ub_e,
                lb_entropy_max=lb_e,
                ub_kappa_closed=ub_k,
                ub_integral_gamma=ub_ig,
                ub_integral_kappa=ub_ik,
                lb_closed=lb_c,
                lb_closed_env=lb_env,
            )
        )
    return rows


def cmd_exact(cfg: SweepConfig) -> int:
    p = SumRankParams(cfg.q, cfg.m, cfg.eta, cfg.ell)
    _feasibility_guard(p, include_exact=True)
    t_top = p.mu * p.ell
    t_max = t_top if cfg.t_max is None else cfg.t_max
    if not 0 <= t_max <= t_top:
        raise ParameterError(f"t-max {t_max} outside 0..{t_top}")
    rows = _build_rows_for_params(
        p,
        range(t_max + 1),
        cfg.epsilon,
        include_exact=True,
        include_bounds=False,
        literal_binomial=False,
    )
    write_csv(rows, cfg.output_path)
    print(f"wrote {len(rows)} rows to {cfg.output_path}", file=sys.stderr)
    return EXIT_OK


def cmd_compare_rho(cfg: SweepConfig) -> int:
    p = SumRankParams(cfg.q, cfg.m, cfg.eta, cfg.ell)
    _feasibility_guard(p, cfg.include_exact)
    t_top = p.mu * p.ell
    t_max = t_top if cfg.t_max is None else cfg.t_max
    if not 0 <= t_max <= t_top:
        raise ParameterError(f"t-max {t_max} outside 0..{t_top}")
    rows = _build_rows_for_params(
        p,
        range(t_max + 1),
        cfg.epsilon,
        cfg.include_exact,
        include_bounds=True,
        literal_binomial=cfg.literal_binomial,
    )
    _check_rows(rows)
    write_csv(rows, cfg.output_path)
    print(f"wrote {len(rows)} rows to {cfg.output_path}", file=sys.stderr)
    return EXIT_OK


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def cmd_compare_ell(cfg: SweepConfig) -> int:
    if cfg.n is None or cfg.n < 1:
        raise ParameterError(f"total column count n must be >= 1, got {cfg.n}")
    if cfg.t is None or cfg.t < 0:
        raise ParameterError(f"radius t must be >= 0, got {cfg.t}")
    rows: list[ComparisonRow] = []
    for ell in _divisors(cfg.n):
        eta = cfg.n // ell
        p = SumRankParams(cfg.q, cfg.m, eta, ell)
        if cfg.t > p.mu * ell:
            print(
                f"notice: skipping ell={ell} (eta={eta}): "
                f"t={cfg.t} exceeds mu*ell={p.mu * ell}",
                file=sys.stderr,
            )
            continue
        _feasibility_guard(p, cfg.include_exact)
        rows.extend(
            _build_rows_for_params(
                p,
                [cfg.t],
                cfg.epsilon,
                cfg.include_exact,
                include_bounds=True,
                literal_binomial=cfg.literal_binomial,
            )
        )
    _check_rows(rows)
    write_csv(rows, cfg.output_path)
    print(f"wrote {len(rows)} rows to {cfg.output_path}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# selfcheck


def _selfcheck_oracle() -> tuple[bool, str]:
    configs = [(2, 1, 1), (2, 2, 2), (2, 2, 3), (3, 1, 2), (3, 2, 2), (4, 2, 2)]
    for q, m, eta in configs:
        if brute_force_spectrum(q, m, eta).counts != sumrank_spectrum(q, m, eta).counts:
            return False, f"mismatch at (q={q}, m={m}, eta={eta})"
    return True, f"{len(configs)} configurations"


def _selfcheck_small_sequence() -> tuple[bool, str]:
    got = exact_sphere_sequence(SumRankParams(2, 2, 2, 2)).coeffs
    want = (1, 18, 93, 108, 36)
    return got == want, f"{list(got)}"


def _selfcheck_sandwich(literal_binomial: bool) -> tuple[bool, str]:
    p = SumRankParams(2, 2, 2, 8)
    rows = _build_rows_for_params(
        p,
        range(p.mu * p.ell + 1),
        DEFAULT_EPSILON,
        include_exact=True,
        include_bounds=True,
        literal_binomial=literal_binomial,
    )
    for row in rows:
        violation = _row_violation(row)
        if violation is not None:
            return False, f"sandwich failure at {violation}"
    return True, f"{len(rows)} radii at (q=2, m=2, eta=2, ell=8)"


def _selfcheck_round_trip() -> tuple[bool, str]:
    worst = 0.0
    for s in (hamming_spectrum(2), sumrank_spectrum(2, 2, 2)):
        for i in range(1, 11):
            rho = s.mu * i / 11.0
            model = solve_beta(s, rho)
            worst = max(worst, abs(rho_of_beta(s, model.beta) - rho))
    return worst <= 1e-10, f"max |rho(beta(rho)) - rho| = {worst:.3e}"


def _selfcheck_log_concavity() -> tuple[bool, str]:
    for p in (SumRankParams(2, 2, 2, 4), SumRankParams(2, 5, 5, 1), SumRankParams(3, 3, 2, 3)):
        ok, witness = log_concavity_check(p)
        if not ok:
            return False, f"failure at index {witness} for (q={p.q}, m={p.m}, eta={p.eta}, ell={p.ell})"
    return True, "3 configurations"


def cmd_selfcheck(literal_binomial: bool = False) -> int:
    start = time.monotonic()
    results = [
        ("oracle-equivalence", *_selfcheck_oracle()),
        ("exact-small-sequence", *_selfcheck_small_sequence()),
        ("bound-sandwich", *_selfcheck_sandwich(literal_binomial)),
        ("entropy-round-trip", *_selfcheck_round_trip()),
        ("log-concavity", *_selfcheck_log_concavity()),
    ]
    elapsed = time.monotonic() - start
    results.append(("runtime-under-60s", elapsed < 60.0, f"{elapsed:.2f}s"))
    all_ok = True
    for name, ok, detail in results:
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'}  {name:22s} {detail}")
    return EXIT_OK if all_ok else EXIT_INVARIANT


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    # invalid parameters must exit 1, not argparse's default 2
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ParameterError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sphere-bounds", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp: argparse.ArgumentParser, *, eta_ell: bool, n_t: bool) -> None:
        sp.add_argument("--q", type=int, required=True, help="field size (prime power)")
        sp.add_argument("--m", type=int, required=True, help="block row count")
        if eta_ell:
            sp.add_argument("--eta", type=int, required=True, help="block column count")
            sp.add_argument("--ell", type=int, required=True, help="number of blocks")
            sp.add_argument("--t-max", type=int, default=None, help="last radius (default mu*ell)")
        if n_t:
            sp.add_argument("--n", type=int, required=True, help="total column count eta*ell")
            sp.add_argument("--t", type=int, required=True, help="fixed radius")
        sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                        help="window mass for the entropy lower bound")
        sp.add_argument("--no-exact", action="store_true", help="skip the exact sequence")
        sp.add_argument("--debug-literal-binomial", action="store_true",
                        help="use the misprinted constant composition count (audit aid)")
        sp.add_argument("--out", required=True, help="output CSV path")

    add_common(sub.add_parser("exact", help="exact sphere sizes only"), eta_ell=True, n_t=False)
    add_common(sub.add_parser("compare-rho", help="radius sweep"), eta_ell=True, n_t=False)
    add_common(sub.add_parser("compare-ell", help="block-count sweep"), eta_ell=False, n_t=True)

    sc = sub.add_parser("selfcheck", help="internal consistency suite")
    sc.add_argument("--debug-literal-binomial", action="store_true",
                    help="corrupt the closed-form upper bound to show detection")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "selfcheck":
            return cmd_selfcheck(args.debug_literal_binomial)
        if args.command == "exact":
            cfg = SweepConfig(
                mode="rho", q=args.q, m=args.m, eta=args.eta, ell=args.ell,
                t_max=args.t_max, epsilon=args.epsilon, output_path=args.out,
                include_exact=not args.no_exact,
                literal_binomial=args.debug_literal_binomial,
            )
            return cmd_exact(cfg)
        if args.command == "compare-rho":
            cfg = SweepConfig(
                mode="rho", q=args.q, m=args.m, eta=args.eta, ell=args.ell,
                t_max=args.t_max, epsilon=args.epsilon, output_path=args.out,
                include_exact=not args.no_exact,
                literal_binomial=args.debug_literal_binomial,
            )
            return cmd_compare_rho(cfg)
        if args.command == "compare-ell":
            cfg = SweepConfig(
                mode="ell", q=args.q, m=args.m, n=args.n, t=args.t,
                epsilon=args.epsilon, output_path=args.out,
                include_exact=not args.no_exact,
                literal_binomial=args.debug_literal_binomial,
            )
            return cmd_compare_ell(cfg)
        raise ParameterError(f"unknown command {args.command!r}")
    except (ParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except InfeasibleSizeError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
