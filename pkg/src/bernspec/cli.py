"""Command-line front end for evaluation, enumeration, and verification.

Subcommands wrap the library operations one-to-one: muhat (certified
transform values), spectrum (word listing), matrix (truncated operator
matrix with CSV/JSON/PGM/SVG export), verify (the theorem suites, exit 0
iff no violations), parseval (partial-sum table), chaos (Monte-Carlo
cross-check).  Arguments written as "a", "a/2" or "a/4" stay exact;
decimals are routed to the numeric path.  Relative output paths are
resolved against BERNSPEC_OUTPUT_DIR when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from bernspec.exact import (
    BernoulliParams,
    QuarterInt,
    chaos_game_estimate,
    mu_hat,
    mu_hat_product,
)
from bernspec.matrixlab import (
    TruncatedMatrix,
    analyze_w0_sparsity,
    verify_block_diagonal,
    verify_block_equality,
    verify_commutation_even,
    verify_multiplication_identity,
    verify_odd_twisted_relations,
)
from bernspec.operators import parseval_partial, verify_cuntz_relations
from bernspec.report import CheckReport
from bernspec.spectrum import (
    enumerate_spectrum,
    stratum_index,
    word_to_bits,
    word_value,
)

OUTPUT_DIR_ENV = "BERNSPEC_OUTPUT_DIR"

SUITES = (
    "cuntz",
    "block-diagonal",
    "block-equality",
    "commute-even",
    "commute-odd",
    "multiplication",
    "w0-sparsity",
    "all",
)


def parse_frequency(text: str) -> QuarterInt | float:
    """Quarter-integer strings stay exact; anything else parses as float."""
    try:
        return QuarterInt.parse(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ValueError(
            f"cannot parse {text!r}: expected an integer, a/2, a/4, or a decimal"
        ) from None


def _resolve_output(path_text: str) -> Path:
    path = Path(path_text)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# subcommands


def cmd_muhat(args: argparse.Namespace) -> int:
    params = BernoulliParams(args.n, args.p)
    t = parse_frequency(args.t)
    if isinstance(t, QuarterInt) and args.terms is None:
        result = mu_hat(t, params, args.tol)
    else:
        result = mu_hat_product(t, params, args.terms or 64)
    if args.json:
        print(json.dumps({
            "t": args.t,
            "n": params.n,
            "exact_zero": result.exact_zero,
            "sign": 0 if result.exact_zero else result.sign,
            "magnitude": result.magnitude,
            "error_bound": result.error_bound,
            "value": result.value,
        }))
    else:
        sign = 0 if result.exact_zero else result.sign
        print(
            f"exact_zero={result.exact_zero} sign={sign} "
            f"magnitude={result.magnitude!r} error_bound={result.error_bound!r}"
        )
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    params = BernoulliParams(args.n, args.p)
    lines = ["word,value,stratum"]
    for w in enumerate_spectrum(params, args.max_digits, order=args.order):
        stratum = stratum_index(w)
        lines.append(
            f"{word_to_bits(w)},{word_value(w, params)},"
            f"{'' if stratum is None else stratum}"
        )
    text = "\n".join(lines) + "\n"
    if args.csv:
        _resolve_output(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_matrix(args: argparse.Namespace) -> int:
    params = BernoulliParams(args.n, args.p)
    matrix = TruncatedMatrix.build(
        params, args.max_digits, tol=args.tol, order=args.order)
    if args.csv:
        matrix.write_csv(_resolve_output(args.csv))
    if args.json_file:
        matrix.write_json(_resolve_output(args.json_file))
    if args.pgm:
        matrix.write_pgm(_resolve_output(args.pgm))
    if args.svg:
        matrix.write_svg(_resolve_output(args.svg))
    print(json.dumps(matrix.to_json_obj(), indent=2))
    return 0


def _sparsity_report(max_digits: int, tilde_max: int | None,
                     require_witnesses: bool) -> CheckReport:
    result = analyze_w0_sparsity(max_digits, tilde_max)
    report = result.check
    if require_witnesses:
        for block in result.star_blocks():
            report.checked += 1
            if block.witness is None:
                report.add(
                    f"star block ({block.row_class}, {block.col_class}) has "
                    f"no nonzero witness at this truncation depth")
    return report


def _battery() -> list[CheckReport]:
    # the full theorem battery at the canonical desk-scale parameters
    reports = []
    for n in (2, 3, 4):
        reports.append(verify_cuntz_relations(BernoulliParams(n), 8))
    for n, p in ((2, 5), (4, 3)):
        reports.append(verify_block_diagonal(BernoulliParams(n, p), 6))
    reports.append(verify_block_equality(BernoulliParams(2, 5), 6, 3))
    for n, p in ((2, 5), (4, 3)):
        reports.append(verify_commutation_even(BernoulliParams(n, p), 5))
    for p in (3, 5):
        reports.append(verify_odd_twisted_relations(BernoulliParams(3, p), 4))
    reports.append(verify_multiplication_identity(6))
    reports.append(_sparsity_report(7, 4, require_witnesses=True))
    return reports


def cmd_verify(args: argparse.Namespace) -> int:
    suite = args.suite
    digits = args.max_digits

    def params_for(default_n: int, default_p: int | None = None):
        n = args.n if args.n is not None else default_n
        p = args.p
        if p is None and default_p is not None:
            p = default_p if n == 2 else 3
        return BernoulliParams(n, p)

    if suite == "all":
        reports = _battery()
    elif suite == "cuntz":
        reports = [verify_cuntz_relations(
            params_for(2), 8 if digits is None else digits)]
    elif suite == "block-diagonal":
        reports = [verify_block_diagonal(
            params_for(2, 5), 6 if digits is None else digits)]
    elif suite == "block-equality":
        reports = [verify_block_equality(
            params_for(2, 5), 6 if digits is None else digits, args.k_max)]
    elif suite == "commute-even":
        reports = [verify_commutation_even(
            params_for(2, 5), 5 if digits is None else digits)]
    elif suite == "commute-odd":
        n = args.n if args.n is not None else 3
        p = args.p if args.p is not None else 3
        reports = [verify_odd_twisted_relations(
            BernoulliParams(n, p), 4 if digits is None else digits)]
    elif suite == "multiplication":
        reports = [verify_multiplication_identity(
            6 if digits is None else digits, args.tol)]
    else:
        reports = [_sparsity_report(
            6 if digits is None else digits, args.tilde_max,
            args.require_witnesses)]

    for report in reports:
        for line in report.lines():
            print(line)
    failures = [r for r in reports if not r.passed]
    if failures:
        print(json.dumps(
            {"failures": [r.to_json_obj() for r in failures]}, indent=2))
        return 1
    return 0


def cmd_parseval(args: argparse.Namespace) -> int:
    if args.base == "scaled" and args.p is None:
        raise ValueError("the scaled basis needs --p")
    params = BernoulliParams(args.n, args.p)
    basis = "spectrum" if args.base == "gamma" else "scaled"
    t = parse_frequency(args.t)
    rows = [("digits", "partial_sum", "error_bound")]
    for digits in range(args.max_digits + 1):
        partial = parseval_partial(t, params, digits, basis, args.tol)
        rows.append((str(digits), repr(partial.value), repr(partial.error_bound)))
    if args.json:
        print(json.dumps([
            {"digits": int(d), "partial_sum": float(v), "error_bound": float(e)}
            for d, v, e in rows[1:]
        ]))
    else:
        for row in rows:
            print(" ".join(row))
    return 0


def cmd_chaos(args: argparse.Namespace) -> int:
    params = BernoulliParams(args.n, args.p)
    t = parse_frequency(args.t)
    if any(samples < 1 for samples in args.samples):
        raise ValueError("samples must be >= 1")
    if isinstance(t, QuarterInt):
        reference = mu_hat(t, params, args.tol)
    else:
        reference = mu_hat_product(t, params, 64)
    print("samples estimate std_error reference deviation_sigmas")
    for samples in args.samples:
        estimate = chaos_game_estimate(t, params, samples, seed=args.seed)
        if estimate.std_error > 0.0 and estimate.std_error != float("inf"):
            sigmas = abs(estimate.estimate - reference.value) / estimate.std_error
        else:
            sigmas = float("nan")
        print(
            f"{samples} {estimate.estimate!r} {estimate.std_error!r} "
            f"{reference.value!r} {sigmas:.3f}"
        )
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bernspec",
        description=(
            "Bernoulli convolution measures at scale 1/2n: certified "
            "transform evaluation, spectrum enumeration, operator matrices, "
            "and theorem verification on finite truncations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_muhat = sub.add_parser(
        "muhat", help="evaluate the transform at one frequency")
    p_muhat.add_argument("--n", type=int, default=2)
    p_muhat.add_argument("--p", type=int, default=None)
    p_muhat.add_argument("--t", required=True,
                         help="frequency: integer, a/2, a/4, or decimal")
    p_muhat.add_argument("--tol", type=float, default=1e-12)
    p_muhat.add_argument("--terms", type=int, default=None,
                         help="force a fixed product length")
    p_muhat.add_argument("--json", action="store_true")
    p_muhat.set_defaults(func=cmd_muhat)

    p_spec = sub.add_parser(
        "spectrum", help="list spectrum words of bounded digit length")
    p_spec.add_argument("--n", type=int, default=2)
    p_spec.add_argument("--p", type=int, default=None)
    p_spec.add_argument("--max-digits", type=int, required=True)
    p_spec.add_argument("--order", choices=("value", "strata"),
                        default="value")
    p_spec.add_argument("--csv", default=None,
                        help="write CSV here instead of stdout")
    p_spec.set_defaults(func=cmd_spectrum)

    p_matrix = sub.add_parser(
        "matrix", help="build the truncated operator matrix and export it")
    p_matrix.add_argument("--n", type=int, default=2)
    p_matrix.add_argument("--p", type=int, required=True)
    p_matrix.add_argument("--max-digits", type=int, required=True)
    p_matrix.add_argument("--tol", type=float, default=1e-12)
    p_matrix.add_argument("--order", choices=("value", "strata"),
                          default="strata")
    p_matrix.add_argument("--csv", default=None)
    p_matrix.add_argument("--json-file", default=None)
    p_matrix.add_argument("--pgm", default=None)
    p_matrix.add_argument("--svg", default=None)
    p_matrix.set_defaults(func=cmd_matrix)

    p_verify = sub.add_parser(
        "verify", help="run a verification suite; exit 0 iff no violations")
    p_verify.add_argument("suite", choices=SUITES)
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--p", type=int, default=None)
    p_verify.add_argument("--max-digits", type=int, default=None)
    p_verify.add_argument("--k-max", type=int, default=3)
    p_verify.add_argument("--tilde-max", type=int, default=None)
    p_verify.add_argument("--tol", type=float, default=1e-6,
                          help="numeric match tolerance (multiplication)")
    p_verify.add_argument("--require-witnesses", action="store_true",
                          help="w0-sparsity: demand a nonzero witness in "
                               "every star block")
    p_verify.set_defaults(func=cmd_verify)

    p_parseval = sub.add_parser(
        "parseval", help="partial Parseval sums over a truncated basis")
    p_parseval.add_argument("--n", type=int, default=2)
    p_parseval.add_argument("--p", type=int, default=None)
    p_parseval.add_argument("--t", required=True)
    p_parseval.add_argument("--base", choices=("gamma", "scaled"),
                            default="gamma")
    p_parseval.add_argument("--max-digits", type=int, required=True)
    p_parseval.add_argument("--tol", type=float, default=1e-12)
    p_parseval.add_argument("--json", action="store_true")
    p_parseval.set_defaults(func=cmd_parseval)

    p_chaos = sub.add_parser(
        "chaos", help="Monte-Carlo estimate vs certified product value")
    p_chaos.add_argument("--n", type=int, default=2)
    p_chaos.add_argument("--p", type=int, default=None)
    p_chaos.add_argument("--t", required=True)
    p_chaos.add_argument("--samples", type=int, nargs="+",
                         default=[1_000_000])
    p_chaos.add_argument("--seed", type=int, default=0)
    p_chaos.add_argument("--tol", type=float, default=1e-12)
    p_chaos.set_defaults(func=cmd_chaos)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
