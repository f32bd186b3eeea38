"""Command-line front end.

Every run echoes its resolved configuration inside the output payload so a
report is reproducible from the file alone. Exit codes: 0 success, 2 usage
error (bad flags, malformed values), 3 domain error (valid flags, but the
request is outside an operation's domain, e.g. a non-monotone function
handed to a monotone-only analysis). The worker count (--threads or the
CTL_THREADS variable) is deliberately absent from the echo: it must never
change a single output byte.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog, render
from .coarse_threshold import (
    booster_search,
    corollary_check,
    junta_max_expectation,
    proof_diagnostics,
    theorem_report,
    witness_probability,
)
from .decomposition import transform
from .errors import DomainError, UsageError
from .influence import (
    critical_probability,
    influence,
    margulis_russo_check,
    pivotal_probability,
    threshold_polynomial,
    total_influence,
)
from .sampling import (
    FunctionOracle,
    estimate_expectation,
    estimate_influence_pivotal,
    estimate_witness_probability,
)
from .coarse_threshold import junta_max_expectation_mc
from .spaces import BooleanFunction, make_biased_measure

DENOMINATOR_CAP = 10**12


def parse_rational(text: str, name: str = "value") -> tuple[Fraction, bool]:
    """`a/b` parses exactly; plain integers too. Decimal or scientific forms
    are capped at denominator 10^12 and flagged inexact."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den)), False
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse {name} {text!r}; expected a/b or a decimal") from exc
    if value.denominator == 1 and "." not in text and "e" not in text.lower():
        return value, False
    return value.limit_denominator(DENOMINATOR_CAP), True


def parse_bias(text: str) -> tuple[Fraction, bool]:
    p, inexact = parse_rational(text, "p")
    if not 0 < p < 1:
        raise UsageError(f"p must lie strictly between 0 and 1, got {text!r}")
    return p, inexact


def _build_fn(text: str) -> tuple[BooleanFunction, str]:
    spec = catalog.parse_spec(text)
    try:
        return catalog.build(spec), catalog.canonical_name(spec)
    except OSError as exc:
        raise UsageError(f"cannot load table: {exc}") from exc


def _require_json(args) -> None:
    if args.format != "json":
        raise UsageError(f"{args.command} supports --format json only")


def _emit(args, config: dict, report=None, csv_lines=None) -> None:
    if args.format == "json":
        text = render.emit_json(config, report)
    else:
        text = render.emit_csv(config, csv_lines)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)


def _base_config(args, fn_name=None, bias=None) -> dict:
    cfg = {"subcommand": args.command}
    if fn_name is not None:
        cfg["fn"] = fn_name
    if bias is not None:
        p, raw, inexact = bias
        cfg["p"] = render.rational(p)
        cfg["p_input"] = raw
        cfg["p_inexact"] = inexact
    return cfg


def _finish_config(cfg: dict, args) -> dict:
    cfg["format"] = args.format
    cfg["out"] = args.out
    return cfg


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_spectrum(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    p, inexact = parse_bias(args.p)
    spec = transform(f, make_biased_measure(p))
    cfg = _finish_config(_base_config(args, name, (p, args.p, inexact)), args)
    _emit(args, cfg, render.spectrum_report(spec))


def _cmd_influence(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    p, inexact = parse_bias(args.p)
    measure = make_biased_measure(p)
    infs = [influence(f, i, measure) for i in range(1, f.n + 1)]
    pivs = [pivotal_probability(f, i, measure) for i in range(1, f.n + 1)]
    cfg = _finish_config(_base_config(args, name, (p, args.p, inexact)), args)
    _emit(args, cfg, render.influence_report(f.n, infs, total_influence(f, measure), pivs))


def _cmd_threshold_curve(args) -> None:
    f, name = _build_fn(args.fn)
    entries = [piece for piece in args.grid.split(",") if piece.strip()]
    if not entries:
        raise UsageError("empty p grid")
    parsed = [parse_bias(piece) for piece in entries]
    poly = threshold_polynomial(f)
    rows = []
    for p, _ in parsed:
        measure = make_biased_measure(p)
        deriv = poly.derivative_at(p)
        ti = total_influence(f, measure)
        residual = 4 * p * measure.q * deriv - ti
        rows.append((p, poly.evaluate(p), deriv, ti, residual))
    cfg = _base_config(args, name)
    cfg["grid"] = args.grid
    cfg["grid_resolved"] = ",".join(render.rational(p) for p, _ in parsed)
    cfg["grid_inexact"] = any(flag for _, flag in parsed)
    cfg = _finish_config(cfg, args)
    if args.format == "json":
        _emit(args, cfg, {"rows": render.threshold_curve_rows(rows)})
    else:
        _emit(args, cfg, csv_lines=render.threshold_curve_csv(rows))


def _cmd_critical_p(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    tol, _ = parse_rational(args.tolerance, "tolerance")
    value = critical_probability(f, tol)
    cfg = _base_config(args, name)
    cfg["tolerance"] = render.rational(tol)
    cfg = _finish_config(cfg, args)
    _emit(args, cfg, render.critical_p_report(value, tol))


def _cmd_russo_check(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    p, inexact = parse_bias(args.p)
    rep = margulis_russo_check(f, make_biased_measure(p))
    cfg = _finish_config(_base_config(args, name, (p, args.p, inexact)), args)
    _emit(args, cfg, render.russo_dict(rep))


def _cmd_bourgain_lhs(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    p, inexact = parse_bias(args.p)
    measure = make_biased_measure(p)
    rep = theorem_report(
        f, measure, B=args.B, samples=args.samples, seed=args.seed, threads=args.threads
    )
    cfg = _base_config(args, name, (p, args.p, inexact))
    cfg["B"] = rep.B
    if args.samples is not None:
        cfg["samples"] = args.samples
        cfg["seed"] = args.seed
    cfg = _finish_config(cfg, args)
    _emit(args, cfg, render.theorem_dict(rep))


def _cmd_witness_prob(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    p, inexact = parse_bias(args.p)
    value = witness_probability(f, make_biased_measure(p), args.B)
    cfg = _base_config(args, name, (p, args.p, inexact))
    cfg["B"] = args.B
    cfg = _finish_config(cfg, args)
    _emit(args, cfg, render.witness_dict(value, args.B))


def _cmd_booster_search(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    p, inexact = parse_bias(args.p)
    measure = make_biased_measure(p)
    if args.delta_prime is None:
        dp = junta_max_expectation(f, measure, args.B) / 2
        dp_default = True
    else:
        dp, _ = parse_rational(args.delta_prime, "delta-prime")
        dp_default = False
    hits = booster_search(f, measure, args.B, dp)
    cfg = _base_config(args, name, (p, args.p, inexact))
    cfg["B"] = args.B
    cfg["delta_prime"] = render.rational(dp)
    cfg["delta_prime_default"] = dp_default
    cfg = _finish_config(cfg, args)
    _emit(args, cfg, render.booster_dict(hits, args.B, dp))


def _cmd_corollary_check(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    p, inexact = parse_bias(args.p)
    measure = make_biased_measure(p)
    dp = None
    if args.delta_prime is not None:
        dp, _ = parse_rational(args.delta_prime, "delta-prime")
    tau, _ = parse_rational(args.tau_balance, "tau-balance")
    rep = corollary_check(f, measure, delta_prime=dp, B=args.B, tau_balance=tau)
    cfg = _base_config(args, name, (p, args.p, inexact))
    cfg["B"] = rep.B
    cfg["delta_prime"] = render.rational(rep.delta_prime)
    cfg["tau_balance"] = render.rational(tau)
    cfg = _finish_config(cfg, args)
    _emit(args, cfg, render.corollary_dict(rep))


def _cmd_proof_diagnostics(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    p, inexact = parse_bias(args.p)
    eps, _ = parse_rational(args.epsilon, "epsilon")
    M, _ = parse_rational(args.M, "M")
    rep = proof_diagnostics(f, make_biased_measure(p), args.B, eps, M)
    cfg = _base_config(args, name, (p, args.p, inexact))
    cfg["B"] = args.B
    cfg["epsilon"] = render.rational(eps)
    cfg["M"] = render.rational(M)
    cfg = _finish_config(cfg, args)
    _emit(args, cfg, render.diagnostics_dict(rep))


def _cmd_mc_estimate(args) -> None:
    _require_json(args)
    f, name = _build_fn(args.fn)
    p, inexact = parse_bias(args.p)
    measure = make_biased_measure(p)
    oracle = FunctionOracle.from_table(f)
    cfg = _base_config(args, name, (p, args.p, inexact))
    cfg["stat"] = args.stat
    if args.stat == "expectation":
        est = estimate_expectation(oracle, measure, args.samples, args.seed, args.threads)
    elif args.stat == "influence":
        if args.coord is None:
            raise UsageError("--coord is required for --stat influence")
        cfg["coord"] = args.coord
        est = estimate_influence_pivotal(
            oracle, measure, args.coord, args.samples, args.seed, args.threads
        )
    elif args.stat == "witness":
        if args.B is None:
            raise UsageError("--B is required for --stat witness")
        cfg["B"] = args.B
        est = estimate_witness_probability(
            oracle, measure, args.B, args.samples, args.seed, threads=args.threads
        )
    else:  # junta-max
        if args.B is None:
            raise UsageError("--B is required for --stat junta-max")
        cfg["B"] = args.B
        est = junta_max_expectation_mc(
            f, measure, args.B, args.samples, args.seed, args.threads
        )
    cfg["samples"] = args.samples
    cfg["seed"] = args.seed
    cfg = _finish_config(cfg, args)
    _emit(args, cfg, {"stat": args.stat, "estimate": render.estimate_dict(est)})


def _cmd_catalog_list(args) -> None:
    _require_json(args)
    cfg = _finish_config(_base_config(args), args)
    _emit(args, cfg, {"families": catalog.family_descriptions()})


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctlab",
        description="Biased-lattice analysis of Boolean functions: spectra, "
        "influences, threshold curves, and coarse-threshold reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, fn=True, p=True, default_format="json"):
        sp = sub.add_parser(name)
        if fn:
            sp.add_argument("--fn", required=True, help="function spec, e.g. majority:3")
        if p:
            sp.add_argument("--p", required=True, help="bias as a/b or decimal")
        sp.add_argument("--format", choices=("json", "csv"), default=default_format)
        sp.add_argument("--out", default="-", help="output path, - for stdout")
        sp.add_argument("--threads", type=int, default=None)
        sp.set_defaults(handler=handler)
        return sp

    add("spectrum", _cmd_spectrum)
    add("influence", _cmd_influence)

    sp = add("threshold-curve", _cmd_threshold_curve, p=False, default_format="csv")
    sp.add_argument("--grid", required=True, help="comma-separated biases")

    sp = add("critical-p", _cmd_critical_p, p=False)
    sp.add_argument("--tolerance", default="1/1000000000000")

    add("russo-check", _cmd_russo_check)

    sp = add("bourgain-lhs", _cmd_bourgain_lhs)
    sp.add_argument("--B", type=int, default=None)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("witness-prob", _cmd_witness_prob)
    sp.add_argument("--B", type=int, required=True)

    sp = add("booster-search", _cmd_booster_search)
    sp.add_argument("--B", type=int, required=True)
    sp.add_argument("--delta-prime", dest="delta_prime", default=None)

    sp = add("corollary-check", _cmd_corollary_check)
    sp.add_argument("--B", type=int, default=None)
    sp.add_argument("--delta-prime", dest="delta_prime", default=None)
    sp.add_argument("--tau-balance", dest="tau_balance", default="1/1000000000")

    sp = add("proof-diagnostics", _cmd_proof_diagnostics)
    sp.add_argument("--B", type=int, required=True)
    sp.add_argument("--epsilon", required=True)
    sp.add_argument("--M", required=True)

    sp = add("mc-estimate", _cmd_mc_estimate)
    sp.add_argument("--stat", required=True,
                    choices=("expectation", "influence", "witness", "junta-max"))
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--coord", type=int, default=None)
    sp.add_argument("--B", type=int, default=None)

    add("catalog-list", _cmd_catalog_list, fn=False, p=False)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
