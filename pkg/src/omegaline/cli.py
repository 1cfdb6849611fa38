"""Command-line surface: describe | simulate | hyper | xcheck.

All numeric computation happens after the configuration has been fully
validated, and CSV rows are assembled in memory before anything is
written, so a failing run never leaves partial output.  Floats are
formatted with ``repr`` (shortest round-trip form), which makes output
byte-identical across runs of the same configuration.

Exit codes: 0 success, 2 configuration error, 3 regime/domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .config import RunConfig, load_config
from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    NotMaterializedError,
    ParameterError,
    RegimeError,
)
from .geometry import min_truncation_index, sample_distance, truncation_length
from .hyper import VerdictKind, classify
from .params import Regime, derived_quantities, reflection_coefficients
from .solver import (
    Direction,
    convergence_ratio,
    enumerate_terms,
    laplace_closed_form,
    laplace_partial_sum,
    voltage_response,
)
from .transfinite import (
    assemble_response,
    beyond_initial_line,
    distortionless_bound,
    open_line_steady_state,
)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _emit_csv(header: list[str], rows: list[list], out_path: str | None) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    data = buffer.getvalue()
    if out_path is None:
        sys.stdout.write(data)
    else:
        with open(out_path, "w", newline="") as fh:
            fh.write(data)


def _report(lines: list[str], csv_went_to_stdout: bool) -> None:
    stream = sys.stderr if csv_went_to_stdout else sys.stdout
    for line in lines:
        print(line, file=stream)


def _parse_n_list(args) -> list[int] | None:
    ns: list[int] = []
    if args.n is not None:
        for token in str(args.n).replace(",", " ").split():
            ns.append(int(token))
    if getattr(args, "n_range", None):
        parts = args.n_range.split(":")
        if len(parts) not in (2, 3):
            raise ConfigError(f"--n-range expects LO:HI[:STEP], got {args.n_range!r}")
        lo, hi = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if step < 1 or hi < lo:
            raise ConfigError(f"bad --n-range {args.n_range!r}")
        ns.extend(range(lo, hi + 1, step))
    return ns or None


def cmd_describe(config: RunConfig, ns: list[int] | None) -> int:
    spec, idx = config.spec, config.idx
    dq = derived_quantities(spec.params)
    minimal = min_truncation_index(idx, spec)
    lines = [
        f"rank mu: {spec.mu}",
        f"termination digits: {' '.join(map(str, spec.term_digits))}",
        f"sample digits: {' '.join(map(str, idx.digits))}",
        f"delta_x: {spec.delta_x}",
        f"R_s: {spec.R_s}",
        f"R_r: {spec.R_r}",
        f"regime: {dq.regime.value}",
        f"delta: {_fmt(dq.delta)}",
        f"sigma: {_fmt(dq.sigma)}",
        f"alpha: {_fmt(dq.alpha)}",
        f"u: {_fmt(dq.u)}",
    ]
    if dq.z0 is None:
        lines.append("Z0: s-dependent (GENERAL regime); reflection coefficients likewise")
    else:
        pair = reflection_coefficients(spec.R_s, spec.R_r, dq.z0)
        divider = dq.z0 / (dq.z0 + float(spec.R_s))
        lines += [
            f"Z0: {_fmt(dq.z0)}",
            f"r_s: {_fmt(pair.r_s)}",
            f"r_r: {_fmt(pair.r_r)}",
            f"divider: {_fmt(divider)}",
        ]
    lines.append(f"first admissible n: {minimal}")
    for n in ns or [config.window[0], config.window[1]]:
        L = float(truncation_length(spec, n))
        if n < minimal:
            lines.append(f"n={n}: L_n={_fmt(L)} sample not present (first admissible n={minimal})")
        else:
            K = float(sample_distance(idx, spec, n))
            lines.append(f"n={n}: L_n={_fmt(L)} K_n={_fmt(K)} to_receiving={_fmt(L - K)}")
    for line in lines:
        print(line)
    return 0


def cmd_simulate(config: RunConfig, n: int, out_path: str | None, want_bound: bool) -> int:
    spec, idx = config.spec, config.idx
    if config.sim_t_max is None:
        raise ConfigError("simulate needs [simulate] t_max")
    L = float(truncation_length(spec, n))
    K = float(sample_distance(idx, spec, n))
    bound_value = None
    if want_bound or config.sim_bound:
        bound_value = distortionless_bound(spec, idx, n)
    header = ["n", "t", "L_n", "K_n", "fwd_count", "bwd_count", "v"]
    if bound_value is not None:
        header.append("bound")
    rows = []
    points = config.sim_points
    for i in range(points):
        t = config.sim_t_max * i / (points - 1)
        terms = enumerate_terms(L, K, t, spec.params, spec.R_s, spec.R_r)
        fwd = sum(1 for term in terms if term.direction is Direction.FORWARD)
        v = voltage_response(L, K, t, spec.params, spec.R_s, spec.R_r, spec.source)
        row = [n, t, L, K, fwd, len(terms) - fwd, v]
        if bound_value is not None:
            row.append(bound_value)
        rows.append(row)
    _emit_csv(header, rows, out_path)
    return 0


def cmd_hyper(config: RunConfig, out_path: str | None) -> int:
    spec, idx = config.spec, config.idx
    if config.profile is None:
        raise ConfigError("hyper needs a [profile] section")
    assembly = assemble_response(spec, idx, config.profile)
    lo = max(config.window[0], assembly.n_min)
    hi = config.window[1]
    if hi - lo < 8:
        raise ConfigError(
            f"window [{config.window[0]}, {hi}] leaves fewer than 8 steps after the "
            f"first admissible truncation n={assembly.n_min}"
        )
    with_bound = (
        spec.params.regime is Regime.DISTORTIONLESS and beyond_initial_line(idx)
    )
    header = ["n", "t_n", "v_n"] + (["bound_n"] if with_bound else [])
    rows = []
    for n in range(lo, hi + 1):
        row = [n, config.profile(n), assembly.seq(n)]
        if with_bound:
            row.append(distortionless_bound(spec, idx, n))
        rows.append(row)
    verdict = classify(assembly.seq, (lo, hi), config.eps)

    report = [
        "command: hyper",
        f"label: {assembly.seq.label}",
        f"regime: {spec.params.regime.value}",
        f"window: {lo}..{hi}",
        f"eps: {_fmt(config.eps)}",
        f"verdict: {verdict.kind.value}",
    ]
    if verdict.kind is VerdictKind.APPRECIABLE:
        report.append(f"standard part: {_fmt(verdict.standard_part)}")
        report.append(f"error bar: {_fmt(verdict.error_bar)}")
    if verdict.kind is VerdictKind.FILTER_AMBIGUOUS:
        report.append("clusters: " + ", ".join(_fmt(v) for v in verdict.clusters))
        report.append("note: the hyperreal value depends on the choice of ultrafilter; "
                      "the candidates above are reported, none is selected")
    if verdict.kind is VerdictKind.INCONCLUSIVE:
        report.append("note: INCONCLUSIVE - no stable pattern over this window")
    steady = open_line_steady_state(spec)
    if steady is not None:
        geometric, settled = steady
        report.append(f"open-line geometric sum 2A/(1 - r_s): {_fmt(geometric)}")
        report.append(f"settles with source divider to: {_fmt(settled)}")
    _emit_csv(header, rows, out_path)
    _report(report, csv_went_to_stdout=out_path is None)
    return 0


def cmd_xcheck(config: RunConfig, out_path: str | None, m_max: int | None, n: int | None) -> int:
    spec, idx = config.spec, config.idx
    m_max = config.xcheck_m_max if m_max is None else m_max
    n = config.xcheck_n if n is None else n
    L = float(truncation_length(spec, n))
    K = float(sample_distance(idx, spec, n))
    header = [
        "s",
        "ratio",
        "partial_re",
        "partial_im",
        "closed_re",
        "closed_im",
        "rel_discrepancy",
        "converged",
    ]
    rows = []
    worst_ok = 0.0
    flagged = 0
    for s in config.xcheck_s:
        w_s = spec.source.laplace(s)
        ratio = convergence_ratio(L, s, spec.params, spec.R_s, spec.R_r)
        partial, _ = laplace_partial_sum(
            L, K, s, spec.params, spec.R_s, spec.R_r, w_s, m_max
        )
        converged = ratio < 1.0
        if converged:
            closed = laplace_closed_form(L, K, s, spec.params, spec.R_s, spec.R_r, w_s)
            denom = abs(closed)
            rel = abs(closed - partial) / denom if denom > 0 else abs(closed - partial)
            worst_ok = max(worst_ok, rel)
        else:
            closed = complex("nan")
            rel = float("nan")
            flagged += 1
        rows.append(
            [s, ratio, partial.real, partial.imag, closed.real, closed.imag, rel, converged]
        )
    _emit_csv(header, rows, out_path)
    report = [
        "command: xcheck",
        f"truncation n: {n}   L_n: {_fmt(L)}   K_n: {_fmt(K)}   m_max: {m_max}",
        f"samples: {len(config.xcheck_s)}   divergent (flagged): {flagged}",
        f"worst relative discrepancy among converged samples: {_fmt(worst_ok)}",
    ]
    _report(report, csv_went_to_stdout=out_path is None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegaline",
        description="Bounce-diagram responses and hyperreal classification for "
        "terminated transfinite transmission lines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    describe = sub.add_parser("describe", help="geometry, regime and coefficient report")
    simulate = sub.add_parser("simulate", help="time-domain CSV at one truncation")
    hyper = sub.add_parser("hyper", help="hyperreal sequence CSV plus classification")
    xcheck = sub.add_parser("xcheck", help="summed series vs partial sums in the s-domain")

    for p in (describe, simulate, hyper, xcheck):
        p.add_argument("--config", required=True, help="path to the run configuration")
    describe.add_argument("--n", help="comma-separated truncation indices to tabulate")
    describe.add_argument("--n-range", help="LO:HI[:STEP] truncation range to tabulate")
    simulate.add_argument("--n", required=True, type=int, help="truncation index")
    simulate.add_argument("--out", help="CSV output path (default: stdout)")
    simulate.add_argument("--bound", action="store_true", help="append the decay envelope column")
    hyper.add_argument("--out", help="CSV output path (default: stdout)")
    hyper.add_argument("--window", help="LO:HI classification window override")
    hyper.add_argument("--eps", type=float, help="classification resolution override")
    xcheck.add_argument("--out", help="CSV output path (default: stdout)")
    xcheck.add_argument("--m-max", type=int, help="round trips in the partial sum")
    xcheck.add_argument("--n", type=int, help="truncation index fixing the line length")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "hyper":
            if args.window:
                lo, _, hi = args.window.partition(":")
                config = _replace_window(config, (int(lo), int(hi)))
            if args.eps is not None:
                config = _replace_eps(config, args.eps)
            return cmd_hyper(config, args.out)
        if args.command == "describe":
            return cmd_describe(config, _parse_n_list(args))
        if args.command == "simulate":
            return cmd_simulate(config, args.n, args.out, args.bound)
        if args.command == "xcheck":
            return cmd_xcheck(config, args.out, args.m_max, args.n)
        raise ConfigError(f"unknown command {args.command!r}")
    except (RegimeError, DomainError, NotMaterializedError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ParameterError, DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _replace_window(config: RunConfig, window: tuple[int, int]) -> RunConfig:
    from dataclasses import replace

    if window[1] - window[0] < 8 or window[0] < 1:
        raise ConfigError(f"--window needs 1 <= lo and hi - lo >= 8, got {window}")
    return replace(config, window=window)


def _replace_eps(config: RunConfig, eps: float) -> RunConfig:
    from dataclasses import replace

    if not eps > 0:
        raise ConfigError(f"--eps must be positive, got {eps}")
    return replace(config, eps=eps)


if __name__ == "__main__":
    sys.exit(main())
