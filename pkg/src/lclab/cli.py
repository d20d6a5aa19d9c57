"""Command-line interface: one binary, one subcommand per pipeline stage.

Exit codes: 0 on success, 1 on a verification failure or internal numeric
error, 2 on usage errors.  Verdicts and reports are JSON; array data is
CSV; files are written atomically (temp file + rename), ``-`` means
stdin/stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import dist, mc, shape, specfun, transform, verify
from .errors import DivergenceError, DomainError, NonConvergenceError, NotNormalizedError

EXIT_OK = 0
EXIT_VERIFICATION_FAILURE = 1
EXIT_USAGE = 2


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _grid_json(grid: dist.GridDensity) -> str:
    payload = {
        "half_width": grid.half_width,
        "n_cells": grid.n_cells,
        "x": [float(x) for x in grid.nodes],
        "density": [float(v) for v in grid.values],
    }
    if grid.trusted_half_width is not None:
        payload["trusted_half_width"] = grid.trusted_half_width
    if grid.singular_points:
        payload["singular_points"] = list(grid.singular_points)
    return _json_dumps(payload)


def _emit_grid(grid: dist.GridDensity, out: str, fmt: str) -> None:
    _write_text(out, grid.to_csv() if fmt == "csv" else _grid_json(grid))


def _parse_t_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad t-list {text!r}") from None


def _even_int(text: str) -> int:
    value = int(text)
    if value % 2:
        raise argparse.ArgumentTypeError("cell count must be even")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lclab",
        description=(
            "Numeric checks around products of independent standard normals: "
            "X1*X2 has the non-log-concave density K0(|x|)/pi, yet "
            "X1*X2 - X3*X4 is exactly Laplace(0,1), which is log-concave."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-theorem", help="run the full verification pipeline")
    p.add_argument("--half-width", type=float, default=12.0)
    p.add_argument("--cells", type=_even_int, default=4096)
    p.add_argument("--tol-shape", type=float, default=1e-9)
    p.add_argument("--tol-mgf", type=float, default=1e-8)
    p.add_argument("--with-mc", action="store_true", help="include the seeded KS step")
    p.add_argument("--n", type=int, default=10**6, help="Monte Carlo sample size")
    p.add_argument("--out", default=None, help="write the JSON report here ('-' = stdout)")

    p = sub.add_parser("density", help="write a discretized density as CSV")
    p.add_argument("--law", choices=dist.builtin_density_names(), required=True)
    p.add_argument("--half-width", type=float, default=12.0)
    p.add_argument("--cells", type=_even_int, default=4096)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("selfdiff", help="self-difference of a grid or built-in law")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--law", choices=dist.builtin_density_names())
    src.add_argument("--in", dest="infile", help="grid CSV path ('-' = stdin)")
    p.add_argument("--half-width", type=float, default=12.0)
    p.add_argument("--cells", type=_even_int, default=4096)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("mgf", help="MGF values by every applicable route")
    p.add_argument("--law", choices=dist.builtin_density_names(), default="normal-product")
    p.add_argument("--t", type=_parse_t_list, required=True, help="comma list, e.g. 0,0.5,0.9")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", default="-")

    p = sub.add_parser("shape", help="log-concavity / log-convexity verdicts")
    p.add_argument(
        "--property",
        choices=("log-concave", "log-convex", "ratio-monotone"),
        required=True,
    )
    p.add_argument("--in", dest="infile", default="-", help="grid CSV for log-concave")
    p.add_argument("--function", choices=("k0",), default="k0", help="for interval checks")
    p.add_argument("--interval", default="0.01,30", help="a,b for interval checks")
    p.add_argument("--probes", type=int, default=2048)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default="-")

    p = sub.add_parser("sample", help="seeded Monte Carlo draws, optional KS test")
    p.add_argument(
        "--generator",
        choices=[g.value for g in mc.Generator],
        required=True,
    )
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default="-", help="values CSV")
    p.add_argument("--ks", action="store_true", help="also test against the Laplace CDF")
    p.add_argument("--alpha", type=float, default=0.001)
    p.add_argument("--ks-out", default=None, help="KS report JSON path")
    return parser


def _cmd_verify_theorem(args) -> int:
    report = verify.run_verification(
        half_width=args.half_width,
        n_cells=args.cells,
        tol_shape=args.tol_shape,
        tol_mgf=args.tol_mgf,
        with_mc=args.with_mc,
        mc_n=args.n,
    )
    for step in report.steps:
        metrics = ", ".join(f"{k}={v:.6g}" for k, v in sorted(step.metrics.items()))
        print(f"[{step.status.upper():4s}] {step.name}  ({metrics})")
    print(f"OVERALL: {'PASS' if report.overall else 'FAIL'}")
    if not report.overall:
        print(f"first failing step: {report.first_failure}")
    if args.out is not None:
        _write_text(args.out, _json_dumps(report.as_dict()))
    return EXIT_OK if report.overall else EXIT_VERIFICATION_FAILURE


def _cmd_density(args) -> int:
    grid = dist.discretize(dist.builtin_density(args.law), args.half_width, args.cells)
    _emit_grid(grid, args.out, args.format)
    return EXIT_OK


def _cmd_selfdiff(args) -> int:
    if args.law is not None:
        grid = dist.discretize(dist.builtin_density(args.law), args.half_width, args.cells)
    else:
        grid = dist.GridDensity.from_csv(_read_text(args.infile))
    _emit_grid(transform.self_difference(grid), args.out, args.format)
    return EXIT_OK


def _cmd_mgf(args) -> int:
    density = dist.builtin_density(args.law)
    rows = []
    for t in args.t:
        row = {"t": t, "law": args.law}
        m = transform.mgf_via_density(density, t, args.tol)
        row["density_quadrature"] = {
            "value": m.value,
            "abs_error_estimate": m.abs_error_estimate,
            "method": m.method.value,
        }
        if args.law == "normal-product":
            c = transform.mgf_via_conditioning(t, args.tol)
            row["gaussian_conditioning"] = {
                "value": c.value,
                "abs_error_estimate": c.abs_error_estimate,
                "method": c.method.value,
            }
        rows.append(row)
    _write_text(args.out, _json_dumps(rows))
    return EXIT_OK


def _cmd_shape(args) -> int:
    if args.property == "log-concave":
        grid = dist.GridDensity.from_csv(_read_text(args.infile))
        verdict = shape.check_log_concavity_grid(grid, args.tol)
    else:
        try:
            a, b = (float(tok) for tok in args.interval.split(","))
        except ValueError:
            raise DomainError(f"bad --interval {args.interval!r}") from None
        if args.property == "log-convex":
            verdict = shape.check_log_convexity_interval(
                specfun.k0_values, a, b, args.probes, args.tol
            )
        else:
            verdict = shape.check_ratio_monotonicity(a, b, args.probes)
    _write_text(args.out, _json_dumps(verdict.as_dict()))
    return EXIT_OK


def _cmd_sample(args) -> int:
    batch = mc.sample(mc.Generator(args.generator), args.seed, args.n)
    lines = ["value"] + [f"{v:.17g}" for v in batch.values]
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.ks or args.ks_out is not None:
        report = mc.ks_statistic(batch, dist.laplace_cdf, args.alpha)
        payload = {"generator": batch.generator.value, "seed": batch.seed}
        payload.update(report.as_dict())
        _write_text(args.ks_out if args.ks_out is not None else "-", _json_dumps(payload))
    return EXIT_OK


_COMMANDS = {
    "verify-theorem": _cmd_verify_theorem,
    "density": _cmd_density,
    "selfdiff": _cmd_selfdiff,
    "mgf": _cmd_mgf,
    "shape": _cmd_shape,
    "sample": _cmd_sample,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (
        DomainError,
        DivergenceError,
        NonConvergenceError,
        NotNormalizedError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION_FAILURE


if __name__ == "__main__":
    sys.exit(main())
