"""Batch command-line interface.

Every subcommand is deterministic: identical arguments and configuration
produce byte-identical delimited output (floats printed with 17
significant digits, fixed field order).  Exit codes: 0 success or pass,
2 usage/domain error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import branching, characters, lowest_weight, sl2
from .errors import MobnucError
from .geometry import (Interval, inner_distance, second_inner_distance,
                       translation_pair)
from .report import VerificationReport, csv_lines, json_dumps

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILED = 3

_IDENTITIES = ("bch", "rotation", "euclidean", "m1", "t2", "m2", "kdc", "ko", "glw")


@dataclass
class RunConfig:
    """Run-wide knobs, merged from an optional JSON config file with
    command-line flags winning."""

    truncation_dims: list = field(default_factory=lambda: [50, 100, 200])
    block: int = 10
    tolerance_overrides: dict = field(default_factory=dict)
    output_format: str = "json"
    output_path: str | None = None

    def validate(self):
        dims = sorted(int(d) for d in self.truncation_dims)
        if dims != [int(d) for d in self.truncation_dims]:
            raise MobnucError("truncation dims must be sorted ascending")
        if self.block > min(dims) // 4:
            raise MobnucError("block must be at most min(dims)/4")
        if self.output_format not in ("json", "csv"):
            raise MobnucError("output format must be json or csv")
        return self


def _merge_config(args, default_format="json") -> RunConfig:
    cfg = RunConfig(output_format=default_format)
    if getattr(args, "config", None):
        with open(args.config) as f:
            raw = json.load(f)
        for key in ("truncation_dims", "block", "tolerance_overrides",
                    "output_format", "output_path"):
            if key in raw:
                setattr(cfg, key, raw[key])
    if getattr(args, "dims", None):
        cfg.truncation_dims = args.dims
    if getattr(args, "block", None):
        cfg.block = args.block
    if getattr(args, "format", None):
        cfg.output_format = args.format
    if getattr(args, "output", None):
        cfg.output_path = args.output
    return cfg.validate()


def _parse_endpoints(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise MobnucError(f"expected two comma-separated endpoints, got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",")]


def _parse_ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",")]


def _write(text: str, path: str | None):
    if path:
        with open(path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_geom(args) -> int:
    cfg = _merge_config(args)
    outer = Interval.from_line(*_parse_endpoints(args.outer))
    inner = Interval.from_line(*_parse_endpoints(args.inner))
    a, aprime = translation_pair(outer, inner)
    out = {
        "outer": list(_parse_endpoints(args.outer)),
        "inner": list(_parse_endpoints(args.inner)),
        "ell": inner_distance(outer, inner),
        "ell_prime": second_inner_distance(outer, inner),
        "a": a,
        "a_prime": aprime,
    }
    _write(json_dumps(out), cfg.output_path)
    return EXIT_OK


def _run_identity(args, cfg: RunConfig) -> VerificationReport:
    name = args.identity
    tol = cfg.tolerance_overrides.get(name)
    params = _parse_floats(args.param) if args.param else [1.0]
    if name == "bch":
        s = params[0]
        t = params[1] if len(params) > 1 else 0.5
        return sl2.verify_bch_identity(s, t, tolerance=tol or 1e-10)
    if name == "rotation":
        return sl2.verify_rotation_factorization(params[0], tolerance=tol or 1e-10)
    if name == "euclidean":
        return sl2.verify_euclidean_factorization(params[0], tolerance=tol or 1e-10)
    dims, block = cfg.truncation_dims, cfg.block
    if name == "m1":
        return lowest_weight.verify_factorization(args.alpha, params[0], dims,
                                                  block, tolerance=tol)
    if name == "t2":
        return lowest_weight.verify_two_route_factorization(
            args.alpha, params[0], max(dims), block, tolerance=tol)
    if name in ("m2", "kdc", "ko"):
        param = params[0] if name != "ko" else 0.0
        return lowest_weight.verify_inequality(args.alpha, param, dims, block,
                                               name, tolerance=tol)
    if name == "glw":
        return lowest_weight.verify_weight_deformation(args.alpha, dims,
                                                       tolerance=tol)
    raise MobnucError(f"unknown identity {name!r}")


def cmd_verify(args) -> int:
    cfg = _merge_config(args)
    report = _run_identity(args, cfg)
    d = report.to_dict()
    if cfg.output_format == "csv":
        rows = list(zip(report.dims_tested, report.residuals))
        text = csv_lines(["N", "residual"], rows)
    else:
        text = json_dumps(d)
    _write(text, cfg.output_path)
    if args.emit_plot_data:
        _write(csv_lines(["N", "residual"],
                         list(zip(report.dims_tested, report.residuals))),
               args.emit_plot_data)
    if args.plot_dir:
        from . import plots
        plots.convergence_figure(d, f"{args.plot_dir}/verify_{report.identity_name}.png")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_char(args) -> int:
    cfg = _merge_config(args)
    if not args.spectrum:
        raise MobnucError("char requires --spectrum")
    spec = characters.load_spectrum(args.spectrum)
    if args.chain:
        if args.lam is None or not args.outer or not args.inner:
            raise MobnucError("--chain requires --lambda, --outer and --inner")
        outer = Interval.from_line(*_parse_endpoints(args.outer))
        inner = Interval.from_line(*_parse_endpoints(args.inner))
        report = characters.bw_nuclearity_bound(
            spec, outer, inner, args.lam,
            time=args.time).to_dict()
        _write(json_dumps(report), cfg.output_path)
        if args.plot_dir:
            from . import plots
            plots.chain_figure(report, f"{args.plot_dir}/chain.png")
        return EXIT_OK
    if args.kms:
        if not args.grid:
            raise MobnucError("--kms requires --grid")
        grid = _parse_floats(args.grid)
        fit = characters.log_ellipticity_fit(spec, grid).to_dict()
        _write(json_dumps(fit), cfg.output_path)
        if args.emit_plot_data:
            _write(csv_lines(["s", "log_trace"],
                             list(zip(fit["grid"], fit["log_trace"]))),
                   args.emit_plot_data)
        if args.plot_dir:
            from . import plots
            plots.fit_figure(fit, f"{args.plot_dir}/kms_fit.png")
        return EXIT_OK
    if args.s is None:
        raise MobnucError("char requires --s (or --chain / --kms)")
    value = characters.character(spec, args.s)
    out = {"s": args.s, "value": value,
           "log_value": characters.character_log(spec, args.s)}
    _write(json_dumps(out), cfg.output_path)
    return EXIT_OK


def cmd_branch(args) -> int:
    cfg = _merge_config(args, default_format="csv")
    if args.partition:
        if not args.grid:
            raise MobnucError("--partition requires --grid")
        grid = _parse_floats(args.grid)
        rows = branching.partition_curve(args.d, grid)
        header = ["s", "value", "closed_form"] if args.d == 3 else ["s", "value"]
        text = csv_lines(header, rows) if cfg.output_format == "csv" else \
            json_dumps({"d": args.d, "rows": [list(r) for r in rows]})
        _write(text, cfg.output_path)
        if args.emit_plot_data:
            _write(csv_lines(header, rows), args.emit_plot_data)
        if args.plot_dir:
            from . import plots
            plots.partition_figure(rows, args.d, f"{args.plot_dir}/partition_d{args.d}.png")
        return EXIT_OK
    rows = branching.multiplicity_table(args.d, args.kmax)
    header = ["d", "k", "m_d", "N_d"]
    text = csv_lines(header, rows) if cfg.output_format == "csv" else \
        json_dumps({"d": args.d, "rows": [list(r) for r in rows]})
    _write(text, cfg.output_path)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mobnuc",
        description=("interval geometry, operator-identity verification, "
                     "characters/nuclearity bounds, and free-field branching"))
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config merged under the flags")
        sp.add_argument("--format", choices=("json", "csv"))
        sp.add_argument("--output", help="write output here instead of stdout")

    g = sub.add_parser("geom", help="inner distances of an interval inclusion")
    g.add_argument("--outer", required=True, help="line endpoints, e.g. -2,2")
    g.add_argument("--inner", required=True)
    common(g)
    g.set_defaults(func=cmd_geom)

    v = sub.add_parser("verify", help="run one identity/inequality check")
    v.add_argument("--identity", required=True, choices=_IDENTITIES)
    v.add_argument("--alpha", type=float, default=1.0)
    v.add_argument("--param", help="flow parameter (bch takes s,t)")
    v.add_argument("--dims", type=_parse_ints)
    v.add_argument("--block", type=int)
    v.add_argument("--emit-plot-data", metavar="CSV")
    v.add_argument("--plot-dir", metavar="DIR")
    common(v)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("char", help="characters, bound chains, KMS fit")
    c.add_argument("--spectrum", help="spectrum JSON file")
    c.add_argument("--s", type=float)
    c.add_argument("--chain", action="store_true")
    c.add_argument("--lambda", dest="lam", type=float)
    c.add_argument("--outer")
    c.add_argument("--inner")
    c.add_argument("--time", type=float)
    c.add_argument("--kms", action="store_true")
    c.add_argument("--grid", help="comma-separated s grid")
    c.add_argument("--emit-plot-data", metavar="CSV")
    c.add_argument("--plot-dir", metavar="DIR")
    common(c)
    c.set_defaults(func=cmd_char)

    b = sub.add_parser("branch", help="free-field branching tables and curves")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--kmax", type=int, default=20)
    b.add_argument("--partition", action="store_true")
    b.add_argument("--grid", help="comma-separated s grid")
    b.add_argument("--emit-plot-data", metavar="CSV")
    b.add_argument("--plot-dir", metavar="DIR")
    common(b)
    b.set_defaults(func=cmd_branch)
    return p


_VALUE_FLAGS = ("--outer", "--inner", "--param", "--grid", "--dims", "--s",
                "--time", "--lambda")


def _merge_negative_values(argv):
    """Join flags with values that begin with a minus sign (e.g.
    ``--outer -2,2`` -> ``--outer=-2,2``) so argparse does not read the
    value as an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok in _VALUE_FLAGS and i + 1 < len(argv)
                and argv[i + 1].startswith("-")
                and any(c.isdigit() for c in argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(list(argv)))
    try:
        return args.func(args)
    except (ValueError, OSError, TypeError) as exc:
        # MobnucError subclasses ValueError; JSONDecodeError subclasses both
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
