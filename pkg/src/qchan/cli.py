"""Command-line front end: measure, sweep, validate, visibility.

Exit codes: 0 success (validate: all rows pass), 1 validation failure,
2 usage error, 3 runtime or I/O failure.

Environment: QCHAN_DEFAULT_GRID overrides the default grid size (24); the
``--grid`` flag wins over the environment.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import channels as ch_mod
from .channels import KrausChannel, apply, builtin_kernel
from .measures import GadReferenceMu, closed_form_mu, visibilities
from .optimize import DOMAIN_ALL_PAIRS, DOMAIN_PROBE, OptimizerConfig, maximize_mu
from .states import max_noncommuting_pair

DEFAULT_GRID = 24
GRID_ENV_VAR = "QCHAN_DEFAULT_GRID"

CHANNEL_PARAMS = {
    "rtn": ("lambda",),
    "nmd": ("omega",),
    "pd": ("gamma",),
    "ad": ("gamma",),
    "gad": ("alpha", "xi"),
    "unruh": ("r",),
    "gdc": ("p0", "p1", "p2", "p3"),
}

# Sweeping these drives the channel through a memory kernel instead of a
# direct parameter: rtn over time t, nmd over probability p.
KERNEL_SWEEP_PARAMS = {"rtn": "t", "nmd": "p"}
DEFAULT_KERNELS = {"rtn": "rtn-damped", "nmd": "nmd-linear"}


def make_channel(label: str, params: Mapping[str, float]) -> KrausChannel:
    """Build a channel from its label and named parameters."""
    if label not in CHANNEL_PARAMS:
        raise ValueError(
            f"unknown channel {label!r} (available: {', '.join(sorted(CHANNEL_PARAMS))})"
        )
    required = CHANNEL_PARAMS[label]
    missing = [k for k in required if k not in params]
    if missing:
        raise ValueError(f"channel {label} needs parameter(s): {', '.join(missing)}")
    extra = [k for k in params if k not in required]
    if extra:
        raise ValueError(f"channel {label} does not take parameter(s): {', '.join(extra)}")
    args = [float(params[k]) for k in required]
    factory = {
        "rtn": ch_mod.rtn,
        "nmd": ch_mod.nmd,
        "pd": ch_mod.pd,
        "ad": ch_mod.ad,
        "gad": ch_mod.gad,
        "unruh": ch_mod.unruh,
        "gdc": ch_mod.gdc,
    }[label]
    return factory(*args)


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep over a channel; kernel_choice applies to rtn/nmd time sweeps."""

    channel_label: str
    fixed_params: Mapping[str, float]
    sweep_param: str
    start: float
    stop: float
    step: float
    kernel_choice: Optional[str] = None

    def __post_init__(self):
        if self.step <= 0.0:
            raise ValueError("sweep step must be positive")
        if self.start > self.stop:
            raise ValueError("sweep start must not exceed stop")
        if self.sweep_param in self.fixed_params:
            raise ValueError(f"sweep parameter {self.sweep_param!r} also given via --set")
        object.__setattr__(self, "fixed_params", dict(self.fixed_params))

    def values(self) -> list[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        vals = [self.start + i * self.step for i in range(count)]
        if vals and vals[-1] > self.stop:
            # accumulated rounding may overshoot the endpoint
            vals[-1] = self.stop
        return vals


@dataclass(frozen=True)
class SweepRow:
    value: float
    mu_numeric: float
    mu_closed_form: Optional[float]
    abs_error: Optional[float]
    kernel_value: Optional[float]


def _sweep_point(spec: SweepSpec, value: float, cfg: OptimizerConfig) -> SweepRow:
    label = spec.channel_label
    kernel_value = None
    if spec.sweep_param == KERNEL_SWEEP_PARAMS.get(label):
        kernel_name = spec.kernel_choice or DEFAULT_KERNELS[label]
        kernel = builtin_kernel(kernel_name, spec.fixed_params)
        kernel_value = kernel.evaluate(value)
        direct = {CHANNEL_PARAMS[label][0]: kernel_value}
        channel = make_channel(label, direct)
    else:
        params = dict(spec.fixed_params)
        params[spec.sweep_param] = value
        channel = make_channel(label, params)
    result = maximize_mu(channel, cfg)
    return SweepRow(
        value=value,
        mu_numeric=result.mu,
        mu_closed_form=result.closed_form,
        abs_error=result.abs_error,
        kernel_value=kernel_value,
    )


def run_sweep(spec: SweepSpec, cfg: OptimizerConfig, jobs: int = 1) -> list[SweepRow]:
    """Evaluate every sweep point; row order follows ascending sweep values.

    Points are independent and deterministic, so results do not depend on the
    worker count.
    """
    values = spec.values()
    if spec.sweep_param not in CHANNEL_PARAMS.get(spec.channel_label, ()) and (
        spec.sweep_param != KERNEL_SWEEP_PARAMS.get(spec.channel_label)
    ):
        raise ValueError(
            f"cannot sweep {spec.sweep_param!r} for channel {spec.channel_label!r}"
        )
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda v: _sweep_point(spec, v, cfg), values))
    else:
        rows = [_sweep_point(spec, v, cfg) for v in values]
    return rows


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.17g}"


def write_sweep_csv(spec: SweepSpec, rows: list[SweepRow], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([spec.sweep_param, "mu_numeric", "mu_closed_form", "abs_error", "kernel_value"])
    for row in rows:
        writer.writerow(
            [
                _fmt(row.value),
                _fmt(row.mu_numeric),
                _fmt(row.mu_closed_form),
                _fmt(row.abs_error),
                _fmt(row.kernel_value),
            ]
        )


def sweep_rows_as_dicts(rows: list[SweepRow]) -> list[dict]:
    return [
        {
            "value": r.value,
            "mu_numeric": r.mu_numeric,
            "mu_closed_form": r.mu_closed_form,
            "abs_error": r.abs_error,
            "kernel_value": r.kernel_value,
        }
        for r in rows
    ]


@dataclass(frozen=True)
class ValidationRow:
    """One channel/parameter point; passed is None for informational rows."""

    channel_label: str
    params: Mapping[str, float]
    mu_numeric: float
    mu_closed_form: Optional[float]
    abs_error: Optional[float]
    passed: Optional[bool]


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple
    tolerance: float
    overall_pass: bool = field(init=False)

    def __post_init__(self):
        asserted = [r.passed for r in self.rows if r.passed is not None]
        object.__setattr__(self, "overall_pass", all(asserted) if asserted else False)


_PI = math.pi

VALIDATION_GRID = (
    ("rtn", "lambda", (0.0, 0.25, 0.5, 0.75, 1.0)),
    ("nmd", "omega", (0.0, 0.25, 0.5, 0.75, 1.0)),
    ("pd", "gamma", (0.0, 0.25, 0.5, 0.75, 1.0)),
    ("ad", "gamma", (0.0, 0.25, 0.5, 0.75, 1.0)),
    ("unruh", "r", (0.0, _PI / 8.0, _PI / 6.0, _PI / 4.0)),
)

# Ten generalized-depolarizing weight vectors with nonincreasing weights, the
# ordering under which the analytic expression is the exact probe maximum.
GDC_VALIDATION_WEIGHTS = (
    (1.0, 0.0, 0.0, 0.0),
    (0.25, 0.25, 0.25, 0.25),
    (0.7, 0.1, 0.1, 0.1),
    (0.85, 0.05, 0.05, 0.05),
    (0.4, 0.2, 0.2, 0.2),
    (0.55, 0.15, 0.15, 0.15),
    (0.5, 0.3, 0.1, 0.1),
    (0.6, 0.2, 0.1, 0.1),
    (0.4, 0.3, 0.2, 0.1),
    (0.45, 0.25, 0.2, 0.1),
)

GAD_INFO_GRID = tuple(
    {"alpha": a, "xi": x} for a in (0.5, 1.0) for x in (0.3, 0.6, 0.9)
)


def run_validation(
    tolerance: float = 1e-4,
    grid_points_per_angle: int = DEFAULT_GRID,
    seed: int = 0,
) -> ValidationReport:
    """Maximize mu over the fixed reference parameter grid and compare closed forms.

    gad rows are informational (no trusted closed form; the quoted branch for
    xi < 1 is shown for reference) and excluded from overall_pass.
    """
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    cfg = OptimizerConfig(grid_points_per_angle=grid_points_per_angle, seed=seed)
    rows = []
    for label, name, values in VALIDATION_GRID:
        for value in values:
            result = maximize_mu(make_channel(label, {name: value}), cfg)
            rows.append(
                ValidationRow(
                    channel_label=label,
                    params={name: value},
                    mu_numeric=result.mu,
                    mu_closed_form=result.closed_form,
                    abs_error=result.abs_error,
                    passed=result.abs_error <= tolerance,
                )
            )
    for weights in GDC_VALIDATION_WEIGHTS:
        params = {f"p{i}": w for i, w in enumerate(weights)}
        result = maximize_mu(make_channel("gdc", params), cfg)
        rows.append(
            ValidationRow(
                channel_label="gdc",
                params=params,
                mu_numeric=result.mu,
                mu_closed_form=result.closed_form,
                abs_error=result.abs_error,
                passed=result.abs_error <= tolerance,
            )
        )
    for params in GAD_INFO_GRID:
        result = maximize_mu(make_channel("gad", params), cfg)
        reference = closed_form_mu("gad", params)
        assert isinstance(reference, GadReferenceMu)
        rows.append(
            ValidationRow(
                channel_label="gad",
                params=params,
                mu_numeric=result.mu,
                mu_closed_form=reference.branch_xi_below_one,
                abs_error=abs(result.mu - reference.branch_xi_below_one),
                passed=None,
            )
        )
    return ValidationReport(rows=tuple(rows), tolerance=tolerance)


def _parse_set(text: Optional[str]) -> dict[str, float]:
    if not text:
        return {}
    params: dict[str, float] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"--set entries must look like name=value, got {item!r}")
        name, _, raw = item.partition("=")
        name = name.strip()
        if name in params:
            raise ValueError(f"duplicate parameter {name!r} in --set")
        try:
            params[name] = float(raw)
        except ValueError:
            raise ValueError(f"parameter {name!r} has non-numeric value {raw!r}") from None
    return params


def _parse_sweep(text: str) -> tuple[str, float, float, float]:
    name, _, spec = text.partition("=")
    parts = spec.split(":")
    if not name or len(parts) != 3:
        raise ValueError("--sweep must look like name=start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ValueError(f"non-numeric sweep bounds in {text!r}") from None
    return name.strip(), start, stop, step


def _resolve_grid(flag_value: Optional[int]) -> int:
    if flag_value is not None:
        if flag_value < 2:
            raise ValueError("--grid must be at least 2")
        return flag_value
    env = os.environ.get(GRID_ENV_VAR)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{GRID_ENV_VAR} must be an integer, got {env!r}") from None
        if value < 2:
            raise ValueError(f"{GRID_ENV_VAR} must be at least 2")
        return value
    return DEFAULT_GRID


def _optimizer_config(args) -> OptimizerConfig:
    return OptimizerConfig(
        grid_points_per_angle=_resolve_grid(args.grid),
        seed=args.seed,
        domain=args.domain,
    )


def _result_document(args, channel, result) -> dict:
    doc = {
        "channel": channel.label,
        "params": dict(channel.params),
        "domain": args.domain,
        "mu": result.mu,
        "argmax_params": {
            "x": result.argmax_params.x,
            "phi": result.argmax_params.phi,
            "y": result.argmax_params.y,
            "xi": result.argmax_params.xi,
        },
        "closed_form": result.closed_form,
        "abs_error": result.abs_error,
        "evaluations": result.evaluations,
        "converged": result.converged,
    }
    if channel.label == "gad":
        reference = closed_form_mu("gad", channel.params)
        doc["unverified_reference"] = {
            "xi_below_one": reference.branch_xi_below_one,
            "xi_above_one": reference.branch_xi_above_one,
        }
    return doc


def _cmd_measure(args) -> int:
    channel = make_channel(args.channel, _parse_set(args.set))
    result = maximize_mu(channel, _optimizer_config(args))
    print(json.dumps(_result_document(args, channel, result), indent=2))
    return 0


def _cmd_sweep(args) -> int:
    name, start, stop, step = _parse_sweep(args.sweep)
    spec = SweepSpec(
        channel_label=args.channel,
        fixed_params=_parse_set(args.set),
        sweep_param=name,
        start=start,
        stop=stop,
        step=step,
        kernel_choice=args.kernel,
    )
    rows = run_sweep(spec, _optimizer_config(args), jobs=args.jobs)
    if args.format == "csv":
        with open(args.out, "w", newline="") as stream:
            write_sweep_csv(spec, rows, stream)
    else:
        document = {
            "channel": spec.channel_label,
            "sweep_param": spec.sweep_param,
            "fixed_params": dict(spec.fixed_params),
            "kernel": spec.kernel_choice,
            "domain": args.domain,
            "rows": sweep_rows_as_dicts(rows),
        }
        with open(args.out, "w") as stream:
            json.dump(document, stream, indent=2)
            stream.write("\n")
    return 0


def _params_text(params: Mapping[str, float]) -> str:
    return ", ".join(f"{k}={v:g}" for k, v in params.items())


def _cmd_validate(args) -> int:
    if args.tol <= 0.0:
        raise ValueError("--tol must be positive")
    report = run_validation(
        tolerance=args.tol,
        grid_points_per_angle=_resolve_grid(args.grid),
        seed=args.seed,
    )
    header = f"{'channel':<8} {'params':<40} {'mu_numeric':<22} {'closed_form':<22} {'abs_error':<12} status"
    print(header)
    print("-" * len(header))
    for row in report.rows:
        status = "info" if row.passed is None else ("pass" if row.passed else "FAIL")
        closed = "" if row.mu_closed_form is None else f"{row.mu_closed_form:.12g}"
        if row.channel_label == "gad":
            closed += " (unverified)"
        err = "" if row.abs_error is None else f"{row.abs_error:.3e}"
        print(
            f"{row.channel_label:<8} {_params_text(row.params):<40} "
            f"{row.mu_numeric:<22.12g} {closed:<22} {err:<12} {status}"
        )
    asserted = [r for r in report.rows if r.passed is not None]
    verdict = "PASS" if report.overall_pass else "FAIL"
    print(
        f"overall: {verdict} (tolerance={report.tolerance:g}, "
        f"asserted rows={len(asserted)}, informational rows={len(report.rows) - len(asserted)})"
    )
    if args.out:
        payload = {
            "tolerance": report.tolerance,
            "overall_pass": report.overall_pass,
            "rows": [
                {
                    "channel": r.channel_label,
                    "params": dict(r.params),
                    "mu_numeric": r.mu_numeric,
                    "mu_closed_form": r.mu_closed_form,
                    "abs_error": r.abs_error,
                    "passed": r.passed,
                }
                for r in report.rows
            ],
        }
        with open(args.out, "w") as stream:
            json.dump(payload, stream, indent=2)
            stream.write("\n")
    return 0 if report.overall_pass else 1


def _cmd_visibility(args) -> int:
    channel = make_channel(args.channel, _parse_set(args.set))
    if not (math.isfinite(args.x) and math.isfinite(args.phi)):
        raise ValueError("probe angles must be finite")
    rho_a, rho_b = max_noncommuting_pair(args.x, args.phi)
    pair = visibilities(apply(channel, rho_a), apply(channel, rho_b))
    document = {
        "channel": channel.label,
        "params": dict(channel.params),
        "x": args.x,
        "phi": args.phi,
        "v1": pair.v1,
        "v2": pair.v2,
        "measure": 4.0 * (pair.v1 - pair.v2),
    }
    print(json.dumps(document, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchan",
        description="Commutator-based quantumness of qubit channels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, domain=True):
        p.add_argument("--channel", required=True, help="channel label (rtn, nmd, pd, ad, gad, unruh, gdc)")
        p.add_argument("--set", default="", metavar="k=v[,k=v...]", help="channel/kernel parameters")
        if domain:
            p.add_argument("--grid", type=int, default=None, help=f"grid points per angle (default {DEFAULT_GRID}, env {GRID_ENV_VAR})")
            p.add_argument("--seed", type=int, default=0, help="seed for diagnostics")
            p.add_argument(
                "--domain",
                choices=(DOMAIN_PROBE, DOMAIN_ALL_PAIRS),
                default=DOMAIN_PROBE,
                help="probe: maximally noncommuting inputs (matches the analytic closed forms); "
                "all-pairs: unrestricted pure-state maximization",
            )

    p_measure = sub.add_parser("measure", help="maximize mu for one channel")
    add_common(p_measure)
    p_measure.set_defaults(func=_cmd_measure)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter and write rows to a file")
    add_common(p_sweep)
    p_sweep.add_argument("--sweep", required=True, metavar="k=start:stop:step")
    p_sweep.add_argument("--kernel", default=None, help="kernel for rtn/nmd time sweeps (rtn-damped, nmd-linear)")
    p_sweep.add_argument("--out", required=True, help="output file path")
    p_sweep.add_argument("--format", choices=("csv", "structured"), default="csv")
    p_sweep.add_argument("--jobs", type=int, default=1, help="concurrent sweep-point workers")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_validate = sub.add_parser("validate", help="compare numerical maxima against closed forms")
    p_validate.add_argument("--tol", type=float, default=1e-4)
    p_validate.add_argument("--grid", type=int, default=None)
    p_validate.add_argument("--seed", type=int, default=0)
    p_validate.add_argument("--out", default=None, help="optional JSON report path")
    p_validate.set_defaults(func=_cmd_validate)

    p_vis = sub.add_parser("visibility", help="visibilities of the probe pair after the channel")
    p_vis.add_argument("--channel", required=True)
    p_vis.add_argument("--set", default="", metavar="k=v[,k=v...]")
    p_vis.add_argument("--x", type=float, default=0.0, help="probe polar angle")
    p_vis.add_argument("--phi", type=float, default=0.0, help="probe azimuthal angle")
    p_vis.set_defaults(func=_cmd_visibility)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
