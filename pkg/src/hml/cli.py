"""Command-line entry point ``hml``.

Subcommands::

    hml moments SPEC [--N N]
    hml criterion NAME SPEC [resolution flags]
    hml opnorm SPEC SPACE [--N N | --N-list 16,64,...]
    hml experiment NAME [SPEC] [parameters]

``SPEC`` follows the measure grammar of :mod:`hml.specs`; ``SPACE`` is
``h2`` or ``dalpha:<alpha>``. Every report echoes the fully resolved
argument vector under ``command.argv``; passing it back reproduces the
payload exactly.

Exit codes: 0 success, 1 failed assertion, 2 usage or parse error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import analytic, criteria, harness, hankel, report
from .config import DEFAULTS, ConfigError, load_defaults
from .grids import DiskGrid, QuadratureScheme
from .measure import DiskDensityMeasure, MomentSequence, RadialMeasure, conjugate_moments
from .specs import MeasureSpecError, parse_measure

EXIT_OK, EXIT_ASSERT, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3

CRITERIA = ("condition2", "carleson-kernel", "carleson-box", "box4", "moment-decay")
EXPERIMENTS = ("identity", "counterexample", "family-scan", "hilbert", "pairing")


class UsageError(ValueError):
    pass


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


# flag name -> (config key, type)
_NUMERIC = {
    "N": ("N", int), "tol": ("tol", float), "max-iter": ("max_iter", int),
    "grid-depth": ("grid_depth", int), "grid-angles": ("grid_angles", int),
    "grid-uniform": ("grid_uniform", int), "quad-radial": ("quad_radial", int),
    "quad-angular": ("quad_angular", int), "quad-levels": ("quad_levels", int),
    "quad-per-level": ("quad_per_level", int), "box-levels": ("box_levels", int),
    "box-per-level": ("box_per_level", int), "depth": ("depth", int),
    "threshold": ("threshold", float), "seed": ("seed", int), "samples": ("samples", int),
    "K": ("K", int), "degree": ("degree", int), "trials": ("trials", int),
    "scan-N": ("scan_N", int), "scan-grid-depth": ("scan_grid_depth", int),
    "scan-carleson-depth": ("scan_carleson_depth", int),
    "scan-box-depth": ("scan_box_depth", int),
}
_LISTS = {"N-list": ("N_list", _int_list), "s-list": ("s_list", _float_list)}

# which flags each subcommand echoes
_USES = {
    "moments": ["N"],
    "criterion": ["N", "grid-depth", "grid-angles", "grid-uniform", "quad-radial",
                  "quad-angular", "quad-levels", "quad-per-level", "box-levels",
                  "box-per-level", "depth", "threshold"],
    "opnorm": ["N", "tol", "max-iter"],
}
_EXPERIMENT_USES = {
    "identity": ["samples", "seed", "tol"],
    "counterexample": ["K", "grid-depth", "grid-angles", "grid-uniform", "quad-radial",
                       "quad-angular", "quad-levels", "quad-per-level", "box-levels",
                       "box-per-level"],
    "family-scan": ["s-list", "scan-N", "scan-grid-depth", "scan-carleson-depth",
                    "scan-box-depth", "grid-angles", "quad-levels", "quad-per-level",
                    "box-levels", "box-per-level", "tol"],
    "hilbert": ["N-list", "tol"],
    "pairing": ["degree", "trials", "seed", "tol"],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hml", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", "-o", default=None, help="write the report here (default stdout)")
        p.add_argument("--no-timing", action="store_true",
                       help="omit wall-clock timing from the document")
        for flag, (_, typ) in _NUMERIC.items():
            p.add_argument(f"--{flag}", type=typ, default=None, dest=flag.replace("-", "_"))
        for flag, (_, typ) in _LISTS.items():
            p.add_argument(f"--{flag}", type=typ, default=None, dest=flag.replace("-", "_"))
        p.add_argument("--r-max", type=float, default=None, dest="r_max",
                       help="cap grid radii at this value (included in the grid)")

    p = sub.add_parser("moments", help="moment table of a measure")
    p.add_argument("spec")
    common(p)

    p = sub.add_parser("criterion", help="evaluate a boundedness criterion")
    p.add_argument("name", help="one of " + ", ".join(CRITERIA))
    p.add_argument("spec")
    common(p)

    p = sub.add_parser("opnorm", help="finite-section operator norm")
    p.add_argument("spec")
    p.add_argument("space", help="h2 or dalpha:<alpha>")
    common(p)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name", help="one of " + ", ".join(EXPERIMENTS))
    p.add_argument("spec", nargs="?", default=None)
    common(p)
    return parser


def _resolve(args, defaults, flags):
    """Resolved parameters and the argv that reproduces them."""
    params, argv = {}, []
    for flag in flags:
        dest = flag.replace("-", "_")
        if flag in _NUMERIC:
            key, typ = _NUMERIC[flag]
            value = getattr(args, dest)
            value = typ(defaults[key]) if value is None else value
            argv.append(f"--{flag}=" + (repr(value) if isinstance(value, float) else str(value)))
        else:
            key, conv = _LISTS[flag]
            value = getattr(args, dest)
            value = conv(str(defaults[key])) if value is None else value
            argv.append(f"--{flag}=" + ",".join(repr(v) if isinstance(v, float) else str(v)
                                                for v in value))
        params[key] = value
    return params, argv


def _grid(p, r_max=None):
    return DiskGrid(p.get("grid_depth", DEFAULTS["grid_depth"]),
                    p.get("grid_angles", DEFAULTS["grid_angles"]),
                    p.get("grid_uniform", DEFAULTS["grid_uniform"]), r_max)


def _quad(p):
    return QuadratureScheme(
        p.get("quad_radial", DEFAULTS["quad_radial"]),
        p.get("quad_angular", DEFAULTS["quad_angular"]),
        p.get("quad_levels", DEFAULTS["quad_levels"]),
        p.get("quad_per_level", DEFAULTS["quad_per_level"]),
        p.get("box_levels", DEFAULTS["box_levels"]),
        p.get("box_per_level", DEFAULTS["box_per_level"]),
    )


def _moments_of(measure, N) -> MomentSequence:
    if isinstance(measure, DiskDensityMeasure):
        return conjugate_moments(measure, N)
    return MomentSequence(measure.moments(N), measure)


def _require_radial(measure, what):
    if not isinstance(measure, RadialMeasure):
        raise UsageError(f"{what} needs a radial measure (lebesgue, powerweight:, atoms:)")
    return measure


def cmd_moments(measure, p):
    m = _moments_of(measure, p["N"])
    v = m.values
    rows = [[n, v[n], (n + 1) * v[n]] for n in range(v.size)]
    kind = "conjugate moments" if isinstance(measure, DiskDensityMeasure) else "moments"
    payload = {"measure": measure.spec, "columns": ["n", "mu[n]", "(n+1)mu[n]"], "rows": rows}
    return payload, [f"{kind}: closed form"], True


def _criterion_payload(rep: criteria.CriterionReport):
    return {"criterion": rep.name, "value": rep.value, "argmax": rep.argmax,
            "samples": rep.samples, "error_estimate": rep.error, "method": rep.method,
            "profile": [list(x) for x in rep.profile]}


def cmd_criterion(name, measure, p, r_max):
    if name not in CRITERIA:
        raise UsageError(f"unknown criterion {name!r}; valid: {', '.join(CRITERIA)}")
    quad = _quad(p)
    if name == "condition2":
        rep = criteria.condition2_sup(_moments_of(measure, p["N"]), _grid(p, r_max), quad)
    elif name == "carleson-kernel":
        rep = criteria.carleson_kernel_sup(_require_radial(measure, name), _grid(p, r_max), quad)
    elif name == "carleson-box":
        rep = criteria.carleson_box_report(_require_radial(measure, name), p["depth"])
    elif name == "box4":
        rep = criteria.box_condition4(_moments_of(measure, p["N"]), p["depth"], quad)
    else:
        m = _moments_of(measure, p["N"])
        rep = criteria.moment_decay_report(m)
        payload = _criterion_payload(rep)
        payload["threshold"] = p["threshold"]
        payload["exceeded"] = rep.value > p["threshold"]
        return {"measure": measure.spec, **payload}, ["closed-form moments"], True
    return {"measure": measure.spec, **_criterion_payload(rep)}, [rep.method], True


def _space(text):
    if text == "h2":
        return None
    if text.startswith("dalpha:"):
        try:
            return float(text[len("dalpha:"):])
        except ValueError:
            pass
    raise UsageError(f"space must be h2 or dalpha:<alpha>, got {text!r}")


def cmd_opnorm(measure, space, p, N_list):
    alpha = _space(space)
    Ns = N_list or [p["N"]]
    m = _moments_of(measure, 2 * max(Ns))
    rows = []
    for n in Ns:
        H = hankel.from_moments(m, n)
        rep = (hankel.operator_norm_h2(H, p["tol"], p["max_iter"]) if alpha is None else
               hankel.operator_norm_dalpha(H, alpha, p["tol"], p["max_iter"]))
        rows.append({"N": n, "value": rep.value, "iterations": rep.iterations,
                     "residual": rep.residual, "space": rep.space})
    payload = {"measure": measure.spec, "space": space, **rows[-1], "profile": rows}
    return payload, ["power iteration with FFT matvec"], True


def cmd_experiment(name, measure, p):
    if name not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {name!r}; valid: {', '.join(EXPERIMENTS)}")
    if name == "identity":
        if measure is None:
            raise UsageError("identity experiment needs a measure spec")
        m = _moments_of(measure, 64)
        rep = harness.run_identity_check(m, p["samples"], p["seed"], tol=p["tol"])
    elif name == "counterexample":
        rep = harness.run_counterexample(p["K"], _grid(p), _quad(p))
    elif name == "family-scan":
        rep = harness.run_power_family_scan(
            p["s_list"], p["scan_N"], p["scan_grid_depth"], p["scan_carleson_depth"],
            p["scan_box_depth"], _quad(p), p["tol"], angles=p["grid_angles"])
    elif name == "hilbert":
        rep = harness.run_hilbert_convergence(p["N_list"], p["tol"])
    else:
        if measure is None:
            raise UsageError("pairing experiment needs a measure spec")
        rep = harness.run_pairing_probe(_require_radial(measure, name), p["degree"],
                                        p["trials"], p["seed"], p["tol"])
    return rep.payload(), [f"experiment {rep.name}"], rep.passed


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        defaults = load_defaults()
    except (ConfigError, OSError) as exc:
        print(f"hml: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    cmd = args.command
    flags = _USES.get(cmd) or _EXPERIMENT_USES.get(getattr(args, "name", ""), [])
    params, flag_argv = _resolve(args, defaults, flags)
    positional = [cmd] + [x for x in (getattr(args, "name", None), getattr(args, "spec", None),
                                      getattr(args, "space", None)) if x is not None]
    echo_argv = positional + flag_argv
    r_max = args.r_max
    if r_max is not None and cmd == "criterion":
        echo_argv.append(f"--r-max={r_max!r}")
    if args.N_list and cmd == "opnorm":
        echo_argv.append("--N-list=" + ",".join(map(str, args.N_list)))
    echo_argv.append(f"--format={args.format}")
    command = {"subcommand": cmd, "argv": echo_argv, "parameters": params}

    t0 = time.perf_counter()
    try:
        spec = getattr(args, "spec", None)
        measure = parse_measure(spec) if spec is not None else None
        if cmd == "moments":
            payload, prov, ok = cmd_moments(measure, params)
        elif cmd == "criterion":
            payload, prov, ok = cmd_criterion(args.name, measure, params, r_max)
        elif cmd == "opnorm":
            payload, prov, ok = cmd_opnorm(measure, args.space, params, args.N_list)
        else:
            payload, prov, ok = cmd_experiment(args.name, measure, params)
    except (MeasureSpecError, UsageError, criteria.TailBoundError, ValueError) as exc:
        print(f"hml: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except hankel.ConvergenceError as exc:
        doc = report.document(command, {"error": "non-convergence", "message": str(exc),
                                        "iterations": exc.iterations,
                                        "residual": exc.residual}, ["power iteration"])
        _write(report.render(doc, "json"), args.output)
        print(f"hml: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    timing = None if args.no_timing else {"seconds": time.perf_counter() - t0}
    doc = report.document(command, payload, prov, timing)
    _write(report.render(doc, args.format), args.output)
    return EXIT_OK if ok else EXIT_ASSERT


if __name__ == "__main__":
    sys.exit(main())
