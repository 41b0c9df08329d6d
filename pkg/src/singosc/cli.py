"""Command-line front end.

    singosc params       trap -> model constants (JSON)
    singosc mode         integrate the mode function (CSV trajectory)
    singosc density      state densities on an (t, x) grid (CSV)
    singosc transitions  W_n^m matrix (CSV) with a JSON sidecar
    singosc figure NAME  regenerate fig1..fig6 data plus a manifest

A ``--config FILE`` of flat ``key = value`` lines supplies defaults for the
chosen subcommand; explicit flags win.  Exit codes: 0 success, 1 usage or
I/O problem, 2 numerical-domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, _io
from . import figures as figs
from .classical_mode import (
    Constant,
    IntegrationError,
    ModeState,
    ParametricResonance,
    Tabulated,
    bogoliubov,
    initial_mode,
    integrate_mode,
    resonance_mode,
    tanh_ramp,
)
from .specfun import DomainError
from .states import (
    AlphaState,
    NumberState,
    StateSpec,
    ZState,
    evaluate_density,
    mean_x2_alpha,
    mean_x2_z,
    x_grid,
)
from .trap_model import TrapParameters, effective_params
from .transitions import Regime, transition_matrix

EXIT_USAGE = 1
EXIT_DOMAIN = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _out(path):
    if path in (None, "-"):
        return sys.stdout
    return open(path, "w", newline="")


def _close(fh):
    if fh is not sys.stdout:
        fh.close()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_params(args):
    trap = TrapParameters(args.mu_ratio, args.voltage, args.half_spacing, args.charge)
    params = effective_params(trap)
    payload = {
        "inputs": {
            "reduced_mass_ratio": trap.reduced_mass_ratio,
            "voltage_V": trap.voltage_V,
            "half_spacing_m": trap.half_spacing_m,
            "charge": trap.charge,
        },
        **params.to_dict(),
    }
    fh = _out(args.output)
    fh.write(_io.dumps(payload))
    _close(fh)


def _profile(args):
    if args.profile == "constant":
        return Constant(args.omega)
    if args.profile == "resonance":
        return ParametricResonance(args.k, normalized=args.normalized)
    if args.profile == "tanh":
        return tanh_ramp(args.omega_i, args.omega_f, args.width)
    if args.profile == "table":
        if not args.table:
            raise UsageError("--table FILE is required for --profile table")
        data = np.loadtxt(args.table, delimiter=",", ndmin=2)
        return Tabulated(data[:, 0], data[:, 1])
    raise UsageError(f"unknown profile {args.profile!r}")


def cmd_mode(args):
    profile = _profile(args)
    initial = None
    if isinstance(profile, ParametricResonance):
        initial = initial_mode(1.0, args.t0)
    traj = integrate_mode(profile, args.t0, args.t1, args.rel_tol, initial=initial)
    fh = _out(args.output)
    traj.to_csv(fh)
    _close(fh)
    summary = {"points": len(traj), "max_wronskian_drift": traj.max_wronskian_drift, "profile": profile.describe()}
    w2_end = float(profile.omega_sq(args.t1))
    if abs(w2_end - profile.omega_f**2) <= 1e-9 * profile.omega_f**2:
        try:
            pair = bogoliubov(traj.final, profile.omega_f)
            summary.update(xi=pair.xi, eta=pair.eta, r=pair.reflection)
        except DomainError:
            pass
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(_io.dumps(summary))


def _mode_at_times(args, times):
    if args.mode == "constant":
        return [_constant_mode(args.omega, t) for t in times]
    if args.mode == "resonance":
        return [resonance_mode(args.k, t) for t in times]
    # integrated resonance profile, stepping through the requested times
    profile = ParametricResonance(args.k)
    out = []
    state = initial_mode(1.0, 0.0)
    for t in times:
        if t < 0:
            raise DomainError("integrated modes start at t = 0")
        if t > state.t:
            state = integrate_mode(profile, state.t, t, args.rel_tol, initial=state).final
        out.append(ModeState(float(t), state.eps, state.eps_dot))
    return out


def _constant_mode(omega, t):
    return initial_mode(omega, t)


def _state_spec(args):
    if args.state == "number":
        kind = NumberState(args.n)
    elif args.state == "alpha":
        kind = AlphaState(args.alpha)
    else:
        kind = ZState(args.z)
    return StateSpec(kind, args.d)


def cmd_density(args):
    spec = _state_spec(args)
    if args.times:
        times = sorted(args.times)
    else:
        if args.t_steps < 1:
            raise UsageError("--t-steps must be at least 1")
        times = list(np.linspace(args.t_min, args.t_max, args.t_steps))
    modes = _mode_at_times(args, times)
    if args.x_min is not None or args.x_max is not None:
        if args.x_min is None or args.x_max is None:
            raise UsageError("give both --x-min and --x-max")
        if not (0 < args.x_min < args.x_max) or args.points < 2:
            raise UsageError("grid needs 0 < x-min < x-max and at least 2 points")
        x = np.linspace(args.x_min, args.x_max, args.points)
    else:
        # union of the supports at all requested times
        lo, hi = math.inf, 0.0
        for mode in modes:
            s = mode.abs_eps_sq
            if isinstance(spec.kind, AlphaState):
                centre = mean_x2_alpha(spec.kind.alpha, spec.d, mode)
            elif isinstance(spec.kind, ZState):
                centre = mean_x2_z(spec.kind.z, spec.d, mode)
            else:
                centre = s * (spec.d + 1.0 + 2.0 * spec.kind.n)
            g = x_grid(spec.d, s, 2, args.width, centre)
            lo, hi = min(lo, g[0]), max(hi, g[-1])
        x = np.sqrt(np.linspace(lo * lo, hi * hi, args.points))
        x[0] = max(x[0], 1e-3 * x[1])
    tcol, xcol, dcol = [], [], []
    for mode in modes:
        grid = evaluate_density(spec, mode, x, asymptotic=args.asymptotic)
        dens = grid.density
        xs = grid.x
        if args.symmetric:
            xs = np.concatenate([-xs[::-1], xs])
            dens = 0.5 * np.concatenate([dens[::-1], dens])
        tcol.append(np.full(xs.size, mode.t))
        xcol.append(xs)
        dcol.append(dens)
    fh = _out(args.output)
    _io.write_csv(fh, ["t", "x", "density"], [np.concatenate(tcol), np.concatenate(xcol), np.concatenate(dcol)])
    _close(fh)


def cmd_transitions(args):
    if (args.r is None) == (args.rd is None):
        raise UsageError("give exactly one of --r and --rd")
    r = args.r if args.r is not None else args.rd / args.d
    tm = transition_matrix(args.d, r, args.rows, args.cols, Regime.parse(args.regime))
    header = ["n"] + [f"m{m}" for m in range(tm.m_max_cols)]
    cols = [np.arange(tm.n_max_rows, dtype=float)] + [tm.entries[:, m] for m in range(tm.m_max_cols)]
    fh = _out(args.output)
    _io.write_csv(fh, header, cols)
    _close(fh)
    sidecar = args.sidecar
    if sidecar is None and args.output not in (None, "-"):
        sidecar = args.output + ".json"
    if sidecar:
        with open(sidecar, "w") as fh:
            fh.write(_io.dumps(tm.sidecar()))


def _write_figure(name, params, out_dir):
    header, cols, extra = figs.generate(name, params)
    os.makedirs(out_dir, exist_ok=True)
    csv_name = f"{name}.csv"
    _io.write_csv(os.path.join(out_dir, csv_name), header, cols)
    manifest = {
        "figure": name,
        "version": __version__,
        "parameters": params,
        "columns": header,
        "data": csv_name,
    }
    if extra:
        manifest["matrix"] = extra
    with open(os.path.join(out_dir, f"{name}.manifest.json"), "w") as fh:
        fh.write(_io.dumps(manifest))


def cmd_figure(args):
    if args.manifest:
        with open(args.manifest) as fh:
            manifest = json.load(fh)
        name = manifest["figure"]
        params = figs.params_for(name, manifest["parameters"])
        out_dir = args.output_dir or os.path.dirname(os.path.abspath(args.manifest))
        _write_figure(name, params, out_dir)
        return
    if not args.name:
        raise UsageError("give a figure name or --manifest")
    names = figs.FIGURES if args.name == "all" else [args.name]
    for name in names:
        _write_figure(name, figs.params_for(name), args.output_dir or ".")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="singosc", description="Time-dependent singular oscillator toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="flat key=value file with defaults for the subcommand")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("params", help="trap parameters -> model constants")
    p.add_argument("--mu-ratio", type=float, default=1e5, help="reduced mass in electron masses")
    p.add_argument("--voltage", type=float, default=100.0, help="cap voltage U [V]")
    p.add_argument("--half-spacing", type=float, default=1e-3, help="L [m]")
    p.add_argument("--charge", type=float, default=1.0, help="ion charge in units of e")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("mode", help="integrate the classical mode function")
    p.add_argument("--profile", choices=["constant", "resonance", "tanh", "table"], default="resonance")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--k", type=float, default=0.02)
    p.add_argument("--normalized", action="store_true", help="divide the resonance profile by 1+k")
    p.add_argument("--omega-i", type=float, default=1.0)
    p.add_argument("--omega-f", type=float, default=2.0)
    p.add_argument("--width", type=float, default=1.0, help="tanh ramp width")
    p.add_argument("--table", help="CSV with columns t, omega^2")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=40.0)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--output", "-o")
    p.add_argument("--summary", help="JSON file for drift and Bogoliubov data")
    p.set_defaults(func=cmd_mode)

    p = sub.add_parser("density", help="state densities on a grid")
    p.add_argument("--state", choices=["number", "alpha", "z"], default="number")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--alpha", type=_complex, default=0j)
    p.add_argument("--z", type=_complex, default=0j)
    p.add_argument("--d", type=float, default=1e5)
    p.add_argument("--mode", choices=["constant", "resonance", "resonance-integrated"], default="resonance")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--k", type=float, default=0.02)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--times", type=_float_list, help="comma-separated times")
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=40.0)
    p.add_argument("--t-steps", type=int, default=5)
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--width", type=float, default=6.0, help="grid half-width in std of x^2")
    p.add_argument("--asymptotic", action="store_true")
    p.add_argument("--symmetric", action="store_true", help="mirror to x < 0 with half weight per side")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("transitions", help="transition probability matrix")
    p.add_argument("--d", type=float, default=1e5)
    p.add_argument("--r", type=float)
    p.add_argument("--rd", type=float)
    p.add_argument("--rows", type=int, default=16)
    p.add_argument("--cols", type=int, default=16)
    p.add_argument("--regime", default="ExactJacobi", help=", ".join(m.value for m in Regime))
    p.add_argument("--output", "-o")
    p.add_argument("--sidecar", help="JSON sidecar path (default: OUTPUT.json)")
    p.set_defaults(func=cmd_transitions)

    p = sub.add_parser("figure", help="regenerate figure data")
    p.add_argument("name", nargs="?", choices=list(figs.FIGURES) + ["all"])
    p.add_argument("--output-dir", "-d")
    p.add_argument("--manifest", help="replay a manifest written by a previous run")
    p.set_defaults(func=cmd_figure)

    return parser, sub


def _read_config(path):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _apply_config(subparser, values):
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None:
            raise UsageError(f"config key {key!r} is not an option of this subcommand")
        if action.nargs == 0:  # store_true
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        else:
            conv = action.type or str
            try:
                defaults[key] = conv(raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {key!r}: {exc}") from exc
            if action.choices is not None and defaults[key] not in action.choices:
                raise UsageError(f"config key {key!r}: {raw!r} not in {sorted(action.choices)}")
    subparser.set_defaults(**defaults)


def main(argv=None) -> int:
    parser, sub = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if args.config:
            _apply_config(sub.choices[args.command], _read_config(args.config))
            args = parser.parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"singosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, IntegrationError) as exc:
        print(f"singosc: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"singosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse: usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
