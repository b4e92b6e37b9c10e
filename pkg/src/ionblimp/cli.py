"""Command-line surface: blimpsim <verb> ...

Verbs:

* ``simulate <scenario.cfg>``   run a scenario, print its summary
* ``linearize <config.cfg>``    linear model about the configured trim
* ``certify-gains <config.cfg>`` evaluate or grid-search (k1, k2)
* ``thruster-map <preset>``     emit a measured thrust map as text
* ``step-response <k_u>``       surge-channel closed-loop step samples

Every verb exits 0 on success; failures print one machine-parseable
``error: ...`` line on stderr and exit 1 (argparse usage errors exit 2).
"""

import argparse
import configparser
import sys
from pathlib import Path

import numpy as np

from . import harness, inner_loop, thruster
from .dynamics import AirshipParams

_MAP_PRESETS = {
    "throttle": thruster.THROTTLE_MAP,
    "spacing-dual": thruster.SPACING_MAP_DUAL_RING,
}


def _load_params_config(path):
    """Read [params] and optional [trim] from a versioned config file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    first = text.splitlines()[0].strip() if text.strip() else ""
    if first != harness.CONFIG_HEADER:
        raise ValueError(f"{path}: first line must be {harness.CONFIG_HEADER!r}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.read_string(text)
    kv = {}
    if parser.has_section("params"):
        kv = {key: parser.getfloat("params", key) for key in parser.options("params")}
    params = AirshipParams(**kv)
    speed, thrust = 1.0, 0.05
    if parser.has_section("trim"):
        speed = parser.getfloat("trim", "speed", fallback=speed)
        thrust = parser.getfloat("trim", "thrust", fallback=thrust)
    return params, speed, thrust


def _grid(text: str) -> np.ndarray:
    """Parse 'start:stop:count' into a grid, or a single float into [value]."""
    if ":" in text:
        start, stop, count = text.split(":")
        return np.linspace(float(start), float(stop), int(count))
    return np.array([float(text)])


def _cmd_simulate(args) -> int:
    scenario = harness.load_scenario(args.scenario)
    if args.csv or args.summary:
        from dataclasses import replace

        scenario = replace(
            scenario,
            csv_path=args.csv or scenario.csv_path,
            summary_path=args.summary or scenario.summary_path,
        )
    result = harness.run_scenario(scenario)
    sys.stdout.write(harness.format_summary(result.summary))
    return 0


def _cmd_linearize(args) -> int:
    params, speed, thrust = _load_params_config(args.config)
    model = inner_loop.linearize(params, speed, thrust)
    print(f"trim_speed={speed!r}")
    print(f"trim_thrust={thrust!r}")
    for i in range(4):
        for j in range(4):
            print(f"a_{i + 1}{j + 1}={float(model.a[i, j])!r}")
    for i in range(4):
        for j in range(3):
            print(f"b_{i + 1}{j + 1}={float(model.b[i, j])!r}")
    # Two surge poles are reported on purpose: the drag entry of the model
    # above, and the fitted reference-plant pole used by step-response.
    print(f"u_pole_model={float(-model.a[0, 0])!r}")
    print(f"u_pole_reference_plant={inner_loop.U_CHANNEL_POLE!r}")
    print(f"u_gain_reference_plant={inner_loop.U_CHANNEL_GAIN!r}")
    return 0


def _cmd_certify_gains(args) -> int:
    params, speed, thrust = _load_params_config(args.config)
    model = inner_loop.linearize(params, speed, thrust)
    k1_grid, k2_grid = _grid(args.k1), _grid(args.k2)
    if k1_grid.size == 1 and k2_grid.size == 1:
        k1, k2 = float(k1_grid[0]), float(k2_grid[0])
        cert = inner_loop.lyapunov_certify(inner_loop.closed_loop_vr(model, k1, k2))
    else:
        found = inner_loop.search_stabilizing_gains(model, k1_grid, k2_grid)
        if found is None:
            raise RuntimeError(
                f"no stabilizing (k1, k2) on the {k1_grid.size}x{k2_grid.size} grid"
            )
        k1, k2, cert = found
    k_u = inner_loop.design_ku_unity_dc(inner_loop.U_CHANNEL_GAIN, inner_loop.U_CHANNEL_POLE)
    k_w = args.k_w if args.k_w is not None else inner_loop.kw_lower_bound(params, speed, thrust)
    gains = inner_loop.GainSet(k_u=k_u, k_w=k_w, k1=k1, k2=k2)
    sys.stdout.write(inner_loop.gain_report(model, gains, cert))
    return 0


def _cmd_thruster_map(args) -> int:
    tmap = _MAP_PRESETS[args.preset]
    sys.stdout.write(thruster.dump_thrust_map(tmap))
    if args.at is not None:
        if args.preset == "throttle":
            value = thruster.throttle_to_thrust(tmap, args.at)
        else:
            value = thruster.spacing_to_thrust(tmap, args.at)
        print(f"# thrust_newtons_at_{args.at!r}={float(value)!r}")
    return 0


def _cmd_step_response(args) -> int:
    tf = inner_loop.close_u_loop(args.k_u, gain=args.gain, pole=args.pole)
    t, y = inner_loop.step_response(tf, args.duration, args.dt)
    print("t,du")
    for ti, yi in zip(t, y):
        print(f"{float(ti)!r},{float(yi)!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blimpsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("simulate", help="run a scenario config file")
    p.add_argument("scenario")
    p.add_argument("--csv", help="override the CSV output path")
    p.add_argument("--summary", help="override the summary output path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("linearize", help="linear model about a trim")
    p.add_argument("config", help="config file with [params] and optional [trim]")
    p.set_defaults(func=_cmd_linearize)

    p = sub.add_parser("certify-gains", help="Lyapunov-certify sway/yaw gains")
    p.add_argument("config")
    p.add_argument("--k1", required=True, help="single value or start:stop:count grid")
    p.add_argument("--k2", required=True, help="single value or start:stop:count grid")
    p.add_argument("--k-w", type=float, default=None, dest="k_w",
                   help="heave gain to report (default: its stability lower bound)")
    p.set_defaults(func=_cmd_certify_gains)

    p = sub.add_parser("thruster-map", help="print a measured thrust map")
    p.add_argument("preset", choices=sorted(_MAP_PRESETS))
    p.add_argument("--at", type=float, default=None,
                   help="also interpolate the thrust (N) at this input")
    p.set_defaults(func=_cmd_thruster_map)

    p = sub.add_parser("step-response", help="closed-loop surge step response")
    p.add_argument("k_u", type=float)
    p.add_argument("--duration", type=float, default=3.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--gain", type=float, default=inner_loop.U_CHANNEL_GAIN)
    p.add_argument("--pole", type=float, default=inner_loop.U_CHANNEL_POLE)
    p.set_defaults(func=_cmd_step_response)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # one greppable line per failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
