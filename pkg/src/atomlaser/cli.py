"""Command line: ``atomlaser {figure,verify,scenario,sensitivity}``.

Every subcommand writes CSV (``t`` first, one column per curve).  ``verify``
also writes a plain-text report and exits 0 only when every comparison passes.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import scans
from .errors import AtomLaserError
from .params import ModelParams, TimeGrid, validate_params


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _add_params(ap: argparse.ArgumentParser, omega=None, omega_prime=None, gamma=None, r=None) -> None:
    g = ap.add_argument_group("model parameters")
    g.add_argument("--omega", type=float, default=omega)
    g.add_argument("--omega-prime", type=float, default=omega_prime)
    g.add_argument("--gamma", type=float, default=gamma, help="step frequency; 'inf' for the unitary limit")
    g.add_argument("--r", type=float, default=r)
    g.add_argument("--phi", type=float, default=0.0)
    g.add_argument("--theta", type=float, default=0.0)


def _add_grid(ap: argparse.ArgumentParser) -> None:
    g = ap.add_argument_group("time grid (overrides preset defaults)")
    g.add_argument("--t-start", type=float)
    g.add_argument("--t-stop", type=float)
    g.add_argument("--t-count", type=int)
    g.add_argument("--t-log", action="store_true", default=None)


def _grid(args, default: TimeGrid) -> TimeGrid:
    log_t = default.log if args.t_log is None else args.t_log
    start = default.start if args.t_start is None else args.t_start
    if log_t and start == 0:
        start = 1e-3 * (default.stop if args.t_stop is None else args.t_stop)
    return TimeGrid(
        start,
        default.stop if args.t_stop is None else args.t_stop,
        default.count if args.t_count is None else args.t_count,
        log_t,
    )


def _params(args) -> ModelParams:
    missing = [n for n in ("omega", "omega_prime", "gamma", "r") if getattr(args, n) is None]
    if missing:
        raise SystemExit(f"missing parameters: {', '.join('--' + m.replace('_', '-') for m in missing)}")
    return validate_params(
        ModelParams(args.omega, args.omega_prime, args.gamma, args.r, args.phi, args.theta)
    )


def cmd_figure(args) -> int:
    preset = scans.get_preset(args.preset)
    grid = _grid(args, preset.grid)
    t, cols = scans.figure_columns(preset, grid.times())
    out = Path(args.out or f"{preset.id}.csv")
    scans.write_csv(out, t, cols)
    print(f"wrote {out} ({len(t)} rows, {len(cols)} curves)")
    if args.plot:
        scans.plot_columns(args.plot, t, cols, grid.log, preset.observable)
        print(f"wrote {args.plot}")
    return 0


def cmd_verify(args) -> int:
    if args.preset:
        plist = scans.get_preset(args.preset).params()
    else:
        plist = [_params(args)]
    grid = _grid(args, TimeGrid(0.0, 10.0, 50))
    oracles = tuple(o.strip() for o in args.oracles.split(",") if o.strip())
    reports = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for p in plist:
            reports.append(
                scans.run_verify(
                    p,
                    grid.times(),
                    oracles=oracles,
                    tol_heisenberg=args.tol_heisenberg,
                    tol_fock=args.tol_fock,
                    n_max=args.n_max,
                    tail=args.tail,
                )
            )
    text = "\n\n".join(r.format() for r in reports)
    passed = all(r.passed for r in reports)
    text += f"\n\nVERIFY {'PASS' if passed else 'FAIL'}\n"
    print(text, end="")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0 if passed else 1


def cmd_scenario(args) -> int:
    grid = _grid(args, TimeGrid(1e-7, 1.0, 2000, log=True))
    t, cols, summary = scans.scenario_experiment(grid.times())
    out = Path(args.out or "scenario.csv")
    scans.write_csv(out, t, cols)
    print(f"wrote {out} ({len(t)} rows; t in seconds)")
    print(summary.format())
    return 0


def cmd_sensitivity(args) -> int:
    base = _params(args)
    grid = _grid(args, scans.PRESETS["fig5"].grid)
    t, cols = scans.sensitivity_columns(base, _float_list(args.deltas), grid.times())
    out = Path(args.out or "sensitivity.csv")
    scans.write_csv(out, t, cols)
    print(f"wrote {out} ({len(t)} rows, {len(cols)} curves)")
    if args.plot:
        scans.plot_columns(args.plot, t, cols, grid.log, "s2_b")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="atomlaser", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("figure", help="reproduce a figure as CSV")
    f.add_argument("--preset", required=True, choices=sorted(scans.PRESETS))
    _add_grid(f)
    f.add_argument("--out")
    f.add_argument("--plot", help="also write a PNG line plot")
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", help="check closed forms against the oracles")
    v.add_argument("--preset", choices=sorted(scans.PRESETS))
    _add_params(v)
    _add_grid(v)
    v.add_argument("--oracles", default="heisenberg,fock")
    v.add_argument("--tol-heisenberg", type=float, default=1e-10)
    v.add_argument("--tol-fock", type=float, default=1e-8)
    v.add_argument("--n-max", type=int, default=24)
    v.add_argument("--tail", type=float, default=1e-14)
    v.add_argument("--out", help="report file")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scenario", help="experimental-parameter scenario")
    _add_grid(s)
    s.add_argument("--out")
    s.set_defaults(func=cmd_scenario)

    z = sub.add_parser("sensitivity", help="S2(b) for small offsets of omega'")
    _add_params(z, omega=10.0, omega_prime=10.0, gamma=100.0, r=0.4)
    _add_grid(z)
    z.add_argument("--deltas", default=",".join(f"{d:g}" for d in scans.FIG5_DELTAS))
    z.add_argument("--out")
    z.add_argument("--plot")
    z.set_defaults(func=cmd_sensitivity)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AtomLaserError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
