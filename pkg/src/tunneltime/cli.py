"""
Command-line front end: reproducible, scriptable emission of every
computation.

All physics parameters are accepted in the dimensionless groups w*a,
k0*a, L/a (with optional absolute overrides --w, --k0, --L), natural
units hbar = 1.  Every command is deterministic: identical flags give
byte-identical output files.  A flat ``key = value`` config file can
seed any flag; explicit flags win.

Exit codes: 0 success, 2 validation error, 3 numerical non-convergence,
4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from .barrier import BarrierSpec
from .packets import ConvergenceError, FieldAxis, QuadratureConfig, field_scan
from .report import (
    DEFAULT_LA_VALUES,
    DEFAULT_WA_VALUES,
    emit,
    generate_kmax_table,
    sweep_phase_time,
    transmission_table,
)
from .spectrum import AdmissibilityWarning, PacketSpec

__all__ = ["main", "run", "build_parser"]


def _add_common(parser: argparse.ArgumentParser, *, la: bool = True) -> None:
    group = parser.add_argument_group("physics parameters")
    group.add_argument("--wa", type=float, default=4.0, help="barrier strength in packet-width units, w*a")
    group.add_argument("--k0a", type=float, default=1.0, help="spectrum center in packet-width units, k0*a")
    if la:
        group.add_argument("--La", type=float, default=0.5, help="barrier extension in packet-width units, L/a")
    group.add_argument("--a", type=float, default=1.0, help="packet width parameter a")
    group.add_argument("--m", type=float, default=1.0, help="particle mass (hbar = 1)")
    group.add_argument("--w", type=float, default=None, help="absolute barrier strength (overrides --wa)")
    group.add_argument("--k0", type=float, default=None, help="absolute spectrum center (overrides --k0a)")
    if la:
        group.add_argument("--L", type=float, default=None, help="absolute barrier extension (overrides --La)")


def _add_io(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("output")
    group.add_argument("--format", choices=("csv", "json"), default="csv", help="emission format")
    group.add_argument("--output", "-o", default="-", help="output path ('-' for stdout)")
    parser.add_argument("--config", default=None, help="flat key = value file seeding any flag (flags win)")


def _add_quadrature(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("quadrature")
    group.add_argument("--rel-tol", type=float, default=1e-8, help="panel-doubling relative tolerance")
    group.add_argument("--base-panels", type=int, default=64, help="initial panel count")
    group.add_argument("--max-doublings", type=int, default=20, help="panel doublings before giving up")


def _resolve_barrier(args) -> BarrierSpec:
    a = args.a
    w = args.w if args.w is not None else args.wa / a
    L = args.L if getattr(args, "L", None) is not None else getattr(args, "La", 0.0) * a
    return BarrierSpec(w=w, L=L, m=args.m)


def _resolve_packet(args, k_cut: float | None = None) -> PacketSpec:
    a = args.a
    k0 = args.k0 if args.k0 is not None else args.k0a / a
    return PacketSpec(k0=k0, a=a, k_cut=k_cut)


def _write(obj, args, destination: str | None = None) -> None:
    dest = destination if destination is not None else args.output
    if dest == "-":
        emit(obj, args.format, sys.stdout)
    else:
        emit(obj, args.format, dest)


def _cmd_transmission(args) -> int:
    b = _resolve_barrier(args)
    if args.k_points < 1:
        raise ValueError("--k-points must be >= 1")
    grid = b.w * np.arange(1, args.k_points + 1) / args.k_points
    _write(transmission_table(b, grid), args)
    return 0


def _cmd_kmax_table(args) -> int:
    table = generate_kmax_table(
        wa_values=args.wa,
        La_values=args.la,
        k0a=args.k0a,
        m=args.m,
        grid_points=args.grid_points,
    )
    _write(table, args)
    return 0


def _cmd_packet(args) -> int:
    if args.points < 1:
        raise ValueError("--points must be >= 1")
    if args.min >= args.max and args.points > 1:
        raise ValueError("--min must be below --max")
    grid = np.linspace(args.min, args.max, args.points)
    axis = FieldAxis.SPACE if args.scan == "x" else FieldAxis.TIME
    b = _resolve_barrier(args)
    q = QuadratureConfig(rel_tol=args.rel_tol, max_panel_doublings=args.max_doublings, base_panels=args.base_panels)

    cuts = args.kcut_frac if args.kcut_frac is not None else [None]
    if len(cuts) > 1:
        if args.output == "-" or "{cut}" not in args.output:
            raise ValueError("multiple --kcut-frac values need an --output pattern containing {cut}")

    for cut in cuts:
        k_cut = None if cut is None else float(cut) * b.w
        p = _resolve_packet(args, k_cut=k_cut)
        if args.at is not None:
            fixed = args.at
        else:
            fixed = 0.0 if axis is FieldAxis.SPACE else (b.L if args.kind == "transmitted" else 0.0)
        band = (0.0, b.w) if (args.kind == "incident" and k_cut is None and args.band == "barrier") else None
        fld = field_scan(
            args.kind,
            axis,
            grid,
            fixed,
            p,
            b if args.kind == "transmitted" else (b if band else None),
            q,
            m=args.m,
            band=band,
        )
        dest = None if cut is None else args.output.replace("{cut}", f"{cut:g}")
        _write(fld, args, destination=dest)
    return 0


def _cmd_times(args) -> int:
    mode = args.mode.replace("-", "_")
    kwargs = dict(policy=args.policy, k0a=args.k0a, m=args.m)
    if mode == "vs_L":
        table = sweep_phase_time("vs_L", args.grid, wa=args.wa, **kwargs)
    else:
        table = sweep_phase_time("vs_w", args.grid, La=args.La, **kwargs)
    _write(table, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tunneltime",
        description="Rectangular-barrier tunneling: transmission, transit times, "
        "modulated-spectrum maximizers, and wave-packet synthesis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p_tr = sub.add_parser(
        "transmission",
        formatter_class=fmt,
        help="T, Theta, dTheta/dk and transit time on a wavenumber grid over (0, w]",
    )
    _add_common(p_tr)
    p_tr.add_argument("--k-points", type=int, default=100, help="number of wavenumber samples")
    _add_io(p_tr)
    p_tr.set_defaults(func=_cmd_transmission)

    p_tab = sub.add_parser(
        "kmax-table",
        formatter_class=fmt,
        help="sweep the modulated-spectrum maximizer over (L/a, w*a)",
    )
    p_tab.add_argument("--wa", type=float, nargs="+", default=list(DEFAULT_WA_VALUES), help="w*a column values")
    p_tab.add_argument("--la", type=float, nargs="+", default=list(DEFAULT_LA_VALUES), help="L/a row values")
    p_tab.add_argument("--k0a", type=float, default=1.0, help="spectrum center k0*a")
    p_tab.add_argument("--m", type=float, default=1.0, help="particle mass")
    p_tab.add_argument("--grid-points", type=int, default=4096, help="maximizer pre-scan resolution")
    _add_io(p_tab)
    p_tab.set_defaults(func=_cmd_kmax_table)

    p_pk = sub.add_parser(
        "packet",
        formatter_class=fmt,
        help="sample an incident or transmitted wave packet on a space or time grid",
    )
    _add_common(p_pk)
    p_pk.add_argument("--kind", choices=("incident", "transmitted"), default="incident", help="which packet to sample")
    p_pk.add_argument("--kcut-frac", type=float, nargs="+", default=None,
                      help="hard spectral cut-off(s) as a fraction of w; several values write one file each")
    p_pk.add_argument("--band", choices=("full", "barrier"), default="full",
                      help="incident spectral band when no cut-off is set")
    p_pk.add_argument("--scan", choices=("x", "t"), default="x", help="scan coordinate")
    p_pk.add_argument("--at", type=float, default=None,
                      help="fixed coordinate (default: t=0 for x-scans; x=L or 0 for t-scans)")
    p_pk.add_argument("--min", type=float, default=-10.0, help="grid start")
    p_pk.add_argument("--max", type=float, default=25.0, help="grid end")
    p_pk.add_argument("--points", type=int, default=701, help="grid size")
    _add_quadrature(p_pk)
    _add_io(p_pk)
    p_pk.set_defaults(func=_cmd_packet)

    p_tm = sub.add_parser(
        "times",
        formatter_class=fmt,
        help="transit-time sweeps at the solved maximizer or at the naive k0",
    )
    p_tm.add_argument("--mode", choices=("vs-L", "vs-w"), default="vs-L", help="sweep axis")
    p_tm.add_argument("--policy", choices=("solved", "naive-k0"), default="solved", help="where to evaluate the transit time")
    p_tm.add_argument("--grid", type=float, nargs="+", required=True, help="sweep grid values")
    p_tm.add_argument("--wa", type=float, default=4.0, help="fixed w*a (vs-L mode)")
    p_tm.add_argument("--La", type=float, default=0.5, help="fixed L/a (vs-w mode)")
    p_tm.add_argument("--k0a", type=float, default=1.0, help="spectrum center k0*a")
    p_tm.add_argument("--m", type=float, default=1.0, help="particle mass")
    _add_io(p_tm)
    p_tm.set_defaults(func=_cmd_times)

    return parser


def _flags_in_argv(argv: list[str]) -> set[str]:
    present = set()
    for token in argv:
        if token.startswith("--"):
            present.add(token.split("=", 1)[0])
        elif token.startswith("-") and len(token) == 2:
            present.add(token)
    return present


def _load_config(path: str) -> dict[str, str]:
    config: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            config[key.strip().replace("_", "-")] = value.strip()
    return config


def _apply_config(parser: argparse.ArgumentParser, args: argparse.Namespace, argv: list[str]) -> None:
    if getattr(args, "config", None) is None:
        return
    config = _load_config(args.config)
    present = _flags_in_argv(argv)
    sub_actions = [a for a in parser._subparsers._group_actions if isinstance(a, argparse._SubParsersAction)]
    subparser = sub_actions[0].choices[args.command]
    known = {}
    for action in subparser._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                known[opt[2:]] = action
    for key, raw in config.items():
        if key not in known:
            raise ValueError(f"config key {key!r} does not match any --flag of '{args.command}'")
        action = known[key]
        if any(opt in present for opt in action.option_strings):
            continue  # explicit flag wins
        cast = action.type if action.type is not None else str
        if action.nargs in ("+", "*"):
            value = [cast(tok) for tok in raw.replace(",", " ").split()]
        elif isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            value = cast(raw)
            if action.choices is not None and value not in action.choices:
                raise ValueError(f"config key {key!r}: {value!r} not in {sorted(action.choices)}")
        setattr(args, action.dest, value)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    warnings.simplefilter("once", AdmissibilityWarning)
    try:
        _apply_config(parser, args, argv)
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def run() -> None:
    raise SystemExit(main())
