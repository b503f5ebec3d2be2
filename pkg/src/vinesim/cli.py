"""Command line interface: headless runs, report sweeps and the teleop
service."""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

from . import presets
from .designs import DESIGN_ORDER, MATRIX_ROWS, capability_matrix
from .mechanics import (
    InstalledComponent,
    LossModel,
    burst_pressure,
    min_growth_pressure,
    payload_envelope,
)
from .model import Material, TipMountDesign, TipMountSpec
from .runlog import write_run_log
from .runner import run_recorded, run_script
from .scenario import ScenarioError, load_bundled_scenario, load_scenario_file
from .server import RecordingError, TeleopServer, read_recording
from .units import kgcm_to_newton_meter, kgf_to_newton, newton_to_kgf, pa_to_kpa

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILURE_EVENT = 2

SWEEP_CONFIGURATIONS = (
    ("(a) bare body", frozenset()),
    ("(b) outer cap only", frozenset({InstalledComponent.OUTER_CAP_FRICTION})),
    ("(c) cap + hook interface",
     frozenset({InstalledComponent.OUTER_CAP_FRICTION,
                InstalledComponent.HOOK_INTERFACE_FRICTION})),
    ("(d) full mount", frozenset({InstalledComponent.OUTER_CAP_FRICTION,
                                  InstalledComponent.HOOK_INTERFACE_FRICTION,
                                  InstalledComponent.ROLLERS_INSTALLED})),
)


def _add_material_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("material overrides")
    group.add_argument("--radius-m", type=float,
                       default=presets.DEFAULT_MATERIAL.radius)
    group.add_argument("--wall-thickness-m", type=float,
                       default=presets.DEFAULT_MATERIAL.wall_thickness)
    group.add_argument("--yield-stress-pa", type=float,
                       default=presets.DEFAULT_MATERIAL.yield_stress)
    group.add_argument("--base-eversion-kpa", type=float,
                       default=pa_to_kpa(presets.DEFAULT_MATERIAL.base_eversion_pressure))


def _material_from_args(args: argparse.Namespace) -> Material:
    return Material(
        radius=args.radius_m,
        wall_thickness=args.wall_thickness_m,
        yield_stress=args.yield_stress_pa,
        base_eversion_pressure=args.base_eversion_kpa * 1000.0,
    )


def _add_mount_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("tip mount overrides")
    group.add_argument("--device-mass-kg", type=float,
                       default=presets.CURRENT_MOUNT.device_mass)
    group.add_argument("--roller-slip-kgf", type=float, default=5.0)
    group.add_argument("--motor-torque-kgcm", type=float, default=10.0)
    group.add_argument("--roller-radius-m", type=float,
                       default=presets.CURRENT_MOUNT.roller_radius)
    group.add_argument("--device-yield-kgf", type=float, default=7.0)


def _mount_from_args(args: argparse.Namespace) -> TipMountSpec:
    return TipMountSpec(
        design=TipMountDesign.CURRENT_DESIGN,
        device_mass=args.device_mass_kg,
        roller_slip_force=kgf_to_newton(args.roller_slip_kgf),
        motor_torque_total=kgcm_to_newton_meter(args.motor_torque_kgcm),
        roller_radius=args.roller_radius_m,
        device_yield_force=kgf_to_newton(args.device_yield_kgf),
        added_growth_pressure=presets.CURRENT_MOUNT.added_growth_pressure,
    )


def _load_scenario_arg(path: str):
    if os.path.exists(path):
        return load_scenario_file(path)
    try:
        return load_bundled_scenario(path)
    except FileNotFoundError:
        raise ScenarioError(f"scenario not found: {path}")


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = _load_scenario_arg(args.scenario)
    except (ScenarioError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_ERROR
    if args.inputs:
        try:
            recording, total_steps = read_recording(args.inputs)
        except (RecordingError, OSError) as error:
            print(f"error: {error}", file=sys.stderr)
            return EXIT_ERROR
        result = run_recorded(scenario, recording, total_steps)
    else:
        result = run_script(scenario)

    log_path = args.log
    if log_path is None:
        stem = os.path.splitext(os.path.basename(args.scenario))[0]
        log_path = f"{stem}.log.csv"
    with open(log_path, "w", encoding="utf-8", newline="") as handle:
        write_run_log(result.rows, handle)

    if not args.quiet:
        print(f"outcome: {result.outcome} after {result.steps} steps")
        print(f"log: {log_path}")
    if result.failed:
        return EXIT_FAILURE_EVENT
    if result.succeeded or scenario.success is None:
        return EXIT_OK
    print("error: script ended without satisfying the success predicate",
          file=sys.stderr)
    return EXIT_ERROR


def _cmd_sweep_pressure(args: argparse.Namespace) -> int:
    material = _material_from_args(args)
    rows = []
    for label, installed in SWEEP_CONFIGURATIONS:
        budget = min_growth_pressure(material, installed)
        rows.append((label, budget))
    burst = burst_pressure(material)
    lines = [f"{'configuration':34}{'min growth (kPa)':>18}{'margin (kPa)':>14}"]
    for label, budget in rows:
        lines.append(f"{label:34}{pa_to_kpa(budget.total):>18.2f}"
                     f"{pa_to_kpa(budget.margin):>14.2f}")
    lines.append(f"burst pressure: {pa_to_kpa(burst):.2f} kPa")
    reduction = rows[-1][1].margin_reduction_vs_bare
    lines.append(f"margin reduction vs bare: {100.0 * reduction:.1f}%")
    print("\n".join(lines))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as handle:
            handle.write("configuration,min_growth_kpa,burst_kpa,margin_kpa\n")
            for label, budget in rows:
                handle.write(f"{label},{pa_to_kpa(budget.total)!r},"
                             f"{pa_to_kpa(burst)!r},{pa_to_kpa(budget.margin)!r}\n")
    return EXIT_OK


def _cmd_envelope(args: argparse.Namespace) -> int:
    material = _material_from_args(args)
    mount = _mount_from_args(args)
    losses = LossModel()
    pressure = args.pressure_kpa * 1000.0
    envelope = payload_envelope(material, mount, pressure, losses)
    lines = [f"{'factor':18}{'limit (N)':>12}{'limit (kg-force)':>20}"]
    for factor, value in envelope.factors().items():
        marker = " *" if factor is envelope.limiting_factor else "  "
        lines.append(f"{factor.value + marker:18}{value:>12.2f}"
                     f"{newton_to_kgf(value):>20.2f}")
    lines.append(
        f"governing limit: {envelope.governing_limit:.2f} N "
        f"({newton_to_kgf(envelope.governing_limit):.2f} kg-force), "
        f"limited by {envelope.limiting_factor.value}")
    print("\n".join(lines))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as handle:
            handle.write("factor,limit_n,limit_kgf,governing\n")
            for factor, value in envelope.factors().items():
                governing = "yes" if factor is envelope.limiting_factor else "no"
                handle.write(f"{factor.value},{value!r},"
                             f"{newton_to_kgf(value)!r},{governing}\n")
    return EXIT_OK


_MATRIX_COLUMNS = {
    TipMountDesign.STRING_MOUNT: "string",
    TipMountDesign.OUTER_CAP: "outer cap",
    TipMountDesign.OUTER_CAP_WITH_REEL: "cap+reel",
    TipMountDesign.MAGNET_RINGS: "magnets",
    TipMountDesign.CURRENT_DESIGN: "current",
}


def _cmd_matrix(args: argparse.Namespace) -> int:
    reference = presets.reference_tension()
    grid = capability_matrix(presets.default_behaviors(), reference)
    if args.json:
        doc = {
            "rows": list(MATRIX_ROWS),
            "designs": [design.value for design in DESIGN_ORDER],
            "reference_tension_n": reference,
            "grid": {row: {design.value: grid[row][design]
                           for design in DESIGN_ORDER}
                     for row in MATRIX_ROWS},
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    width = max(len(row) for row in MATRIX_ROWS) + 2
    header = " " * width + "".join(
        f"{_MATRIX_COLUMNS[design]:>11}" for design in DESIGN_ORDER)
    lines = [header]
    for row in MATRIX_ROWS:
        cells = "".join(f"{'Yes' if grid[row][design] else 'No':>11}"
                        for design in DESIGN_ORDER)
        lines.append(f"{row:{width}}" + cells)
    print("\n".join(lines))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    try:
        scenario = _load_scenario_arg(args.scenario)
    except (ScenarioError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_ERROR
    server = TeleopServer(scenario, host=args.host, port=args.port,
                          stream_hz=args.stream_hz, record_path=args.record)
    try:
        asyncio.run(_serve_until_interrupt(server, args))
    except KeyboardInterrupt:
        pass
    if args.log:
        with open(args.log, "w", encoding="utf-8", newline="") as handle:
            write_run_log(server.session.rows, handle)
        print(f"session log: {args.log}")
    return EXIT_OK


async def _serve_until_interrupt(server: TeleopServer,
                                 args: argparse.Namespace) -> None:
    task = asyncio.create_task(server.run())
    await server.wait_started()
    print(f"teleop service on ws://{args.host}:{server.port}", flush=True)
    try:
        await task
    except asyncio.CancelledError:
        server.stop()
        await task
        raise


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vinesim",
        description="2D growing-robot simulator and tip mount toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario script headlessly")
    run_p.add_argument("scenario", help="scenario file or bundled name")
    run_p.add_argument("--log", help="run log path (default <scenario>.log.csv)")
    run_p.add_argument("--inputs", help="replay a recorded teleop input file")
    run_p.add_argument("--quiet", action="store_true")
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep-pressure",
                             help="minimum growth pressure per mount configuration")
    _add_material_flags(sweep_p)
    sweep_p.add_argument("--csv", help="also write rows to this CSV file")
    sweep_p.set_defaults(func=_cmd_sweep_pressure)

    env_p = sub.add_parser("envelope", help="payload envelope factors")
    _add_material_flags(env_p)
    _add_mount_flags(env_p)
    env_p.add_argument("--pressure-kpa", type=float,
                       default=pa_to_kpa(presets.DEFAULT_RETRACTION_PRESSURE))
    env_p.add_argument("--csv", help="also write rows to this CSV file")
    env_p.set_defaults(func=_cmd_envelope)

    matrix_p = sub.add_parser("matrix", help="capability comparison grid")
    matrix_p.add_argument("--json", action="store_true")
    matrix_p.set_defaults(func=_cmd_matrix)

    serve_p = sub.add_parser("serve", help="live teleoperation service")
    serve_p.add_argument("scenario", help="scenario file or bundled name")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8765)
    serve_p.add_argument("--stream-hz", type=float, default=None)
    serve_p.add_argument("--record", help="write applied inputs to this file")
    serve_p.add_argument("--log", help="write the session run log on exit")
    serve_p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
