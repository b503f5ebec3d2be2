"""Declarative scenario files: versioned JSON in, validated Scenario out.

Field names carry unit suffixes (radius_m, pressure_pa) so file data is
never ambiguous about units. Unknown fields are rejected; validation errors
name the offending field path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any

from .controller import ControllerParams, OperatorInput
from .designs import DesignBehavior
from .engine import Environment, Rect, SimConfig, SuccessSpec, WorldObject
from .mechanics import LossModel, burst_pressure, payload_envelope
from .model import Material, Pose, TipMountDesign, TipMountSpec

SCENARIO_VERSION = "vinesim/1"


class ScenarioError(ValueError):
    """Raised for malformed or invariant-violating scenario documents."""


@dataclass(frozen=True)
class Scenario:
    name: str
    material: Material
    tip_mount: TipMountSpec
    behavior: DesignBehavior
    environment: Environment
    sim: SimConfig
    controller: ControllerParams
    losses: LossModel
    initial_body_length: float
    script: tuple[tuple[float, OperatorInput], ...]
    success: SuccessSpec | None


class _Reader:
    """Typed field access with path-qualified errors and unknown-key checks."""

    def __init__(self, data: Any, path: str):
        if not isinstance(data, dict):
            raise ScenarioError(f"{path}: expected an object")
        self.data = data
        self.path = path
        self._seen: set[str] = set()

    def _get(self, key: str) -> Any:
        self._seen.add(key)
        return self.data.get(key)

    def has(self, key: str) -> bool:
        return key in self.data

    def number(self, key: str, default: float | None = None) -> float:
        value = self._get(key)
        if value is None:
            if default is None:
                raise ScenarioError(f"{self.path}.{key}: required number missing")
            return default
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"{self.path}.{key}: expected a number")
        return float(value)

    def boolean(self, key: str, default: bool | None = None) -> bool:
        value = self._get(key)
        if value is None:
            if default is None:
                raise ScenarioError(f"{self.path}.{key}: required boolean missing")
            return default
        if not isinstance(value, bool):
            raise ScenarioError(f"{self.path}.{key}: expected a boolean")
        return value

    def string(self, key: str, default: str | None = None) -> str:
        value = self._get(key)
        if value is None:
            if default is None:
                raise ScenarioError(f"{self.path}.{key}: required string missing")
            return default
        if not isinstance(value, str):
            raise ScenarioError(f"{self.path}.{key}: expected a string")
        return value

    def array(self, key: str, default: list | None = None) -> list:
        value = self._get(key)
        if value is None:
            if default is None:
                raise ScenarioError(f"{self.path}.{key}: required array missing")
            return default
        if not isinstance(value, list):
            raise ScenarioError(f"{self.path}.{key}: expected an array")
        return value

    def child(self, key: str, required: bool = True) -> "_Reader | None":
        value = self._get(key)
        if value is None:
            if required:
                raise ScenarioError(f"{self.path}.{key}: required object missing")
            return None
        return _Reader(value, f"{self.path}.{key}")

    def finish(self) -> None:
        unknown = set(self.data) - self._seen
        if unknown:
            name = sorted(unknown)[0]
            raise ScenarioError(f"{self.path}.{name}: unknown field")


def _point(value: Any, path: str) -> tuple[float, float]:
    if (not isinstance(value, list) or len(value) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float))
                   for v in value)):
        raise ScenarioError(f"{path}: expected [x, y]")
    return (float(value[0]), float(value[1]))


def _wrap(path: str, error: ValueError) -> ScenarioError:
    return ScenarioError(f"{path}: {error}")


def _load_material(reader: _Reader) -> Material:
    try:
        material = Material(
            radius=reader.number("radius_m"),
            wall_thickness=reader.number("wall_thickness_m"),
            yield_stress=reader.number("yield_stress_pa"),
            density_per_area=reader.number("density_per_area_kg_m2", 0.0),
            base_eversion_pressure=reader.number("base_eversion_pressure_pa", 2000.0),
        )
    except ScenarioError:
        raise
    except ValueError as error:
        raise _wrap(reader.path, error) from error
    reader.finish()
    return material


_DESIGN_NAMES = {design.value: design for design in TipMountDesign}


def _load_tip_mount(reader: _Reader) -> tuple[TipMountSpec, DesignBehavior]:
    design_name = reader.string("design")
    design = _DESIGN_NAMES.get(design_name)
    if design is None:
        raise ScenarioError(
            f"{reader.path}.design: unknown design {design_name!r} "
            f"(expected one of {sorted(_DESIGN_NAMES)})")
    try:
        spec = TipMountSpec(
            design=design,
            device_mass=reader.number("device_mass_kg"),
            roller_slip_force=reader.number("roller_slip_force_n", 0.0),
            motor_torque_total=reader.number("motor_torque_total_nm", 0.0),
            roller_radius=reader.number("roller_radius_m", 0.0),
            device_yield_force=reader.number("device_yield_force_n", 0.0),
            magnet_holding_force=reader.number("magnet_holding_force_n", 0.0),
            reel_capacity=reader.number("reel_capacity_m", 0.0),
            added_growth_pressure=reader.number("added_growth_pressure_pa", 0.0),
        )
    except ScenarioError:
        raise
    except ValueError as error:
        raise _wrap(reader.path, error) from error
    behavior_reader = reader.child("behavior", required=False)
    kwargs: dict[str, Any] = {"design": design}
    if behavior_reader is not None:
        kwargs["spooled_base"] = behavior_reader.boolean("spooled_base", True)
        if behavior_reader.has("initial_body_length_m"):
            kwargs["initial_body_length"] = behavior_reader.number("initial_body_length_m")
        if behavior_reader.has("reel_capacity_m"):
            kwargs["reel_capacity"] = behavior_reader.number("reel_capacity_m")
        if behavior_reader.has("motor_holding_force_n"):
            kwargs["motor_holding_force"] = behavior_reader.number("motor_holding_force_n")
        if behavior_reader.has("magnet_holding_force_n"):
            kwargs["magnet_holding_force"] = behavior_reader.number("magnet_holding_force_n")
        behavior_reader.finish()
    reader.finish()
    return spec, kwargs


def _load_environment(reader: _Reader) -> Environment:
    bounds_raw = reader.array("bounds_m")
    if len(bounds_raw) != 4 or any(
            isinstance(v, bool) or not isinstance(v, (int, float))
            for v in bounds_raw):
        raise ScenarioError(
            f"{reader.path}.bounds_m: expected [x_min, y_min, x_max, y_max]")
    obstacles = []
    for i, polygon in enumerate(reader.array("obstacles_m", [])):
        if not isinstance(polygon, list):
            raise ScenarioError(f"{reader.path}.obstacles_m[{i}]: expected an array")
        obstacles.append(tuple(
            _point(vertex, f"{reader.path}.obstacles_m[{i}][{j}]")
            for j, vertex in enumerate(polygon)))
    objects = []
    for i, raw in enumerate(reader.array("objects", [])):
        obj_reader = _Reader(raw, f"{reader.path}.objects[{i}]")
        try:
            objects.append(WorldObject(
                id=obj_reader.string("id"),
                position=_point(obj_reader._get("position_m"),
                                f"{obj_reader.path}.position_m"),
                mass=obj_reader.number("mass_kg"),
                graspable=obj_reader.boolean("graspable", True),
            ))
        except ScenarioError:
            raise
        except ValueError as error:
            raise _wrap(obj_reader.path, error) from error
        obj_reader.finish()
    pose_reader = reader.child("base_pose")
    assert pose_reader is not None
    base_pose = Pose(
        x=pose_reader.number("x_m"),
        y=pose_reader.number("y_m"),
        heading=pose_reader.number("heading_rad", 0.0),
    )
    pose_reader.finish()
    reader.finish()
    try:
        return Environment(
            bounds=Rect(*(float(v) for v in bounds_raw)),
            obstacles=tuple(obstacles),
            objects=tuple(objects),
            base_pose=base_pose,
        )
    except ValueError as error:
        raise _wrap(reader.path, error) from error


def _load_sim(reader: _Reader | None) -> SimConfig:
    if reader is None:
        return SimConfig()
    defaults = SimConfig()
    try:
        config = SimConfig(
            dt=reader.number("dt_s", defaults.dt),
            max_tip_speed=reader.number("max_tip_speed_m_s", defaults.max_tip_speed),
            speed_gain=reader.number("speed_gain_m_s_per_pa", defaults.speed_gain),
            max_curvature=reader.number("max_curvature_per_m", defaults.max_curvature),
            segment_quantum=reader.number("segment_quantum_m", defaults.segment_quantum),
            grasp_radius=reader.number("grasp_radius_m", defaults.grasp_radius),
            buckling_coefficient=reader.number("buckling_coefficient",
                                               defaults.buckling_coefficient),
        )
    except ScenarioError:
        raise
    except ValueError as error:
        raise _wrap(reader.path, error) from error
    reader.finish()
    return config


def _load_controller(reader: _Reader | None) -> ControllerParams:
    if reader is None:
        return ControllerParams()
    defaults = ControllerParams()
    try:
        params = ControllerParams(
            growth_pressure=reader.number("growth_pressure_pa", defaults.growth_pressure),
            retraction_pressure=reader.number("retraction_pressure_pa",
                                              defaults.retraction_pressure),
            deadband=reader.number("deadband", defaults.deadband),
            tip_stall_threshold=reader.number("tip_stall_threshold",
                                              defaults.tip_stall_threshold),
            base_backdrive_threshold=reader.number("base_backdrive_threshold",
                                                   defaults.base_backdrive_threshold),
            base_no_buckle_max=reader.number("base_no_buckle_max",
                                             defaults.base_no_buckle_max),
            max_curvature=reader.number("max_curvature_per_m", defaults.max_curvature),
        )
    except ScenarioError:
        raise
    except ValueError as error:
        raise _wrap(reader.path, error) from error
    reader.finish()
    return params


def _load_losses(reader: _Reader | None) -> LossModel:
    if reader is None:
        return LossModel()
    defaults = LossModel()
    losses = LossModel(
        constant_n=reader.number("constant_n", defaults.constant_n),
        per_pascal_n=reader.number("per_pascal_n", defaults.per_pascal_n),
    )
    reader.finish()
    return losses


def _load_script(reader: _Reader) -> tuple[tuple[float, OperatorInput], ...]:
    keyframes: list[tuple[float, OperatorInput]] = []
    last_t = None
    for i, raw in enumerate(reader.array("script", [])):
        frame = _Reader(raw, f"{reader.path}.script[{i}]")
        t = frame.number("t_s")
        if last_t is not None and t <= last_t:
            raise ScenarioError(
                f"{frame.path}.t_s: keyframe times must be strictly increasing")
        last_t = t
        keyframes.append((t, OperatorInput(
            axis_speed=frame.number("axis_speed", 0.0),
            axis_steer=frame.number("axis_steer", 0.0),
            gripper_close=frame.boolean("gripper_close", False),
        )))
        frame.finish()
    return tuple(keyframes)


def scenario_from_dict(data: Any, name: str = "<memory>") -> Scenario:
    root = _Reader(data, "scenario")
    version = root.string("version")
    if version != SCENARIO_VERSION:
        raise ScenarioError(
            f"scenario.version: expected {SCENARIO_VERSION!r}, got {version!r}")
    material = _load_material(root.child("material"))
    tip_mount, behavior_kwargs = _load_tip_mount(root.child("tip_mount"))
    environment = _load_environment(root.child("environment"))
    sim = _load_sim(root.child("sim", required=False))
    controller = _load_controller(root.child("controller", required=False))
    losses = _load_losses(root.child("losses", required=False))
    initial_body_length = root.number("initial_body_length_m", 0.0)
    script = _load_script(root)

    success = None
    success_reader = root.child("success", required=False)
    if success_reader is not None:
        try:
            success = SuccessSpec(
                object_id=success_reader.string("object_id"),
                target=_point(success_reader._get("target_m"),
                              f"{success_reader.path}.target_m"),
                tolerance=success_reader.number("tolerance_m"),
            )
        except ScenarioError:
            raise
        except ValueError as error:
            raise _wrap(success_reader.path, error) from error
        success_reader.finish()
    root.finish()

    try:
        behavior = DesignBehavior(**behavior_kwargs) \
            if tip_mount.design is not TipMountDesign.CURRENT_DESIGN \
            else DesignBehavior(
                envelope=payload_envelope(material, tip_mount,
                                          controller.retraction_pressure, losses),
                **behavior_kwargs)
    except ValueError as error:
        raise _wrap("scenario.tip_mount.behavior", error) from error

    burst = burst_pressure(material)
    if not controller.growth_pressure < burst:
        raise ScenarioError(
            "scenario.controller.growth_pressure_pa: must stay below the "
            f"burst pressure ({burst:.1f} Pa)")
    if success is not None:
        if not environment.bounds.contains(*success.target):
            raise ScenarioError(
                "scenario.success.target_m: must lie within environment bounds")
        if success.object_id not in {obj.id for obj in environment.objects}:
            raise ScenarioError(
                f"scenario.success.object_id: no object named {success.object_id!r}")
    if initial_body_length < 0:
        raise ScenarioError("scenario.initial_body_length_m: must be >= 0")

    return Scenario(
        name=name,
        material=material,
        tip_mount=tip_mount,
        behavior=behavior,
        environment=environment,
        sim=sim,
        controller=controller,
        losses=losses,
        initial_body_length=initial_body_length,
        script=script,
        success=success,
    )


def load_scenario(text: str, name: str = "<memory>") -> Scenario:
    """Parse and validate a scenario document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ScenarioError(
            f"parse error at line {error.lineno}, column {error.colno}: "
            f"{error.msg}") from error
    return scenario_from_dict(data, name)


def load_scenario_file(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as handle:
        return load_scenario(handle.read(), name=path)


def load_bundled_scenario(name: str) -> Scenario:
    """Load one of the scenarios shipped inside the package."""
    filename = name if name.endswith(".json") else f"{name}.json"
    ref = resources.files("vinesim") / "scenarios" / filename
    return load_scenario(ref.read_text(encoding="utf-8"), name=name)


def scenario_to_dict(scenario: Scenario) -> dict:
    """Inverse of scenario_from_dict (round-trips through load)."""
    mount = scenario.tip_mount
    behavior = scenario.behavior
    behavior_doc: dict[str, Any] = {"spooled_base": behavior.spooled_base}
    if behavior.design is TipMountDesign.STRING_MOUNT:
        behavior_doc["initial_body_length_m"] = behavior.initial_body_length
    if behavior.design is TipMountDesign.OUTER_CAP_WITH_REEL:
        behavior_doc["reel_capacity_m"] = behavior.reel_capacity
        behavior_doc["motor_holding_force_n"] = behavior.motor_holding_force
    if behavior.design is TipMountDesign.MAGNET_RINGS:
        behavior_doc["magnet_holding_force_n"] = behavior.magnet_holding_force
    doc: dict[str, Any] = {
        "version": SCENARIO_VERSION,
        "material": {
            "radius_m": scenario.material.radius,
            "wall_thickness_m": scenario.material.wall_thickness,
            "yield_stress_pa": scenario.material.yield_stress,
            "density_per_area_kg_m2": scenario.material.density_per_area,
            "base_eversion_pressure_pa": scenario.material.base_eversion_pressure,
        },
        "tip_mount": {
            "design": mount.design.value,
            "device_mass_kg": mount.device_mass,
            "roller_slip_force_n": mount.roller_slip_force,
            "motor_torque_total_nm": mount.motor_torque_total,
            "roller_radius_m": mount.roller_radius,
            "device_yield_force_n": mount.device_yield_force,
            "magnet_holding_force_n": mount.magnet_holding_force,
            "reel_capacity_m": mount.reel_capacity,
            "added_growth_pressure_pa": mount.added_growth_pressure,
            "behavior": behavior_doc,
        },
        "environment": {
            "bounds_m": [scenario.environment.bounds.x_min,
                         scenario.environment.bounds.y_min,
                         scenario.environment.bounds.x_max,
                         scenario.environment.bounds.y_max],
            "obstacles_m": [[list(vertex) for vertex in polygon]
                            for polygon in scenario.environment.obstacles],
            "objects": [
                {"id": obj.id, "position_m": list(obj.position),
                 "mass_kg": obj.mass, "graspable": obj.graspable}
                for obj in scenario.environment.objects
            ],
            "base_pose": {
                "x_m": scenario.environment.base_pose.x,
                "y_m": scenario.environment.base_pose.y,
                "heading_rad": scenario.environment.base_pose.heading,
            },
        },
        "sim": {
            "dt_s": scenario.sim.dt,
            "max_tip_speed_m_s": scenario.sim.max_tip_speed,
            "speed_gain_m_s_per_pa": scenario.sim.speed_gain,
            "max_curvature_per_m": scenario.sim.max_curvature,
            "segment_quantum_m": scenario.sim.segment_quantum,
            "grasp_radius_m": scenario.sim.grasp_radius,
            "buckling_coefficient": scenario.sim.buckling_coefficient,
        },
        "controller": {
            "growth_pressure_pa": scenario.controller.growth_pressure,
            "retraction_pressure_pa": scenario.controller.retraction_pressure,
            "deadband": scenario.controller.deadband,
            "tip_stall_threshold": scenario.controller.tip_stall_threshold,
            "base_backdrive_threshold": scenario.controller.base_backdrive_threshold,
            "base_no_buckle_max": scenario.controller.base_no_buckle_max,
            "max_curvature_per_m": scenario.controller.max_curvature,
        },
        "losses": {
            "constant_n": scenario.losses.constant_n,
            "per_pascal_n": scenario.losses.per_pascal_n,
        },
        "initial_body_length_m": scenario.initial_body_length,
        "script": [
            {"t_s": t, "axis_speed": op.axis_speed, "axis_steer": op.axis_steer,
             "gripper_close": op.gripper_close}
            for t, op in scenario.script
        ],
    }
    if scenario.success is not None:
        doc["success"] = {
            "object_id": scenario.success.object_id,
            "target_m": list(scenario.success.target),
            "tolerance_m": scenario.success.tolerance,
        }
    return doc


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2) + "\n"
