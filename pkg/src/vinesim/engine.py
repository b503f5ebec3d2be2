"""Deterministic fixed-timestep kinematic simulation.

The robot is a chain of frozen-curvature segments everted from a base pose.
Growth extends the distal segment at the commanded curvature and freezes a
new segment each segment quantum; retraction consumes segments tip-first.
Motion is quasi-static: the hardware this models moves at a few cm/s.

The engine is a single-owner state machine. One caller steps it; snapshots
handed outward are immutable value objects. Internally it keeps a pose
stack (one pose per frozen segment boundary) and a material ledger, so a
step costs O(1) regardless of body length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .controller import ControlOutput
from .designs import (
    DesignBehavior,
    GrowStep,
    RetractStep,
    TensionLoad,
    update_attachment,
)
from .geometry import point_in_convex_polygon
from .kinematics import body_polyline, propagate_pose
from .mechanics import buckling_tension_limit
from .model import (
    AttachmentState,
    Material,
    Mode,
    Pose,
    RobotState,
    Segment,
    TipMountSpec,
)
from .units import GRAVITY


@dataclass(frozen=True)
class Rect:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("Rect must have positive extent")

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class WorldObject:
    id: str
    position: tuple[float, float]
    mass: float
    graspable: bool = True
    held_by_tip: bool = False

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("WorldObject.id must be nonempty")
        if self.mass < 0:
            raise ValueError("WorldObject.mass must be >= 0")


@dataclass(frozen=True)
class Environment:
    """World the robot grows into: bounds, convex obstacles, loose objects
    and the base mounting pose."""

    bounds: Rect
    obstacles: tuple[tuple[tuple[float, float], ...], ...] = ()
    objects: tuple[WorldObject, ...] = ()
    base_pose: Pose = Pose(0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        for i, polygon in enumerate(self.obstacles):
            if len(polygon) < 3:
                raise ValueError(f"Environment.obstacles[{i}] needs >= 3 vertices")
            for x, y in polygon:
                if not self.bounds.contains(x, y):
                    raise ValueError(
                        f"Environment.obstacles[{i}] must lie within bounds")
        if not self.bounds.contains(self.base_pose.x, self.base_pose.y):
            raise ValueError("Environment.base_pose must lie within bounds")
        ids = [obj.id for obj in self.objects]
        if len(set(ids)) != len(ids):
            raise ValueError("Environment object ids must be unique")
        if sum(1 for obj in self.objects if obj.held_by_tip) > 1:
            raise ValueError("at most one object can be held by the tip")


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.02
    max_tip_speed: float = 0.05
    speed_gain: float = 0.05 / 3000.0
    max_curvature: float = 3.0
    segment_quantum: float = 0.02
    grasp_radius: float = 0.06
    buckling_coefficient: float = 0.5

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError("SimConfig.dt must be > 0")
        if self.max_tip_speed <= 0:
            raise ValueError("SimConfig.max_tip_speed must be > 0")
        if self.segment_quantum <= 0:
            raise ValueError("SimConfig.segment_quantum must be > 0")
        if self.speed_gain < 0:
            raise ValueError("SimConfig.speed_gain must be >= 0")
        if self.max_curvature <= 0:
            raise ValueError("SimConfig.max_curvature must be > 0")
        if self.grasp_radius <= 0:
            raise ValueError("SimConfig.grasp_radius must be > 0")
        if self.buckling_coefficient < 0:
            raise ValueError("SimConfig.buckling_coefficient must be >= 0")


@dataclass(frozen=True)
class SuccessSpec:
    """Run succeeds once the object rests within tolerance of the target."""

    object_id: str
    target: tuple[float, float]
    tolerance: float

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise ValueError("SuccessSpec.tolerance must be > 0")


@dataclass(frozen=True)
class Event:
    kind: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind}:{self.detail}" if self.detail else self.kind


SEGMENT_FROZEN = "segment_frozen"
GRASPED = "grasped"
RELEASED = "released"
BUCKLED = "buckled"
ATTACHMENT_FAILED = "attachment_failed"
OBJECT_DELIVERED = "object_delivered"
HALTED = "halted"
RETRACT_LIMIT = "retract_limit"


class _MaterialLedger:
    """Growth increments with stored prefix totals.

    Removing a whole increment restores the exact totals recorded when it
    was pushed, so growing N steps and retracting the same N amounts returns
    the length to its starting value bit-for-bit. Released material is
    tracked with the identical operation sequence scaled by two, which keeps
    released == 2 * length exactly (scaling by two commutes with rounding).
    """

    def __init__(self, initial_length: float = 0.0):
        self._entries: list[tuple[float, float, float]] = []
        if initial_length > 0:
            self._entries.append(
                (initial_length, initial_length, 2.0 * initial_length))

    @property
    def length(self) -> float:
        return self._entries[-1][1] if self._entries else 0.0

    @property
    def released(self) -> float:
        return self._entries[-1][2] if self._entries else 0.0

    def grow(self, delta: float) -> None:
        if delta <= 0:
            return
        self._entries.append(
            (delta, self.length + delta, self.released + 2.0 * delta))

    def retract(self, requested: float) -> float:
        """Remove up to `requested` of length; returns the amount removed."""
        before = self.length
        remaining = requested
        while remaining > 0 and self._entries:
            delta, _, _ = self._entries[-1]
            if remaining >= delta:
                self._entries.pop()
                remaining = 0.0 if remaining == delta else remaining - delta
            else:
                prev_len = self._entries[-2][1] if len(self._entries) > 1 else 0.0
                prev_rel = self._entries[-2][2] if len(self._entries) > 1 else 0.0
                shrunk = delta - remaining
                self._entries[-1] = (
                    shrunk, prev_len + shrunk, prev_rel + 2.0 * shrunk)
                remaining = 0.0
        return before - self.length


class Simulator:
    """Owns the evolving run state; hand out snapshots, never internals."""

    def __init__(self, material: Material, mount: TipMountSpec,
                 behavior: DesignBehavior, environment: Environment,
                 config: SimConfig, initial_body_length: float = 0.0,
                 success: SuccessSpec | None = None):
        if behavior.design is not mount.design:
            raise ValueError("behavior and mount specify different designs")
        if initial_body_length < 0:
            raise ValueError("initial_body_length must be >= 0")
        if success is not None:
            ids = {obj.id for obj in environment.objects}
            if success.object_id not in ids:
                raise ValueError(
                    f"success object {success.object_id!r} not in environment")
            if not environment.bounds.contains(*success.target):
                raise ValueError("success target must lie within bounds")
        self.material = material
        self.mount = mount
        self.behavior = behavior
        self.config = config
        self.success = success
        self._base_pose = environment.base_pose
        self._bounds = environment.bounds
        self._obstacles = environment.obstacles
        self._objects: list[WorldObject] = list(environment.objects)
        self._held_index: int | None = next(
            (i for i, obj in enumerate(self._objects) if obj.held_by_tip), None)

        self._ledger = _MaterialLedger(initial_body_length)
        # Frozen chain plus the steerable distal stub. The pose stack holds
        # the rollout pose after each frozen segment; its top is the stub base.
        self._frozen: list[Segment] = []
        self._pose_stack: list[Pose] = [environment.base_pose]
        self._distal_len = 0.0
        self._distal_kappa = 0.0
        remainder = initial_body_length
        while remainder >= config.segment_quantum:
            self._push_frozen(Segment(config.segment_quantum, 0.0))
            remainder -= config.segment_quantum
        self._distal_len = max(0.0, remainder)

        self._pressure = 0.0
        self._mode = Mode.IDLE
        self._buckled = False
        self._attachment = AttachmentState()
        self._delivered = False
        self._steps = 0
        self._frozen_cache: tuple[Segment, ...] | None = None
        self._snapshot: RobotState | None = None
        self._min_growth_pressure = (material.base_eversion_pressure
                                     + mount.added_growth_pressure)

    # -- snapshots ---------------------------------------------------------

    @property
    def state(self) -> RobotState:
        if self._snapshot is None:
            if self._frozen_cache is None:
                self._frozen_cache = tuple(self._frozen)
            self._snapshot = RobotState(
                segments=self._frozen_cache
                + (Segment(self._distal_len, self._distal_kappa),),
                body_length=self._ledger.length,
                material_released=self._ledger.released,
                pressure=self._pressure,
                tip_pose=self._tip_pose(),
                mode=self._mode,
                buckled=self._buckled,
            )
        return self._snapshot

    @property
    def environment(self) -> Environment:
        return Environment(
            bounds=self._bounds,
            obstacles=self._obstacles,
            objects=tuple(self._objects),
            base_pose=self._base_pose,
        )

    @property
    def attachment(self) -> AttachmentState:
        return self._attachment

    @property
    def halted(self) -> bool:
        return self._buckled or self._attachment.failed

    @property
    def delivered(self) -> bool:
        return self._delivered

    @property
    def steps(self) -> int:
        return self._steps

    @property
    def time(self) -> float:
        return self._steps * self.config.dt

    def polyline(self, max_spacing: float = 0.01) -> list[tuple[float, float]]:
        return body_polyline(self.state.segments, self._base_pose, max_spacing)

    # -- stepping ----------------------------------------------------------

    def step(self, command: ControlOutput) -> list[Event]:
        """Advance one fixed timestep under the given command."""
        self._steps += 1
        if self.halted:
            return [Event(HALTED)]
        self._snapshot = None

        events: list[Event] = []
        self._pressure = max(0.0, command.pressure_setpoint)
        self._mode = command.mode
        kappa = max(-self.config.max_curvature,
                    min(self.config.max_curvature, command.curvature_cmd))
        self._steer(kappa)

        motor_fraction = min(1.0, abs(command.tip_motor_cmd))
        if command.mode is Mode.GROWING:
            if not self._grow_phase(motor_fraction, events):
                return events
        elif command.mode is Mode.RETRACTING:
            if not self._retract_phase(motor_fraction, events):
                return events

        self._gripper_phase(command.gripper_close, events)
        if not self._tension_phase(events):
            return events
        self._delivery_phase(events)
        return events

    # -- phases ------------------------------------------------------------

    def _grow_phase(self, motor_fraction: float, events: list[Event]) -> bool:
        pressure_speed = self.config.speed_gain * max(
            0.0, self._pressure - self._min_growth_pressure)
        speed = min(pressure_speed, self.config.max_tip_speed,
                    motor_fraction * self.config.max_tip_speed)
        delta = speed * self.config.dt
        if delta <= 0:
            return True
        delta = self._admissible_growth(delta)
        if delta <= 0:
            return True
        self._ledger.grow(delta)
        self._extend_distal(delta, events)
        self._snapshot = None
        new_attachment = update_attachment(
            self.behavior, self.state, self._attachment, GrowStep())
        return self._absorb_attachment(new_attachment, events)

    def _retract_phase(self, motor_fraction: float,
                       events: list[Event]) -> bool:
        speed = min(self.config.max_tip_speed,
                    motor_fraction * self.config.max_tip_speed)
        if speed <= 0:
            return True
        if self._ledger.length == 0.0:
            events.append(Event(RETRACT_LIMIT))
            return True
        # The mount reacts to inversion beginning before anything moves.
        new_attachment = update_attachment(
            self.behavior, self.state, self._attachment, RetractStep())
        if not self._absorb_attachment(new_attachment, events):
            return False
        if not self.behavior.has_retraction_device:
            # Without tip rollers the base must pull the whole inversion
            # tension (pressure over the cross-section plus mount friction).
            invert_tension = (
                (self._pressure + self.mount.added_growth_pressure)
                * self.material.cross_section_area)
            limit = buckling_tension_limit(
                self.material, self._pressure, self.config.buckling_coefficient)
            if invert_tension > limit:
                self._buckled = True
                self._mode = Mode.IDLE
                self._snapshot = None
                events.append(Event(BUCKLED))
                return False
        requested = speed * self.config.dt
        removed = self._ledger.retract(requested)
        self._shrink_distal(removed)
        self._snapshot = None
        if removed < requested and self._ledger.length == 0.0:
            events.append(Event(RETRACT_LIMIT))
        return True

    def _gripper_phase(self, gripper_close: bool, events: list[Event]) -> None:
        tip = self._tip_pose()
        if self._held_index is not None:
            index = self._held_index
            obj = replace(self._objects[index], position=(tip.x, tip.y))
            if not gripper_close:
                obj = replace(obj, held_by_tip=False)
                self._held_index = None
                events.append(Event(RELEASED, obj.id))
            self._objects[index] = obj
            return
        if not gripper_close:
            return
        best = None
        best_dist = self.config.grasp_radius
        for i, obj in enumerate(self._objects):
            if not obj.graspable:
                continue
            dist = math.hypot(obj.position[0] - tip.x, obj.position[1] - tip.y)
            if dist <= best_dist and (best is None or dist < best_dist):
                best, best_dist = i, dist
        if best is not None:
            obj = self._objects[best]
            self._objects[best] = replace(
                obj, position=(tip.x, tip.y), held_by_tip=True)
            self._held_index = best
            events.append(Event(GRASPED, obj.id))

    def _tension_phase(self, events: list[Event]) -> bool:
        if self._held_index is None:
            return True
        force = self._objects[self._held_index].mass * GRAVITY
        if force <= 0:
            return True
        new_attachment = update_attachment(
            self.behavior, self.state, self._attachment, TensionLoad(force))
        return self._absorb_attachment(new_attachment, events)

    def _delivery_phase(self, events: list[Event]) -> None:
        if self._delivered or self.success is None:
            return
        for obj in self._objects:
            if obj.id != self.success.object_id:
                continue
            if obj.held_by_tip:
                return
            dist = math.hypot(obj.position[0] - self.success.target[0],
                              obj.position[1] - self.success.target[1])
            if dist <= self.success.tolerance:
                self._delivered = True
                events.append(Event(OBJECT_DELIVERED, obj.id))
            return

    def _absorb_attachment(self, new_attachment: AttachmentState,
                           events: list[Event]) -> bool:
        self._attachment = new_attachment
        if new_attachment.failed:
            events.append(Event(ATTACHMENT_FAILED, new_attachment.status.value))
            self._mode = Mode.IDLE
            self._snapshot = None
            return False
        return True

    # -- body bookkeeping ----------------------------------------------------

    def _tip_pose(self) -> Pose:
        return propagate_pose(self._pose_stack[-1], self._distal_len,
                              self._distal_kappa)

    def _push_frozen(self, segment: Segment) -> None:
        self._frozen.append(segment)
        self._pose_stack.append(propagate_pose(
            self._pose_stack[-1], segment.length, segment.curvature))
        self._frozen_cache = None

    def _steer(self, kappa: float) -> None:
        """Re-bend the distal (unfrozen) stub; frozen shape never changes."""
        if kappa == self._distal_kappa:
            return
        if not self._collides(self._distal_len, kappa):
            self._distal_kappa = kappa

    def _admissible_growth(self, delta: float) -> float:
        """Largest admissible sub-step: contact zeroes motion into surfaces."""
        for fraction in (1.0, 0.5, 0.25, 0.125, 0.0625):
            if not self._collides(self._distal_len + delta * fraction,
                                  self._distal_kappa):
                return delta * fraction
        return 0.0

    def _collides(self, length: float, kappa: float) -> bool:
        """Check a candidate distal stub against bounds and obstacles."""
        base = self._pose_stack[-1]
        points: list[tuple[float, float]] = [(base.x, base.y)]
        if length > 0:
            n = max(1, math.ceil(length / 0.01))
            step = length / n
            pose = base
            for _ in range(n):
                pose = propagate_pose(pose, step, kappa)
                points.append((pose.x, pose.y))
        for x, y in points:
            if not self._bounds.contains(x, y):
                return True
            for polygon in self._obstacles:
                if point_in_convex_polygon((x, y), polygon):
                    return True
        return False

    def _extend_distal(self, delta: float, events: list[Event]) -> None:
        self._distal_len += delta
        quantum = self.config.segment_quantum
        while self._distal_len >= quantum:
            self._push_frozen(Segment(quantum, self._distal_kappa))
            self._distal_len -= quantum
            events.append(Event(SEGMENT_FROZEN, str(len(self._frozen))))

    def _shrink_distal(self, amount: float) -> None:
        remaining = amount
        while remaining > 0:
            if self._distal_len > 0:
                take = min(self._distal_len, remaining)
                self._distal_len -= take
                remaining -= take
                continue
            if not self._frozen:
                break
            segment = self._frozen.pop()
            self._pose_stack.pop()
            self._frozen_cache = None
            self._distal_len = segment.length
            self._distal_kappa = segment.curvature
