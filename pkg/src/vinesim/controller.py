"""Open-loop coordination of base motor, tip motors and pressure.

Maps a joystick-style operator input to one command per simulation step.
There is no feedback: the output is a pure function of the input and the
parameters, mirroring voltage-threshold tuning on the bench. During growth
the pressure is set high and the base motor is held just below its
backdrive threshold so the spool pays out without slack; the tip motors
meter the release speed. During retraction the pressure is dropped, the
base motor reels in below the buckling threshold, and the tip motors pull.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Mode, RobotState


def _clamp_axis(value: float) -> float:
    if not math.isfinite(value):
        return 0.0
    return max(-1.0, min(1.0, value))


@dataclass(frozen=True)
class OperatorInput:
    """Normalized operator input; axes clamp into [-1, 1] on construction.

    axis_speed > 0 grows, < 0 retracts.
    """

    axis_speed: float = 0.0
    axis_steer: float = 0.0
    gripper_close: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "axis_speed", _clamp_axis(self.axis_speed))
        object.__setattr__(self, "axis_steer", _clamp_axis(self.axis_steer))


@dataclass(frozen=True)
class ControllerParams:
    """Threshold-anchored command shaping, normalized to [-1, 1] "voltages".

    tip_stall_threshold is the command below which the tip motors do not
    move; the speed interpolation starts there. base_backdrive_threshold is
    the constant growth command for the base (just below self-spinning);
    base_no_buckle_max is the constant retraction command (just below the
    straight-body buckling point at the retraction pressure).
    """

    growth_pressure: float = 9800.0
    retraction_pressure: float = 3000.0
    deadband: float = 0.05
    tip_stall_threshold: float = 0.3
    base_backdrive_threshold: float = 0.4
    base_no_buckle_max: float = 0.6
    max_curvature: float = 3.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.deadband < 1.0:
            raise ValueError("ControllerParams.deadband must be in [0, 1)")
        if not 0.0 <= self.tip_stall_threshold < 1.0:
            raise ValueError(
                "ControllerParams.tip_stall_threshold must be in [0, 1)")
        for name in ("growth_pressure", "retraction_pressure"):
            if getattr(self, name) < 0:
                raise ValueError(f"ControllerParams.{name} must be >= 0")
        for name in ("base_backdrive_threshold", "base_no_buckle_max"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"ControllerParams.{name} must be in [0, 1]")
        if self.max_curvature <= 0:
            raise ValueError("ControllerParams.max_curvature must be > 0")


@dataclass(frozen=True)
class ControlOutput:
    """One step's worth of commands for the simulation engine."""

    mode: Mode
    base_motor_cmd: float
    tip_motor_cmd: float
    pressure_setpoint: float
    curvature_cmd: float
    gripper_close: bool

    def __post_init__(self) -> None:
        if self.pressure_setpoint < 0:
            raise ValueError("ControlOutput.pressure_setpoint must be >= 0")
        if self.mode is Mode.GROWING and self.tip_motor_cmd <= 0:
            raise ValueError("growing requires a positive tip motor command")
        if self.mode is Mode.RETRACTING and self.tip_motor_cmd >= 0:
            raise ValueError("retracting requires a negative tip motor command")
        if self.mode is Mode.IDLE and self.tip_motor_cmd != 0:
            raise ValueError("idle requires a zero tip motor command")


def _tip_command(axis_speed: float, params: ControllerParams) -> float:
    """Interpolate from the stall threshold to full command by |axis|."""
    span = 1.0 - params.tip_stall_threshold
    return params.tip_stall_threshold + span * abs(axis_speed)


def compute_command(operator: OperatorInput, state: RobotState,
                    params: ControllerParams) -> ControlOutput:
    """Map operator input to motor/pressure commands (pure function)."""
    axis_speed = _clamp_axis(operator.axis_speed)
    axis_steer = _clamp_axis(operator.axis_steer)
    curvature_cmd = axis_steer * params.max_curvature

    if axis_speed > params.deadband:
        return ControlOutput(
            mode=Mode.GROWING,
            base_motor_cmd=params.base_backdrive_threshold,
            tip_motor_cmd=_tip_command(axis_speed, params),
            pressure_setpoint=params.growth_pressure,
            curvature_cmd=curvature_cmd,
            gripper_close=operator.gripper_close,
        )
    if axis_speed < -params.deadband:
        return ControlOutput(
            mode=Mode.RETRACTING,
            base_motor_cmd=-params.base_no_buckle_max,
            tip_motor_cmd=-_tip_command(axis_speed, params),
            pressure_setpoint=params.retraction_pressure,
            curvature_cmd=curvature_cmd,
            gripper_close=operator.gripper_close,
        )
    return ControlOutput(
        mode=Mode.IDLE,
        base_motor_cmd=0.0,
        tip_motor_cmd=0.0,
        pressure_setpoint=state.pressure,
        curvature_cmd=curvature_cmd,
        gripper_close=operator.gripper_close,
    )
