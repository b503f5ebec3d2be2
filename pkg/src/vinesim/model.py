"""Core domain types shared by every other module.

All types are immutable value objects validated on construction, so an
instance in hand is always internally consistent and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

# Tolerance for the tail-feed accounting check: the spool must have paid out
# exactly twice the everted body length.
MATERIAL_TOLERANCE_M = 1e-9

# Ratio above which the thin-wall stress formulas stop being credible.
THIN_WALL_RATIO = 0.05


class TipMountDesign(Enum):
    """The five tip mount designs, in comparison-table column order."""

    STRING_MOUNT = "string_mount"
    OUTER_CAP = "outer_cap"
    OUTER_CAP_WITH_REEL = "outer_cap_with_reel"
    MAGNET_RINGS = "magnet_rings"
    CURRENT_DESIGN = "current_design"


class AttachmentStatus(Enum):
    ATTACHED = "attached"
    EJECTED = "ejected"
    FELL_OFF = "fell_off"
    ENGULFED = "engulfed"
    SEPARATED = "separated"


class Mode(Enum):
    IDLE = "idle"
    GROWING = "growing"
    RETRACTING = "retracting"


class PayloadFactor(Enum):
    """The four tension limits, in tie-breaking order."""

    ROLLER_SLIP = "roller_slip"
    MOTOR_TORQUE = "motor_torque"
    DEVICE_YIELD = "device_yield"
    MATERIAL_YIELD = "material_yield"


class Pose(NamedTuple):
    x: float
    y: float
    heading: float


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _require_finite(value: float, name: str) -> None:
    _require(math.isfinite(value), f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Material:
    """Tube geometry and strength parameters.

    radius: inflated tube radius (m)
    wall_thickness: wall thickness (m), thin-walled (t/r < 0.05)
    yield_stress: wall yield stress (Pa)
    density_per_area: areal mass of the wall (kg/m^2), for tail weight
    base_eversion_pressure: pressure needed to evert the bare body (Pa)
    """

    radius: float
    wall_thickness: float
    yield_stress: float
    density_per_area: float = 0.0
    base_eversion_pressure: float = 2000.0

    def __post_init__(self) -> None:
        for name in ("radius", "wall_thickness", "yield_stress",
                     "density_per_area", "base_eversion_pressure"):
            _require_finite(getattr(self, name), f"Material.{name}")
        _require(self.radius > 0, "Material.radius must be > 0")
        _require(self.wall_thickness > 0, "Material.wall_thickness must be > 0")
        _require(
            self.wall_thickness / self.radius < THIN_WALL_RATIO,
            "Material.wall_thickness must be small against the radius "
            f"(t/r < {THIN_WALL_RATIO})",
        )
        _require(self.yield_stress > 0, "Material.yield_stress must be > 0")
        _require(self.density_per_area >= 0, "Material.density_per_area must be >= 0")
        _require(
            self.base_eversion_pressure >= 0,
            "Material.base_eversion_pressure must be >= 0",
        )

    @property
    def cross_section_area(self) -> float:
        """Pressurized cross-section pi*r^2 (m^2)."""
        return math.pi * self.radius * self.radius


@dataclass(frozen=True)
class TipMountSpec:
    """Hardware parameters of a mounted tip device.

    Forces are in N, torque in N.m. magnet_holding_force only applies to the
    magnet rings design, reel_capacity to the reel mount.
    added_growth_pressure is this mount's friction contribution to the
    minimum growth pressure (Pa).
    """

    design: TipMountDesign
    device_mass: float
    roller_slip_force: float = 0.0
    motor_torque_total: float = 0.0
    roller_radius: float = 0.0
    device_yield_force: float = 0.0
    magnet_holding_force: float = 0.0
    reel_capacity: float = 0.0
    added_growth_pressure: float = 0.0

    def __post_init__(self) -> None:
        _require(isinstance(self.design, TipMountDesign),
                 "TipMountSpec.design must be a TipMountDesign")
        for name in ("device_mass", "roller_slip_force", "motor_torque_total",
                     "roller_radius", "device_yield_force",
                     "magnet_holding_force", "reel_capacity",
                     "added_growth_pressure"):
            value = getattr(self, name)
            _require_finite(value, f"TipMountSpec.{name}")
            _require(value >= 0, f"TipMountSpec.{name} must be >= 0")
        if self.design is TipMountDesign.OUTER_CAP_WITH_REEL:
            _require(self.reel_capacity > 0,
                     "TipMountSpec.reel_capacity must be > 0 for the reel mount")


@dataclass(frozen=True)
class Segment:
    """One frozen-curvature piece of the everted body."""

    length: float
    curvature: float

    def __post_init__(self) -> None:
        _require_finite(self.length, "Segment.length")
        _require_finite(self.curvature, "Segment.curvature")
        _require(self.length >= 0, "Segment.length must be >= 0")


@dataclass(frozen=True)
class RobotState:
    """Snapshot of the everted body and its material accounting.

    segments run base to tip; body_length is their total; material_released
    is tube length paid out from the spool (twice the body length, since the
    tail feeds at twice the tip speed).
    """

    segments: tuple[Segment, ...]
    body_length: float
    material_released: float
    pressure: float
    tip_pose: Pose
    mode: Mode = Mode.IDLE
    buckled: bool = False

    def __post_init__(self) -> None:
        _require(self.body_length >= 0, "RobotState.body_length must be >= 0")
        _require(self.pressure >= 0, "RobotState.pressure must be >= 0")
        _require(
            abs(self.material_released - 2.0 * self.body_length) <= MATERIAL_TOLERANCE_M,
            "RobotState.material_released must equal twice body_length "
            f"(got {self.material_released!r} vs 2 x {self.body_length!r})",
        )
        _require(not (self.buckled and self.mode is Mode.GROWING),
                 "RobotState cannot be buckled while growing")


@dataclass(frozen=True)
class AttachmentState:
    """Attachment status of the mounted tip device.

    Failure states are terminal within a run: transitions only move away
    from ATTACHED.
    """

    status: AttachmentStatus = AttachmentStatus.ATTACHED
    tension_applied: float = 0.0

    def __post_init__(self) -> None:
        _require(self.tension_applied >= 0,
                 "AttachmentState.tension_applied must be >= 0")

    @property
    def failed(self) -> bool:
        return self.status is not AttachmentStatus.ATTACHED


_FACTOR_ORDER = (
    PayloadFactor.ROLLER_SLIP,
    PayloadFactor.MOTOR_TORQUE,
    PayloadFactor.DEVICE_YIELD,
    PayloadFactor.MATERIAL_YIELD,
)


@dataclass(frozen=True)
class PayloadEnvelope:
    """The four tension limits (N) and the governing minimum.

    Ties in the argmin break toward the first factor in _FACTOR_ORDER.
    """

    roller_slip_net: float
    motor_torque_net: float
    device_yield: float
    material_yield: float
    governing_limit: float = field(default=math.nan)
    limiting_factor: PayloadFactor = field(default=PayloadFactor.ROLLER_SLIP)

    def __post_init__(self) -> None:
        factors = self.factors()
        for factor, value in factors.items():
            _require_finite(value, f"PayloadEnvelope.{factor.value}")
            _require(value >= 0, f"PayloadEnvelope.{factor.value} must be >= 0")
        expected_limit = min(factors.values())
        expected_factor = next(f for f in _FACTOR_ORDER
                               if factors[f] == expected_limit)
        if math.isnan(self.governing_limit):
            object.__setattr__(self, "governing_limit", expected_limit)
            object.__setattr__(self, "limiting_factor", expected_factor)
        else:
            _require(self.governing_limit == expected_limit,
                     "PayloadEnvelope.governing_limit must be the factor minimum")
            _require(self.limiting_factor is expected_factor,
                     "PayloadEnvelope.limiting_factor must be the argmin "
                     "(ties break in declared factor order)")

    def factors(self) -> dict[PayloadFactor, float]:
        return {
            PayloadFactor.ROLLER_SLIP: self.roller_slip_net,
            PayloadFactor.MOTOR_TORQUE: self.motor_torque_net,
            PayloadFactor.DEVICE_YIELD: self.device_yield,
            PayloadFactor.MATERIAL_YIELD: self.material_yield,
        }
