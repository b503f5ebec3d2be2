"""Closed-form mechanics: wall stress, burst pressure, payload envelope and
the additive minimum-growth-pressure budget.

All functions are pure and work in SI units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import Material, PayloadEnvelope, TipMountSpec
from .units import GRAVITY


class InstalledComponent(Enum):
    """Mount components that add friction to the minimum growth pressure."""

    OUTER_CAP_FRICTION = "outer_cap_friction"
    HOOK_INTERFACE_FRICTION = "hook_interface_friction"
    ROLLERS_INSTALLED = "rollers_installed"


# Calibrated friction terms (Pa). The rollers roll rather than slide on the
# tail, so installing them costs nothing extra.
FRICTION_TERMS_PA: dict[InstalledComponent, float] = {
    InstalledComponent.OUTER_CAP_FRICTION: 1400.0,
    InstalledComponent.HOOK_INTERFACE_FRICTION: 3400.0,
    InstalledComponent.ROLLERS_INSTALLED: 0.0,
}

_TERM_ORDER = (
    InstalledComponent.OUTER_CAP_FRICTION,
    InstalledComponent.HOOK_INTERFACE_FRICTION,
    InstalledComponent.ROLLERS_INSTALLED,
)


@dataclass(frozen=True)
class LossModel:
    """Affine-in-pressure force losses between a gross limit and a net lift.

    loss_force(P) = constant_n + per_pascal_n * P. The default constant is
    calibrated once so that a 5 kg-force gross roller-slip limit nets
    2.5 kg-force at the bench operating point (0.5 kg of that gap is the
    device weight, handled separately); the pressure slope defaults to zero.
    """

    constant_n: float = 2.0 * GRAVITY
    per_pascal_n: float = 0.0

    def loss_force(self, pressure: float) -> float:
        if pressure < 0:
            raise ValueError("pressure must be >= 0")
        return self.constant_n + self.per_pascal_n * pressure


@dataclass(frozen=True)
class PressureBudget:
    """Additive minimum-growth-pressure budget against the burst ceiling.

    terms: ordered (label, Pa) contributions; total is their sum. margin is
    burst minus total; a configuration is growable only when margin >= 0.
    margin_reduction_vs_bare compares the margin with the bare-body margin.
    """

    terms: tuple[tuple[str, float], ...]
    total: float
    burst_pressure: float
    margin: float
    margin_reduction_vs_bare: float

    def __post_init__(self) -> None:
        total = 0.0
        for _, value in self.terms:
            total += value
        if total != self.total:
            raise ValueError("PressureBudget.total must equal the sum of terms")
        if not 0.0 <= self.margin_reduction_vs_bare <= 1.0:
            raise ValueError(
                "PressureBudget.margin_reduction_vs_bare must be in [0, 1]")

    @property
    def growable(self) -> bool:
        return self.margin >= 0.0


def hoop_stress(pressure: float, material: Material) -> float:
    """Circumferential wall stress of the pressurized tube: P * r / t."""
    if pressure < 0:
        raise ValueError("pressure must be >= 0")
    if material.wall_thickness == 0:
        raise ValueError("wall_thickness must be nonzero")
    return pressure * material.radius / material.wall_thickness


def burst_pressure(material: Material) -> float:
    """Pressure at which wall hoop stress reaches yield: sigma_y * t / r."""
    return material.yield_stress * material.wall_thickness / material.radius


def material_yield_payload(material: Material) -> float:
    """Tension (N) at which the wall cross-section yields: sigma_y * 2*pi*r*t."""
    return material.yield_stress * 2.0 * math.pi * material.radius * material.wall_thickness


def motor_torque_payload(spec: TipMountSpec) -> float:
    """Roller tangential force (N) at the gearbox torque limit: tau / r_roller."""
    if spec.roller_radius <= 0:
        raise ValueError("roller_radius must be > 0")
    return spec.motor_torque_total / spec.roller_radius


def net_lift_capacity(gross_limit: float, spec: TipMountSpec,
                      pressure: float, losses: LossModel) -> float:
    """Liftable weight (N) left from a gross limit after the mount's own
    weight and the pressure-dependent losses; clamps at zero."""
    if gross_limit < 0:
        raise ValueError("gross_limit must be >= 0")
    net = gross_limit - spec.device_mass * GRAVITY - losses.loss_force(pressure)
    return max(0.0, net)


def payload_envelope(material: Material, spec: TipMountSpec,
                     pressure: float, losses: LossModel) -> PayloadEnvelope:
    """All four payload factors and the governing minimum.

    The roller-slip limit is what the motor path can actually lift, so it is
    reported net of device weight and losses. The motor-torque limit is the
    gearbox rating converted at the roller radius, reported as calculated
    (its true net value is masked by roller slip and was never measured).
    Device yield and material yield are structural limits, reported gross.
    """
    return PayloadEnvelope(
        roller_slip_net=net_lift_capacity(spec.roller_slip_force, spec,
                                          pressure, losses),
        motor_torque_net=motor_torque_payload(spec),
        device_yield=spec.device_yield_force,
        material_yield=material_yield_payload(material),
    )


def min_growth_pressure(material: Material,
                        installed: set[InstalledComponent] | frozenset[InstalledComponent],
                        ) -> PressureBudget:
    """Additive budget for the minimum pressure to grow.

    Starts from the bare-body eversion pressure and adds one calibrated
    friction term per installed mount component.
    """
    terms: list[tuple[str, float]] = [("eversion", material.base_eversion_pressure)]
    for component in _TERM_ORDER:
        if component in installed:
            terms.append((component.value, FRICTION_TERMS_PA[component]))
    total = 0.0
    for _, value in terms:
        total += value
    burst = burst_pressure(material)
    margin = burst - total
    bare_margin = burst - material.base_eversion_pressure
    if bare_margin > 0:
        reduction = min(1.0, max(0.0, (total - material.base_eversion_pressure) / bare_margin))
    else:
        reduction = 1.0
    return PressureBudget(
        terms=tuple(terms),
        total=total,
        burst_pressure=burst,
        margin=margin,
        margin_reduction_vs_bare=reduction,
    )


def buckling_tension_limit(material: Material, pressure: float,
                           coefficient: float) -> float:
    """Maximum base-applied tail tension before the pressurized body buckles.

    Modeled as coefficient * P * pi * r^2: an unpressurized body has no beam
    stiffness, and stiffness scales with inflation pressure.
    """
    if pressure < 0:
        raise ValueError("pressure must be >= 0")
    return coefficient * pressure * material.cross_section_area
