"""Bench-default parameters: the LDPE tube and the five mount configurations.

The tube is the 8.5 cm diameter, 0.06 mm wall LDPE film whose measured burst
pressure fixes the yield stress. Holding forces that were never measured
(magnet rings, reel motor) default to values below the current design's net
lift so the comparison matrix reflects the hardware era they come from.
"""

from __future__ import annotations

from .designs import DesignBehavior
from .mechanics import InstalledComponent, LossModel, payload_envelope
from .model import Material, TipMountDesign, TipMountSpec
from .units import GRAVITY, kgcm_to_newton_meter, kgf_to_newton

DEFAULT_MATERIAL = Material(
    radius=0.0425,
    wall_thickness=6e-5,
    yield_stress=22000.0 * 0.0425 / 6e-5,  # back-calculated from measured burst
    density_per_area=0.0,
    base_eversion_pressure=2000.0,
)

DEFAULT_LOSSES = LossModel()

# Pressure the body is kept at while retracting: low enough to need little
# tail force, high enough to stay inflated.
DEFAULT_RETRACTION_PRESSURE = 3000.0

FULL_MOUNT_COMPONENTS = frozenset({
    InstalledComponent.OUTER_CAP_FRICTION,
    InstalledComponent.HOOK_INTERFACE_FRICTION,
    InstalledComponent.ROLLERS_INSTALLED,
})

CURRENT_MOUNT = TipMountSpec(
    design=TipMountDesign.CURRENT_DESIGN,
    device_mass=0.5,
    roller_slip_force=kgf_to_newton(5.0),
    motor_torque_total=kgcm_to_newton_meter(10.0),
    roller_radius=0.03,
    device_yield_force=kgf_to_newton(7.0),
    added_growth_pressure=4800.0,  # outer cap + hook interface; rollers roll
)

STRING_MOUNT = TipMountSpec(
    design=TipMountDesign.STRING_MOUNT,
    device_mass=0.05,
    added_growth_pressure=0.0,
)

OUTER_CAP_MOUNT = TipMountSpec(
    design=TipMountDesign.OUTER_CAP,
    device_mass=0.1,
    added_growth_pressure=1400.0,
)

REEL_MOUNT = TipMountSpec(
    design=TipMountDesign.OUTER_CAP_WITH_REEL,
    device_mass=0.2,
    reel_capacity=3.0,
    added_growth_pressure=1400.0,
)

MAGNET_RINGS_MOUNT = TipMountSpec(
    design=TipMountDesign.MAGNET_RINGS,
    device_mass=0.1,
    magnet_holding_force=1.5 * GRAVITY,
    added_growth_pressure=1400.0,
)

MOUNT_SPECS: dict[TipMountDesign, TipMountSpec] = {
    spec.design: spec
    for spec in (STRING_MOUNT, OUTER_CAP_MOUNT, REEL_MOUNT,
                 MAGNET_RINGS_MOUNT, CURRENT_MOUNT)
}


def current_design_envelope(pressure: float = DEFAULT_RETRACTION_PRESSURE):
    return payload_envelope(DEFAULT_MATERIAL, CURRENT_MOUNT, pressure,
                            DEFAULT_LOSSES)


def reference_tension() -> float:
    """Tension applied in the comparison battery: the current design's
    net lift."""
    return current_design_envelope().governing_limit


def default_behaviors() -> dict[TipMountDesign, DesignBehavior]:
    """The five designs configured the way the comparison table assumes:
    spooled base, unmeasured holding forces below the reference tension."""
    return {
        TipMountDesign.STRING_MOUNT: DesignBehavior(
            design=TipMountDesign.STRING_MOUNT,
            spooled_base=True,
            initial_body_length=1.0,
        ),
        TipMountDesign.OUTER_CAP: DesignBehavior(
            design=TipMountDesign.OUTER_CAP),
        TipMountDesign.OUTER_CAP_WITH_REEL: DesignBehavior(
            design=TipMountDesign.OUTER_CAP_WITH_REEL,
            reel_capacity=3.0,
            motor_holding_force=1.0 * GRAVITY,
        ),
        TipMountDesign.MAGNET_RINGS: DesignBehavior(
            design=TipMountDesign.MAGNET_RINGS,
            magnet_holding_force=1.5 * GRAVITY,
        ),
        TipMountDesign.CURRENT_DESIGN: DesignBehavior(
            design=TipMountDesign.CURRENT_DESIGN,
            envelope=current_design_envelope(),
        ),
    }
