import pytest
from hypothesis import given
from hypothesis import strategies as st

from vinesim import mechanics
from vinesim.mechanics import (
    InstalledComponent,
    LossModel,
    buckling_tension_limit,
    burst_pressure,
    hoop_stress,
    material_yield_payload,
    min_growth_pressure,
    motor_torque_payload,
    net_lift_capacity,
    payload_envelope,
)
from vinesim.model import Material, PayloadFactor, TipMountDesign, TipMountSpec
from vinesim.presets import (
    CURRENT_MOUNT,
    DEFAULT_LOSSES,
    DEFAULT_MATERIAL,
    DEFAULT_RETRACTION_PRESSURE,
)
from vinesim.units import GRAVITY


def kgf(value):
    return value * GRAVITY


class TestHoopStress:
    def test_bench_point(self):
        # 22.0 kPa in the 8.5 cm / 0.06 mm tube reads ~15.6 MPa.
        stress = hoop_stress(22000.0, DEFAULT_MATERIAL)
        assert 15.4e6 <= stress <= 15.8e6
        assert stress == pytest.approx(15_583_333.333333334)

    def test_zero_pressure(self):
        assert hoop_stress(0.0, DEFAULT_MATERIAL) == 0.0

    def test_hand_evaluated_point(self):
        assert hoop_stress(10000.0, DEFAULT_MATERIAL) == pytest.approx(7_083_333.333333334)

    def test_rejects_negative_pressure(self):
        with pytest.raises(ValueError):
            hoop_stress(-1.0, DEFAULT_MATERIAL)

    @given(scale=st.floats(min_value=0.01, max_value=100.0),
           pressure=st.floats(min_value=0.0, max_value=1e6))
    def test_linear_in_pressure_and_radius(self, scale, pressure):
        base = hoop_stress(pressure, DEFAULT_MATERIAL)
        assert hoop_stress(pressure * scale, DEFAULT_MATERIAL) == pytest.approx(
            base * scale, rel=1e-12, abs=1e-9)
        wider = Material(radius=DEFAULT_MATERIAL.radius * 2,
                         wall_thickness=DEFAULT_MATERIAL.wall_thickness,
                         yield_stress=DEFAULT_MATERIAL.yield_stress)
        assert hoop_stress(pressure, wider) == pytest.approx(
            base * 2, rel=1e-12, abs=1e-9)

    @given(pressure=st.floats(min_value=1.0, max_value=1e6))
    def test_burst_round_trip(self, pressure):
        material = Material(radius=0.0425, wall_thickness=6e-5,
                            yield_stress=hoop_stress(pressure, DEFAULT_MATERIAL))
        assert burst_pressure(material) == pytest.approx(pressure, rel=1e-9)


class TestBurstPressure:
    def test_bench_point(self):
        assert burst_pressure(DEFAULT_MATERIAL) == pytest.approx(22000.0, rel=1e-9)

    def test_doubling_radius_halves(self):
        doubled = Material(radius=2 * DEFAULT_MATERIAL.radius,
                           wall_thickness=DEFAULT_MATERIAL.wall_thickness,
                           yield_stress=DEFAULT_MATERIAL.yield_stress)
        assert burst_pressure(doubled) == pytest.approx(
            burst_pressure(DEFAULT_MATERIAL) / 2)

    def test_doubling_thickness(self):
        thicker = Material(radius=DEFAULT_MATERIAL.radius,
                           wall_thickness=2 * DEFAULT_MATERIAL.wall_thickness,
                           yield_stress=DEFAULT_MATERIAL.yield_stress)
        assert burst_pressure(thicker) == pytest.approx(44000.0, rel=1e-9)


class TestMaterialYieldPayload:
    def test_bench_point(self):
        force = material_yield_payload(DEFAULT_MATERIAL)
        assert force == pytest.approx(249.678, abs=0.01)
        assert force / GRAVITY == pytest.approx(25.5, rel=0.01)

    def test_doubled_thickness(self):
        thicker = Material(radius=DEFAULT_MATERIAL.radius,
                           wall_thickness=2 * DEFAULT_MATERIAL.wall_thickness,
                           yield_stress=DEFAULT_MATERIAL.yield_stress)
        assert material_yield_payload(thicker) == pytest.approx(499.356, abs=0.01)


class TestMotorTorquePayload:
    def test_bench_point(self):
        force = motor_torque_payload(CURRENT_MOUNT)
        assert force == pytest.approx(32.7)
        assert force / GRAVITY == pytest.approx(10.0 / 3.0, rel=1e-9)

    def test_zero_torque(self):
        spec = TipMountSpec(design=TipMountDesign.CURRENT_DESIGN,
                            device_mass=0.5, roller_radius=0.03)
        assert motor_torque_payload(spec) == 0.0

    def test_hand_evaluated_point(self):
        spec = TipMountSpec(design=TipMountDesign.CURRENT_DESIGN,
                            device_mass=0.5, motor_torque_total=0.5,
                            roller_radius=0.03)
        assert motor_torque_payload(spec) == pytest.approx(16.6667, abs=1e-3)

    def test_rejects_zero_roller_radius(self):
        spec = TipMountSpec(design=TipMountDesign.CURRENT_DESIGN,
                            device_mass=0.5, motor_torque_total=0.981)
        with pytest.raises(ValueError):
            motor_torque_payload(spec)


class TestNetLift:
    def test_bench_point(self):
        net = net_lift_capacity(kgf(5.0), CURRENT_MOUNT,
                                DEFAULT_RETRACTION_PRESSURE, DEFAULT_LOSSES)
        assert net == pytest.approx(24.525)
        assert net / GRAVITY == pytest.approx(2.5, rel=1e-9)

    def test_exact_cancellation(self):
        losses = LossModel(constant_n=10.0)
        spec = TipMountSpec(design=TipMountDesign.CURRENT_DESIGN, device_mass=0.0)
        assert net_lift_capacity(10.0, spec, 0.0, losses) == 0.0
        heavy = TipMountSpec(design=TipMountDesign.CURRENT_DESIGN, device_mass=1.0)
        assert net_lift_capacity(10.0 + GRAVITY, heavy, 0.0, losses) == pytest.approx(0.0, abs=1e-12)

    def test_clamps_at_zero(self):
        assert net_lift_capacity(1.0, CURRENT_MOUNT,
                                 DEFAULT_RETRACTION_PRESSURE, DEFAULT_LOSSES) == 0.0

    def test_hand_evaluated_point(self):
        net = net_lift_capacity(kgf(10.0), CURRENT_MOUNT,
                                DEFAULT_RETRACTION_PRESSURE, DEFAULT_LOSSES)
        assert net == pytest.approx(73.575)

    def test_pressure_slope(self):
        losses = LossModel(constant_n=0.0, per_pascal_n=1e-3)
        spec = TipMountSpec(design=TipMountDesign.CURRENT_DESIGN, device_mass=0.0)
        assert net_lift_capacity(10.0, spec, 1000.0, losses) == pytest.approx(9.0)


class TestPayloadEnvelope:
    def test_bench_configuration(self):
        env = payload_envelope(DEFAULT_MATERIAL, CURRENT_MOUNT,
                               DEFAULT_RETRACTION_PRESSURE, DEFAULT_LOSSES)
        assert env.limiting_factor is PayloadFactor.ROLLER_SLIP
        assert env.governing_limit / GRAVITY == pytest.approx(2.5, rel=0.02)
        assert env.motor_torque_net / GRAVITY == pytest.approx(3.33, rel=0.01)
        assert env.device_yield / GRAVITY == pytest.approx(7.0, rel=1e-9)
        assert env.material_yield / GRAVITY == pytest.approx(25.5, rel=0.01)

    def test_forced_material_yield_argmin(self):
        spec = TipMountSpec(design=TipMountDesign.CURRENT_DESIGN,
                            device_mass=0.0, roller_slip_force=1e5,
                            motor_torque_total=1e4, roller_radius=0.03,
                            device_yield_force=1e5)
        env = payload_envelope(DEFAULT_MATERIAL, spec, 0.0,
                               LossModel(constant_n=0.0))
        assert env.limiting_factor is PayloadFactor.MATERIAL_YIELD
        assert env.governing_limit == pytest.approx(249.678, abs=0.01)

    def test_equal_factors_tie_to_roller_slip(self):
        material_limit = material_yield_payload(DEFAULT_MATERIAL)
        spec = TipMountSpec(design=TipMountDesign.CURRENT_DESIGN,
                            device_mass=0.0,
                            roller_slip_force=material_limit,
                            motor_torque_total=material_limit * 0.03,
                            roller_radius=0.03,
                            device_yield_force=material_limit)
        env = payload_envelope(DEFAULT_MATERIAL, spec, 0.0,
                               LossModel(constant_n=0.0))
        assert env.roller_slip_net == env.motor_torque_net \
            == env.device_yield == env.material_yield
        assert env.limiting_factor is PayloadFactor.ROLLER_SLIP

    @given(slip=st.floats(min_value=0.0, max_value=500.0),
           torque=st.floats(min_value=0.0, max_value=20.0),
           device=st.floats(min_value=0.0, max_value=500.0),
           mass=st.floats(min_value=0.0, max_value=5.0))
    def test_governing_is_min(self, slip, torque, device, mass):
        spec = TipMountSpec(design=TipMountDesign.CURRENT_DESIGN,
                            device_mass=mass, roller_slip_force=slip,
                            motor_torque_total=torque, roller_radius=0.03,
                            device_yield_force=device)
        env = payload_envelope(DEFAULT_MATERIAL, spec, 1000.0, DEFAULT_LOSSES)
        factors = env.factors()
        assert env.governing_limit == min(factors.values())
        for factor, value in factors.items():
            assert env.governing_limit <= value
        assert factors[env.limiting_factor] == env.governing_limit


class TestMinGrowthPressure:
    def test_bare_body(self):
        budget = min_growth_pressure(DEFAULT_MATERIAL, set())
        assert budget.total == 2000.0
        assert budget.margin_reduction_vs_bare == 0.0

    def test_outer_cap_only(self):
        budget = min_growth_pressure(
            DEFAULT_MATERIAL, {InstalledComponent.OUTER_CAP_FRICTION})
        assert budget.total == 3400.0

    def test_cap_and_hook(self):
        budget = min_growth_pressure(
            DEFAULT_MATERIAL,
            {InstalledComponent.OUTER_CAP_FRICTION,
             InstalledComponent.HOOK_INTERFACE_FRICTION})
        assert budget.total == 6800.0

    def test_full_mount(self):
        budget = min_growth_pressure(
            DEFAULT_MATERIAL,
            {InstalledComponent.OUTER_CAP_FRICTION,
             InstalledComponent.HOOK_INTERFACE_FRICTION,
             InstalledComponent.ROLLERS_INSTALLED})
        assert budget.total == 6800.0
        assert budget.margin == pytest.approx(15200.0, rel=1e-9)
        assert budget.margin_reduction_vs_bare == pytest.approx(0.24, abs=0.005)
        assert budget.growable

    def test_terms_sum_to_total(self):
        budget = min_growth_pressure(
            DEFAULT_MATERIAL, {InstalledComponent.ROLLERS_INSTALLED})
        assert sum(value for _, value in budget.terms) == budget.total

    def test_monotone_under_inclusion(self):
        components = list(InstalledComponent)
        subsets = [set()]
        for component in components:
            subsets += [s | {component} for s in subsets]
        totals = {frozenset(s): min_growth_pressure(DEFAULT_MATERIAL, s).total
                  for s in subsets}
        for small, small_total in totals.items():
            for big, big_total in totals.items():
                if small <= big:
                    assert small_total <= big_total


class TestBucklingTensionLimit:
    def test_zero_pressure(self):
        assert buckling_tension_limit(DEFAULT_MATERIAL, 0.0, 0.5) == 0.0

    def test_hand_evaluated_point(self):
        limit = buckling_tension_limit(DEFAULT_MATERIAL, 5000.0, 0.5)
        assert limit == pytest.approx(14.186, abs=1e-3)

    @given(pressure=st.floats(min_value=0.0, max_value=1e5))
    def test_linear_in_pressure(self, pressure):
        one = buckling_tension_limit(DEFAULT_MATERIAL, pressure, 0.5)
        two = buckling_tension_limit(DEFAULT_MATERIAL, 2 * pressure, 0.5)
        assert two == pytest.approx(2 * one, rel=1e-12, abs=1e-12)


def test_loss_model_rejects_negative_pressure():
    with pytest.raises(ValueError):
        mechanics.LossModel().loss_force(-1.0)
