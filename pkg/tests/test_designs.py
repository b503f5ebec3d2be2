import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vinesim.designs import (
    DESIGN_ORDER,
    MATRIX_ROWS,
    DesignBehavior,
    GrowStep,
    RetractStep,
    TensionLoad,
    capability_matrix,
    update_attachment,
)
from vinesim.model import (
    AttachmentState,
    AttachmentStatus,
    Pose,
    RobotState,
    Segment,
    TipMountDesign,
)
from vinesim.presets import (
    current_design_envelope,
    default_behaviors,
    reference_tension,
)

ATTACHED = AttachmentState()


def robot_at(length):
    segments = (Segment(length, 0.0),) if length > 0 else ()
    return RobotState(segments=segments, body_length=length,
                      material_released=2.0 * length, pressure=0.0,
                      tip_pose=Pose(length, 0.0, 0.0))


def string_behavior(spooled, initial=1.0):
    return DesignBehavior(design=TipMountDesign.STRING_MOUNT,
                          spooled_base=spooled, initial_body_length=initial)


class TestBehaviorValidation:
    def test_string_requires_initial_length(self):
        with pytest.raises(ValueError, match="initial_body_length"):
            DesignBehavior(design=TipMountDesign.STRING_MOUNT)

    def test_reel_requires_capacity_and_holding(self):
        with pytest.raises(ValueError, match="reel_capacity"):
            DesignBehavior(design=TipMountDesign.OUTER_CAP_WITH_REEL,
                           motor_holding_force=10.0)

    def test_magnet_requires_holding_force(self):
        with pytest.raises(ValueError, match="magnet_holding_force"):
            DesignBehavior(design=TipMountDesign.MAGNET_RINGS)

    def test_current_requires_envelope(self):
        with pytest.raises(ValueError, match="envelope"):
            DesignBehavior(design=TipMountDesign.CURRENT_DESIGN)

    def test_foreign_params_rejected(self):
        with pytest.raises(ValueError, match="magnet_holding_force"):
            DesignBehavior(design=TipMountDesign.OUTER_CAP,
                           magnet_holding_force=10.0)


class TestStringMount:
    def test_spooled_ejects_on_growth(self):
        state = update_attachment(string_behavior(True), robot_at(1.01),
                                  ATTACHED, GrowStep())
        assert state.status is AttachmentStatus.EJECTED

    def test_unspooled_survives_below_double_length(self):
        # Wire budget oracle: the internal wire spans the initial body; the
        # tail slides past at twice tip speed, so the wire runs out exactly
        # when the grown length reaches twice the starting length.
        behavior = string_behavior(False)
        wire_budget = 2.0 * behavior.initial_body_length
        state = ATTACHED
        length = behavior.initial_body_length
        while length <= 1.9 * behavior.initial_body_length:
            length += 0.01
            assert length <= wire_budget
            state = update_attachment(behavior, robot_at(length), state, GrowStep())
        assert state.status is AttachmentStatus.ATTACHED

    def test_unspooled_ejects_past_double_length(self):
        behavior = string_behavior(False)
        state = update_attachment(behavior, robot_at(2.1), ATTACHED, GrowStep())
        assert state.status is AttachmentStatus.EJECTED

    def test_boundary_exactly_double_length(self):
        behavior = string_behavior(False)
        state = update_attachment(behavior, robot_at(2.0), ATTACHED, GrowStep())
        assert state.status is AttachmentStatus.ATTACHED

    def test_engulfed_on_retraction(self):
        state = update_attachment(string_behavior(True), robot_at(0.9),
                                  ATTACHED, RetractStep())
        assert state.status is AttachmentStatus.ENGULFED

    def test_tension_is_fine(self):
        state = update_attachment(string_behavior(True), robot_at(1.0),
                                  ATTACHED, TensionLoad(500.0))
        assert state.status is AttachmentStatus.ATTACHED


class TestOuterCap:
    behavior = DesignBehavior(design=TipMountDesign.OUTER_CAP)

    def test_falls_off_on_retraction(self):
        state = update_attachment(self.behavior, robot_at(1.0),
                                  ATTACHED, RetractStep())
        assert state.status is AttachmentStatus.FELL_OFF

    def test_survives_growth(self):
        state = update_attachment(self.behavior, robot_at(5.0),
                                  ATTACHED, GrowStep())
        assert state.status is AttachmentStatus.ATTACHED

    def test_any_tension_separates(self):
        state = update_attachment(self.behavior, robot_at(1.0),
                                  ATTACHED, TensionLoad(0.1))
        assert state.status is AttachmentStatus.SEPARATED

    def test_zero_tension_is_fine(self):
        state = update_attachment(self.behavior, robot_at(1.0),
                                  ATTACHED, TensionLoad(0.0))
        assert state.status is AttachmentStatus.ATTACHED


class TestReelMount:
    behavior = DesignBehavior(design=TipMountDesign.OUTER_CAP_WITH_REEL,
                              reel_capacity=3.0, motor_holding_force=9.81)

    def test_survives_growth_within_capacity(self):
        state = update_attachment(self.behavior, robot_at(2.9),
                                  ATTACHED, GrowStep())
        assert state.status is AttachmentStatus.ATTACHED

    def test_ejects_past_reel_capacity(self):
        state = update_attachment(self.behavior, robot_at(3.1),
                                  ATTACHED, GrowStep())
        assert state.status is AttachmentStatus.EJECTED

    def test_survives_retraction(self):
        state = update_attachment(self.behavior, robot_at(2.0),
                                  ATTACHED, RetractStep())
        assert state.status is AttachmentStatus.ATTACHED

    def test_separates_above_motor_holding_force(self):
        state = update_attachment(self.behavior, robot_at(2.0),
                                  ATTACHED, TensionLoad(10.0))
        assert state.status is AttachmentStatus.SEPARATED


class TestMagnetRings:
    behavior = DesignBehavior(design=TipMountDesign.MAGNET_RINGS,
                              magnet_holding_force=14.7)

    def test_survives_growth_and_retraction(self):
        assert update_attachment(self.behavior, robot_at(2.0), ATTACHED,
                                 GrowStep()).status is AttachmentStatus.ATTACHED
        assert update_attachment(self.behavior, robot_at(2.0), ATTACHED,
                                 RetractStep()).status is AttachmentStatus.ATTACHED

    def test_separates_above_magnet_force(self):
        state = update_attachment(self.behavior, robot_at(2.0),
                                  ATTACHED, TensionLoad(20.0))
        assert state.status is AttachmentStatus.SEPARATED

    def test_strong_magnets_hold_reference_tension(self):
        strong = DesignBehavior(design=TipMountDesign.MAGNET_RINGS,
                                magnet_holding_force=2 * reference_tension())
        state = update_attachment(strong, robot_at(2.0), ATTACHED,
                                  TensionLoad(reference_tension()))
        assert state.status is AttachmentStatus.ATTACHED


class TestCurrentDesign:
    behavior = DesignBehavior(design=TipMountDesign.CURRENT_DESIGN,
                              envelope=current_design_envelope())

    def test_survives_grow_retract_cycles(self):
        state = ATTACHED
        for length in (1.0, 1.2, 1.4, 1.2, 1.0, 0.5):
            for event in (GrowStep(), RetractStep()):
                state = update_attachment(self.behavior, robot_at(length),
                                          state, event)
        assert state.status is AttachmentStatus.ATTACHED

    def test_tension_below_device_yield_holds(self):
        yield_force = self.behavior.envelope.device_yield
        state = update_attachment(self.behavior, robot_at(1.0), ATTACHED,
                                  TensionLoad(yield_force * 0.99))
        assert state.status is AttachmentStatus.ATTACHED
        assert state.tension_applied == pytest.approx(yield_force * 0.99)

    def test_tension_above_device_yield_separates(self):
        yield_force = self.behavior.envelope.device_yield
        state = update_attachment(self.behavior, robot_at(1.0), ATTACHED,
                                  TensionLoad(yield_force * 1.01))
        assert state.status is AttachmentStatus.SEPARATED


class TestAbsorbingFailures:
    def test_update_on_failed_state_rejected(self):
        failed = AttachmentState(status=AttachmentStatus.FELL_OFF)
        with pytest.raises(ValueError, match="failed"):
            update_attachment(DesignBehavior(design=TipMountDesign.OUTER_CAP),
                              robot_at(1.0), failed, GrowStep())

    @settings(max_examples=50)
    @given(st.lists(st.sampled_from(["grow", "retract", "tension"]),
                    min_size=1, max_size=20),
           st.sampled_from(list(TipMountDesign)))
    def test_no_events_after_failure(self, kinds, design):
        behaviors = default_behaviors()
        behavior = behaviors[design]
        state = ATTACHED
        length = 1.0
        failed_at = None
        for i, kind in enumerate(kinds):
            if kind == "grow":
                length += 0.2
                event = GrowStep()
            elif kind == "retract":
                length = max(0.0, length - 0.2)
                event = RetractStep()
            else:
                event = TensionLoad(30.0)
            if state.failed:
                failed_at = failed_at if failed_at is not None else i
                with pytest.raises(ValueError):
                    update_attachment(behavior, robot_at(length), state, event)
                break
            state = update_attachment(behavior, robot_at(length), state, event)


# The published comparison of the five designs: one column per design in
# DESIGN_ORDER, one row per MATRIX_ROWS entry.
EXPECTED_MATRIX = {
    "avoids_ejection_during_growth": (False, True, True, True, True),
    "avoids_falling_off_during_retraction": (True, False, True, True, True),
    "avoids_engulfment_during_retraction": (False, True, True, True, True),
    "supports_high_tension": (True, False, False, False, True),
    "retracts_without_buckling": (False, False, False, False, True),
}


class TestCapabilityMatrix:
    def test_matches_published_grid(self):
        grid = capability_matrix(default_behaviors(), reference_tension())
        for row in MATRIX_ROWS:
            got = tuple(grid[row][design] for design in DESIGN_ORDER)
            assert got == EXPECTED_MATRIX[row], row

    def test_current_design_column_all_yes(self):
        grid = capability_matrix(default_behaviors(), reference_tension())
        assert all(grid[row][TipMountDesign.CURRENT_DESIGN]
                   for row in MATRIX_ROWS)

    def test_strong_magnets_flip_tension_row(self):
        behaviors = default_behaviors()
        behaviors[TipMountDesign.MAGNET_RINGS] = DesignBehavior(
            design=TipMountDesign.MAGNET_RINGS,
            magnet_holding_force=2 * reference_tension())
        grid = capability_matrix(behaviors, reference_tension())
        assert grid["supports_high_tension"][TipMountDesign.MAGNET_RINGS]
        # Other rows keep their published values.
        assert not grid["retracts_without_buckling"][TipMountDesign.MAGNET_RINGS]
