"""Attachment state machines for the five tip mount designs.

Each design is modeled as a set of failure predicates over growth steps,
retraction steps and applied tension. Failure states are absorbing: once a
mount has ejected, fallen off, been engulfed or separated, no further event
changes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    AttachmentState,
    AttachmentStatus,
    PayloadEnvelope,
    Pose,
    RobotState,
    Segment,
    TipMountDesign,
)


@dataclass(frozen=True)
class GrowStep:
    pass


@dataclass(frozen=True)
class RetractStep:
    pass


@dataclass(frozen=True)
class TensionLoad:
    force: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.force) or self.force < 0:
            raise ValueError("TensionLoad.force must be finite and >= 0")


AttachmentEvent = GrowStep | RetractStep | TensionLoad


@dataclass(frozen=True)
class DesignBehavior:
    """A design plus the parameters its failure predicates need.

    initial_body_length: string mount only (the 2x length budget of the
        internal wire). reel_capacity / motor_holding_force: reel mount only.
    magnet_holding_force: magnet rings only. envelope: current design only.
    spooled_base: whether body material is stored on a base spool.
    """

    design: TipMountDesign
    spooled_base: bool = True
    initial_body_length: float = 0.0
    reel_capacity: float = 0.0
    motor_holding_force: float = 0.0
    magnet_holding_force: float = 0.0
    envelope: PayloadEnvelope | None = None

    def __post_init__(self) -> None:
        design = self.design
        if design is TipMountDesign.STRING_MOUNT:
            self._need(self.initial_body_length > 0, "initial_body_length")
        if design is TipMountDesign.OUTER_CAP_WITH_REEL:
            self._need(self.reel_capacity > 0, "reel_capacity")
            self._need(self.motor_holding_force > 0, "motor_holding_force")
        if design is TipMountDesign.MAGNET_RINGS:
            self._need(self.magnet_holding_force > 0, "magnet_holding_force")
        if design is TipMountDesign.CURRENT_DESIGN:
            self._need(self.envelope is not None, "envelope")
        # Parameters for other designs must stay unset.
        if design is not TipMountDesign.STRING_MOUNT:
            self._forbid(self.initial_body_length == 0, "initial_body_length")
        if design is not TipMountDesign.OUTER_CAP_WITH_REEL:
            self._forbid(self.reel_capacity == 0, "reel_capacity")
            self._forbid(self.motor_holding_force == 0, "motor_holding_force")
        if design is not TipMountDesign.MAGNET_RINGS:
            self._forbid(self.magnet_holding_force == 0, "magnet_holding_force")
        if design is not TipMountDesign.CURRENT_DESIGN:
            self._forbid(self.envelope is None, "envelope")

    def _need(self, ok: bool, name: str) -> None:
        if not ok:
            raise ValueError(
                f"DesignBehavior.{name} is required for {self.design.value}")

    def _forbid(self, ok: bool, name: str) -> None:
        if not ok:
            raise ValueError(
                f"DesignBehavior.{name} does not apply to {self.design.value}")

    @property
    def has_retraction_device(self) -> bool:
        """Whether the mount pulls the tail at the tip, enabling retraction
        without buckling the body."""
        return self.design is TipMountDesign.CURRENT_DESIGN


def update_attachment(behavior: DesignBehavior, robot: RobotState,
                      prev: AttachmentState, event: AttachmentEvent,
                      ) -> AttachmentState:
    """Advance the attachment state machine by one event.

    Only an attached mount can be updated; failed states are absorbing and
    must not be fed further events.
    """
    if prev.status is not AttachmentStatus.ATTACHED:
        raise ValueError(
            f"cannot update a failed attachment (status {prev.status.value})")

    design = behavior.design
    tension = prev.tension_applied
    if isinstance(event, TensionLoad):
        tension = event.force

    status = AttachmentStatus.ATTACHED
    if design is TipMountDesign.STRING_MOUNT:
        if isinstance(event, GrowStep):
            # With a spooled base the wall material slides straight off the
            # spool and the wire is squeezed out immediately; unspooled, the
            # internal wire budget runs out at twice the starting length.
            if behavior.spooled_base:
                status = AttachmentStatus.EJECTED
            elif robot.body_length > 2.0 * behavior.initial_body_length:
                status = AttachmentStatus.EJECTED
        elif isinstance(event, RetractStep):
            status = AttachmentStatus.ENGULFED
    elif design is TipMountDesign.OUTER_CAP:
        if isinstance(event, RetractStep):
            status = AttachmentStatus.FELL_OFF
        elif isinstance(event, TensionLoad) and event.force > 0:
            status = AttachmentStatus.SEPARATED
    elif design is TipMountDesign.OUTER_CAP_WITH_REEL:
        if isinstance(event, GrowStep) and robot.body_length > behavior.reel_capacity:
            status = AttachmentStatus.EJECTED
        elif isinstance(event, TensionLoad) and event.force > behavior.motor_holding_force:
            status = AttachmentStatus.SEPARATED
    elif design is TipMountDesign.MAGNET_RINGS:
        if isinstance(event, TensionLoad) and event.force > behavior.magnet_holding_force:
            status = AttachmentStatus.SEPARATED
    elif design is TipMountDesign.CURRENT_DESIGN:
        assert behavior.envelope is not None
        if isinstance(event, TensionLoad) and event.force > behavior.envelope.device_yield:
            status = AttachmentStatus.SEPARATED

    return AttachmentState(status=status, tension_applied=tension)


# Comparison-matrix rows, in presentation order.
MATRIX_ROWS = (
    "avoids_ejection_during_growth",
    "avoids_falling_off_during_retraction",
    "avoids_engulfment_during_retraction",
    "supports_high_tension",
    "retracts_without_buckling",
)

DESIGN_ORDER = (
    TipMountDesign.STRING_MOUNT,
    TipMountDesign.OUTER_CAP,
    TipMountDesign.OUTER_CAP_WITH_REEL,
    TipMountDesign.MAGNET_RINGS,
    TipMountDesign.CURRENT_DESIGN,
)


def _straight_state(length: float) -> RobotState:
    segments = (Segment(length, 0.0),) if length > 0 else ()
    return RobotState(
        segments=segments,
        body_length=length,
        material_released=2.0 * length,
        pressure=0.0,
        tip_pose=Pose(length, 0.0, 0.0),
    )


def _run_battery(behavior: DesignBehavior, events) -> AttachmentStatus:
    """Feed (robot_state, event) pairs until the first failure."""
    state = AttachmentState()
    for robot, event in events:
        state = update_attachment(behavior, robot, state, event)
        if state.failed:
            break
    return state.status


def capability_matrix(behaviors: dict[TipMountDesign, DesignBehavior],
                      reference_tension: float,
                      ) -> dict[str, dict[TipMountDesign, bool]]:
    """Run the canonical scenario battery per design and score each
    comparison row.

    The battery grows past twice the starting length, retracts, and applies
    the reference tension (the current design's net lift). The buckling row
    is structural: only a mount that integrates a tail-pulling retraction
    device can retract without buckling the body.
    """
    grid: dict[str, dict[TipMountDesign, bool]] = {row: {} for row in MATRIX_ROWS}
    for design in DESIGN_ORDER:
        behavior = behaviors[design]
        base_length = behavior.initial_body_length or 1.0

        length = base_length
        grow_events = []
        while length < 2.2 * base_length:
            length += 0.05 * base_length
            grow_events.append((_straight_state(length), GrowStep()))
        grow_result = _run_battery(behavior, grow_events)

        retract_events = []
        length = 1.5 * base_length
        for _ in range(5):
            length -= 0.05 * base_length
            retract_events.append((_straight_state(length), RetractStep()))
        retract_result = _run_battery(behavior, retract_events)

        tension_result = _run_battery(
            behavior,
            [(_straight_state(base_length), TensionLoad(reference_tension))])

        grid["avoids_ejection_during_growth"][design] = (
            grow_result is not AttachmentStatus.EJECTED)
        grid["avoids_falling_off_during_retraction"][design] = (
            retract_result is not AttachmentStatus.FELL_OFF)
        grid["avoids_engulfment_during_retraction"][design] = (
            retract_result is not AttachmentStatus.ENGULFED)
        grid["supports_high_tension"][design] = (
            tension_result is AttachmentStatus.ATTACHED)
        grid["retracts_without_buckling"][design] = behavior.has_retraction_device
    return grid
