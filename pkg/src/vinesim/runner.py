"""Session stepping shared by the headless runner and the teleop service.

A Session owns a Simulator plus controller parameters, applies one operator
input per fixed timestep, and appends run-log rows. Scripted runs, recorded
input replays, and the live service all step through the same code path, so
the same inputs always yield byte-identical logs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .controller import OperatorInput, compute_command
from .engine import (
    ATTACHMENT_FAILED,
    BUCKLED,
    OBJECT_DELIVERED,
    Event,
    Simulator,
)
from .runlog import LogRow
from .scenario import Scenario
from .units import pa_to_kpa

IDLE_INPUT = OperatorInput()

OUTCOME_DELIVERED = "delivered"
OUTCOME_SCRIPT_END = "script_end"
OUTCOME_BUCKLED = "buckled"
OUTCOME_ATTACHMENT_FAILED = "attachment_failed"


@dataclass(frozen=True)
class RunResult:
    outcome: str
    rows: tuple[LogRow, ...]
    steps: int

    @property
    def succeeded(self) -> bool:
        return self.outcome == OUTCOME_DELIVERED

    @property
    def failed(self) -> bool:
        return self.outcome in (OUTCOME_BUCKLED, OUTCOME_ATTACHMENT_FAILED)


class Session:
    """One running scenario: step with operator inputs, collect log rows."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.sim = Simulator(
            material=scenario.material,
            mount=scenario.tip_mount,
            behavior=scenario.behavior,
            environment=scenario.environment,
            config=scenario.sim,
            initial_body_length=scenario.initial_body_length,
            success=scenario.success,
        )
        self.rows: list[LogRow] = []
        self._terminal: str | None = None

    @property
    def terminal_outcome(self) -> str | None:
        """Set once the run has delivered, buckled or lost its mount."""
        return self._terminal

    def apply_step(self, operator: OperatorInput) -> list[Event]:
        command = compute_command(operator, self.sim.state, self.scenario.controller)
        events = self.sim.step(command)
        state = self.sim.state
        base = LogRow(
            t=self.sim.time,
            mode=state.mode.value,
            pressure_kpa=pa_to_kpa(state.pressure),
            body_length_m=state.body_length,
            tip_x=state.tip_pose.x,
            tip_y=state.tip_pose.y,
            tip_heading=state.tip_pose.heading,
            attachment_status=self.sim.attachment.status.value,
            buckled=state.buckled,
        )
        if events:
            for event in events:
                self.rows.append(replace(base, event=str(event)))
        else:
            self.rows.append(base)
        for event in events:
            if event.kind == OBJECT_DELIVERED:
                self._terminal = OUTCOME_DELIVERED
            elif event.kind == BUCKLED:
                self._terminal = OUTCOME_BUCKLED
            elif event.kind == ATTACHMENT_FAILED:
                self._terminal = OUTCOME_ATTACHMENT_FAILED
        return events


def script_input_at(script: tuple[tuple[float, OperatorInput], ...],
                    t: float) -> OperatorInput:
    """Zero-order hold over the keyframes: latest keyframe at or before t."""
    current = IDLE_INPUT
    for frame_t, operator in script:
        if frame_t <= t:
            current = operator
        else:
            break
    return current


def run_script(scenario: Scenario) -> RunResult:
    """Execute the scenario's keyframe script to completion or failure.

    The last keyframe's time marks the end of the script. The run stops
    early once the success predicate is met or a failure event fires.
    """
    session = Session(scenario)
    if not scenario.script:
        return RunResult(outcome=OUTCOME_SCRIPT_END, rows=(), steps=0)
    end_time = scenario.script[-1][0]
    dt = scenario.sim.dt
    step = 0
    while step * dt < end_time:
        operator = script_input_at(scenario.script, step * dt)
        session.apply_step(operator)
        step += 1
        if session.terminal_outcome is not None:
            break
    outcome = session.terminal_outcome or OUTCOME_SCRIPT_END
    return RunResult(outcome=outcome, rows=tuple(session.rows), steps=step)


def run_recorded(scenario: Scenario,
                 recording: list[tuple[int, OperatorInput]],
                 total_steps: int) -> RunResult:
    """Replay a recorded teleop input sequence at exact step indices."""
    session = Session(scenario)
    inputs = dict(recording)
    current = IDLE_INPUT
    for step in range(total_steps):
        current = inputs.get(step, current)
        session.apply_step(current)
    outcome = session.terminal_outcome or OUTCOME_SCRIPT_END
    return RunResult(outcome=outcome, rows=tuple(session.rows), steps=total_steps)
