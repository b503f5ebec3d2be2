"""Live teleoperation service: one operator, newline-framed JSON messages
over a WebSocket.

The sim advances at wall-clock rate while an operator is connected and
pauses on disconnect; sim time never skips. Inputs are latest-wins and are
recorded against the sim step at which they took effect, so a recorded
session replays headlessly to a byte-identical run log.

Message shapes are documented in docs/formats.md.
"""

from __future__ import annotations

import asyncio
import json
import os
from typing import Any

from websockets.asyncio.server import serve

from .controller import OperatorInput
from .mechanics import payload_envelope
from .model import TipMountDesign
from .runner import IDLE_INPUT, Session
from .scenario import Scenario, load_bundled_scenario, load_scenario_file
from .units import pa_to_kpa
from . import mechanics

DEFAULT_STREAM_HZ = 30.0
STREAM_HZ_ENV = "VINESIM_STREAM_HZ"
TIME_SCALE_ENV = "VINESIM_TIME_SCALE"


class RecordingError(ValueError):
    pass


def _parse_recording(text: str) -> tuple[list[tuple[int, OperatorInput]], int]:
    """Read a recorded input stream: [(step, input), ...] plus step count."""
    inputs: list[tuple[int, OperatorInput]] = []
    total_steps = 0
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            entry = json.loads(line)
        except json.JSONDecodeError as error:
            raise RecordingError(f"line {line_no}: {error.msg}") from error
        kind = entry.get("type")
        if kind == "input":
            inputs.append((int(entry["step"]), OperatorInput(
                axis_speed=float(entry["axis_speed"]),
                axis_steer=float(entry["axis_steer"]),
                gripper_close=bool(entry["gripper_close"]),
            )))
            total_steps = max(total_steps, int(entry["step"]) + 1)
        elif kind == "end":
            total_steps = int(entry["total_steps"])
        elif kind == "meta":
            continue
        else:
            raise RecordingError(f"line {line_no}: unknown record type {kind!r}")
    return inputs, total_steps


def read_recording(path: str) -> tuple[list[tuple[int, OperatorInput]], int]:
    with open(path, "r", encoding="utf-8") as handle:
        return _parse_recording(handle.read())


class TeleopServer:
    """Single-operator teleop session around one Session."""

    def __init__(self, scenario: Scenario, host: str = "127.0.0.1",
                 port: int = 8765, stream_hz: float | None = None,
                 record_path: str | None = None,
                 time_scale: float | None = None):
        if stream_hz is None:
            stream_hz = float(os.environ.get(STREAM_HZ_ENV, DEFAULT_STREAM_HZ))
        if time_scale is None:
            time_scale = float(os.environ.get(TIME_SCALE_ENV, "1.0"))
        if stream_hz <= 0 or time_scale <= 0:
            raise ValueError("stream_hz and time_scale must be > 0")
        self.host = host
        self.port = port
        self.session = Session(scenario)
        self.time_scale = time_scale
        self._step_period = scenario.sim.dt / time_scale
        self._divisor = max(1, round(1.0 / (stream_hz * scenario.sim.dt)))
        self._record_path = record_path
        self._record_lines: list[str] = []
        self._recorded_input: OperatorInput | None = None
        self._current_input: OperatorInput = IDLE_INPUT
        self._client = None
        self._outbox: asyncio.Queue[str] | None = None
        self._pending_events: list[str] = []
        self._last_seq = -1
        self._stepping = True
        self._pacing_reset = False
        self._stop = asyncio.Event()
        self._started = asyncio.Event()
        self._record_meta()

    # -- lifecycle -----------------------------------------------------------

    async def run(self) -> None:
        """Serve until stop() is called; then flush the recording."""
        async with serve(self._handler, self.host, self.port) as server:
            if self.port == 0:
                self.port = next(iter(server.sockets)).getsockname()[1]
            self._started.set()
            stepper = asyncio.create_task(self._step_loop())
            try:
                await self._stop.wait()
            finally:
                stepper.cancel()
                try:
                    await stepper
                except asyncio.CancelledError:
                    pass
        self._flush_recording()

    async def wait_started(self) -> None:
        await self._started.wait()

    def stop(self) -> None:
        self._stop.set()

    # -- recording -----------------------------------------------------------

    def _record_meta(self) -> None:
        self._record_lines.append(json.dumps({
            "type": "meta",
            "scenario": self.session.scenario.name,
            "dt_s": self.session.scenario.sim.dt,
        }))

    def _record_applied_input(self, step: int, operator: OperatorInput) -> None:
        if operator == self._recorded_input:
            return
        self._recorded_input = operator
        self._record_lines.append(json.dumps({
            "type": "input",
            "step": step,
            "axis_speed": operator.axis_speed,
            "axis_steer": operator.axis_steer,
            "gripper_close": operator.gripper_close,
        }))

    def _flush_recording(self) -> None:
        self._record_lines.append(json.dumps({
            "type": "end",
            "total_steps": self.session.sim.steps,
        }))
        if self._record_path is not None:
            with open(self._record_path, "w", encoding="utf-8") as handle:
                handle.write("\n".join(self._record_lines) + "\n")

    @property
    def record_lines(self) -> list[str]:
        return list(self._record_lines)

    # -- stepping ------------------------------------------------------------

    async def _step_loop(self) -> None:
        loop = asyncio.get_running_loop()
        anchor: float | None = None
        anchored_steps = 0
        while not self._stop.is_set():
            if self._pacing_reset:
                anchor = None
                self._pacing_reset = False
            if self._client is None or not self._stepping:
                anchor = None
                await asyncio.sleep(self._step_period)
                continue
            now = loop.time()
            if anchor is None:
                anchor = now
                anchored_steps = self.session.sim.steps
            # Drop-free pacing: catch up on every step the wall clock owes.
            target = anchored_steps + int((now - anchor) / self._step_period)
            while (self.session.sim.steps < target and self._stepping
                   and self._client is not None):
                self._step_once()
            await asyncio.sleep(self._step_period / 2)

    def _step_once(self) -> None:
        step = self.session.sim.steps
        operator = self._current_input
        self._record_applied_input(step, operator)
        events = self.session.apply_step(operator)
        self._pending_events.extend(str(event) for event in events)
        if self.session.sim.steps % self._divisor == 0:
            self._queue_state()

    # -- messages ------------------------------------------------------------

    def _envelope_doc(self) -> dict[str, Any] | None:
        scenario = self.session.scenario
        if scenario.tip_mount.design is not TipMountDesign.CURRENT_DESIGN:
            return None
        envelope = payload_envelope(scenario.material, scenario.tip_mount,
                                    self.session.sim.state.pressure,
                                    scenario.losses)
        return {
            "roller_slip_net_n": envelope.roller_slip_net,
            "motor_torque_net_n": envelope.motor_torque_net,
            "device_yield_n": envelope.device_yield,
            "material_yield_n": envelope.material_yield,
            "governing_limit_n": envelope.governing_limit,
            "limiting_factor": envelope.limiting_factor.value,
        }

    def scenario_message(self) -> str:
        scenario = self.session.scenario
        env = scenario.environment
        budget_terms = frozenset(
            component for component in mechanics.InstalledComponent
            if scenario.tip_mount.design is TipMountDesign.CURRENT_DESIGN)
        budget = mechanics.min_growth_pressure(scenario.material, budget_terms)
        doc = {
            "type": "scenario",
            "name": scenario.name,
            "bounds_m": [env.bounds.x_min, env.bounds.y_min,
                         env.bounds.x_max, env.bounds.y_max],
            "obstacles_m": [[list(v) for v in polygon]
                            for polygon in env.obstacles],
            "base_pose": {"x_m": env.base_pose.x, "y_m": env.base_pose.y,
                          "heading_rad": env.base_pose.heading},
            "tube_radius_m": scenario.material.radius,
            "design": scenario.tip_mount.design.value,
            "burst_kPa": pa_to_kpa(mechanics.burst_pressure(scenario.material)),
            "min_growth_kPa": pa_to_kpa(budget.total),
            "dt_s": scenario.sim.dt,
        }
        if scenario.success is not None:
            doc["target_m"] = list(scenario.success.target)
            doc["target_tolerance_m"] = scenario.success.tolerance
        return json.dumps(doc)

    def state_message(self) -> str:
        sim = self.session.sim
        state = sim.state
        events, self._pending_events = self._pending_events, []
        doc = {
            "type": "state",
            "t": sim.time,
            "tip_polyline": [[x, y] for x, y in sim.polyline()],
            "body_length_m": state.body_length,
            "pressure_kPa": pa_to_kpa(state.pressure),
            "mode": state.mode.value,
            "attachment_status": sim.attachment.status.value,
            "buckled": state.buckled,
            "envelope": self._envelope_doc(),
            "objects": [
                {"id": obj.id, "x": obj.position[0], "y": obj.position[1],
                 "graspable": obj.graspable, "held": obj.held_by_tip}
                for obj in sim.environment.objects
            ],
            "events": events,
        }
        return json.dumps(doc)

    def _queue_state(self) -> None:
        if self._outbox is not None:
            self._outbox.put_nowait(self.state_message())

    @staticmethod
    def _error_message(message: str) -> str:
        return json.dumps({"type": "error", "message": message})

    # -- connection handling ---------------------------------------------------

    async def _handler(self, websocket) -> None:
        if self._client is not None:
            await websocket.send(self._error_message(
                "session busy: an operator is already connected"))
            await websocket.close()
            return
        self._client = websocket
        self._outbox = asyncio.Queue()
        self._last_seq = -1
        sender = asyncio.create_task(self._sender(websocket))
        try:
            await websocket.send(self.scenario_message())
            async for raw in websocket:
                response = self._handle_message(raw)
                if response is not None:
                    await websocket.send(response)
        except Exception:
            pass
        finally:
            sender.cancel()
            self._client = None
            self._outbox = None
            # Fail safe: a vanished operator must not leave the robot moving.
            self._current_input = IDLE_INPUT

    async def _sender(self, websocket) -> None:
        outbox = self._outbox
        assert outbox is not None
        while True:
            message = await outbox.get()
            try:
                await websocket.send(message)
            finally:
                outbox.task_done()

    async def _graceful_stop(self) -> None:
        """Stop stepping, drain queued state messages, then shut down."""
        self._stepping = False
        if self._outbox is not None:
            await self._outbox.join()
        self.stop()

    def _handle_message(self, raw: str | bytes) -> str | None:
        try:
            entry = json.loads(raw)
        except json.JSONDecodeError:
            return self._error_message("malformed JSON")
        if not isinstance(entry, dict):
            return self._error_message("expected a JSON object")
        kind = entry.get("type")
        if kind == "input":
            return self._handle_input(entry)
        if kind == "load_scenario":
            return self._handle_load(entry)
        if kind == "shutdown":
            asyncio.get_running_loop().create_task(self._graceful_stop())
            return None
        return self._error_message(f"unknown message type {kind!r}")

    def _handle_input(self, entry: dict) -> str | None:
        try:
            seq = int(entry["seq"])
            operator = OperatorInput(
                axis_speed=float(entry["axis_speed"]),
                axis_steer=float(entry["axis_steer"]),
                gripper_close=bool(entry.get("gripper_close", False)),
            )
        except (KeyError, TypeError, ValueError):
            return self._error_message("bad input message fields")
        if seq <= self._last_seq:
            return self._error_message(
                f"stale input: seq {seq} <= {self._last_seq}")
        self._last_seq = seq
        self._current_input = operator
        return None

    def _handle_load(self, entry: dict) -> str | None:
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            return self._error_message("load_scenario requires a name")
        try:
            if os.path.exists(name):
                scenario = load_scenario_file(name)
            else:
                scenario = load_bundled_scenario(name)
        except (OSError, ValueError) as error:
            return self._error_message(f"cannot load scenario: {error}")
        self.session = Session(scenario)
        self._step_period = scenario.sim.dt / self.time_scale
        self._current_input = IDLE_INPUT
        self._pending_events = []
        self._record_lines = []
        self._recorded_input = None
        self._pacing_reset = True
        self._record_meta()
        return self.scenario_message()
