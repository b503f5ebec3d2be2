"""Teleop service tests: drive a live session over a real WebSocket, then
replay the recording headlessly and compare logs."""

import asyncio
import json
import pathlib

import jsonschema
import pytest
from websockets.asyncio.client import connect

from vinesim.runlog import run_log_text
from vinesim.runner import run_recorded
from vinesim.scenario import load_bundled_scenario
from vinesim.server import TeleopServer, _parse_recording

FAST = 40.0  # pacing speed-up; sim arithmetic is unaffected

STATE_SCHEMA = json.loads(
    (pathlib.Path(__file__).parent.parent / "docs"
     / "state_message.schema.json").read_text())


async def start_server(record_path=None, stream_hz=None, time_scale=FAST):
    scenario = load_bundled_scenario("demo_pickplace")
    server = TeleopServer(scenario, port=0, stream_hz=stream_hz,
                          record_path=record_path, time_scale=time_scale)
    task = asyncio.create_task(server.run())
    await server.wait_started()
    return server, task


async def stop_server(server, task):
    server.stop()
    await asyncio.wait_for(task, timeout=5.0)


async def recv_json(ws, timeout=5.0):
    return json.loads(await asyncio.wait_for(ws.recv(), timeout))


async def next_state(ws, timeout=5.0):
    while True:
        message = await recv_json(ws, timeout)
        if message["type"] == "state":
            return message


def input_msg(seq, speed=0.0, steer=0.0, grip=False):
    return json.dumps({"type": "input", "seq": seq, "axis_speed": speed,
                       "axis_steer": steer, "gripper_close": grip})


class TestTeleopSession:
    def test_stream_and_growth_cap(self):
        async def scenario():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                hello = await recv_json(ws)
                assert hello["type"] == "scenario"
                assert hello["design"] == "current_design"
                assert hello["burst_kPa"] == pytest.approx(22.0, rel=1e-6)

                first = await next_state(ws)
                assert first["body_length_m"] == 0.0
                assert first["mode"] == "idle"

                await ws.send(input_msg(1, speed=1.0))
                # Watch the stream until two sim-seconds have elapsed.
                state = first
                while state["t"] < 2.0 + first["t"]:
                    state = await next_state(ws)
                grown = state["body_length_m"]
                assert 0.0 < grown <= 0.10 + 0.001
                assert state["mode"] == "growing"
                assert state["envelope"]["limiting_factor"] == "roller_slip"
            await stop_server(server, task)

        asyncio.run(scenario())

    def test_no_input_stream_continues_idle(self):
        async def scenario():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                await recv_json(ws)  # scenario hello
                states = [await next_state(ws) for _ in range(3)]
                assert all(s["mode"] == "idle" for s in states)
                assert states[-1]["t"] > states[0]["t"]
                assert states[-1]["body_length_m"] == 0.0
            await stop_server(server, task)

        asyncio.run(scenario())

    def test_second_connection_rejected(self):
        async def scenario():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as first:
                await recv_json(first)
                async with connect(f"ws://127.0.0.1:{server.port}") as second:
                    message = await recv_json(second)
                    assert message["type"] == "error"
                    assert "busy" in message["message"]
            await stop_server(server, task)

        asyncio.run(scenario())

    def test_malformed_message_keeps_connection(self):
        async def scenario():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                await recv_json(ws)
                await ws.send("this is not json")
                # Skip state messages until the error arrives.
                while True:
                    message = await recv_json(ws)
                    if message["type"] == "error":
                        break
                await ws.send(input_msg(1, speed=1.0))
                state = await next_state(ws)
                while state["body_length_m"] == 0.0:
                    state = await next_state(ws)
                assert state["body_length_m"] > 0.0
            await stop_server(server, task)

        asyncio.run(scenario())

    def test_stale_seq_rejected(self):
        async def scenario():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                await recv_json(ws)
                await ws.send(input_msg(5, speed=0.0))
                await ws.send(input_msg(5, speed=1.0))
                while True:
                    message = await recv_json(ws)
                    if message["type"] == "error":
                        assert "stale" in message["message"]
                        break
            await stop_server(server, task)

        asyncio.run(scenario())

    def test_state_messages_validate_against_published_schema(self):
        async def scenario():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                await recv_json(ws)
                await ws.send(input_msg(1, speed=1.0, steer=0.3, grip=True))
                count = 0
                while count < 40:
                    message = await recv_json(ws)
                    if message["type"] != "state":
                        continue
                    jsonschema.validate(message, STATE_SCHEMA)
                    count += 1
            await stop_server(server, task)

        asyncio.run(scenario())

    def test_load_scenario_message_resets_session(self, tmp_path):
        async def scenario():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                await recv_json(ws)
                await ws.send(input_msg(1, speed=1.0))
                state = await next_state(ws)
                while state["body_length_m"] == 0.0:
                    state = await next_state(ws)
                await ws.send(json.dumps({"type": "load_scenario",
                                          "name": "demo_pickplace"}))
                while True:
                    message = await recv_json(ws)
                    if message["type"] == "scenario":
                        break
                state = await next_state(ws)
                assert state["body_length_m"] == 0.0
                assert server.session.sim.steps >= 0
            await stop_server(server, task)

        asyncio.run(scenario())

    def test_load_unknown_scenario_reports_error(self):
        async def scenario():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                await recv_json(ws)
                await ws.send(json.dumps({"type": "load_scenario",
                                          "name": "missing_scenario"}))
                while True:
                    message = await recv_json(ws)
                    if message["type"] == "error":
                        assert "cannot load" in message["message"]
                        break
            await stop_server(server, task)

        asyncio.run(scenario())

    def test_disconnect_pauses_sim(self):
        async def scenario():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                await recv_json(ws)
                await next_state(ws)
            await asyncio.sleep(0.05)
            steps_after_disconnect = server.session.sim.steps
            await asyncio.sleep(0.1)
            assert server.session.sim.steps == steps_after_disconnect
            await stop_server(server, task)

        asyncio.run(scenario())


class TestRecordReplay:
    def test_replay_reproduces_session_log(self, tmp_path):
        record_path = tmp_path / "inputs.jsonl"

        async def drive():
            server, task = await start_server(record_path=str(record_path))
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                await recv_json(ws)
                await ws.send(input_msg(1, speed=1.0, steer=-0.2))
                state = await next_state(ws)
                while state["t"] < 1.5:
                    state = await next_state(ws)
                await ws.send(input_msg(2, speed=1.0, steer=0.1, grip=True))
                while state["t"] < 2.5:
                    state = await next_state(ws)
                await ws.send(input_msg(3, speed=-1.0, grip=True))
                while state["t"] < 3.5:
                    state = await next_state(ws)
            await stop_server(server, task)
            return server

        server = asyncio.run(drive())
        live_log = run_log_text(server.session.rows)

        recording, total_steps = _parse_recording(record_path.read_text())
        assert total_steps == server.session.sim.steps
        replayed = run_recorded(load_bundled_scenario("demo_pickplace"),
                                recording, total_steps)
        assert run_log_text(replayed.rows) == live_log

    def test_recording_dedupes_unchanged_inputs(self, tmp_path):
        async def drive():
            server, task = await start_server()
            async with connect(f"ws://127.0.0.1:{server.port}") as ws:
                await recv_json(ws)
                for seq in range(1, 6):
                    await ws.send(input_msg(seq, speed=1.0))
                state = await next_state(ws)
                while state["t"] < 1.0:
                    state = await next_state(ws)
            await stop_server(server, task)
            return server

        server = asyncio.run(drive())
        inputs = [json.loads(line) for line in server.record_lines
                  if json.loads(line)["type"] == "input"]
        # Identical repeated inputs collapse to at most two entries
        # (initial idle plus the one change).
        assert len(inputs) <= 2
