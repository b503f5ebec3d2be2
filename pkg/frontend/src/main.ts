// Browser wiring: WebSocket session, input pumping, canvas rendering and
// log replay. Logic lives in the imported modules; this file only glues it
// to the DOM.

import { Camera } from "./camera.js";
import { GamepadSample, InputTracker } from "./input.js";
import { parseServerMessage, ScenarioMessage, StateMessage } from "./protocol.js";
import { BodyTrail, parseRunLog, ReplayPlayer } from "./replay.js";
import { eventToast, render, Toast, ViewState } from "./render.js";

const TOAST_MS = 2600;

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusEl = document.getElementById("status")!;
const serverInput = document.getElementById("server") as HTMLInputElement;
const connectButton = document.getElementById("connect") as HTMLButtonElement;
const replayInput = document.getElementById("replay-file") as HTMLInputElement;
const replayControls = document.getElementById("replay-controls")!;
const replayToggle = document.getElementById("replay-toggle") as HTMLButtonElement;
const replaySlider = document.getElementById("replay-slider") as HTMLInputElement;
const replayLabel = document.getElementById("replay-label")!;

const view: ViewState = {
  connection: "disconnected",
  scenario: null,
  state: null,
  toasts: [],
  camera: new Camera(canvas.width, canvas.height),
};

let socket: WebSocket | null = null;
let player: ReplayPlayer | null = null;
const trail = new BodyTrail();
let replayScenario: ScenarioMessage | null = null;
let lastFrameMs = performance.now();

function readGamepad(): GamepadSample | null {
  const pads = navigator.getGamepads ? navigator.getGamepads() : [];
  for (const pad of pads) {
    if (pad && pad.connected) {
      return {
        axes: Array.from(pad.axes),
        buttons: pad.buttons.map((b) => b.pressed),
      };
    }
  }
  return null;
}

const tracker = new InputTracker({ gamepad: readGamepad });

function pushToasts(events: string[], nowMs: number): void {
  for (const event of events) {
    const text = eventToast(event);
    if (text !== null) {
      view.toasts.push({ text, untilMs: nowMs + TOAST_MS } as Toast);
    }
  }
  view.toasts = view.toasts.filter((toast) => toast.untilMs > nowMs);
}

function setStatus(text: string): void {
  statusEl.textContent = text;
}

function connect(): void {
  disconnectReplay();
  socket?.close();
  const url = serverInput.value || "ws://127.0.0.1:8765";
  view.connection = "connecting";
  setStatus(`connecting to ${url}`);
  socket = new WebSocket(url);
  socket.onopen = () => {
    view.connection = "connected";
    setStatus(`connected to ${url}`);
  };
  socket.onclose = () => {
    view.connection = "disconnected";
    setStatus("disconnected (frame frozen)");
  };
  socket.onerror = () => setStatus("connection error");
  socket.onmessage = (message: MessageEvent) => {
    let parsed;
    try {
      parsed = parseServerMessage(String(message.data));
    } catch (error) {
      setStatus(`bad message: ${error}`);
      return;
    }
    if (parsed.type === "scenario") {
      view.scenario = parsed;
      view.state = null;
      view.camera.fitBounds(...parsed.bounds_m);
    } else if (parsed.type === "state") {
      view.state = parsed as StateMessage;
      pushToasts(parsed.events, performance.now());
    } else {
      setStatus(`server: ${parsed.message}`);
    }
  };
}

function disconnectReplay(): void {
  player = null;
  replayScenario = null;
  view.replayPolyline = null;
  trail.reset();
  replayControls.classList.add("hidden");
}

function loadReplay(text: string, name: string): void {
  socket?.close();
  socket = null;
  const steps = parseRunLog(text);
  if (steps.length === 0) {
    setStatus("empty log");
    return;
  }
  const dt = steps.length >= 2 ? steps[1].t - steps[0].t : 0.02;
  player = new ReplayPlayer(steps, dt);
  player.playing = true;
  trail.reset();
  // Replay knows nothing about the scenario file; render on a neutral stage
  // sized to the trajectory.
  const xs = steps.map((s) => s.tipX);
  const ys = steps.map((s) => s.tipY);
  const margin = 0.3;
  replayScenario = {
    type: "scenario",
    name,
    bounds_m: [Math.min(...xs, 0) - margin, Math.min(...ys, 0) - margin,
               Math.max(...xs, 1) + margin, Math.max(...ys, 0.5) + margin],
    obstacles_m: [],
    base_pose: { x_m: 0, y_m: 0, heading_rad: 0 },
    tube_radius_m: 0.0425,
    design: "current_design",
    burst_kPa: 22,
    min_growth_kPa: 6.8,
    dt_s: dt,
  };
  view.scenario = replayScenario;
  view.connection = "replay";
  view.camera.fitBounds(...replayScenario.bounds_m);
  replayControls.classList.remove("hidden");
  replaySlider.max = String(player.frameCount - 1);
  setStatus(`replaying ${name}: ${player.frameCount} frames`);
}

function replayFrameToState(frame: ReturnType<ReplayPlayer["current"]>): void {
  if (frame === null || replayScenario === null) {
    return;
  }
  const base: [number, number] = [replayScenario.base_pose.x_m,
                                  replayScenario.base_pose.y_m];
  view.replayPolyline = trail.update(frame, base);
  view.state = {
    type: "state",
    t: frame.t,
    tip_polyline: [[frame.tipX, frame.tipY]],
    body_length_m: frame.bodyLengthM,
    pressure_kPa: frame.pressureKpa,
    mode: frame.mode,
    attachment_status: frame.attachmentStatus,
    buckled: frame.buckled,
    envelope: null,
    objects: [],
    events: frame.events,
  };
  pushToasts(frame.events, performance.now());
}

function resize(): void {
  canvas.width = canvas.clientWidth;
  canvas.height = canvas.clientHeight;
  view.camera.resize(canvas.width, canvas.height);
  if (view.scenario !== null) {
    view.camera.fitBounds(...view.scenario.bounds_m);
  }
}

function frame(nowMs: number): void {
  const elapsed = nowMs - lastFrameMs;
  lastFrameMs = nowMs;

  if (socket !== null && socket.readyState === WebSocket.OPEN) {
    const message = tracker.nextMessage(nowMs);
    if (message !== null) {
      socket.send(JSON.stringify(message));
    }
  }
  if (player !== null) {
    const before = player.index;
    player.tick(elapsed);
    if (player.index !== before || view.state === null) {
      replayFrameToState(player.current());
      replaySlider.value = String(player.index);
      replayLabel.textContent = `${player.index + 1}/${player.frameCount}`;
    }
  }
  render(ctx, view, canvas.width, canvas.height, nowMs);
  requestAnimationFrame(frame);
}

window.addEventListener("keydown", (event) => {
  if (event.repeat) {
    return;
  }
  tracker.keyDown(event.code);
  if (["ArrowUp", "ArrowDown", "ArrowLeft", "ArrowRight", "Space"]
      .includes(event.code)) {
    event.preventDefault();
  }
});
window.addEventListener("keyup", (event) => tracker.keyUp(event.code));
window.addEventListener("blur", () => tracker.releaseAll());
window.addEventListener("resize", resize);

canvas.addEventListener("wheel", (event) => {
  event.preventDefault();
  view.camera.zoomAt(event.offsetX, event.offsetY,
                     event.deltaY < 0 ? 1.15 : 1 / 1.15);
});
let dragging = false;
canvas.addEventListener("mousedown", () => { dragging = true; });
window.addEventListener("mouseup", () => { dragging = false; });
canvas.addEventListener("mousemove", (event) => {
  if (dragging) {
    view.camera.panPixels(event.movementX, event.movementY);
  }
});

connectButton.addEventListener("click", connect);
replayInput.addEventListener("change", async () => {
  const file = replayInput.files?.[0];
  if (file) {
    loadReplay(await file.text(), file.name);
  }
});
replayToggle.addEventListener("click", () => {
  if (player !== null) {
    player.playing = !player.playing;
  }
});
replaySlider.addEventListener("input", () => {
  if (player !== null) {
    player.playing = false;
    trail.reset();
    // Rebuild the trail up to the scrub point so the body shape is right.
    player.seek(0);
    const target = Number(replaySlider.value);
    for (let i = 0; i <= target; i++) {
      player.seek(i);
      replayFrameToState(player.current());
    }
  }
});

const params = new URLSearchParams(window.location.search);
serverInput.value = params.get("server")
  ?? `ws://${window.location.hostname || "127.0.0.1"}:8765`;
resize();
if (params.has("autoconnect")) {
  connect();
}
requestAnimationFrame(frame);
