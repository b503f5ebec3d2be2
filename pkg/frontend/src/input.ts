// Operator input: keyboard or gamepad mapped to the two axes and the
// gripper toggle. Messages leave at no more than the configured rate with a
// strictly increasing sequence number; on device loss the axes decay to
// zero so the robot idles rather than running away.

import { InputMessage, makeInputMessage } from "./protocol.js";

export interface GamepadSample {
  axes: number[];
  buttons: boolean[];
}

export type GamepadReader = () => GamepadSample | null;

export interface AxesSample {
  axisSpeed: number;
  axisSteer: number;
  gripperClose: boolean;
}

const SPEED_KEYS_FORWARD = new Set(["ArrowUp", "KeyW"]);
const SPEED_KEYS_BACK = new Set(["ArrowDown", "KeyS"]);
const STEER_KEYS_LEFT = new Set(["ArrowLeft", "KeyA"]);
const STEER_KEYS_RIGHT = new Set(["ArrowRight", "KeyD"]);
const GRIPPER_KEYS = new Set(["Space"]);

export class InputTracker {
  private held = new Set<string>();
  private gripper = false;
  private gamepadButtonWasDown = false;
  private lastAxes: AxesSample = { axisSpeed: 0, axisSteer: 0, gripperClose: false };
  private lastSampleMs: number | null = null;
  private lastSentMs: number | null = null;
  private seq = 0;
  private readGamepad: GamepadReader;
  private minSendIntervalMs: number;
  private decayPerSecond: number;

  constructor(options: {
    gamepad?: GamepadReader;
    maxRateHz?: number;
    decayPerSecond?: number;
  } = {}) {
    this.readGamepad = options.gamepad ?? (() => null);
    this.minSendIntervalMs = 1000 / (options.maxRateHz ?? 30);
    this.decayPerSecond = options.decayPerSecond ?? 8;
  }

  keyDown(code: string): void {
    if (GRIPPER_KEYS.has(code)) {
      if (!this.held.has(code)) {
        this.gripper = !this.gripper;
      }
    }
    this.held.add(code);
  }

  keyUp(code: string): void {
    this.held.delete(code);
  }

  /** Drop all pressed keys (window blur): axes start decaying. */
  releaseAll(): void {
    this.held.clear();
  }

  private keyboardAxes(): { speed: number; steer: number } | null {
    let speed = 0;
    let steer = 0;
    let any = false;
    for (const code of this.held) {
      if (SPEED_KEYS_FORWARD.has(code)) { speed += 1; any = true; }
      if (SPEED_KEYS_BACK.has(code)) { speed -= 1; any = true; }
      if (STEER_KEYS_LEFT.has(code)) { steer += 1; any = true; }
      if (STEER_KEYS_RIGHT.has(code)) { steer -= 1; any = true; }
    }
    return any ? { speed, steer } : null;
  }

  /** Current axes, applying decay when no device is talking. */
  sample(nowMs: number): AxesSample {
    const elapsed = this.lastSampleMs === null
      ? 0 : Math.max(0, nowMs - this.lastSampleMs) / 1000;
    this.lastSampleMs = nowMs;

    const keys = this.keyboardAxes();
    const pad = this.readGamepad();
    let speed: number;
    let steer: number;
    if (keys !== null) {
      speed = keys.speed;
      steer = keys.steer;
    } else if (pad !== null) {
      // Stick up is negative in gamepad convention; stick right steers right
      // (negative curvature).
      speed = -(pad.axes[1] ?? 0);
      steer = -(pad.axes[0] ?? 0);
      const buttonDown = pad.buttons[0] ?? false;
      if (buttonDown && !this.gamepadButtonWasDown) {
        this.gripper = !this.gripper;
      }
      this.gamepadButtonWasDown = buttonDown;
    } else {
      // Fail safe: no device, ease the previous command back to zero.
      const decay = this.decayPerSecond * elapsed;
      speed = moveToward(this.lastAxes.axisSpeed, 0, decay);
      steer = moveToward(this.lastAxes.axisSteer, 0, decay);
    }
    this.lastAxes = {
      axisSpeed: clamp(speed),
      axisSteer: clamp(steer),
      gripperClose: this.gripper,
    };
    return this.lastAxes;
  }

  /** Next message to send, or null while the rate limiter is holding. */
  nextMessage(nowMs: number): InputMessage | null {
    if (this.lastSentMs !== null
        && nowMs - this.lastSentMs < this.minSendIntervalMs) {
      return null;
    }
    const axes = this.sample(nowMs);
    this.lastSentMs = nowMs;
    this.seq += 1;
    return makeInputMessage(this.seq, axes.axisSpeed, axes.axisSteer,
                            axes.gripperClose);
  }
}

function clamp(value: number): number {
  if (!Number.isFinite(value)) {
    return 0;
  }
  return Math.max(-1, Math.min(1, value));
}

function moveToward(value: number, target: number, step: number): number {
  if (value > target) {
    return Math.max(target, value - step);
  }
  return Math.min(target, value + step);
}
