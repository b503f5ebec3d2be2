// Run-log replay: parse the service's CSV log and page through it at the
// same cadence the live stream used, so a replayed session renders the same
// frames a live operator saw.

export const LOG_VERSION_LINE = "# vinesim-log/1";
export const LOG_HEADER =
  "t,mode,pressure_kPa,body_length_m,tip_x,tip_y,tip_heading,"
  + "attachment_status,buckled,event";
const DEFAULT_STREAM_HZ = 30;

export class ReplayError extends Error {}

export interface LogStep {
  t: number;
  mode: string;
  pressureKpa: number;
  bodyLengthM: number;
  tipX: number;
  tipY: number;
  tipHeading: number;
  attachmentStatus: string;
  buckled: boolean;
  events: string[];
}

function parseFloatField(field: string, line: number, name: string): number {
  const value = Number(field);
  if (field === "" || Number.isNaN(value)) {
    throw new ReplayError(`row ${line}: bad ${name} value "${field}"`);
  }
  return value;
}

/** Parse a run log; rows sharing a timestamp merge into one step. */
export function parseRunLog(text: string): LogStep[] {
  const lines = text.split(/\r?\n/);
  if (lines[0] !== LOG_VERSION_LINE) {
    throw new ReplayError("row 1: missing or unsupported log version line");
  }
  if (lines[1] !== LOG_HEADER) {
    throw new ReplayError("row 2: bad header");
  }
  const steps: LogStep[] = [];
  for (let i = 2; i < lines.length; i++) {
    const line = lines[i];
    if (!line) {
      continue;
    }
    const fields = line.split(",");
    if (fields.length !== 10) {
      throw new ReplayError(`row ${i + 1}: expected 10 fields, got ${fields.length}`);
    }
    const step: LogStep = {
      t: parseFloatField(fields[0], i + 1, "t"),
      mode: fields[1],
      pressureKpa: parseFloatField(fields[2], i + 1, "pressure_kPa"),
      bodyLengthM: parseFloatField(fields[3], i + 1, "body_length_m"),
      tipX: parseFloatField(fields[4], i + 1, "tip_x"),
      tipY: parseFloatField(fields[5], i + 1, "tip_y"),
      tipHeading: parseFloatField(fields[6], i + 1, "tip_heading"),
      attachmentStatus: fields[7],
      buckled: fields[8] === "true",
      events: fields[9] ? [fields[9]] : [],
    };
    const previous = steps[steps.length - 1];
    if (previous !== undefined && previous.t === step.t) {
      previous.events.push(...step.events);
    } else {
      steps.push(step);
    }
  }
  return steps;
}

/** Stream divisor the service used: every n-th sim step becomes a frame. */
export function streamDivisor(dt: number, streamHz = DEFAULT_STREAM_HZ): number {
  return Math.max(1, Math.round(1 / (streamHz * dt)));
}

/** The frames a live client would have been sent: steps 1..N where
 * step % divisor == 0. */
export function replayFrames(steps: LogStep[], divisor: number): LogStep[] {
  const frames: LogStep[] = [];
  for (let i = 0; i < steps.length; i++) {
    if ((i + 1) % divisor === 0) {
      frames.push(steps[i]);
    }
  }
  return frames;
}

/**
 * Reconstruct the body centerline from logged tip positions: growth extends
 * the trail at the tip, retraction trims it back. Everything drawn comes
 * straight from the log.
 */
export class BodyTrail {
  private points: Array<[number, number]> = [];
  private lengths: number[] = [];

  update(step: LogStep, basePoint: [number, number]): Array<[number, number]> {
    if (this.points.length === 0) {
      this.points.push(basePoint);
      this.lengths.push(0);
    }
    const tip: [number, number] = [step.tipX, step.tipY];
    const targetLength = step.bodyLengthM;
    // Trim while the trail is longer than the logged body.
    while (this.lengths.length > 1
           && this.lengths[this.lengths.length - 1] > targetLength + 1e-9) {
      this.lengths.pop();
      this.points.pop();
    }
    const last = this.points[this.points.length - 1];
    const grown = Math.hypot(tip[0] - last[0], tip[1] - last[1]);
    if (targetLength > this.lengths[this.lengths.length - 1] + 1e-9
        && grown > 1e-9) {
      this.points.push(tip);
      this.lengths.push(this.lengths[this.lengths.length - 1] + grown);
    }
    const polyline = this.points.slice();
    if (polyline.length >= 1) {
      polyline[polyline.length - 1] = tip;
    }
    return polyline;
  }

  reset(): void {
    this.points = [];
    this.lengths = [];
  }
}

/** Steps frames forward on a wall clock; pausable and scrubbable. */
export class ReplayPlayer {
  readonly frames: LogStep[];
  index = 0;
  playing = false;
  private frameIntervalMs: number;
  private accumulatorMs = 0;

  constructor(steps: LogStep[], dt: number, streamHz = DEFAULT_STREAM_HZ) {
    const divisor = streamDivisor(dt, streamHz);
    this.frames = replayFrames(steps, divisor);
    this.frameIntervalMs = 1000 * dt * divisor;
  }

  get frameCount(): number {
    return this.frames.length;
  }

  current(): LogStep | null {
    return this.frames.length === 0
      ? null : this.frames[Math.min(this.index, this.frames.length - 1)];
  }

  tick(elapsedMs: number): void {
    if (!this.playing || this.frames.length === 0) {
      return;
    }
    this.accumulatorMs += elapsedMs;
    while (this.accumulatorMs >= this.frameIntervalMs
           && this.index < this.frames.length - 1) {
      this.accumulatorMs -= this.frameIntervalMs;
      this.index += 1;
    }
    if (this.index >= this.frames.length - 1) {
      this.playing = false;
    }
  }

  seek(index: number): void {
    this.index = Math.max(0, Math.min(index, this.frames.length - 1));
  }
}
