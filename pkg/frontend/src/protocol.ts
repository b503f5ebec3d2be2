// Wire messages exchanged with the teleop service. One JSON document per
// WebSocket message; shapes mirror the service's docs/formats.md.

export interface EnvelopeSummary {
  roller_slip_net_n: number;
  motor_torque_net_n: number;
  device_yield_n: number;
  material_yield_n: number;
  governing_limit_n: number;
  limiting_factor: string;
}

export interface ObjectState {
  id: string;
  x: number;
  y: number;
  graspable: boolean;
  held: boolean;
}

export interface StateMessage {
  type: "state";
  t: number;
  tip_polyline: Array<[number, number]>;
  body_length_m: number;
  pressure_kPa: number;
  mode: string;
  attachment_status: string;
  buckled: boolean;
  envelope: EnvelopeSummary | null;
  objects: ObjectState[];
  events: string[];
}

export interface ScenarioMessage {
  type: "scenario";
  name: string;
  bounds_m: [number, number, number, number];
  obstacles_m: Array<Array<[number, number]>>;
  base_pose: { x_m: number; y_m: number; heading_rad: number };
  tube_radius_m: number;
  design: string;
  burst_kPa: number;
  min_growth_kPa: number;
  dt_s: number;
  target_m?: [number, number];
  target_tolerance_m?: number;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = StateMessage | ScenarioMessage | ErrorMessage;

export interface InputMessage {
  type: "input";
  seq: number;
  axis_speed: number;
  axis_steer: number;
  gripper_close: boolean;
}

export class ProtocolError extends Error {}

function expectNumber(value: unknown, name: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new ProtocolError(`${name}: expected a finite number`);
  }
  return value;
}

function expectString(value: unknown, name: string): string {
  if (typeof value !== "string") {
    throw new ProtocolError(`${name}: expected a string`);
  }
  return value;
}

function expectBoolean(value: unknown, name: string): boolean {
  if (typeof value !== "boolean") {
    throw new ProtocolError(`${name}: expected a boolean`);
  }
  return value;
}

function expectPoints(value: unknown, name: string): Array<[number, number]> {
  if (!Array.isArray(value)) {
    throw new ProtocolError(`${name}: expected an array`);
  }
  return value.map((point, i) => {
    if (!Array.isArray(point) || point.length !== 2) {
      throw new ProtocolError(`${name}[${i}]: expected [x, y]`);
    }
    return [
      expectNumber(point[0], `${name}[${i}][0]`),
      expectNumber(point[1], `${name}[${i}][1]`),
    ];
  });
}

function parseState(doc: Record<string, unknown>): StateMessage {
  const envelope = doc.envelope as Record<string, unknown> | null;
  return {
    type: "state",
    t: expectNumber(doc.t, "state.t"),
    tip_polyline: expectPoints(doc.tip_polyline, "state.tip_polyline"),
    body_length_m: expectNumber(doc.body_length_m, "state.body_length_m"),
    pressure_kPa: expectNumber(doc.pressure_kPa, "state.pressure_kPa"),
    mode: expectString(doc.mode, "state.mode"),
    attachment_status: expectString(doc.attachment_status, "state.attachment_status"),
    buckled: expectBoolean(doc.buckled, "state.buckled"),
    envelope: envelope === null || envelope === undefined ? null : {
      roller_slip_net_n: expectNumber(envelope.roller_slip_net_n, "envelope.roller_slip_net_n"),
      motor_torque_net_n: expectNumber(envelope.motor_torque_net_n, "envelope.motor_torque_net_n"),
      device_yield_n: expectNumber(envelope.device_yield_n, "envelope.device_yield_n"),
      material_yield_n: expectNumber(envelope.material_yield_n, "envelope.material_yield_n"),
      governing_limit_n: expectNumber(envelope.governing_limit_n, "envelope.governing_limit_n"),
      limiting_factor: expectString(envelope.limiting_factor, "envelope.limiting_factor"),
    },
    objects: (Array.isArray(doc.objects) ? doc.objects : []).map((raw, i) => {
      const obj = raw as Record<string, unknown>;
      return {
        id: expectString(obj.id, `objects[${i}].id`),
        x: expectNumber(obj.x, `objects[${i}].x`),
        y: expectNumber(obj.y, `objects[${i}].y`),
        graspable: expectBoolean(obj.graspable, `objects[${i}].graspable`),
        held: expectBoolean(obj.held, `objects[${i}].held`),
      };
    }),
    events: (Array.isArray(doc.events) ? doc.events : []).map(
      (event, i) => expectString(event, `events[${i}]`)),
  };
}

function parseScenario(doc: Record<string, unknown>): ScenarioMessage {
  const bounds = doc.bounds_m;
  if (!Array.isArray(bounds) || bounds.length !== 4) {
    throw new ProtocolError("scenario.bounds_m: expected [x0, y0, x1, y1]");
  }
  const pose = doc.base_pose as Record<string, unknown>;
  const message: ScenarioMessage = {
    type: "scenario",
    name: expectString(doc.name, "scenario.name"),
    bounds_m: [
      expectNumber(bounds[0], "bounds_m[0]"),
      expectNumber(bounds[1], "bounds_m[1]"),
      expectNumber(bounds[2], "bounds_m[2]"),
      expectNumber(bounds[3], "bounds_m[3]"),
    ],
    obstacles_m: (Array.isArray(doc.obstacles_m) ? doc.obstacles_m : []).map(
      (polygon, i) => expectPoints(polygon, `obstacles_m[${i}]`)),
    base_pose: {
      x_m: expectNumber(pose?.x_m, "base_pose.x_m"),
      y_m: expectNumber(pose?.y_m, "base_pose.y_m"),
      heading_rad: expectNumber(pose?.heading_rad, "base_pose.heading_rad"),
    },
    tube_radius_m: expectNumber(doc.tube_radius_m, "scenario.tube_radius_m"),
    design: expectString(doc.design, "scenario.design"),
    burst_kPa: expectNumber(doc.burst_kPa, "scenario.burst_kPa"),
    min_growth_kPa: expectNumber(doc.min_growth_kPa, "scenario.min_growth_kPa"),
    dt_s: expectNumber(doc.dt_s, "scenario.dt_s"),
  };
  if (doc.target_m !== undefined) {
    const target = expectPoints([doc.target_m], "scenario.target_m")[0];
    message.target_m = target;
    message.target_tolerance_m = expectNumber(
      doc.target_tolerance_m, "scenario.target_tolerance_m");
  }
  return message;
}

export function parseServerMessage(raw: string): ServerMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    throw new ProtocolError("malformed JSON from server");
  }
  if (typeof doc !== "object" || doc === null) {
    throw new ProtocolError("expected a JSON object");
  }
  const record = doc as Record<string, unknown>;
  switch (record.type) {
    case "state":
      return parseState(record);
    case "scenario":
      return parseScenario(record);
    case "error":
      return { type: "error", message: expectString(record.message, "error.message") };
    default:
      throw new ProtocolError(`unknown message type ${String(record.type)}`);
  }
}

function clampAxis(value: number): number {
  if (!Number.isFinite(value)) {
    return 0;
  }
  return Math.max(-1, Math.min(1, value));
}

export function makeInputMessage(seq: number, axisSpeed: number,
                                 axisSteer: number,
                                 gripperClose: boolean): InputMessage {
  return {
    type: "input",
    seq,
    axis_speed: clampAxis(axisSpeed),
    axis_steer: clampAxis(axisSteer),
    gripper_close: gripperClose,
  };
}
