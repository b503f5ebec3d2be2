// Scene rendering. Everything drawn traces back to a server message (or a
// replayed log frame): the client holds no physics of its own.

import { Camera } from "./camera.js";
import { ScenarioMessage, StateMessage } from "./protocol.js";

// The slice of CanvasRenderingContext2D the renderer uses; tests substitute
// a recording stub.
export interface Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  lineCap: CanvasLineCap;
  lineJoin: CanvasLineJoin;
  font: string;
  globalAlpha: number;
  textAlign: CanvasTextAlign;
  save(): void;
  restore(): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  closePath(): void;
  stroke(): void;
  fill(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
}

export type Connection = "connecting" | "connected" | "disconnected" | "replay";

export interface Toast {
  text: string;
  untilMs: number;
}

export interface ViewState {
  connection: Connection;
  scenario: ScenarioMessage | null;
  state: StateMessage | null;
  toasts: Toast[];
  camera: Camera;
  replayPolyline?: Array<[number, number]> | null;
}

/** Human text for an event, or null when it should not surface as a toast. */
export function eventToast(event: string): string | null {
  const [kind, detail] = event.split(":", 2);
  switch (kind) {
    case "grasped":
      return `grasped ${detail}`;
    case "released":
      return `released ${detail}`;
    case "object_delivered":
      return `delivered ${detail}!`;
    case "buckled":
      return "body buckled!";
    case "attachment_failed":
      return `tip mount failed: ${detail ?? "detached"}`;
    case "retract_limit":
      return "fully retracted";
    default:
      return null;
  }
}

const COLORS = {
  background: "#10141a",
  bounds: "#2a3442",
  obstacleFill: "#4a3b2a",
  obstacleEdge: "#8a6d3b",
  body: "#3fae6a",
  bodyBuckled: "#b8483f",
  tip: "#d7e3ee",
  object: "#4f9fd4",
  objectHeld: "#ffd35c",
  target: "#b8483f",
  text: "#d7e3ee",
  hud: "#1b2430",
  gauge: "#3fae6a",
  gaugeDanger: "#b8483f",
  envelope: "#51617a",
  envelopeGoverning: "#ffd35c",
};

function polylinePath(ctx: Draw2D, camera: Camera,
                      points: Array<[number, number]>): void {
  ctx.beginPath();
  points.forEach(([x, y], i) => {
    const [sx, sy] = camera.worldToScreen(x, y);
    if (i === 0) {
      ctx.moveTo(sx, sy);
    } else {
      ctx.lineTo(sx, sy);
    }
  });
}

function drawWorld(ctx: Draw2D, view: ViewState): void {
  const scenario = view.scenario;
  if (scenario === null) {
    return;
  }
  const camera = view.camera;
  const [x0, y0, x1, y1] = scenario.bounds_m;
  const [bx0, by0] = camera.worldToScreen(x0, y1);
  const [bx1, by1] = camera.worldToScreen(x1, y0);
  ctx.strokeStyle = COLORS.bounds;
  ctx.lineWidth = 2;
  ctx.strokeRect(bx0, by0, bx1 - bx0, by1 - by0);

  for (const polygon of scenario.obstacles_m) {
    polylinePath(ctx, camera, polygon);
    ctx.closePath();
    ctx.fillStyle = COLORS.obstacleFill;
    ctx.fill();
    ctx.strokeStyle = COLORS.obstacleEdge;
    ctx.lineWidth = 1.5;
    ctx.stroke();
  }

  if (scenario.target_m !== undefined) {
    const [tx, ty] = camera.worldToScreen(...scenario.target_m);
    const radius = (scenario.target_tolerance_m ?? 0.05) * camera.pixelsPerMeter;
    ctx.beginPath();
    ctx.arc(tx, ty, radius, 0, 2 * Math.PI);
    ctx.strokeStyle = COLORS.target;
    ctx.lineWidth = 2;
    ctx.stroke();
  }

  // Base marker.
  const [baseX, baseY] = camera.worldToScreen(scenario.base_pose.x_m,
                                              scenario.base_pose.y_m);
  ctx.fillStyle = COLORS.bounds;
  ctx.fillRect(baseX - 6, baseY - 6, 12, 12);
}

function drawBody(ctx: Draw2D, view: ViewState): void {
  const scenario = view.scenario;
  const state = view.state;
  if (scenario === null || state === null) {
    return;
  }
  const camera = view.camera;
  const polyline = view.replayPolyline ?? state.tip_polyline;
  if (polyline.length >= 2) {
    polylinePath(ctx, camera, polyline);
    ctx.strokeStyle = state.buckled ? COLORS.bodyBuckled : COLORS.body;
    ctx.lineWidth = Math.max(
      2, 2 * scenario.tube_radius_m * camera.pixelsPerMeter);
    ctx.lineCap = "round";
    ctx.lineJoin = "round";
    ctx.stroke();
  }
  const tipWorld = polyline.length > 0
    ? polyline[polyline.length - 1]
    : [scenario.base_pose.x_m, scenario.base_pose.y_m] as [number, number];
  drawTipGlyph(ctx, camera, tipWorld, scenario);
}

function drawTipGlyph(ctx: Draw2D, camera: Camera,
                      tip: [number, number], scenario: ScenarioMessage): void {
  const [sx, sy] = camera.worldToScreen(tip[0], tip[1]);
  const r = Math.max(4, scenario.tube_radius_m * camera.pixelsPerMeter);
  ctx.strokeStyle = COLORS.tip;
  ctx.fillStyle = COLORS.tip;
  ctx.lineWidth = 2;
  switch (scenario.design) {
    case "string_mount":
      ctx.beginPath();
      ctx.arc(sx, sy, r * 0.3, 0, 2 * Math.PI);
      ctx.fill();
      break;
    case "outer_cap":
      ctx.beginPath();
      ctx.arc(sx, sy, r, -Math.PI / 2, Math.PI / 2);
      ctx.stroke();
      break;
    case "outer_cap_with_reel":
      ctx.beginPath();
      ctx.arc(sx, sy, r, -Math.PI / 2, Math.PI / 2);
      ctx.stroke();
      ctx.beginPath();
      ctx.arc(sx, sy, r * 0.4, 0, 2 * Math.PI);
      ctx.stroke();
      break;
    case "magnet_rings":
      ctx.beginPath();
      ctx.arc(sx, sy, r * 0.8, 0, 2 * Math.PI);
      ctx.stroke();
      ctx.beginPath();
      ctx.arc(sx, sy, r * 0.45, 0, 2 * Math.PI);
      ctx.stroke();
      break;
    default:  // current design: cap plus roller pips
      ctx.beginPath();
      ctx.arc(sx, sy, r, -Math.PI / 2, Math.PI / 2);
      ctx.stroke();
      ctx.beginPath();
      ctx.arc(sx - r * 0.35, sy, r * 0.18, 0, 2 * Math.PI);
      ctx.fill();
      ctx.beginPath();
      ctx.arc(sx + r * 0.35, sy, r * 0.18, 0, 2 * Math.PI);
      ctx.fill();
      break;
  }
}

function drawObjects(ctx: Draw2D, view: ViewState): void {
  const state = view.state;
  if (state === null) {
    return;
  }
  const camera = view.camera;
  for (const obj of state.objects) {
    const [sx, sy] = camera.worldToScreen(obj.x, obj.y);
    ctx.beginPath();
    ctx.arc(sx, sy, 7, 0, 2 * Math.PI);
    ctx.fillStyle = obj.held ? COLORS.objectHeld : COLORS.object;
    ctx.fill();
    if (obj.held) {
      ctx.beginPath();
      ctx.arc(sx, sy, 11, 0, 2 * Math.PI);
      ctx.strokeStyle = COLORS.objectHeld;
      ctx.lineWidth = 2;
      ctx.stroke();
    }
    ctx.fillStyle = COLORS.text;
    ctx.font = "11px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(obj.id, sx, sy - 12);
  }
}

function drawPressureGauge(ctx: Draw2D, view: ViewState, width: number): void {
  const scenario = view.scenario;
  const state = view.state;
  if (scenario === null || state === null) {
    return;
  }
  const gaugeX = 16;
  const gaugeY = 44;
  const gaugeW = Math.min(260, width - 32);
  const gaugeH = 14;
  const fullScale = scenario.burst_kPa * 1.1;
  ctx.fillStyle = COLORS.hud;
  ctx.fillRect(gaugeX, gaugeY, gaugeW, gaugeH);
  const frac = Math.min(1, state.pressure_kPa / fullScale);
  ctx.fillStyle = state.pressure_kPa >= scenario.burst_kPa * 0.9
    ? COLORS.gaugeDanger : COLORS.gauge;
  ctx.fillRect(gaugeX, gaugeY, gaugeW * frac, gaugeH);
  // Minimum-growth and burst markers.
  for (const [kpa, color] of [
    [scenario.min_growth_kPa, COLORS.text],
    [scenario.burst_kPa, COLORS.gaugeDanger],
  ] as Array<[number, string]>) {
    const x = gaugeX + gaugeW * Math.min(1, kpa / fullScale);
    ctx.fillStyle = color;
    ctx.fillRect(x - 1, gaugeY - 3, 2, gaugeH + 6);
  }
  ctx.fillStyle = COLORS.text;
  ctx.font = "12px sans-serif";
  ctx.textAlign = "left";
  ctx.fillText(
    `pressure ${state.pressure_kPa.toFixed(1)} kPa `
    + `(grow >= ${scenario.min_growth_kPa.toFixed(1)}, `
    + `burst ${scenario.burst_kPa.toFixed(1)})`,
    gaugeX, gaugeY - 8);
}

function drawEnvelopeBar(ctx: Draw2D, view: ViewState, width: number): void {
  const state = view.state;
  if (state === null || state.envelope === null) {
    return;
  }
  const envelope = state.envelope;
  const barX = 16;
  const barY = 92;
  const barW = Math.min(260, width - 32);
  const barH = 10;
  const factors: Array<[string, number]> = [
    ["roller_slip", envelope.roller_slip_net_n],
    ["motor_torque", envelope.motor_torque_net_n],
    ["device_yield", envelope.device_yield_n],
    ["material_yield", envelope.material_yield_n],
  ];
  const maxValue = Math.max(...factors.map(([, v]) => v));
  factors.forEach(([name, value], i) => {
    const y = barY + i * (barH + 4);
    ctx.fillStyle = COLORS.hud;
    ctx.fillRect(barX, y, barW, barH);
    ctx.fillStyle = name === envelope.limiting_factor
      ? COLORS.envelopeGoverning : COLORS.envelope;
    ctx.fillRect(barX, y, barW * (value / maxValue), barH);
    ctx.fillStyle = COLORS.text;
    ctx.font = "10px sans-serif";
    ctx.textAlign = "left";
    ctx.fillText(`${name} ${(value / 9.81).toFixed(2)} kg`, barX + barW + 8,
                 y + barH - 1);
  });
  ctx.fillStyle = COLORS.text;
  ctx.font = "12px sans-serif";
  ctx.fillText(
    `payload limit ${(envelope.governing_limit_n / 9.81).toFixed(2)} kg `
    + `(${envelope.limiting_factor})`,
    barX, barY - 6);
}

function drawStatusLine(ctx: Draw2D, view: ViewState): void {
  const state = view.state;
  if (state === null) {
    return;
  }
  ctx.fillStyle = COLORS.text;
  ctx.font = "13px sans-serif";
  ctx.textAlign = "left";
  ctx.fillText(
    `t ${state.t.toFixed(2)} s | ${state.mode} | `
    + `length ${state.body_length_m.toFixed(3)} m | `
    + `mount ${state.attachment_status}`,
    16, 20);
}

function drawToasts(ctx: Draw2D, view: ViewState, width: number,
                    height: number, nowMs: number): void {
  const active = view.toasts.filter((toast) => toast.untilMs > nowMs);
  active.slice(-4).forEach((toast, i) => {
    ctx.globalAlpha = Math.min(1, (toast.untilMs - nowMs) / 500);
    ctx.fillStyle = COLORS.hud;
    const y = height - 30 - i * 26;
    ctx.fillRect(width / 2 - 140, y - 16, 280, 22);
    ctx.fillStyle = COLORS.text;
    ctx.font = "13px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(toast.text, width / 2, y);
    ctx.globalAlpha = 1;
  });
}

function drawBanner(ctx: Draw2D, text: string, color: string, width: number,
                    height: number): void {
  ctx.fillStyle = color;
  ctx.fillRect(0, height / 2 - 26, width, 52);
  ctx.fillStyle = "#ffffff";
  ctx.font = "bold 22px sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(text, width / 2, height / 2 + 8);
}

export function render(ctx: Draw2D, view: ViewState, width: number,
                       height: number, nowMs: number): void {
  ctx.save();
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, width, height);

  drawWorld(ctx, view);
  drawBody(ctx, view);
  drawObjects(ctx, view);
  drawStatusLine(ctx, view);
  drawPressureGauge(ctx, view, width);
  drawEnvelopeBar(ctx, view, width);
  drawToasts(ctx, view, width, height, nowMs);

  if (view.state?.buckled) {
    drawBanner(ctx, "BUCKLED - body collapsed under retraction tension",
               COLORS.gaugeDanger, width, height);
  } else if (view.state !== null
             && view.state.attachment_status !== "attached") {
    drawBanner(ctx, `TIP MOUNT ${view.state.attachment_status.toUpperCase()}`,
               COLORS.gaugeDanger, width, height);
  }
  if (view.connection === "disconnected") {
    ctx.globalAlpha = 0.5;
    ctx.fillStyle = COLORS.background;
    ctx.fillRect(0, 0, width, height);
    ctx.globalAlpha = 1;
    drawBanner(ctx, "DISCONNECTED - frame frozen", COLORS.hud, width, height);
  } else if (view.connection === "connecting") {
    drawBanner(ctx, "connecting...", COLORS.hud, width, height);
  }
  if (view.connection === "replay") {
    ctx.fillStyle = COLORS.text;
    ctx.font = "12px sans-serif";
    ctx.textAlign = "right";
    ctx.fillText("REPLAY", width - 16, 20);
  }
  ctx.restore();
}
