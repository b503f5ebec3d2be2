// World-to-screen transform with pan and zoom. World y points up; screen y
// points down.

export class Camera {
  centerX = 0;
  centerY = 0;
  pixelsPerMeter = 100;

  constructor(public viewWidth: number, public viewHeight: number) {}

  resize(width: number, height: number): void {
    this.viewWidth = width;
    this.viewHeight = height;
  }

  fitBounds(x0: number, y0: number, x1: number, y1: number, margin = 0.05): void {
    const spanX = (x1 - x0) * (1 + 2 * margin);
    const spanY = (y1 - y0) * (1 + 2 * margin);
    this.centerX = (x0 + x1) / 2;
    this.centerY = (y0 + y1) / 2;
    this.pixelsPerMeter = Math.min(this.viewWidth / spanX,
                                   this.viewHeight / spanY);
  }

  worldToScreen(x: number, y: number): [number, number] {
    return [
      this.viewWidth / 2 + (x - this.centerX) * this.pixelsPerMeter,
      this.viewHeight / 2 - (y - this.centerY) * this.pixelsPerMeter,
    ];
  }

  screenToWorld(sx: number, sy: number): [number, number] {
    return [
      this.centerX + (sx - this.viewWidth / 2) / this.pixelsPerMeter,
      this.centerY - (sy - this.viewHeight / 2) / this.pixelsPerMeter,
    ];
  }

  panPixels(dx: number, dy: number): void {
    this.centerX -= dx / this.pixelsPerMeter;
    this.centerY += dy / this.pixelsPerMeter;
  }

  /** Zoom by a factor keeping the world point under (sx, sy) fixed. */
  zoomAt(sx: number, sy: number, factor: number): void {
    const [wx, wy] = this.screenToWorld(sx, sy);
    this.pixelsPerMeter = Math.max(5, Math.min(5000,
                                               this.pixelsPerMeter * factor));
    const [nx, ny] = this.screenToWorld(sx, sy);
    this.centerX += wx - nx;
    this.centerY += wy - ny;
  }
}
