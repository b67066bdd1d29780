/**
 * Desktop fallback input: the mouse steers a single emulated ray device
 * and a held key acts as its trigger, so every interaction works without
 * any XR hardware. Pure state machine; DOM wiring happens in main.ts.
 */

import type { DeviceRecord, InputFrameRecord } from "./protocol.js";

export interface CameraRig {
  position: [number, number, number];
  /** Unit quaternion (x, y, z, w), -z forward. */
  rotation: [number, number, number, number];
  fovYRadians: number;
  aspect: number;
}

function rotateByQuat(
  q: [number, number, number, number],
  v: [number, number, number],
): [number, number, number] {
  const [qx, qy, qz, qw] = q;
  const [vx, vy, vz] = v;
  // t = 2 q_vec x v; v' = v + w t + q_vec x t
  const tx = 2 * (qy * vz - qz * vy);
  const ty = 2 * (qz * vx - qx * vz);
  const tz = 2 * (qx * vy - qy * vx);
  return [
    vx + qw * tx + (qy * tz - qz * ty),
    vy + qw * ty + (qz * tx - qx * tz),
    vz + qw * tz + (qx * ty - qy * tx),
  ];
}

/** Quaternion carrying (0,0,-1) onto the given unit direction. */
export function lookRotation(direction: [number, number, number]): [number, number, number, number] {
  const [dx, dy, dz] = direction;
  // dot(-z, d) = -dz; axis = cross(-z, d) = (y?, ...): (-z) x d = (dy*? ) compute:
  const ax = 0 * dz - -1 * dy; // (0,0,-1) x (dx,dy,dz)
  const ay = -1 * dx - 0 * dz;
  const az = 0 * dy - 0 * dx;
  const dot = -dz;
  if (dot > 1 - 1e-12) return [0, 0, 0, 1];
  if (dot < -1 + 1e-12) return [0, 1, 0, 0]; // 180 degrees about +y
  const angle = Math.acos(Math.min(1, Math.max(-1, dot)));
  const norm = Math.hypot(ax, ay, az);
  const s = Math.sin(angle / 2);
  return [(ax / norm) * s, (ay / norm) * s, (az / norm) * s, Math.cos(angle / 2)];
}

export class DesktopInputSource {
  private mouseNdcX = 0;
  private mouseNdcY = 0;
  private triggerHeld = false;
  private lastTimestamp = -Infinity;

  constructor(
    public camera: CameraRig,
    private deviceId = "desktop-ray",
  ) {}

  /** ndc coordinates in [-1, 1], x right, y up; (0, 0) is view center. */
  setMouseNdc(x: number, y: number): void {
    this.mouseNdcX = Math.min(1, Math.max(-1, x));
    this.mouseNdcY = Math.min(1, Math.max(-1, y));
  }

  setTriggerHeld(held: boolean): void {
    this.triggerHeld = held;
  }

  /** Direction of the emulated ray in world space. */
  rayDirection(): [number, number, number] {
    const tanHalf = Math.tan(this.camera.fovYRadians / 2);
    const local: [number, number, number] = [
      this.mouseNdcX * tanHalf * this.camera.aspect,
      this.mouseNdcY * tanHalf,
      -1,
    ];
    const world = rotateByQuat(this.camera.rotation, local);
    const n = Math.hypot(...world);
    return [world[0] / n, world[1] / n, world[2] / n];
  }

  /**
   * One frame per display tick. Returns null when the clock has not
   * advanced, so a dropped frame can never reorder the stream.
   */
  captureFrame(timestamp: number): InputFrameRecord | null {
    if (timestamp <= this.lastTimestamp) return null;
    this.lastTimestamp = timestamp;
    const device: DeviceRecord = {
      id: this.deviceId,
      kind: "ray",
      p: [...this.camera.position],
      q: lookRotation(this.rayDirection()),
      pinch: 0,
      trigger: this.triggerHeld ? 1 : 0,
    };
    return {
      t: timestamp,
      head: { p: [...this.camera.position], q: [...this.camera.rotation] },
      devices: [device],
    };
  }
}
