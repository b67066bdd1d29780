/**
 * Wire types for the core's frame protocol (line-delimited JSON).
 * Client sends input frames; core replies with event records and one
 * scene snapshot per frame.
 */

export type DeviceKind = "ray" | "hand";

export interface DeviceRecord {
  id: string;
  kind: DeviceKind;
  p: [number, number, number];
  q: [number, number, number, number];
  pinch: number;
  trigger: number;
}

export interface InputFrameRecord {
  t: number;
  head: { p: [number, number, number]; q: [number, number, number, number] };
  devices: DeviceRecord[];
}

export type NodeKind =
  | "Panel"
  | "Button"
  | "Slider"
  | "Marker"
  | "PointCloud"
  | "MapPlane"
  | "Handle";

export interface SnapshotNodeRecord {
  node: number;
  kind: NodeKind | string;
  p: [number, number, number];
  q: [number, number, number, number];
  opacity: number;
  visible: boolean;
  state?: Record<string, number>;
}

export interface SnapshotRecord {
  snapshot: number;
  t: number;
  nodes: SnapshotNodeRecord[];
}

export interface EventRecord {
  ev: string;
  node: number;
  t: number;
  value?: number;
}

export interface ErrorRecord {
  error: string;
  code: number;
}

export type ServerMessage =
  | { kind: "snapshot"; snapshot: SnapshotRecord }
  | { kind: "event"; event: EventRecord }
  | { kind: "error"; error: ErrorRecord };

export function parseServerLine(line: string): ServerMessage {
  const obj = JSON.parse(line);
  if (typeof obj !== "object" || obj === null) {
    throw new Error(`not a protocol record: ${line}`);
  }
  if ("snapshot" in obj) return { kind: "snapshot", snapshot: obj as SnapshotRecord };
  if ("ev" in obj) return { kind: "event", event: obj as EventRecord };
  if ("error" in obj) return { kind: "error", error: obj as ErrorRecord };
  throw new Error(`unrecognized protocol record: ${line}`);
}

export function encodeFrame(frame: InputFrameRecord): string {
  return JSON.stringify(frame) + "\n";
}

/** Reassembles newline-delimited records from arbitrary stream chunks. */
export class LineSplitter {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const parts = this.buffer.split("\n");
    this.buffer = parts.pop() ?? "";
    return parts.filter((p) => p.trim().length > 0);
  }

  reset(): void {
    this.buffer = "";
  }
}
