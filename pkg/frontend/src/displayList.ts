/**
 * Snapshot-driven display list. The core owns all interaction state; this
 * layer only mirrors the latest snapshot into renderable records, so any
 * renderer (three.js, test harness) can diff against it.
 */

import type { SnapshotNodeRecord, SnapshotRecord } from "./protocol.js";

export type MeshKind =
  | "panel-quad"
  | "button-cap"
  | "slider-track"
  | "marker-pin"
  | "point-cloud"
  | "map-plane"
  | "handle-bar"
  | "placeholder-box";

const MESH_FOR_KIND: Record<string, MeshKind> = {
  Panel: "panel-quad",
  Button: "button-cap",
  Slider: "slider-track",
  Marker: "marker-pin",
  PointCloud: "point-cloud",
  MapPlane: "map-plane",
  Handle: "handle-bar",
};

export interface RenderNode {
  nodeId: number;
  meshKind: MeshKind;
  position: [number, number, number];
  rotation: [number, number, number, number];
  opacity: number;
  visible: boolean;
  /** Button caps shift along their local -z by this many meters. */
  pressDepth: number;
  /** Slider handles shift along their local +x by this many meters. */
  handleOffset: number;
  value?: number;
}

function toRenderNode(record: SnapshotNodeRecord): RenderNode {
  let meshKind = MESH_FOR_KIND[record.kind];
  if (meshKind === undefined) {
    console.warn(`unknown node kind ${record.kind}, drawing placeholder box`);
    meshKind = "placeholder-box";
  }
  return {
    nodeId: record.node,
    meshKind,
    position: record.p,
    rotation: record.q,
    opacity: record.opacity,
    visible: record.visible,
    pressDepth: record.state?.depth ?? 0,
    handleOffset: record.state?.offset ?? 0,
    value: record.state?.value,
  };
}

export interface DisplayListDelta {
  added: RenderNode[];
  updated: RenderNode[];
  removed: number[];
}

export class DisplayList {
  private nodes = new Map<number, RenderNode>();
  private lastSnapshot = -1;

  /** Mirror one snapshot; returns what changed for renderer diffing. */
  apply(snapshot: SnapshotRecord): DisplayListDelta {
    const delta: DisplayListDelta = { added: [], updated: [], removed: [] };
    const seen = new Set<number>();
    for (const record of snapshot.nodes) {
      seen.add(record.node);
      const next = toRenderNode(record);
      if (this.nodes.has(record.node)) {
        delta.updated.push(next);
      } else {
        delta.added.push(next);
      }
      this.nodes.set(record.node, next);
    }
    for (const nodeId of this.nodes.keys()) {
      if (!seen.has(nodeId)) {
        delta.removed.push(nodeId);
      }
    }
    for (const nodeId of delta.removed) {
      this.nodes.delete(nodeId);
    }
    this.lastSnapshot = snapshot.snapshot;
    return delta;
  }

  get(nodeId: number): RenderNode | undefined {
    return this.nodes.get(nodeId);
  }

  all(): RenderNode[] {
    return [...this.nodes.values()];
  }

  visibleCount(): number {
    return this.all().filter((n) => n.visible).length;
  }

  get snapshotId(): number {
    return this.lastSnapshot;
  }

  clear(): void {
    this.nodes.clear();
    this.lastSnapshot = -1;
  }
}
