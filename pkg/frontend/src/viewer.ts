/**
 * three.js renderer over the DisplayList. Widget state arrives baked into
 * snapshots (press depth, handle offset), so drawing is a pure mirror:
 * no interaction logic lives here.
 */

import * as THREE from "three";
import type { DisplayList, RenderNode } from "./displayList.js";

const POINT_BUDGET = 500_000; // decimate clouds above this count client-side

interface Drawn {
  root: THREE.Object3D;
  cap?: THREE.Object3D; // button cap / slider handle, offset per frame
  material?: THREE.Material & { opacity: number; transparent: boolean };
}

function makeMaterial(color: number): THREE.MeshStandardMaterial {
  return new THREE.MeshStandardMaterial({ color, transparent: true });
}

export class Viewer {
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  private drawn = new Map<number, Drawn>();

  constructor(aspect: number) {
    this.camera = new THREE.PerspectiveCamera(60, aspect, 0.01, 50);
    this.camera.position.set(0, 1.6, 0.4);
    this.scene.add(new THREE.HemisphereLight(0xffffff, 0x445566, 1.0));
    const sun = new THREE.DirectionalLight(0xffffff, 0.8);
    sun.position.set(1, 3, 2);
    this.scene.add(sun);
  }

  private build(node: RenderNode): Drawn {
    const root = new THREE.Group();
    let cap: THREE.Object3D | undefined;
    let material: THREE.MeshStandardMaterial | undefined;
    switch (node.meshKind) {
      case "panel-quad": {
        material = makeMaterial(0x2a3440);
        root.add(new THREE.Mesh(new THREE.PlaneGeometry(0.2, 0.2), material));
        break;
      }
      case "map-plane": {
        material = makeMaterial(0x1f3a2e);
        root.add(new THREE.Mesh(new THREE.PlaneGeometry(2, 2), material));
        break;
      }
      case "button-cap": {
        material = makeMaterial(0xd8dde2);
        cap = new THREE.Mesh(new THREE.BoxGeometry(0.07, 0.07, 0.02), material);
        root.add(cap);
        break;
      }
      case "slider-track": {
        material = makeMaterial(0x8892a0);
        root.add(new THREE.Mesh(new THREE.BoxGeometry(0.34, 0.01, 0.01), material));
        cap = new THREE.Mesh(new THREE.BoxGeometry(0.03, 0.05, 0.03), makeMaterial(0xffffff));
        root.add(cap);
        break;
      }
      case "handle-bar": {
        material = makeMaterial(0xffffff);
        root.add(new THREE.Mesh(new THREE.BoxGeometry(0.12, 0.03, 0.03), material));
        break;
      }
      case "marker-pin": {
        material = makeMaterial(0xff5544);
        const pin = new THREE.Mesh(new THREE.ConeGeometry(0.01, 0.03, 8), material);
        pin.rotation.x = Math.PI / 2;
        root.add(pin);
        break;
      }
      case "point-cloud": {
        // Geometry payload is delivered out of band; placeholder cloud node.
        const pts = new THREE.BufferGeometry();
        root.add(new THREE.Points(pts, new THREE.PointsMaterial({ size: 0.004 })));
        break;
      }
      case "placeholder-box": {
        material = makeMaterial(0xff00ff);
        root.add(new THREE.Mesh(new THREE.BoxGeometry(0.05, 0.05, 0.05), material));
        break;
      }
    }
    this.scene.add(root);
    return { root, cap, material };
  }

  /** Attach decimated point positions to an existing point-cloud node. */
  setPointCloud(nodeId: number, positions: Float32Array): void {
    const drawn = this.drawn.get(nodeId);
    if (!drawn) return;
    const points = drawn.root.children[0] as THREE.Points;
    let data = positions;
    const count = positions.length / 3;
    if (count > POINT_BUDGET) {
      const stride = Math.ceil(count / POINT_BUDGET);
      const kept = new Float32Array(Math.ceil(count / stride) * 3);
      for (let i = 0, j = 0; i < count; i += stride, j += 3) {
        kept[j] = positions[i * 3]!;
        kept[j + 1] = positions[i * 3 + 1]!;
        kept[j + 2] = positions[i * 3 + 2]!;
      }
      data = kept;
    }
    points.geometry.setAttribute("position", new THREE.BufferAttribute(data, 3));
  }

  sync(list: DisplayList): void {
    const alive = new Set<number>();
    for (const node of list.all()) {
      alive.add(node.nodeId);
      let drawn = this.drawn.get(node.nodeId);
      if (!drawn) {
        drawn = this.build(node);
        this.drawn.set(node.nodeId, drawn);
      }
      drawn.root.position.set(...node.position);
      drawn.root.quaternion.set(...node.rotation);
      drawn.root.visible = node.visible;
      if (drawn.material) {
        drawn.material.opacity = node.opacity;
      }
      if (drawn.cap) {
        if (node.meshKind === "button-cap") {
          drawn.cap.position.set(0, 0, -node.pressDepth);
        } else if (node.meshKind === "slider-track") {
          drawn.cap.position.set(node.handleOffset, 0, 0);
        }
      }
    }
    for (const [nodeId, drawn] of this.drawn) {
      if (!alive.has(nodeId)) {
        this.scene.remove(drawn.root);
        this.drawn.delete(nodeId);
      }
    }
  }
}
