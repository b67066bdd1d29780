/**
 * Browser entry point. Query parameters:
 *   ?host=127.0.0.1&port=8765   relay address (scripts/relay.mjs)
 *   &xr=1                       offer an immersive VR session if available
 */

import * as THREE from "three";
import { SessionBridge } from "./bridge.js";
import { DesktopInputSource } from "./desktopInput.js";
import { DisplayList } from "./displayList.js";
import { Viewer } from "./viewer.js";
import { WebSocketTransport } from "./wsTransport.js";

async function boot(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const host = params.get("host") ?? "127.0.0.1";
  const port = Number(params.get("port") ?? "8765");
  const wantXr = params.get("xr") === "1";

  const canvas = document.getElementById("view") as HTMLCanvasElement;
  const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
  renderer.setSize(window.innerWidth, window.innerHeight);

  const viewer = new Viewer(window.innerWidth / window.innerHeight);
  const displayList = new DisplayList();

  const transport = await WebSocketTransport.connect(`ws://${host}:${port}`);
  const bridge = new SessionBridge(transport, {
    onSnapshot: (snapshot) => {
      displayList.apply(snapshot);
      viewer.sync(displayList);
    },
    onProtocolError: (message, code) => console.error(`core error ${code}: ${message}`),
  });

  const input = new DesktopInputSource({
    position: [0, 1.6, 0.4],
    rotation: [0, 0, 0, 1],
    fovYRadians: (60 * Math.PI) / 180,
    aspect: window.innerWidth / window.innerHeight,
  });

  window.addEventListener("mousemove", (e) => {
    input.setMouseNdc((e.clientX / window.innerWidth) * 2 - 1, -((e.clientY / window.innerHeight) * 2 - 1));
  });
  const triggerKeys = new Set([" ", "Enter"]);
  window.addEventListener("keydown", (e) => {
    if (triggerKeys.has(e.key)) input.setTriggerHeld(true);
  });
  window.addEventListener("keyup", (e) => {
    if (triggerKeys.has(e.key)) input.setTriggerHeld(false);
  });
  window.addEventListener("mousedown", () => input.setTriggerHeld(true));
  window.addEventListener("mouseup", () => input.setTriggerHeld(false));

  if (wantXr && navigator.xr) {
    renderer.xr.enabled = true;
    const supported = await navigator.xr.isSessionSupported("immersive-vr");
    if (supported) {
      const button = document.createElement("button");
      button.textContent = "Enter VR";
      button.style.cssText = "position:absolute;bottom:16px;left:16px;padding:8px";
      button.onclick = async () => {
        const session = await navigator.xr!.requestSession("immersive-vr");
        await renderer.xr.setSession(session as XRSession);
      };
      document.body.appendChild(button);
    }
  }

  const epoch = performance.now();
  renderer.setAnimationLoop(() => {
    const frame = input.captureFrame((performance.now() - epoch) / 1000);
    if (frame) bridge.sendFrame(frame);
    renderer.render(viewer.scene, viewer.camera);
  });
}

boot().catch((err) => {
  console.error(err);
  document.body.textContent = String(err);
});
