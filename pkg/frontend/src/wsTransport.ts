/**
 * Browser transport: WebSocket to the bundled ws<->tcp relay
 * (scripts/relay.mjs), one text message per protocol line.
 */

import { LineSplitter } from "./protocol.js";
import type { Transport } from "./bridge.js";

export class WebSocketTransport implements Transport {
  private splitter = new LineSplitter();
  private lineHandler: ((line: string) => void) | null = null;
  private closeHandler: (() => void) | null = null;

  private constructor(private socket: WebSocket) {
    socket.onmessage = (msg) => {
      for (const line of this.splitter.push(String(msg.data))) {
        this.lineHandler?.(line);
      }
    };
    socket.onclose = () => this.closeHandler?.();
    socket.onerror = () => this.closeHandler?.();
  }

  static connect(url: string): Promise<WebSocketTransport> {
    return new Promise((resolve, reject) => {
      const socket = new WebSocket(url);
      socket.onopen = () => resolve(new WebSocketTransport(socket));
      socket.onerror = () => reject(new Error(`websocket connect failed: ${url}`));
    });
  }

  send(line: string): void {
    this.socket.send(line);
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    this.socket.close();
  }
}
