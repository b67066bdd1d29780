/**
 * Node-side transport speaking the core's newline-delimited JSON over a
 * local TCP socket. Used by the test harness and desktop tooling;
 * browsers go through the ws relay instead (scripts/relay.mjs).
 */

import * as net from "node:net";
import { LineSplitter } from "./protocol.js";
import type { Transport } from "./bridge.js";

export class TcpTransport implements Transport {
  private splitter = new LineSplitter();
  private lineHandler: ((line: string) => void) | null = null;
  private closeHandler: (() => void) | null = null;

  private constructor(private socket: net.Socket) {
    socket.setEncoding("utf-8");
    socket.on("data", (chunk: string) => {
      for (const line of this.splitter.push(chunk)) {
        this.lineHandler?.(line);
      }
    });
    socket.on("close", () => this.closeHandler?.());
    socket.on("error", () => this.closeHandler?.());
  }

  static connect(host: string, port: number, timeoutMs = 5000): Promise<TcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port });
      const timer = setTimeout(() => {
        socket.destroy();
        reject(new Error(`connect timeout to ${host}:${port}`));
      }, timeoutMs);
      socket.once("connect", () => {
        clearTimeout(timer);
        resolve(new TcpTransport(socket));
      });
      socket.once("error", (err) => {
        clearTimeout(timer);
        reject(err);
      });
    });
  }

  send(line: string): void {
    this.socket.write(line);
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    this.socket.end();
    this.socket.destroy();
  }
}
