/**
 * Session bridge: owns the connection, keeps outgoing frames in timestamp
 * order, and fans incoming records out to snapshot/event handlers. The
 * frontend never decides interaction outcomes; it just mirrors the core.
 */

import {
  encodeFrame,
  LineSplitter,
  parseServerLine,
  type EventRecord,
  type InputFrameRecord,
  type SnapshotRecord,
} from "./protocol.js";

export interface Transport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export type ConnectionState = "connected" | "closed";

export interface BridgeHandlers {
  onSnapshot?: (snapshot: SnapshotRecord) => void;
  onEvent?: (event: EventRecord) => void;
  onProtocolError?: (message: string, code: number) => void;
}

export class SessionBridge {
  private state: ConnectionState = "connected";
  private lastSentTimestamp = -Infinity;
  private splitter = new LineSplitter();
  readonly events: EventRecord[] = [];
  private latest: SnapshotRecord | null = null;

  constructor(
    private transport: Transport,
    private handlers: BridgeHandlers = {},
  ) {
    transport.onLine((line) => this.dispatch(line));
    transport.onClose(() => {
      this.state = "closed";
    });
  }

  get connectionState(): ConnectionState {
    return this.state;
  }

  get latestSnapshot(): SnapshotRecord | null {
    return this.latest;
  }

  /** Out-of-order frames are dropped rather than sent; returns whether sent. */
  sendFrame(frame: InputFrameRecord): boolean {
    if (this.state !== "connected") return false;
    if (frame.t <= this.lastSentTimestamp) return false;
    this.lastSentTimestamp = frame.t;
    this.transport.send(encodeFrame(frame));
    return true;
  }

  private dispatch(line: string): void {
    const message = parseServerLine(line);
    switch (message.kind) {
      case "snapshot":
        this.latest = message.snapshot;
        this.handlers.onSnapshot?.(message.snapshot);
        break;
      case "event":
        this.events.push(message.event);
        this.handlers.onEvent?.(message.event);
        break;
      case "error":
        this.handlers.onProtocolError?.(message.error.error, message.error.code);
        break;
    }
  }

  /** Feed raw stream chunks (transports that deliver chunks, not lines). */
  pushChunk(chunk: string): void {
    for (const line of this.splitter.push(chunk)) {
      this.dispatch(line);
    }
  }

  /** A reconnect starts a brand new core session: reset per-session state. */
  reset(transport: Transport): void {
    this.transport.close();
    this.transport = transport;
    this.state = "connected";
    this.lastSentTimestamp = -Infinity;
    this.splitter.reset();
    this.events.length = 0;
    this.latest = null;
    transport.onLine((line) => this.dispatch(line));
    transport.onClose(() => {
      this.state = "closed";
    });
  }

  close(): void {
    this.transport.close();
    this.state = "closed";
  }
}
