import { describe, expect, it } from "vitest";

import { AudioSink, PlaybackQueue } from "../src/player";

interface Deferred {
  resolve: () => void;
  reject: (e: Error) => void;
}

/** Sink that records playback intervals and lets the test control timing. */
class ManualSink implements AudioSink {
  started: string[] = [];
  finished: string[] = [];
  tones: string[] = [];
  pending: Deferred[] = [];
  overlapped = false;
  private active = 0;

  play(url: string): Promise<void> {
    this.active += 1;
    if (this.active > 1) {
      this.overlapped = true;
    }
    this.started.push(url);
    return new Promise<void>((resolve, reject) => {
      this.pending.push({
        resolve: () => {
          this.active -= 1;
          this.finished.push(url);
          resolve();
        },
        reject: (e) => {
          this.active -= 1;
          reject(e);
        },
      });
    });
  }

  tone(kind: "error" | "warning"): Promise<void> {
    this.tones.push(kind);
    return Promise.resolve();
  }
}

const tick = () => new Promise<void>((resolve) => setTimeout(resolve, 0));

describe("PlaybackQueue", () => {
  it("plays rapid enqueues strictly in order without overlap", async () => {
    const sink = new ManualSink();
    const queue = new PlaybackQueue(sink);
    const urls = ["/audio/a.wav", "/audio/b.wav", "/audio/c.wav", "/audio/d.wav", "/audio/e.wav"];
    const done = urls.map((u) => queue.enqueue(u));

    await tick();
    expect(sink.started).toEqual(["/audio/a.wav"]); // only the head starts
    for (let i = 0; i < urls.length; i += 1) {
      sink.pending[i].resolve();
      await tick();
    }
    await Promise.all(done);
    expect(sink.started).toEqual(urls);
    expect(sink.finished).toEqual(urls);
    expect(sink.overlapped).toBe(false);
  });

  it("keeps serving after a playback failure", async () => {
    const sink = new ManualSink();
    const queue = new PlaybackQueue(sink);
    const first = queue.enqueue("/audio/broken.wav");
    const second = queue.enqueue("/audio/next.wav");

    await tick();
    sink.pending[0].reject(new Error("404"));
    await expect(first).rejects.toThrow("404");
    await tick();
    expect(sink.started).toEqual(["/audio/broken.wav", "/audio/next.wav"]);
    sink.pending[1].resolve();
    await expect(second).resolves.toBeUndefined();
  });

  it("reports idle once drained", async () => {
    const sink = new ManualSink();
    const queue = new PlaybackQueue(sink);
    const p = queue.enqueue("/audio/a.wav");
    await tick();
    sink.pending[0].resolve();
    await p;
    await queue.idle();
    expect(queue.activeCount).toBe(0);
  });
});
