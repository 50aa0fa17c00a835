/** Playback sink abstraction: the browser implementation drives an
 *  HTMLAudioElement; tests inject a recording fake. play() resolves when the
 *  cue finishes and rejects when the audio cannot be fetched or decoded. */
export interface AudioSink {
  play(url: string): Promise<void>;
  tone(kind: "error" | "warning"): Promise<void>;
}

/**
 * Serial cue queue: cues never overlap, each starts only after the previous
 * one finished (or failed). Failures surface to the caller but never wedge
 * the queue.
 */
export class PlaybackQueue {
  private tail: Promise<void> = Promise.resolve();
  private playing = 0;

  constructor(private sink: AudioSink) {}

  get activeCount(): number {
    return this.playing;
  }

  enqueue(url: string): Promise<void> {
    const run = this.tail.then(async () => {
      this.playing += 1;
      try {
        await this.sink.play(url);
      } finally {
        this.playing -= 1;
      }
    });
    this.tail = run.catch(() => undefined);
    return run;
  }

  /** Resolves once everything queued so far has drained. */
  idle(): Promise<void> {
    return this.tail;
  }
}

/** Web Audio-free sink: streams each cue through an HTMLAudioElement. The
 *  server renders pan into the stereo file; no client-side spatialization. */
export class HtmlAudioSink implements AudioSink {
  play(url: string): Promise<void> {
    return new Promise((resolve, reject) => {
      const audio = new Audio(url);
      audio.addEventListener("ended", () => resolve());
      audio.addEventListener("error", () =>
        reject(new Error(`cannot play ${url}`))
      );
      audio.play().catch(reject);
    });
  }

  tone(kind: "error" | "warning"): Promise<void> {
    const context = new AudioContext();
    const osc = context.createOscillator();
    const gain = context.createGain();
    osc.frequency.value = kind === "error" ? 196 : 311;
    gain.gain.value = 0.1;
    osc.connect(gain).connect(context.destination);
    osc.start();
    return new Promise((resolve) => {
      setTimeout(() => {
        osc.stop();
        void context.close();
        resolve();
      }, 180);
    });
  }
}
