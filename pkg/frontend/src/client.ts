import { ApiClient, ApiError, FetchLike } from "./api";
import { keyToMove, isExpertOnlyKey } from "./keymap";
import { LiveRegionAnnouncer } from "./live-region";
import { AudioSink, PlaybackQueue } from "./player";
import type { Audience, ClientSessionState, NavEventDoc, NavMove } from "./types";

export interface ConnectOptions {
  baseUrl: string;
  audience: Audience;
  sink: AudioSink;
  announcer: LiveRegionAnnouncer;
  fetchLike?: FetchLike;
}

const EXPERT_HINT = "Relationship shortcuts (1-9) are expert-profile commands";

/**
 * Audio-first navigation client. Holds the mirrored session state, sends
 * moves, keeps the caption live region in sync, and plays every answered cue
 * through a strictly serial queue.
 */
export class NavigatorClient {
  readonly state: ClientSessionState;
  private api: ApiClient;
  private queue: PlaybackQueue;
  private announcer: LiveRegionAnnouncer;
  private sink: AudioSink;

  private constructor(
    api: ApiClient,
    queue: PlaybackQueue,
    sink: AudioSink,
    announcer: LiveRegionAnnouncer,
    initial: NavEventDoc,
    audience: Audience
  ) {
    this.api = api;
    this.queue = queue;
    this.sink = sink;
    this.announcer = announcer;
    this.state = {
      sessionId: initial.session,
      audience,
      focus: initial.focus,
      breadcrumb: initial.breadcrumb,
      lastCaption: initial.caption,
    };
  }

  /** Create a server session, announce and play its opening cue. */
  static async connect(options: ConnectOptions): Promise<NavigatorClient> {
    const api = new ApiClient(options.baseUrl, options.fetchLike);
    let initial: NavEventDoc;
    try {
      initial = await api.createSession(options.audience);
    } catch (error) {
      await options.sink.tone("error");
      options.announcer.announce(
        `Cannot reach the diagram server: ${(error as Error).message}`
      );
      throw error;
    }
    const client = new NavigatorClient(
      api,
      new PlaybackQueue(options.sink),
      options.sink,
      options.announcer,
      initial,
      options.audience
    );
    client.announceAndPlay(initial);
    return client;
  }

  /** Send one move; resolves with the server event, or null when the move
   *  was rejected (expert-only in novice mode, unknown move). The mirrored
   *  focus only changes on acknowledged moves. */
  async move(move: NavMove): Promise<NavEventDoc | null> {
    let event: NavEventDoc;
    try {
      event = await this.api.move(this.state.sessionId, move);
    } catch (error) {
      if (error instanceof ApiError && error.status === 403) {
        this.announcer.announce(EXPERT_HINT);
        return null;
      }
      if (error instanceof ApiError) {
        this.announcer.announce(`Move rejected: ${error.detail}`);
        return null;
      }
      await this.sink.tone("error");
      this.announcer.announce(`Lost the server: ${(error as Error).message}`);
      return null;
    }
    this.state.focus = event.focus;
    this.state.breadcrumb = event.breadcrumb;
    this.announceAndPlay(event);
    return event;
  }

  /** Translate a key press; unmapped keys do nothing, expert-only keys in a
   *  novice session produce a hint caption instead of a request. */
  async handleKey(key: string): Promise<NavEventDoc | null> {
    const move = keyToMove(key, this.state.audience);
    if (move === null) {
      if (isExpertOnlyKey(key, this.state.audience)) {
        this.announcer.announce(EXPERT_HINT);
      }
      return null;
    }
    return this.move(move);
  }

  /** Resolves when every queued cue has finished. */
  playbackIdle(): Promise<void> {
    return this.queue.idle();
  }

  private announceAndPlay(event: NavEventDoc): void {
    this.state.lastCaption = event.caption;
    this.announcer.announce(event.caption);
    void this.queue.enqueue(this.api.absolute(event.cue_url)).catch(async () => {
      // Audio fetch failure degrades to caption-only with a warning tone.
      await this.sink.tone("warning");
    });
  }
}
