/** Anything with assignable text content; DOM elements qualify, tests pass
 *  plain objects. */
export interface TextTarget {
  textContent: string | null;
}

/**
 * Mirrors captions into an aria-live region so screen readers announce them.
 * Clearing before writing makes repeated identical captions re-announce.
 */
export class LiveRegionAnnouncer {
  private history: string[] = [];

  constructor(private target: TextTarget) {}

  announce(text: string): void {
    this.target.textContent = "";
    this.target.textContent = text;
    this.history.push(text);
  }

  get announcements(): readonly string[] {
    return this.history;
  }
}
