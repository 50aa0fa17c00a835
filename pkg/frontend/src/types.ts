// Wire types mirrored from the navigation service's JSON API.

export type Audience = "novice" | "expert";

export type MoveName =
  | "next_sibling"
  | "prev_sibling"
  | "into"
  | "out"
  | "follow_relationship"
  | "repeat_cue"
  | "where_am_i";

export interface NavMove {
  move: MoveName;
  index?: number;
}

/** One navigation answer from the server; every event carries a cue. */
export interface NavEventDoc {
  session: string;
  focus: string;
  caption: string;
  breadcrumb: string;
  cue_id: string;
  cue_url: string;
  moved: boolean;
  boundary: boolean;
  audience?: Audience;
}

export interface SessionStateDoc {
  session: string;
  focus: string;
  breadcrumb: string;
  audience: Audience;
  history_length: number;
}

/** Client-side mirror of the server session; focus must match the server
 *  after every acknowledged move. */
export interface ClientSessionState {
  sessionId: string;
  audience: Audience;
  focus: string;
  breadcrumb: string;
  lastCaption: string;
}
