// Typed client for the game API. The client is a dumb pipe: every number
// shown in the UI (points, ranks, consensus feedback, estimates) comes
// from the server as-is.

export interface EditableHeadline {
  headline_id: string;
  text: string;
  tokens: string[];
  replaceable: number[];
  category: string;
  source_name: string;
  article_url: string;
  published_at: string;
}

export interface EditResponse {
  edit_id: string;
  estimate: number | null;
  estimate_source: string | null;
}

export interface RateQueueItem {
  edit_id: string;
  text: string;
  category: string;
  source_name: string;
  published_at: string;
}

export interface RatingResponse {
  accepted: boolean;
  count: number;
  settled: boolean;
  feedback: 'close' | 'higher' | 'lower' | null;
}

export interface BoardRow {
  rank: number;
  player: string;
  value: number;
}

export interface FunnyRow {
  rank: number;
  edit_id: string;
  editor: string;
  text: string;
  value: number;
}

export interface Leaderboards {
  points_board: BoardRow[];
  mean_rating_board: BoardRow[];
  top10_funny: FunnyRow[];
}

export interface EditEntry {
  edit_id: string;
  text: string;
  mean_grade: number | null;
  ratings: number;
  created_at: string;
  state: string;
}

export interface MyFeedback {
  player_id: string;
  standing: string;
  editor: { top5: EditEntry[]; recent10: EditEntry[]; abusive: EditEntry[] };
  rater: {
    histogram: Record<string, number>;
    pct_over: number;
    pct_under: number;
    recent10: { edit_id: string; grade: number; at: string }[];
  };
  counts: { edits: number; ratings: number };
  qualified: boolean;
  advice: { more_ratings: number; more_edits: number };
}

export class ApiError extends Error {
  constructor(public code: string, message: string, public status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(private base: string, private token: string | null = null) {}

  setToken(token: string): void {
    this.token = token;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { 'Content-Type': 'application/json' };
    if (this.token) headers['X-Session'] = this.token;
    const res = await fetch(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      let code = 'GAME_ERROR';
      let message = res.statusText;
      try {
        const payload = await res.json();
        code = payload.error ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(code, message, res.status);
    }
    return res.json() as Promise<T>;
  }

  createPlayer(displayName: string): Promise<{ player_id: string }> {
    return this.request('POST', '/players', { display_name: displayName });
  }

  createSession(playerId: string): Promise<{ token: string; player_id: string }> {
    return this.request('POST', '/session', { player_id: playerId });
  }

  editable(category?: string): Promise<{ items: EditableHeadline[] }> {
    const query = category ? `?category=${encodeURIComponent(category)}` : '';
    return this.request('GET', `/headlines/editable${query}`);
  }

  submitEdit(headlineId: string, index: number, word: string): Promise<EditResponse> {
    return this.request('POST', '/edits', {
      headline_id: headlineId,
      index,
      word,
    });
  }

  rateQueue(k = 10, category?: string): Promise<{ items: RateQueueItem[] }> {
    const query = category ? `&category=${encodeURIComponent(category)}` : '';
    return this.request('GET', `/rate-queue?k=${k}${query}`);
  }

  submitRating(editId: string, grade: number): Promise<RatingResponse> {
    return this.request('POST', '/ratings', { edit_id: editId, grade });
  }

  flag(editId: string): Promise<{ ok: boolean }> {
    return this.request('POST', '/flags', { edit_id: editId });
  }

  skip(headlineId: string): Promise<{ ok: boolean }> {
    return this.request('POST', '/skips', { headline_id: headlineId });
  }

  leaderboards(): Promise<Leaderboards> {
    return this.request('GET', '/leaderboards');
  }

  myFeedback(): Promise<MyFeedback> {
    return this.request('GET', '/me/feedback');
  }
}
