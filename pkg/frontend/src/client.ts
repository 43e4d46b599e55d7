/**
 * Thin HTTP client for the pont session service.
 *
 * All legality lives server-side: the client only submits actions taken
 * verbatim from the last state's `legal` list, tagged with its seq.  A
 * stale-seq rejection triggers a refetch so the local state can never
 * drift from the server's.
 */

import type { GameConfigBody, LegalAction, SessionInfo, SessionState } from "./protocol.js";

export class ServiceError extends Error {
  constructor(message: string, readonly status: number, readonly detail?: unknown) {
    super(message);
  }
}

async function readDetail(resp: Response): Promise<unknown> {
  const body = (await resp.json()) as { detail?: unknown };
  return body.detail ?? body;
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail: unknown;
    try {
      detail = await readDetail(resp);
    } catch {
      detail = undefined;
    }
    throw new ServiceError(`HTTP ${resp.status}`, resp.status, detail);
  }
  return (await resp.json()) as T;
}

export async function createSession(
  baseUrl: string,
  config: GameConfigBody,
  botSeats: number[],
): Promise<SessionInfo> {
  const resp = await fetch(`${baseUrl}/v1/sessions`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ v: 1, config, bot_seats: botSeats }),
  });
  return asJson<SessionInfo>(resp);
}

export interface SubmitOutcome {
  state: SessionState;
  /** true when the submit was rejected as stale and the state refetched */
  refetched: boolean;
}

export class SessionClient {
  private state_: SessionState | null = null;

  constructor(
    readonly baseUrl: string,
    readonly session: string,
    readonly seat: number,
  ) {}

  get state(): SessionState {
    if (!this.state_) throw new Error("state not fetched yet");
    return this.state_;
  }

  get seq(): number {
    return this.state.seq;
  }

  get legal(): LegalAction[] {
    return this.state.legal;
  }

  async join(): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/v1/sessions/${this.session}/join`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ v: 1, seat: this.seat }),
    });
    await asJson(resp);
    await this.refresh();
  }

  async refresh(): Promise<SessionState> {
    const resp = await fetch(
      `${this.baseUrl}/v1/sessions/${this.session}/state?seat=${this.seat}`,
    );
    this.state_ = await asJson<SessionState>(resp);
    return this.state_;
  }

  /**
   * Submit one of the server-offered actions.  Actions not present in
   * the current legal list are refused locally; a stale seq refetches
   * and reports `refetched` so the caller re-renders and retries.
   */
  async submit(action: LegalAction): Promise<SubmitOutcome> {
    const offered = this.legal.some(
      (a) => JSON.stringify(a) === JSON.stringify(action),
    );
    if (!offered) {
      throw new Error(`action ${JSON.stringify(action)} was not offered by the server`);
    }
    const resp = await fetch(
      `${this.baseUrl}/v1/sessions/${this.session}/actions`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ v: 1, seat: this.seat, seq: this.seq, action }),
      },
    );
    if (resp.status === 409) {
      await resp.json().catch(() => undefined);
      const state = await this.refresh();
      return { state, refetched: true };
    }
    this.state_ = await asJson<SessionState>(resp);
    return { state: this.state_, refetched: false };
  }
}
