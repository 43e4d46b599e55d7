/** v1 message shapes exchanged with the pont session service. */

export interface GameConfigBody {
  players?: number;
  partnerships?: boolean;
  variant?: "full" | "basic" | "poker";
  seed?: number;
  strict_scoring?: boolean;
}

export interface SessionInfo {
  v: 1;
  session: string;
  players: number;
  variant: string;
  bot_seats: number[];
  free_seats: number[];
  seq: number;
}

export type LegalAction = {
  type: string;
  bid?: string;
  name?: string;
  card?: string;
  trump?: string | null;
  tricks?: number;
  misere?: boolean;
  closes?: boolean;
  cost?: number;
  chips?: number;
};

export interface GameView {
  v: 1;
  phase: string;
  turn: number | null;
  dealer: number;
  players: number;
  variant: string;
  partnerships: boolean;
  hands: Record<string, string[] | number>;
  bids: Record<string, string | null>;
  passed: number[];
  closer: number | null;
  declarer: number | null;
  winning_bid: string | null;
  round: number;
  upgrades_used: number;
  cards_per_hand: number;
  trump: string | null;
  tricks_declared: number;
  is_misere: boolean;
  trick: [number, string][];
  tricks_won: Record<string, number>;
  result: Record<string, unknown> | null;
}

export interface SessionState {
  v: 1;
  session: string;
  seq: number;
  seat: number;
  bot_seats: number[];
  scores: Record<string, number>;
  rewards: Record<string, number>;
  games_played: number;
  view: GameView;
  legal: LegalAction[];
}

export interface StaleSeqDetail {
  error: "stale-seq";
  seq: number;
}
