/**
 * Pure render functions: session state in, HTML out.  Buttons carry a
 * data-action index into the server's legal list, so clicking can only
 * ever submit a server-offered action.
 */

import type { LegalAction, SessionState } from "./protocol.js";

const esc = (s: unknown): string =>
  String(s).replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

function actionLabel(action: LegalAction): string {
  switch (action.type) {
    case "bid":
      return action.name
        ? `${action.bid} (${action.name})${action.closes ? " — closes" : ""}`
        : `${action.bid}`;
    case "pass":
      return "pass";
    case "close":
      return "close";
    case "declare":
      return action.misere
        ? "declare misère"
        : `declare ${action.tricks} tricks, ${action.trump ?? "notrump"}`;
    case "increase":
      return "increase (one more card each)";
    case "play":
      return `play ${action.card}`;
    case "discard":
      return `discard ${action.card}`;
    case "next":
      return "next deal";
    default:
      return `${action.type}${action.cost !== undefined ? ` (${action.cost})` : ""}`;
  }
}

export function renderAuction(state: SessionState): string {
  const bids = state.legal
    .map((a, i) => ({ a, i }))
    .filter(({ a }) => a.type === "bid");
  const controls = state.legal
    .map((a, i) => ({ a, i }))
    .filter(({ a }) => a.type === "pass" || a.type === "close");
  const standing = Object.entries(state.view.bids)
    .map(([seat, bid]) => `<li>seat ${esc(seat)}: ${esc(bid ?? "—")}</li>`)
    .join("");
  const buttons = bids
    .map(
      ({ a, i }) =>
        `<button data-action="${i}" class="bid">${esc(actionLabel(a))}</button>`,
    )
    .join("");
  const extra = controls
    .map(
      ({ a, i }) =>
        `<button data-action="${i}" class="${a.type}">${esc(actionLabel(a))}</button>`,
    )
    .join("");
  return `<section class="auction">
  <h2>auction — round ${state.view.round}</h2>
  <ul class="standing">${standing}</ul>
  <div class="bid-panel">${buttons}</div>
  <div class="controls">${extra}</div>
</section>`;
}

export function renderHand(state: SessionState): string {
  const own = state.view.hands[String(state.seat)];
  const cards = Array.isArray(own) ? own : [];
  const legalCards = new Map<string, number>();
  state.legal.forEach((a, i) => {
    if ((a.type === "play" || a.type === "discard") && a.card) {
      legalCards.set(a.card, i);
    }
  });
  const pips = cards
    .map((c) => {
      const idx = legalCards.get(c);
      return idx === undefined
        ? `<span class="card dead">${esc(c)}</span>`
        : `<button data-action="${idx}" class="card">${esc(c)}</button>`;
    })
    .join("");
  return `<section class="hand"><h2>your hand</h2>${pips}</section>`;
}

export function renderTable(state: SessionState): string {
  const v = state.view;
  const trick = v.trick
    .map(([seat, card]) => `<li>seat ${seat}: ${esc(card)}</li>`)
    .join("");
  const others = Object.entries(v.hands)
    .filter(([seat]) => Number(seat) !== state.seat)
    .map(([seat, hand]) =>
      Array.isArray(hand)
        ? `<li class="exposed">seat ${esc(seat)} (face up): ${hand.map(esc).join(" ")}</li>`
        : `<li>seat ${esc(seat)}: ${esc(hand)} cards</li>`,
    )
    .join("");
  const contract =
    v.declarer === null
      ? ""
      : `<p>declarer seat ${v.declarer}, ${
          v.is_misere ? "misère" : `${v.tricks_declared} tricks, trump ${v.trump ?? "none"}`
        }</p>`;
  return `<section class="table">
  <h2>${esc(v.phase)}${v.turn !== null ? ` — seat ${v.turn} to act` : ""}</h2>
  ${contract}
  <ul class="opponents">${others}</ul>
  <ol class="trick">${trick}</ol>
</section>`;
}

export function renderScores(state: SessionState): string {
  const rows = Object.keys(state.scores)
    .sort()
    .map(
      (seat) =>
        `<tr><td>seat ${esc(seat)}</td><td>${esc(state.scores[seat])}</td>` +
        `<td>${esc(state.rewards[seat].toFixed(2))}</td></tr>`,
    )
    .join("");
  const result = state.view.result
    ? `<pre class="result">${esc(JSON.stringify(state.view.result))}</pre>`
    : "";
  return `<section class="scores">
  <h2>scores after ${state.games_played} game(s)</h2>
  <table><thead><tr><th>seat</th><th>score</th><th>reward</th></tr></thead>
  <tbody>${rows}</tbody></table>
  ${result}
</section>`;
}

export function renderSession(state: SessionState): string {
  const pieces = [renderTable(state), renderScores(state), renderHand(state)];
  if (state.view.phase === "auction") {
    pieces.unshift(renderAuction(state));
  } else if (state.legal.length) {
    const buttons = state.legal
      .map(
        (a, i) =>
          `<button data-action="${i}" class="${esc(a.type)}">${esc(actionLabel(a))}</button>`,
      )
      .join("");
    pieces.push(`<section class="actions">${buttons}</section>`);
  }
  return pieces.join("\n");
}
