/**
 * Browser wiring: one render loop over #app, one in-flight submission at
 * a time, clicks resolve through the server's legal-action indices.
 */

import { SessionClient, createSession } from "./client.js";
import { renderSession } from "./render.js";

function baseUrl(): string {
  const input = document.querySelector<HTMLInputElement>("#base-url");
  return (input?.value || window.location.origin).replace(/\/$/, "");
}

export async function start(): Promise<void> {
  const root = document.querySelector<HTMLDivElement>("#app");
  if (!root) throw new Error("missing #app element");
  const params = new URLSearchParams(window.location.search);
  const url = baseUrl();

  let client: SessionClient;
  const existing = params.get("session");
  const seat = Number(params.get("seat") ?? "0");
  if (existing) {
    client = new SessionClient(url, existing, seat);
  } else {
    const players = Number(params.get("players") ?? "2");
    const variant = (params.get("variant") ?? "basic") as "full" | "basic" | "poker";
    const bots = Array.from({ length: players - 1 }, (_, i) => i + 1);
    const info = await createSession(url, { players, variant, seed: Date.now() % 100000 }, bots);
    client = new SessionClient(url, info.session, 0);
  }
  await client.join();

  let busy = false;
  const draw = () => {
    root.innerHTML = renderSession(client.state);
  };

  root.addEventListener("click", async (ev) => {
    const target = ev.target as HTMLElement;
    const idx = target.dataset?.action;
    if (idx === undefined || busy) return;
    busy = true;
    try {
      const action = client.legal[Number(idx)];
      const outcome = await client.submit(action);
      if (outcome.refetched) {
        // someone acted first; the refreshed state is already in place
      }
    } catch (err) {
      console.error(err);
      await client.refresh();
    } finally {
      busy = false;
      draw();
    }
  });

  draw();
  // poll while waiting on other seats
  setInterval(async () => {
    if (busy) return;
    const before = client.state.seq;
    await client.refresh().catch(() => undefined);
    if (client.state.seq !== before) draw();
  }, 1500);
}

if (typeof document !== "undefined") {
  start().catch((err) => {
    console.error(err);
    const root = document.querySelector("#app");
    if (root) root.textContent = String(err);
  });
}
