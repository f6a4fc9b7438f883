/**
 * Bootstrap: read the connection details from the URL fragment
 * (#api=...&session=...&participant=...&token=...) or a login form, then run
 * the long-poll loop: whenever events past the cursor arrive, refetch the
 * snapshot and re-render everything from scratch.
 */

import { ApiCallError, ApiClient, type JournalEvent } from "./api.js";
import { ScoreEntryController, VoteController, WeightPanelController } from "./controller.js";
import { buildViewModel } from "./model.js";
import { renderConsole } from "./ui.js";

interface Connection {
  api: string;
  session: string;
  participant: string;
  token: string;
}

function connectionFromFragment(): Connection | null {
  const params = new URLSearchParams(window.location.hash.replace(/^#/, ""));
  const api = params.get("api") ?? window.location.origin;
  const session = params.get("session");
  const participant = params.get("participant");
  const token = params.get("token");
  if (!session || !participant || !token) return null;
  return { api, session, participant, token };
}

function renderLogin(root: HTMLElement): void {
  root.innerHTML = `
    <section class="login">
      <h1>indigo console</h1>
      <p>Join a session as its human expert.</p>
      <label>API base <input id="f-api" value="${window.location.origin}"></label>
      <label>Session id <input id="f-session"></label>
      <label>Participant id <input id="f-participant" value="expert"></label>
      <label>Token <input id="f-token" type="password"></label>
      <button id="f-join">Join</button>
    </section>`;
  const field = (id: string) => (root.querySelector(`#${id}`) as HTMLInputElement).value.trim();
  root.querySelector("#f-join")?.addEventListener("click", () => {
    const fragment = new URLSearchParams({
      api: field("f-api"),
      session: field("f-session"),
      participant: field("f-participant"),
      token: field("f-token"),
    });
    window.location.hash = fragment.toString();
    window.location.reload();
  });
}

async function runConsole(root: HTMLElement, connection: Connection): Promise<void> {
  const client = new ApiClient(
    connection.api,
    connection.session,
    connection.participant,
    connection.token,
  );
  const controllers = {
    scores: new ScoreEntryController(),
    vote: new VoteController(),
    weights: new WeightPanelController(),
  };
  const allEvents: JournalEvent[] = [];
  let cursor = -1;
  let lastIterationIndex = 0;

  const errorBar = document.createElement("p");
  errorBar.className = "error-bar";
  const showError = (error: unknown) => {
    errorBar.textContent =
      error instanceof ApiCallError ? `${error.code}: ${error.message}` : String(error);
    root.prepend(errorBar);
  };

  const refresh = async () => {
    const snapshot = await client.snapshot();
    const iterationIndex = snapshot.current?.index ?? 0;
    if (iterationIndex !== lastIterationIndex) {
      controllers.vote.reopen();
      controllers.scores.reset();
      lastIterationIndex = iterationIndex;
    }
    const vm = buildViewModel(snapshot, allEvents, connection.participant);
    renderConsole(root, vm, controllers, {
      submitScores: () => controllers.scores.submit(client).then(refresh).catch(showError),
      castBallot: (choice) =>
        controllers.vote
          .cast(client, choice)
          .then(refresh)
          .catch((error) => {
            refresh().catch(() => {});
            showError(error);
          }),
      submitWeights: () => controllers.weights.submit(client).then(refresh).catch(showError),
    });
  };

  // initial catch-up, then long-poll forever
  const backfill = await client.events(cursor, 0);
  allEvents.push(...backfill);
  cursor = backfill.at(-1)?.seq ?? -1;
  await refresh();

  for (;;) {
    try {
      const fresh = await client.events(cursor);
      if (fresh.length > 0) {
        allEvents.push(...fresh);
        cursor = fresh.at(-1)?.seq ?? cursor;
        await refresh();
      }
    } catch (error) {
      showError(error);
      await new Promise((resolve) => setTimeout(resolve, 2000));
    }
  }
}

export function start(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const connection = connectionFromFragment();
  if (!connection) {
    renderLogin(root);
    return;
  }
  runConsole(root, connection).catch((error) => {
    root.textContent = `console failed: ${error}`;
  });
}

start();
