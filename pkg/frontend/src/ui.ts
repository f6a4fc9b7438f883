/**
 * DOM rendering. The whole console re-renders from the view model on every
 * update; controllers carry the in-flight input state across renders.
 */

import type { ApiClient } from "./api.js";
import type { ScoreEntryController, VoteController, WeightPanelController } from "./controller.js";
import { SCORE_MAX, SCORE_MIN, SCORE_STEP, encodeScore } from "./lattice.js";
import type { DiffRow, ViewModel } from "./model.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderScoreSliders(
  vm: ViewModel,
  controller: ScoreEntryController,
  onSubmit: () => void,
): HTMLElement {
  const root = el("section", "score-entry");
  root.append(el("h2", undefined, "Score this plan"));
  vm.criteria.forEach((criterion, i) => {
    const row = el("div", "score-row");
    const label = el("label", "score-label", `${criterion.name} `);
    label.title = criterion.description;
    const slider = el("input") as HTMLInputElement;
    slider.type = "range";
    slider.min = String(SCORE_MIN);
    slider.max = String(SCORE_MAX);
    slider.step = String(SCORE_STEP);
    slider.value = encodeScore(controller.values[i as 0 | 1 | 2]);
    const number = el("input", "score-number") as HTMLInputElement;
    number.type = "number";
    number.min = String(SCORE_MIN);
    number.max = String(SCORE_MAX);
    number.step = String(SCORE_STEP);
    number.value = encodeScore(controller.values[i as 0 | 1 | 2]);
    const sync = (raw: number) => {
      const snapped = controller.setValue(i as 0 | 1 | 2, raw);
      slider.value = encodeScore(snapped);
      number.value = encodeScore(snapped);
    };
    slider.addEventListener("input", () => sync(Number(slider.value)));
    number.addEventListener("change", () => sync(Number(number.value)));
    row.append(label, slider, number);
    root.append(row);
  });
  const submit = el("button", "primary", "Submit scores");
  submit.disabled = vm.viewer.scored || !vm.viewer.isScorer;
  submit.addEventListener("click", onSubmit);
  root.append(submit);
  return root;
}

function renderDiffRow(row: DiffRow): HTMLElement {
  const node = el("li", `diff diff-${row.kind}`);
  if (row.kind === "replace") {
    const old = el("del", undefined, row.oldText ?? "");
    const fresh = el("span", "diff-new", ` ${row.newText ?? ""}`);
    node.append(old, fresh);
  } else if (row.kind === "delete") {
    node.append(el("del", undefined, row.oldText ?? ""));
  } else {
    node.append(el("span", "diff-new", `+ ${row.newText ?? ""}`));
  }
  return node;
}

export function renderProposals(
  vm: ViewModel,
  controller: VoteController,
  onVote: (choice: string) => void,
): HTMLElement {
  const root = el("section", "proposals");
  root.append(el("h2", undefined, "Proposals under vote"));
  for (const proposal of vm.proposals) {
    const card = el("article", "proposal-card");
    card.append(
      el("h3", undefined, `${proposal.proposalId} — ${proposal.author}`),
      el("p", "rationale", proposal.rationale),
      el(
        "p",
        "claims",
        `claimed deltas ${proposal.deltas.map((d) => d.toFixed(1)).join(" / ")}` +
          ` · claimed weighted gain ${proposal.clientGain.toFixed(3)}`,
      ),
    );
    const diff = el("ul", "diff-list");
    for (const row of proposal.diff) diff.append(renderDiffRow(row));
    card.append(diff);
    root.append(card);
  }
  const ballot = el("div", "ballot");
  for (const option of vm.ballotOptions) {
    const button = el("button", "ballot-option", option.label);
    button.disabled = !controller.canVote || vm.viewer.voted || !vm.viewer.isVoter;
    button.addEventListener("click", () => onVote(option.choice));
    ballot.append(button);
  }
  root.append(ballot);
  return root;
}

export function renderWeightPanel(
  vm: ViewModel,
  controller: WeightPanelController,
  onSubmit: () => void,
): HTMLElement {
  const root = el("section", "weights");
  root.append(el("h2", undefined, "Objective weights"));
  const preview = el("p", "weight-preview");
  const refresh = () => {
    const normalized = controller.preview();
    preview.textContent = normalized
      ? `normalized preview: ${normalized.map((w) => w.toFixed(3)).join(" / ")}`
      : "weights must be nonnegative with a positive sum";
  };
  vm.criteria.forEach((criterion, i) => {
    const row = el("div", "weight-row");
    const input = el("input") as HTMLInputElement;
    input.type = "number";
    input.min = "0";
    input.step = "any";
    input.value = String(controller.raw[i as 0 | 1 | 2]);
    input.addEventListener("input", () => {
      controller.setRaw(i as 0 | 1 | 2, Number(input.value));
      refresh();
    });
    row.append(el("label", undefined, `${criterion.name} `), input);
    root.append(row);
  });
  refresh();
  const submit = el("button", undefined, "Reweight (resets the convergence window)");
  submit.addEventListener("click", onSubmit);
  root.append(preview, submit);
  return root;
}

export function drawConvergenceChart(canvas: HTMLCanvasElement, vm: ViewModel): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const pad = 28;
  const plotW = width - 2 * pad;
  const plotH = height - 2 * pad;
  const n = Math.max(vm.aggregateSeries.length, 2);
  const x = (iteration: number) => pad + ((iteration - 1) / (n - 1)) * plotW;
  const y = (value: number) => pad + (1 - value / 10) * plotH;

  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad, plotW, plotH);

  // threshold band: the corridor within which a step counts as converging
  const last = vm.aggregateSeries.at(-1);
  if (last) {
    ctx.fillStyle = "rgba(90, 160, 255, 0.15)";
    const top = y(Math.min(10, last.aggregate + vm.threshold));
    const bottom = y(Math.max(0, last.aggregate - vm.threshold));
    ctx.fillRect(pad, top, plotW, bottom - top);
  }

  ctx.strokeStyle = "#2a6";
  ctx.beginPath();
  vm.aggregateSeries.forEach((point, i) => {
    if (i === 0) ctx.moveTo(x(point.iteration), y(point.aggregate));
    else ctx.lineTo(x(point.iteration), y(point.aggregate));
  });
  ctx.stroke();

  // reset glyphs: vertical dashed line after the iteration that preceded
  // the reweight
  ctx.strokeStyle = "#c60";
  ctx.setLineDash([4, 3]);
  for (const after of vm.resetsAfterIteration) {
    const px = x(after + 0.5);
    ctx.beginPath();
    ctx.moveTo(px, pad);
    ctx.lineTo(px, pad + plotH);
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

export function renderTerminalBanner(vm: ViewModel): HTMLElement | null {
  if (!vm.terminal) return null;
  const banner = el("section", `terminal terminal-${vm.terminal.kind}`);
  const label =
    vm.terminal.kind === "converged"
      ? "Converged — final plan"
      : vm.terminal.kind === "iteration_capped"
        ? "Iteration cap reached — final plan"
        : `Abandoned${vm.terminal.reason ? `: ${vm.terminal.reason}` : ""} — final plan`;
  banner.append(el("h2", undefined, label));
  const list = el("ol", "final-plan");
  for (const item of vm.planItems) list.append(el("li", undefined, item.text));
  banner.append(list);
  return banner;
}

export function renderStatus(vm: ViewModel): HTMLElement {
  const root = el("header", "status");
  root.append(
    el("h1", undefined, vm.goalTitle || vm.sessionId),
    el("p", "phase", `phase: ${vm.phase} · plan revision ${vm.planRevision}`),
    el("p", "cta", vm.callToAction),
  );
  const plan = el("ol", "plan");
  for (const item of vm.planItems) {
    const li = el("li", undefined, item.text);
    li.dataset.itemId = item.item_id;
    plan.append(li);
  }
  root.append(plan);
  return root;
}

export interface ConsoleCallbacks {
  submitScores: () => void;
  castBallot: (choice: string) => void;
  submitWeights: () => void;
}

export function renderConsole(
  root: HTMLElement,
  vm: ViewModel,
  controllers: {
    scores: ScoreEntryController;
    vote: VoteController;
    weights: WeightPanelController;
  },
  callbacks: ConsoleCallbacks,
): void {
  root.replaceChildren();
  root.append(renderStatus(vm));
  const banner = renderTerminalBanner(vm);
  if (banner) {
    root.append(banner);
  } else {
    if (vm.phase === "awaiting_scores" && vm.viewer.isScorer) {
      root.append(renderScoreSliders(vm, controllers.scores, callbacks.submitScores));
    }
    if (vm.phase === "awaiting_votes") {
      root.append(renderProposals(vm, controllers.vote, callbacks.castBallot));
    }
    if (vm.phase === "awaiting_scores" || vm.phase === "awaiting_proposals") {
      root.append(renderWeightPanel(vm, controllers.weights, callbacks.submitWeights));
    }
  }
  const canvas = document.createElement("canvas");
  canvas.width = 640;
  canvas.height = 240;
  canvas.className = "chart";
  root.append(canvas);
  drawConvergenceChart(canvas, vm);
}
