/** DOM wiring for the reviewer client. */

import { ApiClient } from "./api.js";
import { dashboardRows } from "./dashboard.js";
import { charDiff } from "./diff.js";
import { SESSION_LIMIT_MS, TARGET_LABELS, type Verdict } from "./model.js";
import { ReviewSession } from "./session.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

function renderDiff(container: HTMLElement, before: string, after: string): void {
  container.textContent = "";
  for (const segment of charDiff(before, after)) {
    const span = document.createElement("span");
    span.className = `diff-${segment.op}`;
    span.textContent = segment.text;
    container.appendChild(span);
  }
}

export function startApp(): void {
  const params = new URLSearchParams(window.location.search);
  const annotator = params.get("annotator") ?? "reviewer";
  const loop = params.get("loop");
  const api = new ApiClient("");
  const session = new ReviewSession(api, annotator);

  const notice = $("notice");
  const hsBox = $<HTMLTextAreaElement>("hs-edit");
  const cnBox = $<HTMLTextAreaElement>("cn-edit");
  const hsDiff = $("hs-diff");
  const cnDiff = $("cn-diff");
  const submitBtn = $<HTMLButtonElement>("submit");
  const labelSelect = $<HTMLSelectElement>("label");

  for (const target of TARGET_LABELS) {
    const option = document.createElement("option");
    option.value = target;
    option.textContent = target;
    labelSelect.appendChild(option);
  }

  const say = (text: string) => {
    notice.textContent = text;
  };

  const sync = () => {
    const model = session.current;
    if (!model) return;
    model.hsEdited = hsBox.value;
    model.cnEdited = cnBox.value;
    model.label = labelSelect.value || null;
    renderDiff(hsDiff, model.hsOriginal, model.hsEdited);
    renderDiff(cnDiff, model.cnOriginal, model.cnEdited);
    const check = model.validate();
    submitBtn.disabled = !check.ok;
    submitBtn.title = check.ok ? "" : check.reason ?? "";
  };

  const show = () => {
    const model = session.current;
    const panel = $("review-panel");
    if (!model) {
      panel.classList.add("hidden");
      return;
    }
    panel.classList.remove("hidden");
    $("hs-original").textContent = model.hsOriginal;
    $("cn-original").textContent = model.cnOriginal;
    hsBox.value = model.hsEdited;
    cnBox.value = model.cnEdited;
    labelSelect.value = "";
    for (const button of document.querySelectorAll<HTMLButtonElement>("[data-verdict]")) {
      button.classList.remove("selected");
    }
    sync();
  };

  const next = async () => {
    const event = await session.fetchNext();
    if (event.kind === "empty") say("queue is empty; try again soon");
    else if (event.kind === "error") say(event.detail);
    else say("");
    show();
  };

  const pickVerdict = (verdict: Verdict) => {
    const model = session.current;
    if (!model) return;
    model.verdict = verdict;
    for (const button of document.querySelectorAll<HTMLButtonElement>("[data-verdict]")) {
      button.classList.toggle("selected", button.dataset.verdict === verdict);
    }
    sync();
  };

  for (const button of document.querySelectorAll<HTMLButtonElement>("[data-verdict]")) {
    button.addEventListener("click", () => pickVerdict(button.dataset.verdict as Verdict));
  }
  document.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLTextAreaElement) return;
    if (event.key === "a") pickVerdict("UNTOUCHED");
    if (event.key === "m") pickVerdict("MODIFIED");
    if (event.key === "d") pickVerdict("DISCARDED");
  });

  hsBox.addEventListener("input", sync);
  cnBox.addEventListener("input", sync);
  labelSelect.addEventListener("change", sync);

  submitBtn.addEventListener("click", async () => {
    const event = await session.submit();
    if (event.kind === "submitted") {
      say("verdict saved");
      await next();
    } else if (event.kind === "reassigned") {
      say(`pair reassigned: ${event.detail}`);
      await next();
    } else if (event.kind === "rejected") {
      say(`rejected: ${event.detail}`);
      show();
    } else if (event.kind === "error") {
      say(event.detail);
      show();
    }
  });
  $("skip").addEventListener("click", next);

  // session-time banner per the well-being guidance
  window.setInterval(() => {
    if (session.timer.overLimit()) {
      $("session-banner").classList.remove("hidden");
    }
  }, 60_000);
  void SESSION_LIMIT_MS;

  // dashboard polling
  const pollDashboard = async () => {
    if (!loop) return;
    try {
      const dashboard = await api.dashboard(loop);
      const table = $("dashboard");
      table.textContent = "";
      for (const row of dashboardRows(dashboard)) {
        const tr = document.createElement("tr");
        const th = document.createElement("th");
        th.textContent = row.label;
        const td = document.createElement("td");
        td.textContent = row.value;
        tr.append(th, td);
        table.appendChild(tr);
      }
    } catch {
      // dashboard is best-effort; keep reviewing
    }
  };
  if (loop) {
    void pollDashboard();
    window.setInterval(pollDashboard, 5000);
  }

  void next();
}

startApp();
