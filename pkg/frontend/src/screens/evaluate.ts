// Evaluation screen: anonymized peer summaries with up/down votes. Author
// identity is never rendered; the API does not even send it.

import { ApiClient, ApiError } from "../api.js";
import { announceAwards, showToast } from "../toast.js";
import type { Session } from "../types.js";

export async function evaluateScreen(
  api: ApiClient,
  session: Session,
  root: HTMLElement,
): Promise<HTMLElement> {
  const screen = document.createElement("section");
  screen.className = "screen evaluate-screen";
  const heading = document.createElement("h2");
  heading.textContent = "Evaluate summaries";
  screen.appendChild(heading);
  const hint = document.createElement("p");
  hint.className = "hint";
  hint.textContent = "Summaries are anonymous. Voting earns you a point.";
  screen.appendChild(hint);

  const { tasks } = await api.tasks();
  const list = document.createElement("ul");
  list.className = "peer-summaries";
  let shown = 0;
  for (const task of tasks) {
    const { summaries } = await api.taskSummaries(task.id, session.playerId);
    for (const summary of summaries) {
      list.appendChild(summaryRow(api, session, root, task.fqname, summary.id, summary.text));
      shown += 1;
      if (shown >= 8) break;
    }
    if (shown >= 8) break;
  }
  if (shown === 0) {
    const empty = document.createElement("p");
    empty.textContent = "Nothing to evaluate right now — check back soon.";
    screen.appendChild(empty);
  }
  screen.appendChild(list);
  return screen;
}

function summaryRow(
  api: ApiClient,
  session: Session,
  root: HTMLElement,
  fqname: string,
  submissionId: string,
  text: string,
): HTMLElement {
  const row = document.createElement("li");
  row.className = "peer-summary";
  row.dataset.submissionId = submissionId;

  const method = document.createElement("span");
  method.className = "peer-method";
  method.textContent = fqname;
  const body = document.createElement("blockquote");
  body.className = "peer-text";
  body.textContent = text;

  const controls = document.createElement("span");
  controls.className = "vote-controls";
  for (const direction of ["up", "down"] as const) {
    const button = document.createElement("button");
    button.className = `vote vote-${direction}`;
    button.textContent = direction === "up" ? "▲" : "▼";
    button.addEventListener("click", async () => {
      try {
        const result = await api.vote(session.playerId, submissionId, direction);
        showToast(root, "Thanks for evaluating — +1 point", "success");
        announceAwards(root, result.awards);
        row.classList.add("voted");
      } catch (err) {
        const message = err instanceof ApiError ? err.message : String(err);
        showToast(root, message, "error");
      }
    });
    controls.appendChild(button);
  }

  row.append(method, body, controls);
  return row;
}
