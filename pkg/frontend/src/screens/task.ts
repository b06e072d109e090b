// Task screen: highlighted method code, live point preview (including the
// double-points window), summary box, submit.

import { ApiClient, ApiError } from "../api.js";
import { codeBlock } from "../highlight.js";
import { announceAwards, showToast } from "../toast.js";
import type { Session, Task } from "../types.js";

export async function taskScreen(
  api: ApiClient,
  session: Session,
  root: HTMLElement,
  taskId?: string,
): Promise<HTMLElement> {
  const me = await api.player(session.playerId);
  const { tasks } = await api.tasks(me.level);
  const screen = document.createElement("section");
  screen.className = "screen task-screen";
  if (tasks.length === 0) {
    screen.textContent = "No open tasks at your level yet.";
    return screen;
  }
  const task = (taskId && tasks.find((t) => t.id === taskId)) || tasks[0];

  const heading = document.createElement("h2");
  heading.textContent = task.fqname + (task.starred ? " ⭐" : "");
  screen.appendChild(heading);
  screen.appendChild(codeBlock(task.code));

  const preview = document.createElement("p");
  preview.className = "point-preview";
  preview.textContent = previewText(task);
  screen.appendChild(preview);

  const textarea = document.createElement("textarea");
  textarea.className = "summary-input";
  textarea.placeholder = "Describe what this method does…";
  screen.appendChild(textarea);

  const submit = document.createElement("button");
  submit.className = "submit-summary";
  submit.textContent = "Submit summary";
  submit.addEventListener("click", async () => {
    submit.disabled = true;
    try {
      const result = await api.submitSummary(session.playerId, task.id, textarea.value);
      const doubled = result.doubled ? " (doubled for being an early summarizer!)" : "";
      showToast(root, `You earned ${result.points_awarded} points${doubled}`, "success");
      announceAwards(root, result.awards);
      textarea.value = "";
    } catch (err) {
      const message = err instanceof ApiError ? err.message : String(err);
      showToast(root, message, "error");
    } finally {
      submit.disabled = false;
    }
  });
  screen.appendChild(submit);
  return screen;
}

function previewText(task: Task): string {
  const p = task.points_preview;
  const star = p.starred ? " Starred task: +50% bonus included." : "";
  if (p.doubled) {
    return `Earn ${p.award} points — double-points window is open for the first three summarizers!${star}`;
  }
  return `Earn ${p.award} points.${star}`;
}
