// Transient notifications and the mystery-box modal.

import type { Award } from "./types.js";

export function showToast(root: HTMLElement, text: string, kind = "info"): HTMLElement {
  const toast = document.createElement("div");
  toast.className = `toast toast-${kind}`;
  toast.setAttribute("role", "status");
  toast.textContent = text;
  root.appendChild(toast);
  setTimeout(() => toast.remove(), 6000);
  return toast;
}

export function showMysteryModal(root: HTMLElement, award: Award): HTMLElement {
  const overlay = document.createElement("div");
  overlay.className = "mystery-overlay";
  const box = document.createElement("div");
  box.className = "mystery-box";
  const title = document.createElement("h2");
  title.textContent = "Mystery box!";
  const body = document.createElement("p");
  const level = award.reason.replace("mystery_level_", "");
  body.textContent =
    award.points !== undefined
      ? `Reaching level ${level} earned you a surprise: +${award.points} points!`
      : `Reaching level ${level} earned you the "${award.badge}" badge!`;
  const close = document.createElement("button");
  close.textContent = "Claim";
  close.addEventListener("click", () => overlay.remove());
  box.append(title, body, close);
  overlay.appendChild(box);
  root.appendChild(overlay);
  return overlay;
}

export function announceAwards(root: HTMLElement, awards: Award[]): void {
  for (const award of awards) {
    if (award.reason.startsWith("mystery_level_")) showMysteryModal(root, award);
  }
}
