// Single-page app shell: registration form, nav, and hash routing between
// the task, evaluation, profile, and leaderboard screens.

import { ApiClient } from "./api.js";
import { createMockFetch } from "./mock.js";
import { evaluateScreen } from "./screens/evaluate.js";
import { leaderboardScreen } from "./screens/leaderboard.js";
import { profileScreen } from "./screens/profile.js";
import { taskScreen } from "./screens/task.js";
import type { Session } from "./types.js";

declare global {
  interface Window {
    CODESUM_API?: string;
  }
}

function apiBase(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") || window.CODESUM_API || "http://127.0.0.1:8080";
}

export function createClient(): ApiClient {
  const params = new URLSearchParams(window.location.search);
  if (params.get("mock") === "1") {
    return new ApiClient("http://mock", createMockFetch());
  }
  return new ApiClient(apiBase());
}

export async function mountApp(root: HTMLElement, api: ApiClient): Promise<void> {
  root.innerHTML = "";
  const header = document.createElement("header");
  const title = document.createElement("h1");
  title.textContent = "Summary Quest";
  header.appendChild(title);
  root.appendChild(header);

  const main = document.createElement("main");
  root.appendChild(main);

  const config = await api.config();
  const session = await registerFlow(main, api, config.tiers);
  await showShell(root, main, api, session);
}

function registerFlow(main: HTMLElement, api: ApiClient, tiers: string[]): Promise<Session> {
  return new Promise((resolve) => {
    const form = document.createElement("form");
    form.className = "register-form";
    const nameInput = document.createElement("input");
    nameInput.name = "name";
    nameInput.placeholder = "Display name";
    nameInput.required = true;
    const tierSelect = document.createElement("select");
    tierSelect.name = "tier";
    for (const tier of tiers) {
      const option = document.createElement("option");
      option.value = tier;
      option.textContent = `${tier} months of experience`;
      tierSelect.appendChild(option);
    }
    const button = document.createElement("button");
    button.type = "submit";
    button.textContent = "Play";
    form.append(nameInput, tierSelect, button);
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      const player = await api.register(nameInput.value, tierSelect.value);
      form.remove();
      resolve({ playerId: player.id, name: player.name, tier: player.tier });
    });
    main.appendChild(form);
  });
}

async function showShell(
  root: HTMLElement,
  main: HTMLElement,
  api: ApiClient,
  session: Session,
): Promise<void> {
  const nav = document.createElement("nav");
  nav.className = "main-nav";
  const routes: Array<[string, string]> = [
    ["#tasks", "Summarize"],
    ["#evaluate", "Evaluate"],
    ["#profile", "Profile"],
    ["#leaderboard", "Leaderboard"],
  ];
  for (const [hash, label] of routes) {
    const link = document.createElement("a");
    link.href = hash;
    link.textContent = label;
    nav.appendChild(link);
  }
  root.insertBefore(nav, main);

  const render = async () => {
    main.innerHTML = "";
    const route = window.location.hash || "#tasks";
    let screen: HTMLElement;
    if (route === "#evaluate") screen = await evaluateScreen(api, session, root);
    else if (route === "#profile") screen = await profileScreen(api, session);
    else if (route === "#leaderboard") screen = await leaderboardScreen(api, session);
    else screen = await taskScreen(api, session, root);
    main.appendChild(screen);
  };
  window.addEventListener("hashchange", render);
  await render();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const root = document.getElementById("app") as HTMLElement;
  mountApp(root, createClient());
}
