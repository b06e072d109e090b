// Leaderboards: global and tier-local tabs with the server's encouraging
// message for the viewer.

import { ApiClient } from "../api.js";
import type { Leaderboard, Session } from "../types.js";

export async function leaderboardScreen(
  api: ApiClient,
  session: Session,
  scope: "global" | "local" = "global",
): Promise<HTMLElement> {
  const screen = document.createElement("section");
  screen.className = "screen leaderboard-screen";

  const tabs = document.createElement("nav");
  tabs.className = "board-tabs";
  for (const name of ["global", "local"] as const) {
    const tab = document.createElement("button");
    tab.className = `board-tab${name === scope ? " active" : ""}`;
    tab.dataset.scope = name;
    tab.textContent = name === "global" ? "Global" : `My tier (${session.tier})`;
    tab.addEventListener("click", async () => {
      const fresh = await leaderboardScreen(api, session, name);
      screen.replaceWith(fresh);
    });
    tabs.appendChild(tab);
  }
  screen.appendChild(tabs);

  const board: Leaderboard =
    scope === "global"
      ? await api.leaderboardGlobal(session.playerId)
      : await api.leaderboardLocal(session.tier, session.playerId);

  if (board.message) {
    const message = document.createElement("p");
    message.className = "board-message";
    message.textContent = board.message;
    screen.appendChild(message);
  }

  const table = document.createElement("table");
  table.className = "board";
  const head = document.createElement("tr");
  for (const label of ["#", "Player", "Points", "Level"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const entry of board.entries) {
    const row = document.createElement("tr");
    if (entry.player_id === session.playerId) row.classList.add("me");
    for (const value of [entry.rank, entry.name, entry.points, entry.level]) {
      const td = document.createElement("td");
      td.textContent = String(value);
      row.appendChild(td);
    }
    table.appendChild(row);
  }
  screen.appendChild(table);
  return screen;
}
