// Profile: points, level title, progress bar, badges, avatar. The progress
// ratio is the only number computed client-side; everything else is fetched.

import { ApiClient } from "../api.js";
import type { Session } from "../types.js";

export async function profileScreen(api: ApiClient, session: Session): Promise<HTMLElement> {
  const player = await api.player(session.playerId);
  const screen = document.createElement("section");
  screen.className = "screen profile-screen";

  const header = document.createElement("div");
  header.className = "profile-header";
  const avatar = document.createElement("div");
  avatar.className = "avatar";
  avatar.textContent = player.name.slice(0, 2).toUpperCase();
  avatar.title = player.avatar_hash ? `avatar ${player.avatar_hash}` : "no avatar set";
  const name = document.createElement("h2");
  name.textContent = player.name;
  header.append(avatar, name);
  screen.appendChild(header);

  const level = document.createElement("p");
  level.className = "level-line";
  level.textContent = `Level ${player.level} — “${player.level_title}”`;
  screen.appendChild(level);

  const points = document.createElement("p");
  points.className = "points-line";
  points.textContent = `${player.points} points`;
  screen.appendChild(points);

  const bar = document.createElement("div");
  bar.className = "progress";
  const fill = document.createElement("div");
  fill.className = "progress-fill";
  fill.style.width = `${progressPercent(player.points, player.level_points, player.next_level_points)}%`;
  bar.appendChild(fill);
  screen.appendChild(bar);
  const barLabel = document.createElement("p");
  barLabel.className = "progress-label";
  barLabel.textContent =
    player.next_level_points === null
      ? "Top level reached"
      : `${player.points - player.level_points} / ${player.next_level_points - player.level_points} to the next level`;
  screen.appendChild(barLabel);

  const badges = document.createElement("ul");
  badges.className = "badges";
  for (const badge of player.badges) {
    const item = document.createElement("li");
    item.className = "badge";
    item.textContent = badge;
    badges.appendChild(item);
  }
  screen.appendChild(badges);
  return screen;
}

export function progressPercent(points: number, floor: number, ceiling: number | null): number {
  if (ceiling === null || ceiling <= floor) return 100;
  const ratio = (points - floor) / (ceiling - floor);
  return Math.max(0, Math.min(100, Math.round(ratio * 100)));
}
