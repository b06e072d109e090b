// Mock-server mode: a stateful in-memory fetch implementation serving the
// same shapes as the real API, for development and unit tests.

import type { FetchLike } from "./api.js";
import type { AnonymousSummary, Player, Task } from "./types.js";

const LEVEL_THRESHOLDS = [0, 50, 120, 250, 450, 750, 1200, 1900];
const LEVEL_TITLES = [
  "Starting to see the light",
  "First steps taken",
  "Gathering momentum",
  "Middle of the way",
  "Beyond the hills",
  "Seasoned summarizer",
  "Almost legendary",
  "Monster slayer",
];
const TIERS = ["0-6", "6-24", "24-48", "48-84", "84+"];

const DEMO_CODE = `public Icon getIcon() {
    if (iconCache == null) {
        try {
            iconCache = new ImageIcon(
                loader.getResource(iconName));
        } catch (Exception e) {
            iconCache = null;
        }
    }
    return this.iconCache;
}`;

interface MockSubmission {
  id: string;
  taskId: string;
  playerId: string;
  text: string;
  up: number;
  down: number;
  voters: Set<string>;
}

interface MockState {
  players: Map<string, Player & { registered: number }>;
  submissions: MockSubmission[];
  tasks: Task[];
  nextPlayer: number;
  nextSubmission: number;
}

function levelFor(points: number): number {
  let level = 1;
  LEVEL_THRESHOLDS.forEach((bound, i) => {
    if (points >= bound) level = i + 1;
  });
  return level;
}

function playerView(p: Player & { registered: number }): Player {
  const level = levelFor(p.points);
  return {
    ...p,
    level,
    level_title: LEVEL_TITLES[level - 1],
    level_points: LEVEL_THRESHOLDS[level - 1],
    next_level_points: level < LEVEL_THRESHOLDS.length ? LEVEL_THRESHOLDS[level] : null,
  };
}

export function seededTasks(): Task[] {
  return [
    {
      id: "t0001",
      project: "demo",
      fqname: "IconSource.getIcon",
      code: DEMO_CODE,
      difficulty: 10,
      starred: false,
      level_req: 1,
      points_preview: { base: 10, doubled: true, award: 20, starred: false },
    },
    {
      id: "t0002",
      project: "demo",
      fqname: "IconPanel.render",
      code: "public void render() {\n    label.setIcon(source.getIcon());\n}",
      difficulty: 10,
      starred: true,
      level_req: 1,
      points_preview: { base: 10, doubled: true, award: 30, starred: true },
    },
  ];
}

export function createMockFetch(seedSubmissions = true): FetchLike {
  const state: MockState = {
    players: new Map(),
    submissions: [],
    tasks: seededTasks(),
    nextPlayer: 1,
    nextSubmission: 1,
  };
  if (seedSubmissions) {
    state.players.set("p0000", {
      id: "p0000",
      name: "seeded",
      tier: "24-48",
      points: 0,
      level: 1,
      level_title: LEVEL_TITLES[0],
      level_points: 0,
      next_level_points: 50,
      badges: ["Newbie"],
      flagged: false,
      avatar_hash: "",
      registered: 0,
    });
    state.submissions.push({
      id: "s00001",
      taskId: "t0001",
      playerId: "p0000",
      text: "caches and returns the icon",
      up: 1,
      down: 0,
      voters: new Set(),
    });
  }

  const json = (status: number, body: unknown): Response =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  return async (url: string, init?: RequestInit): Promise<Response> => {
    const { pathname, searchParams } = new URL(url);
    const method = init?.method || "GET";
    const playerId = (init?.headers as Record<string, string> | undefined)?.["X-Player-Id"];
    const body = init?.body ? JSON.parse(String(init.body)) : {};

    if (pathname === "/health") return json(200, { ok: true });
    if (pathname === "/config") {
      return json(200, {
        tiers: TIERS,
        level_titles: LEVEL_TITLES,
        level_thresholds: LEVEL_THRESHOLDS,
        project_gate_level: 4,
      });
    }
    if (pathname === "/players" && method === "POST") {
      const id = `p${String(state.nextPlayer++).padStart(4, "0")}`;
      const player = {
        id,
        name: body.name,
        tier: body.tier,
        points: 0,
        level: 1,
        level_title: LEVEL_TITLES[0],
        level_points: 0,
        next_level_points: 50,
        badges: ["Newbie"],
        flagged: false,
        avatar_hash: "",
        registered: state.nextPlayer,
      };
      state.players.set(id, player);
      return json(201, playerView(player));
    }
    const playerMatch = pathname.match(/^\/players\/(.+)$/);
    if (playerMatch) {
      const player = state.players.get(playerMatch[1]);
      return player ? json(200, playerView(player)) : json(404, { error: "no such player" });
    }
    if (pathname === "/tasks") return json(200, { tasks: state.tasks });

    const submitMatch = pathname.match(/^\/tasks\/(.+)\/summaries$/);
    if (submitMatch && method === "POST") {
      const task = state.tasks.find((t) => t.id === submitMatch[1]);
      const player = playerId ? state.players.get(playerId) : undefined;
      if (!task || !player) return json(404, { error: "not found" });
      const prior = state.submissions.filter((s) => s.taskId === task.id).length;
      let award = prior < 3 ? task.difficulty * 2 : task.difficulty;
      if (task.starred) award += Math.floor(award * 0.5);
      const id = `s${String(state.nextSubmission++).padStart(5, "0")}`;
      state.submissions.push({
        id,
        taskId: task.id,
        playerId: player.id,
        text: body.text,
        up: 0,
        down: 0,
        voters: new Set(),
      });
      player.points += award;
      return json(201, {
        submission_id: id,
        points_awarded: award,
        doubled: prior < 3,
        starred: task.starred,
        awards: [],
        player: playerView(player),
      });
    }
    if (submitMatch) {
      const listing: AnonymousSummary[] = state.submissions
        .filter((s) => s.taskId === submitMatch[1] && s.playerId !== playerId)
        .map((s) => ({ id: s.id, text: s.text }));
      return json(200, { summaries: listing });
    }

    const voteMatch = pathname.match(/^\/summaries\/(.+)\/votes$/);
    if (voteMatch && method === "POST") {
      const submission = state.submissions.find((s) => s.id === voteMatch[1]);
      const voter = playerId ? state.players.get(playerId) : undefined;
      if (!submission || !voter) return json(404, { error: "not found" });
      if (submission.playerId === voter.id) return json(409, { error: "cannot vote on your own summary" });
      if (submission.voters.has(voter.id)) return json(409, { error: "already voted" });
      submission.voters.add(voter.id);
      if (body.direction === "up") submission.up += 1;
      else submission.down += 1;
      voter.points += 1;
      const author = state.players.get(submission.playerId);
      if (author) author.points = Math.max(0, author.points + (body.direction === "up" ? 2 : -2));
      return json(201, { ok: true, awards: [], player: playerView(voter) });
    }

    if (pathname === "/leaderboard/global" || pathname === "/leaderboard/local") {
      const tier = searchParams.get("tier");
      let players = [...state.players.values()];
      if (pathname.endsWith("local")) players = players.filter((p) => p.tier === tier);
      players.sort((a, b) => b.points - a.points || a.registered - b.registered);
      return json(200, {
        entries: players.map((p, i) => ({
          rank: i + 1,
          player_id: p.id,
          name: p.name,
          points: p.points,
          level: levelFor(p.points),
          tier: p.tier,
        })),
        message: null,
      });
    }
    return json(404, { error: `no mock for ${method} ${pathname}` });
  };
}
