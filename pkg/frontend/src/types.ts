// API body shapes, mirroring the server's published JSON schema.

export interface Player {
  id: string;
  name: string;
  tier: string;
  points: number;
  level: number;
  level_title: string;
  level_points: number;
  next_level_points: number | null;
  badges: string[];
  flagged: boolean;
  avatar_hash: string;
}

export interface PointsPreview {
  base: number;
  doubled: boolean;
  award: number;
  starred: boolean;
}

export interface Task {
  id: string;
  project: string;
  fqname: string;
  code: string;
  difficulty: number;
  starred: boolean;
  level_req: number;
  points_preview: PointsPreview;
}

export interface Award {
  player_id: string;
  reason: string;
  level?: number;
  points?: number;
  badge?: string;
}

export interface SummaryResult {
  submission_id: string;
  points_awarded: number;
  doubled: boolean;
  starred: boolean;
  awards: Award[];
  player: Player;
}

export interface AnonymousSummary {
  id: string;
  text: string;
}

export interface VoteResult {
  ok: boolean;
  awards: Award[];
  player: Player;
}

export interface LeaderboardEntry {
  rank: number;
  player_id: string;
  name: string;
  points: number;
  level: number;
  tier: string;
}

export interface Leaderboard {
  entries: LeaderboardEntry[];
  message: string | null;
}

export interface MethodSummary {
  mode: string;
  text: string;
  keywords: string[];
  all_summaries: string[];
}

export interface GameConfig {
  tiers: string[];
  level_titles: string[];
  level_thresholds: number[];
  project_gate_level: number;
}

export interface Session {
  playerId: string;
  name: string;
  tier: string;
}
