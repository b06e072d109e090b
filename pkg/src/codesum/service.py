"""Crowdsourced summary collection with gamification.

State is event-sourced: commands validate, decide any randomness (starred
tasks, traps, mystery rewards), and append events; a pure fold replays the
append-only JSON-lines log into identical state.  All numeric schedules live
in one config record.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

from . import jparse
from .textpipe import Lexicon, preprocess
from .weights import CrowdCorpusEntry, SummaryRecord

EXPERIENCE_TIERS = ("0-6", "6-24", "24-48", "48-84", "84+")

LEVEL_TITLES = (
    "Starting to see the light",
    "First steps taken",
    "Gathering momentum",
    "Middle of the way",
    "Beyond the hills",
    "Seasoned summarizer",
    "Almost legendary",
    "Monster slayer",
)

TRAP_TEXTS = (
    "purple monkey dishwasher calibrates the moon cheese",
    "this code sings opera to invisible spreadsheet hamsters",
    "quantum spaghetti reverses the polarity of Tuesday",
)


@dataclass(frozen=True)
class PlatformConfig:
    """Every tunable magnitude of the rules engine."""

    vote_voter_points: int = 1
    vote_author_delta: int = 2
    starred_bonus: float = 0.5
    difficulty_by_bucket: tuple[tuple[str, int], ...] = (
        ("loc_small", 10), ("loc_medium", 20), ("loc_large", 40),
    )
    level_req_by_bucket: tuple[tuple[str, int], ...] = (
        ("loc_small", 1), ("loc_medium", 3), ("loc_large", 5),
    )
    level_thresholds: tuple[int, ...] = (0, 50, 120, 250, 450, 750, 1200, 1900)
    removal_net: int = -3
    removal_min_votes: int = 5
    double_window: int = 3
    starred_rate: float = 0.05
    trap_rate: float = 0.10
    project_gate_level: int = 4
    mystery_levels: tuple[int, ...] = (2, 5, 7)
    mystery_point_choices: tuple[int, ...] = (10, 25, 50)
    mystery_badge: str = "Lucky find"
    quick_badge_count: int = 3
    quick_badge_window: float = 600.0
    explorer_task_count: int = 5


class ServiceError(Exception):
    status = 400


class GateError(ServiceError):
    status = 403


class RejectedError(ServiceError):
    status = 409


class NotFoundError(ServiceError):
    status = 404


def level_for(points: int, thresholds: tuple[int, ...] = PlatformConfig.level_thresholds) -> int:
    """Level 1..8 for a point total; monotone, capped at the top level."""
    if points < 0:
        raise ValueError("points must be >= 0")
    level = 1
    for i, bound in enumerate(thresholds):
        if points >= bound:
            level = i + 1
    return level


@dataclass
class Player:
    id: str
    name: str
    tier: str
    registered_seq: int
    points: int = 0
    level: int = 1
    badges: list[str] = field(default_factory=list)
    flagged: bool = False
    avatar_hash: str = ""
    hidden: bool = False
    submission_times: list[float] = field(default_factory=list)
    tasks_summarized: list[str] = field(default_factory=list)


@dataclass
class Submission:
    id: str
    task_id: str
    player_id: str
    text: str
    ts: float
    seq: int
    upvotes: int = 0
    downvotes: int = 0
    removed: bool = False
    is_trap: bool = False

    @property
    def net(self) -> int:
        return self.upvotes - self.downvotes


@dataclass
class Task:
    id: str
    project: str
    fqname: str
    code: str
    difficulty: int
    starred: bool
    level_req: int
    method: dict  # serialized method record
    submission_ids: list[str] = field(default_factory=list)


@dataclass
class CrowdState:
    players: dict[str, Player] = field(default_factory=dict)
    tasks: dict[str, Task] = field(default_factory=dict)
    submissions: dict[str, Submission] = field(default_factory=dict)
    votes: dict[tuple[str, str], int] = field(default_factory=dict)
    mystery_awarded: dict[str, list[int]] = field(default_factory=dict)
    seq: int = 0


class CrowdService:
    """Single-writer command interface over the event log."""

    def __init__(self, data_dir: str | Path | None = None, seed: int = 0,
                 config: PlatformConfig | None = None, lexicon: Lexicon | None = None,
                 clock=None):
        self.config = config or PlatformConfig()
        self.lex = lexicon or Lexicon.load()
        self.rng = random.Random(seed)
        self.seed = seed
        self.clock = clock or time.time
        self.state = CrowdState()
        self.data_dir = Path(data_dir) if data_dir else None
        self._log_path = self.data_dir / "events.jsonl" if self.data_dir else None
        self._snapshot_every = 200
        if self._log_path and self._log_path.exists():
            for line in self._log_path.read_text("utf-8").splitlines():
                if line.strip():
                    self.apply(json.loads(line))

    # ------------------------------------------------------------------ log

    def _append(self, kind: str, payload: dict) -> dict:
        event = {"seq": self.state.seq + 1, "kind": kind, "payload": payload}
        if self._log_path:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            with self._log_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")
        transitions = self.apply(event)
        awards = self._process_transitions(transitions)
        event["awards"] = awards
        if self._log_path and self.state.seq % self._snapshot_every == 0:
            self.save_snapshot()
        return event

    def _process_transitions(self, transitions: list[tuple[str, int, int]]) -> list[dict]:
        """Mystery boxes on first entry to the configured levels; reward
        contents are seeded-random and recorded in follow-up events."""
        awards: list[dict] = []
        queue = list(transitions)
        while queue:
            player_id, old, new = queue.pop(0)
            for lvl in self.config.mystery_levels:
                if old < lvl <= new and lvl not in self.state.mystery_awarded.get(player_id, []):
                    if self.rng.random() < 0.75:
                        reward = {"points": self.rng.choice(self.config.mystery_point_choices)}
                    else:
                        reward = {"badge": self.config.mystery_badge}
                    payload = {
                        "player_id": player_id,
                        "reason": f"mystery_level_{lvl}",
                        "level": lvl,
                        "ts": self.clock(),
                        **reward,
                    }
                    sub_event = {"seq": self.state.seq + 1, "kind": "award", "payload": payload}
                    if self._log_path:
                        with self._log_path.open("a", encoding="utf-8") as fh:
                            fh.write(json.dumps(sub_event, sort_keys=True) + "\n")
                    queue.extend(self.apply(sub_event))
                    awards.append(payload)
        return awards

    # ----------------------------------------------------------------- fold

    def apply(self, event: dict) -> list[tuple[str, int, int]]:
        """Pure state transition; returns (player, old_level, new_level) for
        every player whose level changed."""
        kind = event["kind"]
        payload = event["payload"]
        self.state.seq = event["seq"]
        handler = getattr(self, f"_apply_{kind}")
        return handler(payload)

    def _apply_register(self, p: dict) -> list:
        player = Player(
            id=p["player_id"],
            name=p["name"],
            tier=p["tier"],
            registered_seq=self.state.seq,
            avatar_hash=p.get("avatar_hash", ""),
            hidden=p.get("hidden", False),
        )
        self.state.players[player.id] = player
        self._grant(player, "Newbie")
        return []

    def _apply_create_tasks(self, p: dict) -> list:
        for rec in p["tasks"]:
            task = Task(
                id=rec["task_id"],
                project=p["project"],
                fqname=rec["fqname"],
                code=rec["code"],
                difficulty=rec["difficulty"],
                starred=rec["starred"],
                level_req=rec["level_req"],
                method=rec["method"],
            )
            self.state.tasks[task.id] = task
        owner = self.state.players.get(p.get("owner", ""))
        if owner is not None:
            self._grant(owner, "Adventure")
        return []

    def _apply_submit_summary(self, p: dict) -> list:
        sub = Submission(
            id=p["submission_id"],
            task_id=p["task_id"],
            player_id=p["player_id"],
            text=p["text"],
            ts=p["ts"],
            seq=self.state.seq,
            is_trap=p.get("is_trap", False),
        )
        self.state.submissions[sub.id] = sub
        self.state.tasks[sub.task_id].submission_ids.append(sub.id)
        player = self.state.players[sub.player_id]
        transitions = self._add_points(player, p.get("points_awarded", 0))
        if not sub.is_trap:
            player.submission_times.append(sub.ts)
            if sub.task_id not in player.tasks_summarized:
                player.tasks_summarized.append(sub.task_id)
            self._badges_after_submit(player)
        return transitions

    def _apply_vote(self, p: dict) -> list:
        voter = self.state.players[p["voter_id"]]
        sub = self.state.submissions[p["submission_id"]]
        direction = p["direction"]
        self.state.votes[(voter.id, sub.id)] = direction
        if direction > 0:
            sub.upvotes += 1
        else:
            sub.downvotes += 1
        transitions = self._add_points(voter, self.config.vote_voter_points)
        author = self.state.players[sub.player_id]
        delta = self.config.vote_author_delta * (1 if direction > 0 else -1)
        transitions += self._add_points(author, delta)
        total = sub.upvotes + sub.downvotes
        if total >= self.config.removal_min_votes and sub.net <= self.config.removal_net:
            sub.removed = True
        if sub.is_trap and direction > 0:
            voter.flagged = True
        self._badges_after_vote()
        return transitions

    def _apply_award(self, p: dict) -> list:
        player = self.state.players[p["player_id"]]
        self.state.mystery_awarded.setdefault(player.id, []).append(p["level"])
        transitions: list = []
        if "points" in p:
            transitions = self._add_points(player, p["points"])
        if "badge" in p:
            self._grant(player, p["badge"])
        return transitions

    def _add_points(self, player: Player, delta: int) -> list[tuple[str, int, int]]:
        old_level = player.level
        player.points = max(0, player.points + delta)
        player.level = level_for(player.points, self.config.level_thresholds)
        if player.level >= len(self.config.level_thresholds):
            self._grant(player, "Superstar")
        if player.level != old_level:
            return [(player.id, old_level, player.level)]
        return []

    def _grant(self, player: Player, badge: str) -> None:
        if badge not in player.badges:
            player.badges.append(badge)

    def _badges_after_submit(self, player: Player) -> None:
        times = sorted(player.submission_times)
        k = self.config.quick_badge_count
        for i in range(len(times) - k + 1):
            if times[i + k - 1] - times[i] <= self.config.quick_badge_window:
                self._grant(player, "Quick summarizer")
                break
        if len(player.tasks_summarized) >= self.config.explorer_task_count:
            self._grant(player, "Explorer")

    def _badges_after_vote(self) -> None:
        net_by_player: dict[str, int] = {}
        for sub in self.state.submissions.values():
            if sub.is_trap:
                continue
            net_by_player[sub.player_id] = net_by_player.get(sub.player_id, 0) + sub.net
        if not net_by_player:
            return
        best = max(net_by_player.values())
        leaders = [pid for pid, net in net_by_player.items() if net == best]
        if len(leaders) == 1 and best > 0:
            self._grant(self.state.players[leaders[0]], "Good summarizer")

    # ------------------------------------------------------------- commands

    def register(self, name: str, tier: str, avatar_hash: str = "", hidden: bool = False) -> Player:
        if tier not in EXPERIENCE_TIERS:
            raise ServiceError(f"tier must be one of {EXPERIENCE_TIERS}")
        player_id = f"p{len(self.state.players) + 1:04d}"
        self._append("register", {
            "player_id": player_id,
            "name": name,
            "tier": tier,
            "avatar_hash": avatar_hash,
            "hidden": hidden,
            "ts": self.clock(),
        })
        return self.state.players[player_id]

    def submit_project(self, player_id: str, name: str, files: list[tuple[str, str]],
                       attach_traps: bool = True) -> list[Task]:
        player = self._player(player_id)
        if player.level < self.config.project_gate_level and not player.hidden:
            raise GateError(
                f"level {self.config.project_gate_level} required to submit projects"
            )
        try:
            project = jparse.parse_sources(files)
        except jparse.EmptyProjectError as exc:
            raise ServiceError(str(exc))
        difficulty = dict(self.config.difficulty_by_bucket)
        level_req = dict(self.config.level_req_by_bucket)
        tasks = []
        base = len(self.state.tasks)
        for i, m in enumerate(sorted(project.methods, key=lambda m: m.fqname)):
            bucket = next(c.value for c in m.categories if c.value.startswith("loc_"))
            tasks.append({
                "task_id": f"t{base + i + 1:04d}",
                "fqname": m.fqname,
                "code": m.source,
                "difficulty": difficulty[bucket],
                "starred": self.rng.random() < self.config.starred_rate,
                "level_req": level_req[bucket],
                "method": jparse.method_to_json(m),
            })
        self._append("create_tasks", {
            "project": name,
            "owner": player_id,
            "tasks": tasks,
            "errors": [list(e) for e in project.errors],
            "ts": self.clock(),
        })
        created = [self.state.tasks[t["task_id"]] for t in tasks]
        if attach_traps:
            self._seed_traps(created)
        return created

    def _seed_traps(self, tasks: list[Task]) -> None:
        fake = self._fake_account()
        for task in tasks:
            if self.rng.random() < self.config.trap_rate:
                self._append("submit_summary", {
                    "submission_id": f"s{len(self.state.submissions) + 1:05d}",
                    "task_id": task.id,
                    "player_id": fake.id,
                    "text": self.rng.choice(TRAP_TEXTS),
                    "ts": self.clock(),
                    "points_awarded": 0,
                    "doubled": False,
                    "is_trap": True,
                })

    def _fake_account(self) -> Player:
        for p in self.state.players.values():
            if p.hidden:
                return p
        player_id = f"p{len(self.state.players) + 1:04d}"
        self._append("register", {
            "player_id": player_id,
            "name": "curious_reviewer",
            "tier": EXPERIENCE_TIERS[2],
            "avatar_hash": "",
            "hidden": True,
            "ts": self.clock(),
        })
        return self.state.players[player_id]

    def submit_summary(self, player_id: str, task_id: str, text: str, ts: float | None = None) -> dict:
        player = self._player(player_id)
        task = self._task(task_id)
        if player.level < task.level_req:
            raise GateError(f"task requires level {task.level_req}")
        if preprocess(text, self.lex).total() == 0:
            raise ServiceError("summary text is empty after preprocessing")
        for sid in task.submission_ids:
            sub = self.state.submissions[sid]
            if sub.player_id == player_id and sub.text == text:
                raise RejectedError("identical summary already submitted")
        prior = sum(
            1
            for sid in task.submission_ids
            if not self.state.submissions[sid].is_trap and not self.state.submissions[sid].removed
        )
        base = task.difficulty
        award = 2 * base if prior < self.config.double_window else base
        doubled = prior < self.config.double_window
        if task.starred:
            award += int(award * self.config.starred_bonus)
        event = self._append("submit_summary", {
            "submission_id": f"s{len(self.state.submissions) + 1:05d}",
            "task_id": task_id,
            "player_id": player_id,
            "text": text,
            "ts": ts if ts is not None else self.clock(),
            "points_awarded": award,
            "doubled": doubled,
            "is_trap": False,
        })
        return {
            "submission_id": event["payload"]["submission_id"],
            "points_awarded": award,
            "doubled": doubled,
            "starred": task.starred,
            "awards": event.get("awards", []),
        }

    def vote(self, voter_id: str, submission_id: str, direction: str, ts: float | None = None) -> dict:
        voter = self._player(voter_id)
        sub = self.state.submissions.get(submission_id)
        if sub is None:
            raise NotFoundError("no such summary")
        if sub.removed:
            raise RejectedError("summary was removed")
        if sub.player_id == voter_id:
            raise RejectedError("cannot vote on your own summary")
        if (voter_id, submission_id) in self.state.votes:
            raise RejectedError("already voted on this summary")
        if direction not in ("up", "down"):
            raise ServiceError("direction must be 'up' or 'down'")
        event = self._append("vote", {
            "voter_id": voter_id,
            "submission_id": submission_id,
            "direction": 1 if direction == "up" else -1,
            "ts": ts if ts is not None else self.clock(),
        })
        return {"ok": True, "awards": event.get("awards", [])}

    # -------------------------------------------------------------- queries

    def _player(self, player_id: str) -> Player:
        try:
            return self.state.players[player_id]
        except KeyError:
            raise NotFoundError("no such player") from None

    def _task(self, task_id: str) -> Task:
        try:
            return self.state.tasks[task_id]
        except KeyError:
            raise NotFoundError("no such task") from None

    def leaderboard(self, scope: str = "global", tier: str | None = None) -> list[Player]:
        players = [p for p in self.state.players.values() if not p.hidden]
        if scope == "local":
            players = [p for p in players if p.tier == tier]
        return sorted(players, key=lambda p: (-p.points, p.registered_seq))

    def tasks_for_level(self, max_level: int | None = None) -> list[Task]:
        tasks = sorted(self.state.tasks.values(), key=lambda t: t.id)
        if max_level is not None:
            tasks = [t for t in tasks if t.level_req <= max_level]
        return tasks

    def task_summaries(self, task_id: str, exclude_player: str | None = None) -> list[Submission]:
        task = self._task(task_id)
        subs = [self.state.submissions[sid] for sid in task.submission_ids]
        return [
            s for s in subs
            if not s.removed and (exclude_player is None or s.player_id != exclude_player)
        ]

    def corpus_entry(self, task_id: str) -> CrowdCorpusEntry:
        task = self._task(task_id)
        method = jparse.method_from_json(task.method)
        summaries = []
        for sid in task.submission_ids:
            sub = self.state.submissions[sid]
            if sub.is_trap:
                continue
            author = self.state.players[sub.player_id]
            summaries.append(SummaryRecord(
                text=sub.text,
                upvotes=sub.upvotes,
                downvotes=sub.downvotes,
                author_tier=author.tier,
            ))
        return CrowdCorpusEntry(method=method, summaries=summaries)

    def export_corpus(self) -> list[dict]:
        out = []
        for task in sorted(self.state.tasks.values(), key=lambda t: t.id):
            entry = self.corpus_entry(task.id)
            out.append({
                "method": task.method,
                "summaries": [
                    {
                        "text": s.text,
                        "upvotes": s.upvotes,
                        "downvotes": s.downvotes,
                        "author_tier": s.author_tier,
                    }
                    for s in entry.summaries
                ],
            })
        return out

    def next_award_preview(self, task_id: str) -> dict:
        task = self._task(task_id)
        prior = sum(
            1
            for sid in task.submission_ids
            if not self.state.submissions[sid].is_trap and not self.state.submissions[sid].removed
        )
        base = task.difficulty
        doubled = prior < self.config.double_window
        award = 2 * base if doubled else base
        if task.starred:
            award += int(award * self.config.starred_bonus)
        return {"base": base, "doubled": doubled, "award": award, "starred": task.starred}

    def level_progress(self, player: Player) -> dict:
        thresholds = self.config.level_thresholds
        level = player.level
        floor = thresholds[level - 1]
        ceiling = thresholds[level] if level < len(thresholds) else None
        return {
            "level": level,
            "level_title": LEVEL_TITLES[level - 1],
            "level_points": floor,
            "next_level_points": ceiling,
        }

    # ---------------------------------------------------------- persistence

    def save_snapshot(self) -> None:
        if not self.data_dir:
            return
        doc = {
            "seq": self.state.seq,
            "players": {pid: asdict(p) for pid, p in self.state.players.items()},
            "tasks": {tid: asdict(t) for tid, t in self.state.tasks.items()},
            "submissions": {sid: asdict(s) for sid, s in self.state.submissions.items()},
            "votes": [[v, s, d] for (v, s), d in self.state.votes.items()],
            "mystery_awarded": self.state.mystery_awarded,
        }
        (self.data_dir / "snapshot.json").write_text(json.dumps(doc, sort_keys=True), "utf-8")

    def snapshot_view(self) -> dict:
        """Canonical serializable view of the whole state (for replay checks)."""
        return {
            "seq": self.state.seq,
            "players": {pid: asdict(p) for pid, p in sorted(self.state.players.items())},
            "tasks": {tid: asdict(t) for tid, t in sorted(self.state.tasks.items())},
            "submissions": {sid: asdict(s) for sid, s in sorted(self.state.submissions.items())},
            "votes": sorted([v, s, d] for (v, s), d in self.state.votes.items()),
            "mystery_awarded": {k: sorted(v) for k, v in sorted(self.state.mystery_awarded.items())},
        }
