#!/usr/bin/env python3
"""Simulate a short crowd-summarization session against an in-memory service
and print the resulting leaderboard, badges, and per-method chosen summaries.

    python3 scripts/play_demo_game.py [--seed 7]
"""

import argparse
import itertools
import random

from codesum.cli import demo_project_dir
from codesum.service import CrowdService
from codesum.summarizer import select_crowd_summary

PHRASES = [
    "returns the cached icon and loads it on demand",
    "loads an image resource through the class loader",
    "checks the cache for the icon before loading",
    "gets the stored title text",
    "paints the banner using the shared icon source",
    "refreshes the label with the current icon",
    "installs the banner image from its name",
    "simple accessor for a field",
]


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    clock = itertools.count(0.0, 30.0)

    service = CrowdService(seed=args.seed, clock=lambda: next(clock))
    owner = service.register("bootstrap", "84+", hidden=True)
    files = [(p.name, p.read_text("utf-8")) for p in sorted(demo_project_dir().glob("*.java"))]
    tasks = service.submit_project(owner.id, "demo", files)
    print(f"seeded {len(tasks)} tasks "
          f"({sum(t.starred for t in tasks)} starred, "
          f"{sum(s.is_trap for s in service.state.submissions.values())} traps)")

    players = [service.register(name, tier) for name, tier in
               [("ada", "84+"), ("ben", "24-48"), ("cho", "6-24"), ("dee", "0-6")]]
    for _round in range(30):
        actor = rng.choice(players)
        if rng.random() < 0.6:
            task = rng.choice(tasks)
            try:
                result = service.submit_summary(actor.id, task.id, rng.choice(PHRASES))
                for award in result["awards"]:
                    print(f"  mystery box for {actor.name}: {award}")
            except Exception:
                pass
        else:
            candidates = [s for s in service.state.submissions.values()
                          if s.player_id != actor.id and not s.removed]
            if candidates:
                sub = rng.choice(candidates)
                try:
                    service.vote(actor.id, sub.id, "up" if rng.random() < 0.7 else "down")
                except Exception:
                    pass

    print("\nleaderboard:")
    for rank, p in enumerate(service.leaderboard(), 1):
        print(f"  {rank}. {p.name:<6} {p.points:>4} pts  level {p.level}  badges: {', '.join(p.badges)}")

    print("\nchosen summaries (upvote mode):")
    for task in tasks[:5]:
        try:
            choice = select_crowd_summary("upvotes", service.corpus_entry(task.id), service.lex)
            print(f"  {task.fqname}: {choice.text}")
        except ValueError:
            print(f"  {task.fqname}: (no summaries yet)")


if __name__ == "__main__":
    main()
