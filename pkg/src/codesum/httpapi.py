"""JSON HTTP API over the crowd service.

Writes are serialized through a single lock (linearizable mutations); reads
see the latest applied state.  Responses about other players' summaries never
include author identity.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Header, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .service import (
    EXPERIENCE_TIERS,
    LEVEL_TITLES,
    CrowdService,
    Player,
    ServiceError,
)
from .summarizer import select_crowd_summary


class RegisterBody(BaseModel):
    name: str = Field(min_length=1)
    tier: str
    avatar_hash: str = ""


class ProjectFile(BaseModel):
    path: str
    content: str


class ProjectBody(BaseModel):
    name: str = Field(min_length=1)
    files: list[ProjectFile]


class SummaryBody(BaseModel):
    text: str = Field(min_length=1)


class VoteBody(BaseModel):
    direction: str


def _player_view(service: CrowdService, player: Player) -> dict:
    progress = service.level_progress(player)
    return {
        "id": player.id,
        "name": player.name,
        "tier": player.tier,
        "points": player.points,
        "level": progress["level"],
        "level_title": progress["level_title"],
        "level_points": progress["level_points"],
        "next_level_points": progress["next_level_points"],
        "badges": list(player.badges),
        "flagged": player.flagged,
        "avatar_hash": player.avatar_hash,
    }


def _task_view(service: CrowdService, task) -> dict:
    return {
        "id": task.id,
        "project": task.project,
        "fqname": task.fqname,
        "code": task.code,
        "difficulty": task.difficulty,
        "starred": task.starred,
        "level_req": task.level_req,
        "points_preview": service.next_award_preview(task.id),
    }


def create_app(service: CrowdService) -> FastAPI:
    app = FastAPI(title="codesum crowd service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    lock = threading.Lock()
    app.state.service = service

    @app.exception_handler(ServiceError)
    async def service_error(_request: Request, exc: ServiceError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=exc.status, content={"error": str(exc)})

    @app.get("/health")
    def health():
        return {"ok": True}

    @app.get("/config")
    def config():
        return {
            "tiers": list(EXPERIENCE_TIERS),
            "level_titles": list(LEVEL_TITLES),
            "level_thresholds": list(service.config.level_thresholds),
            "project_gate_level": service.config.project_gate_level,
        }

    @app.post("/players", status_code=201)
    def register(body: RegisterBody):
        with lock:
            player = service.register(body.name, body.tier, body.avatar_hash)
        return _player_view(service, player)

    @app.get("/players/{player_id}")
    def get_player(player_id: str):
        player = service._player(player_id)
        return _player_view(service, player)

    @app.post("/projects", status_code=201)
    def submit_project(body: ProjectBody, x_player_id: str = Header(alias="X-Player-Id")):
        with lock:
            tasks = service.submit_project(
                x_player_id, body.name, [(f.path, f.content) for f in body.files]
            )
        return {"tasks": [_task_view(service, t) for t in tasks]}

    @app.get("/tasks")
    def list_tasks(max_level: int | None = Query(default=None)):
        return {"tasks": [_task_view(service, t) for t in service.tasks_for_level(max_level)]}

    @app.get("/tasks/{task_id}")
    def get_task(task_id: str):
        return _task_view(service, service._task(task_id))

    @app.post("/tasks/{task_id}/summaries", status_code=201)
    def submit_summary(task_id: str, body: SummaryBody, x_player_id: str = Header(alias="X-Player-Id")):
        with lock:
            result = service.submit_summary(x_player_id, task_id, body.text)
        player = service._player(x_player_id)
        result["player"] = _player_view(service, player)
        return result

    @app.get("/tasks/{task_id}/summaries")
    def list_summaries(task_id: str, x_player_id: str | None = Header(default=None, alias="X-Player-Id")):
        subs = service.task_summaries(task_id, exclude_player=x_player_id)
        # authors stay hidden to prevent voting bias
        return {"summaries": [{"id": s.id, "text": s.text} for s in subs]}

    @app.post("/summaries/{submission_id}/votes", status_code=201)
    def vote(submission_id: str, body: VoteBody, x_player_id: str = Header(alias="X-Player-Id")):
        with lock:
            result = service.vote(x_player_id, submission_id, body.direction)
        player = service._player(x_player_id)
        result["player"] = _player_view(service, player)
        return result

    @app.get("/leaderboard/global")
    def leaderboard_global(x_player_id: str | None = Header(default=None, alias="X-Player-Id")):
        players = service.leaderboard("global")
        return _board_view(service, players, x_player_id)

    @app.get("/leaderboard/local")
    def leaderboard_local(
        tier: str = Query(...),
        x_player_id: str | None = Header(default=None, alias="X-Player-Id"),
    ):
        if tier not in EXPERIENCE_TIERS:
            raise HTTPException(status_code=400, detail=f"tier must be one of {EXPERIENCE_TIERS}")
        players = service.leaderboard("local", tier=tier)
        return _board_view(service, players, x_player_id)

    @app.get("/methods/{task_id}/summaries")
    def method_summary(task_id: str, mode: str = Query(default="upvotes")):
        if mode not in ("upvotes", "similarity", "merged"):
            raise HTTPException(status_code=400, detail="mode must be upvotes|similarity|merged")
        entry = service.corpus_entry(task_id)
        try:
            choice = select_crowd_summary(mode, entry, service.lex)
        except ValueError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "mode": mode,
            "text": choice.text,
            "keywords": choice.keywords,
            "all_summaries": choice.all_summaries,
        }

    @app.get("/export/corpus")
    def export_corpus():
        return {"entries": service.export_corpus()}

    return app


def _board_view(service: CrowdService, players: list[Player], viewer_id: str | None) -> dict:
    entries = [
        {
            "rank": i + 1,
            "player_id": p.id,
            "name": p.name,
            "points": p.points,
            "level": p.level,
            "tier": p.tier,
        }
        for i, p in enumerate(players)
    ]
    message = None
    if viewer_id:
        ranked = {p.id: i for i, p in enumerate(players)}
        if viewer_id in ranked:
            i = ranked[viewer_id]
            if i == 0 and players:
                message = "Good job! You are leading the board, keep on!"
            elif i > 0:
                gap = players[i - 1].points - players[i].points
                summaries_needed = max(1, -(-gap // 20))
                message = (
                    f"Hurry up, writing {summaries_needed} "
                    f"{'summary' if summaries_needed == 1 else 'summaries'} "
                    f"will shift you up to place {i} on the board."
                )
    return {"entries": entries, "message": message}
