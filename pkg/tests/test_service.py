import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codesum.cli import demo_project_dir
from codesum.service import (
    CrowdService,
    GateError,
    PlatformConfig,
    RejectedError,
    ServiceError,
    level_for,
)

DEMO_FILES = [
    (p.name, p.read_text("utf-8")) for p in sorted(demo_project_dir().glob("*.java"))
]


def make_service(tmp_path=None, seed=0, config=None, with_tasks=True, traps=False):
    clock = itertools.count(1000.0, 10.0)
    service = CrowdService(
        data_dir=tmp_path,
        seed=seed,
        config=config,
        clock=lambda: next(clock),
    )
    if with_tasks:
        owner = service.register("bootstrap", "84+", hidden=True)
        service.submit_project(owner.id, "demo", DEMO_FILES, attach_traps=traps)
    return service


class TestLevelFor:
    def test_zero_is_level_one(self):
        assert level_for(0) == 1

    def test_threshold_250_is_level_four(self):
        assert level_for(250) == 4

    def test_cap_at_eight(self):
        assert level_for(10_000) == 8

    @given(a=st.integers(min_value=0, max_value=5000), b=st.integers(min_value=0, max_value=5000))
    def test_monotone(self, a, b):
        if a <= b:
            assert level_for(a) <= level_for(b)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            level_for(-1)


class TestSubmitSummary:
    def test_first_three_doubled_fourth_plain(self):
        service = make_service()
        task = service.tasks_for_level(1)[0]
        assert task.difficulty == 10
        players = [service.register(f"p{i}", "24-48") for i in range(4)]
        awards = [
            service.submit_summary(p.id, task.id, f"summary text {i}")["points_awarded"]
            for i, p in enumerate(players)
        ]
        assert awards == [20, 20, 20, 10]

    def test_starred_bonus_on_doubled_base(self):
        config = PlatformConfig(starred_rate=1.0, difficulty_by_bucket=(
            ("loc_small", 20), ("loc_medium", 20), ("loc_large", 20)))
        service = make_service(config=config)
        task = service.tasks_for_level(1)[0]
        assert task.starred
        p1 = service.register("one", "0-6")
        p2 = service.register("two", "0-6")
        first = service.submit_summary(p1.id, task.id, "first submission words")
        second = service.submit_summary(p2.id, task.id, "second submission words")
        assert first["points_awarded"] == 60  # (2*20) + 50%
        assert second["points_awarded"] == 60

    def test_duplicate_identical_text_rejected(self):
        service = make_service()
        task = service.tasks_for_level(1)[0]
        p = service.register("dup", "6-24")
        service.submit_summary(p.id, task.id, "loads the icon")
        with pytest.raises(RejectedError):
            service.submit_summary(p.id, task.id, "loads the icon")

    def test_empty_after_preprocessing_rejected(self):
        service = make_service()
        task = service.tasks_for_level(1)[0]
        p = service.register("terse", "6-24")
        with pytest.raises(ServiceError):
            service.submit_summary(p.id, task.id, "the a of 3")

    def test_level_gate_on_hard_tasks(self):
        config = PlatformConfig(level_req_by_bucket=(
            ("loc_small", 5), ("loc_medium", 5), ("loc_large", 5)))
        service = make_service(config=config)
        task = service.tasks_for_level()[0]
        p = service.register("rookie", "0-6")
        with pytest.raises(GateError):
            service.submit_summary(p.id, task.id, "valid summary words")


class TestVoting:
    def setup_pair(self, **kwargs):
        service = make_service(**kwargs)
        task = service.tasks_for_level(1)[0]
        author = service.register("author", "24-48")
        voter = service.register("voter", "24-48")
        sub = service.submit_summary(author.id, task.id, "stores the icon in a cache")
        return service, author, voter, sub["submission_id"]

    def test_upvote_points(self):
        service, author, voter, sid = self.setup_pair()
        before = service.state.players[author.id].points
        service.vote(voter.id, sid, "up")
        assert service.state.players[voter.id].points == 1
        assert service.state.players[author.id].points == before + 2

    def test_downvote_decrements_with_floor(self):
        service, author, voter, sid = self.setup_pair()
        author_state = service.state.players[author.id]
        author_state.points = 0
        author_state.level = 1
        service.vote(voter.id, sid, "down")
        assert service.state.players[author.id].points == 0  # floored

    def test_self_vote_rejected(self):
        service, author, _voter, sid = self.setup_pair()
        with pytest.raises(RejectedError):
            service.vote(author.id, sid, "up")

    def test_double_vote_rejected(self):
        service, _author, voter, sid = self.setup_pair()
        service.vote(voter.id, sid, "up")
        with pytest.raises(RejectedError):
            service.vote(voter.id, sid, "down")

    def test_removal_biconditional(self):
        service, author, _voter, sid = self.setup_pair()
        voters = [service.register(f"v{i}", "0-6") for i in range(5)]
        for i, v in enumerate(voters[:4]):
            service.vote(v.id, sid, "down")
            sub = service.state.submissions[sid]
            expected = (sub.upvotes + sub.downvotes >= 5) and (sub.net <= -3)
            assert sub.removed == expected
        service.vote(voters[4].id, sid, "down")
        sub = service.state.submissions[sid]
        assert sub.upvotes + sub.downvotes == 5 and sub.net == -5
        assert sub.removed

    def test_vote_on_removed_rejected(self):
        service, author, _voter, sid = self.setup_pair()
        voters = [service.register(f"v{i}", "0-6") for i in range(6)]
        for v in voters[:5]:
            service.vote(v.id, sid, "down")
        with pytest.raises(RejectedError):
            service.vote(voters[5].id, sid, "up")

    def test_trap_upvote_flags_voter(self):
        config = PlatformConfig(trap_rate=1.0)
        service = make_service(config=config, traps=True)
        trap_subs = [s for s in service.state.submissions.values() if s.is_trap]
        assert trap_subs
        voter = service.register("naive", "0-6")
        service.vote(voter.id, trap_subs[0].id, "up")
        assert service.state.players[voter.id].flagged

    def test_trap_downvote_does_not_flag(self):
        config = PlatformConfig(trap_rate=1.0)
        service = make_service(config=config, traps=True)
        trap_subs = [s for s in service.state.submissions.values() if s.is_trap]
        voter = service.register("wary", "0-6")
        service.vote(voter.id, trap_subs[0].id, "down")
        assert not service.state.players[voter.id].flagged


def grind_to_level(service, player, level):
    """Earn points through first-submitter awards on demo tasks."""
    for task in service.tasks_for_level(1):
        if service.state.players[player.id].level >= level:
            return
        service.submit_summary(player.id, task.id, f"grind summary for {task.id}")
    if service.state.players[player.id].level < level:
        raise AssertionError("not enough tasks to grind")


class TestProjectGate:
    def test_low_level_player_blocked(self):
        service = make_service()
        p = service.register("novice", "6-24")
        with pytest.raises(GateError):
            service.submit_project(p.id, "mine", DEMO_FILES)

    def test_level_four_player_creates_tasks(self):
        service = make_service()
        p = service.register("veteran", "84+")
        grind_to_level(service, p, 4)
        assert service.state.players[p.id].level >= 4
        before = len(service.state.tasks)
        created = service.submit_project(p.id, "mine", DEMO_FILES, attach_traps=False)
        assert len(created) == 13  # one task per method
        assert len(service.state.tasks) == before + 13

    def test_starred_set_deterministic_per_seed(self):
        a = make_service(seed=99)
        b = make_service(seed=99)
        starred_a = sorted(t.id for t in a.state.tasks.values() if t.starred)
        starred_b = sorted(t.id for t in b.state.tasks.values() if t.starred)
        assert starred_a == starred_b

    def test_unparseable_project_rejected(self):
        service = make_service(with_tasks=False)
        owner = service.register("own", "84+", hidden=True)
        with pytest.raises(ServiceError):
            service.submit_project(owner.id, "junk", [("a.txt", "not java at all")])


class TestLeaderboard:
    def test_order_and_registration_tiebreak(self):
        service = make_service()
        p1 = service.register("first", "0-6")
        p2 = service.register("second", "0-6")
        p3 = service.register("third", "6-24")
        task_a, task_b = service.tasks_for_level(1)[:2]
        service.submit_summary(p1.id, task_a.id, "alpha summary one")  # 20
        service.submit_summary(p2.id, task_b.id, "bravo summary one")  # 20
        board = service.leaderboard()
        names = [p.name for p in board]
        assert names[:2] == ["first", "second"]  # tie broken by registration
        assert names[2] == "third"

    def test_empty_platform(self):
        service = make_service(with_tasks=False)
        assert service.leaderboard() == []

    def test_local_board_filters_tier(self):
        service = make_service(with_tasks=False)
        service.register("a", "0-6")
        service.register("b", "84+")
        local = service.leaderboard("local", tier="0-6")
        assert [p.name for p in local] == ["a"]

    def test_hidden_accounts_never_listed(self):
        service = make_service()
        assert all(not p.hidden for p in service.leaderboard())


class TestMysteryBoxes:
    def test_single_box_on_level_two(self):
        service = make_service()
        p = service.register("climber", "24-48")
        awards = []
        for task in service.tasks_for_level(1)[:3]:
            result = service.submit_summary(p.id, task.id, f"words for {task.id}")
            awards.extend(result["awards"])
        player = service.state.players[p.id]
        assert player.level == 2
        mystery = [a for a in awards if a["reason"] == "mystery_level_2"]
        assert len(mystery) == 1

    def test_no_box_on_level_three(self):
        service = make_service()
        p = service.register("walker", "24-48")
        awards = []
        for task in service.tasks_for_level(1)[:7]:
            result = service.submit_summary(p.id, task.id, f"words for {task.id}")
            awards.extend(result["awards"])
        player = service.state.players[p.id]
        assert player.level >= 3
        reasons = {a["reason"] for a in awards}
        assert "mystery_level_3" not in reasons
        assert len([a for a in awards if a["reason"] == "mystery_level_2"]) == 1

    def test_no_second_box_after_recross(self):
        service = make_service()
        p = service.register("yoyo", "24-48")
        tasks = service.tasks_for_level(1)
        for task in tasks[:3]:
            service.submit_summary(p.id, task.id, f"words for {task.id}")
        assert service.state.players[p.id].level >= 2
        # drag the player back below the level-2 threshold with downvotes
        voters = [service.register(f"v{i}", "0-6") for i in range(2)]
        own_subs = [s for s in service.state.submissions.values() if s.player_id == p.id]
        for v in voters:
            for sub in own_subs:
                if service.state.players[p.id].points <= 48 - 1:
                    break
                try:
                    service.vote(v.id, sub.id, "down")
                except RejectedError:
                    pass
        before = service.state.players[p.id].points
        assert level_for(before) >= 1
        result = service.submit_summary(p.id, tasks[3].id, "fresh words here")
        mystery = [a for a in result["awards"] if a["reason"].startswith("mystery_level_2")]
        assert mystery == []


class TestBadges:
    def test_newbie_on_registration(self):
        service = make_service(with_tasks=False)
        p = service.register("fresh", "0-6")
        assert "Newbie" in service.state.players[p.id].badges

    def test_good_summarizer_to_top_net_upvotes(self):
        service = make_service()
        task = service.tasks_for_level(1)[0]
        a = service.register("a", "0-6")
        b = service.register("b", "0-6")
        v = service.register("v", "0-6")
        sub_a = service.submit_summary(a.id, task.id, "first body of words")
        service.submit_summary(b.id, task.id, "second body of words")
        service.vote(v.id, sub_a["submission_id"], "up")
        assert "Good summarizer" in service.state.players[a.id].badges
        assert "Good summarizer" not in service.state.players[b.id].badges

    def test_quick_summarizer_three_in_ten_minutes(self):
        service = make_service()  # clock ticks 10s per event
        p = service.register("speedy", "0-6")
        for task in service.tasks_for_level(1)[:3]:
            service.submit_summary(p.id, task.id, f"rapid words {task.id}")
        assert "Quick summarizer" in service.state.players[p.id].badges

    def test_no_activity_only_newbie(self):
        service = make_service(with_tasks=False)
        p = service.register("idle", "0-6")
        assert service.state.players[p.id].badges == ["Newbie"]


class TestEventLogReplay:
    def test_replay_reconstructs_identical_state(self, tmp_path):
        service = make_service(tmp_path=tmp_path, seed=3)
        p1 = service.register("ann", "24-48")
        p2 = service.register("ben", "0-6")
        tasks = service.tasks_for_level(1)
        s1 = service.submit_summary(p1.id, tasks[0].id, "caches the icon lazily")
        service.submit_summary(p2.id, tasks[0].id, "returns an icon object")
        service.vote(p2.id, s1["submission_id"], "up")
        replayed = CrowdService(data_dir=tmp_path, seed=3)
        assert replayed.snapshot_view() == service.snapshot_view()

    def test_replay_twice_identical(self, tmp_path):
        service = make_service(tmp_path=tmp_path, seed=5)
        p = service.register("solo", "6-24")
        service.submit_summary(p.id, service.tasks_for_level(1)[0].id, "icon words")
        first = CrowdService(data_dir=tmp_path, seed=5).snapshot_view()
        second = CrowdService(data_dir=tmp_path, seed=5).snapshot_view()
        assert first == second

    def test_level_always_consistent_with_points(self):
        service = make_service()
        players = [service.register(f"p{i}", "0-6") for i in range(3)]
        tasks = service.tasks_for_level(1)
        for i, task in enumerate(tasks[:4]):
            service.submit_summary(players[i % 3].id, task.id, f"words {i} {task.id}")
        sub_ids = [s.id for s in service.state.submissions.values()]
        for v in players:
            for sid in sub_ids:
                try:
                    service.vote(v.id, sid, "down" if (hash(sid) % 2) else "up")
                except (RejectedError, ServiceError):
                    pass
        for p in service.state.players.values():
            assert p.level == level_for(p.points)

    def test_corpus_export_excludes_traps(self):
        config = PlatformConfig(trap_rate=1.0)
        service = make_service(config=config, traps=True)
        p = service.register("real", "0-6")
        task = service.tasks_for_level(1)[0]
        service.submit_summary(p.id, task.id, "real words about icons")
        corpus = service.export_corpus()
        all_texts = [s["text"] for entry in corpus for s in entry["summaries"]]
        assert "real words about icons" in all_texts
        from codesum.service import TRAP_TEXTS

        assert not any(t in TRAP_TEXTS for t in all_texts)
