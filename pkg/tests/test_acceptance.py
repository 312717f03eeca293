"""Acceptance gate: one test per release criterion, each printing a
PASS/FAIL line with its runtime. Budgets and tolerances are pinned here,
not configurable."""
import json
import os
import random
import shutil
import signal
import socket
import subprocess
import sys
import threading
import time
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path

import httpx
import pytest

from quipline import analytics, scoring
from quipline.analytics import (
    DatasetRow,
    export_bytes,
    improvement_curves,
    krippendorff_alpha,
    krippendorff_alpha_pairwise,
    quality_report_from_rows,
    read_dataset,
    spearman,
)
from quipline.engine import GameEngine
from quipline.events import read_log
from quipline.models import FULL_RATING_COUNT, EditState
from quipline.simulator import SimConfig, ablate, default_profile, run


@contextmanager
def criterion(name: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[criterion] {name}: FAIL ({time.perf_counter() - start:.2f}s)")
        raise
    print(f"[criterion] {name}: PASS ({time.perf_counter() - start:.2f}s)")


# =====================================================================
# 1. cost-per-datum reproduction

def test_cost_per_datum_reproduction():
    with criterion("cost-per-datum 12.1c at size 8248"):
        start = time.perf_counter()
        rows = [DatasetRow(f"e{i}", "a <b/> c d e", f"w{i % 97}", "21100", "0.8")
                for i in range(8248)]
        report = quality_report_from_rows(rows, budget_cents=100000.0)
        assert report.size == 8248
        assert report.rendered()["cost_per_datum_cents"] == "12.1"
        assert time.perf_counter() - start < 1.0


# =====================================================================
# 2. alpha oracle equivalence

def test_alpha_oracle_equivalence():
    with criterion("alpha: matrix route == brute-force route on 200 matrices"):
        start = time.perf_counter()
        rng = random.Random(42)
        checked = 0
        while checked < 200:
            units = []
            for u in range(rng.randint(2, 10)):
                units.append((f"u{u}", [rng.randint(0, 3)
                                        for _ in range(rng.randint(2, 5))]))
            fast = krippendorff_alpha(units)
            slow = krippendorff_alpha_pairwise(units)
            assert abs(fast - slow) <= 1e-9
            checked += 1
        # perfect agreement gives exactly 1.0 on both routes
        for m in range(2, 6):
            units = [(f"u{u}", [u % 4] * m) for u in range(6)]
            assert krippendorff_alpha(units) == 1.0
            assert krippendorff_alpha_pairwise(units) == 1.0
        assert time.perf_counter() - start < 5.0


# =====================================================================
# 3. released-data reproduction (skipped unless the file is present)

RELEASED = os.environ.get("QUIPLINE_DATASET", "released-dataset.csv")


@pytest.mark.skipif(not Path(RELEASED).exists(),
                    reason="released dataset file not supplied")
def test_released_dataset_metrics():
    with criterion("released data: size 8248, mean 1.26, alpha ~0.25"):
        rows = read_dataset(RELEASED)
        report = quality_report_from_rows(rows, budget_cents=100000.0)
        assert report.size == 8248
        assert abs(report.mean_funniness - 1.26) <= 0.01
        assert abs(report.alpha - 0.25) <= 0.03


# =====================================================================
# 4. core lifecycle property suite at 1e5 events

LIFECYCLE_CONFIG = SimConfig(
    seed=5, n_agents=260, n_headlines=12000, n_steps=120000,
    refresh_interval_s=3600.0,
    profile_mix=(
        (replace(default_profile("honest", 0.005, 0.002),
                 editor_skill=2.2, rating_noise=0.45), 0.77),
        (default_profile("balanced", 0.005, 0.002), 0.1),
        (default_profile("spammer"), 0.05),
        (default_profile("lowballer"), 0.08),
    ))


def test_core_lifecycle_properties():
    with criterion("lifecycle invariants over 1e5 randomized events"):
        start = time.perf_counter()
        result = run(LIFECYCLE_CONFIG)
        engine = result.engine
        assert engine.seq >= 100_000

        # exactly-5 completion, both directions
        for edit in engine.edits.values():
            if edit.state == EditState.FULLY_RATED:
                assert len(edit.ratings) == FULL_RATING_COUNT
            else:
                assert len(edit.ratings) < FULL_RATING_COUNT

        # participation caps
        for player in engine.players.values():
            assert player.edit_count <= 150
            assert player.rating_count <= 500

        # per-pair cap and no self-rating, recounted from the raw log
        editors = {}
        pair = {}
        for event in engine.log:
            if event.kind == "edit_submitted":
                editors[event.data["edit_id"]] = event.data["editor_id"]
            elif event.kind == "rating_submitted":
                rater = event.data["rater_id"]
                editor = editors[event.data["edit_id"]]
                assert rater != editor
                pair[(rater, editor)] = pair.get((rater, editor), 0) + 1
        assert max(pair.values()) <= 10

        # replay determinism: batch replay equals the incrementally built state
        replayed = GameEngine.replay(engine.log, engine.config)
        assert export_bytes(replayed) == export_bytes(engine)
        assert replayed.players == engine.players
        boards_a = scoring.leaderboards(engine, result.end_time)
        boards_b = scoring.leaderboards(replayed, result.end_time)
        assert boards_a == boards_b

        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"lifecycle suite took {elapsed:.1f}s"


# =====================================================================
# 5. scoring shape suite

def test_scoring_shapes():
    with criterion("scoring shapes: EP convex, RP negative tail, balance band"):
        # EP strictly increasing and convex on the reachable mean grid
        grid = [i / 5 for i in range(16)]
        ep = [scoring.editing_points(m) for m in grid]
        steps = [b - a for a, b in zip(ep, ep[1:])]
        assert all(s > 0 for s in steps)
        assert all(b >= a for a, b in zip(steps, steps[1:]))

        # RP over every achievable (grade, others) combination
        combos = [(g, [a, b, c, d])
                  for g in range(4) for a in range(4) for b in range(4)
                  for c in range(4) for d in range(4)]
        by_delta = {}
        for grade, others in combos:
            delta = abs(grade - sum(others) / 4)
            points = scoring.rating_points(grade, others)
            assert by_delta.setdefault(delta, points) == points
            if delta >= 1.2:
                assert points < 0
        deltas = sorted(by_delta)
        values = [by_delta[d] for d in deltas]
        assert all(b < a for a, b in zip(values, values[1:]))

        # balance maximal exactly on the band
        rng = random.Random(99)
        cases = [(e, r) for e in range(0, 160, 7) for r in range(0, 520, 13)]
        cases += [(rng.randint(0, 150), rng.randint(0, 500)) for _ in range(2000)]
        cases += [(100, 299), (100, 300), (100, 1000), (100, 1001),
                  (50, 149), (50, 150), (50, 500), (50, 501), (1, 3), (1, 10)]
        for e, r in cases:
            rho = r / max(e, 1)
            points = scoring.balance_points(e, r)
            if 3 <= rho <= 10:
                assert points == 50, (e, r)
            else:
                assert points < 50, (e, r)


def test_scoring_argmax_invariance():
    with criterion("board-1 ordering invariant under constant scaling"):
        rng = random.Random(17)
        players = []
        for p in range(40):
            means = [rng.randint(0, 15) / 5 for _ in range(rng.randint(0, 30))]
            settles = []
            for _ in range(rng.randint(0, 120)):
                grade = rng.randint(0, 3)
                others = [rng.randint(0, 3) for _ in range(4)]
                settles.append((grade, others))
            edits = len(means) + rng.randint(0, 10)
            ratings = len(settles) + rng.randint(0, 50)
            players.append((f"p{p}", means, settles, edits, ratings))

        def totals(cfg, rounded: bool):
            out = {}
            for pid, means, settles, edits, ratings in players:
                if rounded:
                    ep = sum(scoring.editing_points(m, cfg) for m in means)
                    rp = sum(scoring.rating_points(g, o, cfg)
                             for g, o in settles)
                    bp = scoring.balance_points(edits, ratings, cfg)
                else:
                    ep = sum(scoring.editing_points_raw(m, cfg) for m in means)
                    rp = sum(scoring.rating_points_raw(g, o, cfg)
                             for g, o in settles)
                    bp = scoring.balance_points_raw(edits, ratings, cfg)
                out[pid] = ep + rp + bp
            return out

        def order(t):
            return sorted(t, key=lambda p: (-t[p], p))

        base_cfg = scoring.ScoringConfig()
        raw_base = order(totals(base_cfg, rounded=False))
        int_base = order(totals(base_cfg, rounded=True))
        for factor in (2.0, 3.0, 5.0, 10.0):
            scaled = base_cfg.scaled(factor)
            assert order(totals(scaled, rounded=False)) == raw_base
            assert order(totals(scaled, rounded=True)) == int_base


# =====================================================================
# 6. improvement-curve trends (learning population)

FIG_CONFIG = SimConfig(
    seed=1, n_agents=50, n_headlines=5000, n_steps=60000,
    target_completed=3000,
    profile_mix=((default_profile("honest", noise_decay=0.01,
                                  skill_growth=0.005), 1.0),))


def test_improvement_trends():
    with criterion("learning population reproduces the improvement trends"):
        start = time.perf_counter()
        result = run(FIG_CONFIG)
        engine = result.engine
        completed = result.metrics["completed"]
        assert completed >= 3000

        # (a) dataset funniness rises between the first and last quintiles
        quintiles = improvement_curves(engine, max(1, completed // 5))
        fun = [p.value for p in quintiles.funniness_by_completion][:5]
        assert fun[-1] > fun[0]

        # (b) edit quality by experience trends upward
        per_agent = result.metrics["per_agent"]
        max_edits = max(a["edits"] for a in per_agent.values())
        eq_curve = improvement_curves(engine, max(1, max_edits // 10))
        eq = [p.value for p in eq_curve.edit_quality_by_experience]
        assert eq[-1] > eq[0]
        assert spearman(list(range(len(eq))), eq) > 0.5

        # (c) rating deviation strictly decreases across experience deciles
        max_ratings = max(a["ratings"] for a in per_agent.values())
        dev_curve = improvement_curves(engine, max(1, max_ratings // 10))
        dev = [p.value for p in dev_curve.rating_deviation_by_experience][:10]
        assert len(dev) == 10
        assert all(b < a for a, b in zip(dev, dev[1:]))
        assert spearman(list(range(len(dev))), dev) < -0.8

        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"trend suite took {elapsed:.1f}s"


# =====================================================================
# 7. incentive claims

def test_incentive_lowballer_loses():
    with criterion("lowballers end with negative rating points"):
        config = SimConfig(
            seed=23, n_agents=20, n_headlines=800, n_steps=10000,
            profile_mix=(
                (replace(default_profile("honest"), editor_skill=2.0), 0.7),
                (default_profile("lowballer"), 0.3),
            ))
        result = run(config)
        lows = [a for a in result.metrics["per_agent"].values()
                if a["strategy"] == "lowballer"]
        assert lows
        assert all(a["rating_points"] < 0 for a in lows)
        assert all(a["ratings"] > 0 for a in lows)


def test_incentive_balance_ablation():
    with criterion("balance points pull ratios into [3, 10]"):
        config = SimConfig(
            seed=29, n_agents=12, n_headlines=600, n_steps=10000,
            profile_mix=(
                (default_profile("honest"), 0.5),
                (replace(default_profile("honest"), edit_propensity=0.5), 0.5),
            ))
        outcome = ablate(config, "balance_points")
        assert outcome["on"]["ratio_in_band_fraction"] >= 0.9
        assert outcome["off"]["ratio_in_band_fraction"] <= 0.5
        assert outcome["on"]["ratio_in_band_fraction"] > \
            outcome["off"]["ratio_in_band_fraction"]


# =====================================================================
# 8. crash recovery over the HTTP service

def _free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def _wait_healthy(base: str, timeout: float = 30.0) -> None:
    deadline = time.time() + timeout
    while time.time() < deadline:
        try:
            if httpx.get(f"{base}/healthz", timeout=2.0).status_code == 200:
                return
        except Exception:
            time.sleep(0.2)
    raise RuntimeError("server never became healthy")


def _start_server(config_path: Path, log_path: Path, port: int):
    proc = subprocess.Popen(
        [sys.executable, "-m", "quipline.cli", "serve",
         "--config", str(config_path), "--log", str(log_path),
         "--port", str(port)],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    _wait_healthy(f"http://127.0.0.1:{port}")
    return proc


@pytest.mark.slow
def test_crash_recovery(tmp_path):
    with criterion("kill -9 mid-run recovers identical boards and export"):
        feed = tmp_path / "feed.jsonl"
        with open(feed, "w") as fh:
            for i in range(9500):
                fh.write(json.dumps({
                    "text": f"Mayor blocks new stadium deal after vote {i}",
                    "category": "politics", "source": "wire",
                    "url": f"http://example.com/{i}",
                    "published_at": "2024-01-01T00:00:00+00:00"}) + "\n")
        config_path = tmp_path / "cfg.json"
        config_path.write_text(json.dumps({
            "moderation": {"min_dwell_ms": 0},
            "ingestion": {"daily_cap": 20000},
            "feeds": [{"adapter": "jsonl_file", "location": str(feed),
                       "poll_interval_s": 3600, "daily_cap": 20000}],
        }))
        log_path = tmp_path / "events.ndjson"
        port = _free_port()
        base = f"http://127.0.0.1:{port}"
        proc = _start_server(config_path, log_path, port)

        acked_players: list[str] = []
        acked_edits: list[str] = []
        acked_ratings: list[tuple[str, str]] = []
        lock = threading.Lock()
        stop = threading.Event()

        with httpx.Client(base_url=base, timeout=10.0) as client:
            sessions = []
            for i in range(60):
                pid = client.post("/players",
                                  json={"display_name": f"u{i}"}).json()["player_id"]
                token = client.post("/session",
                                    json={"player_id": pid}).json()["token"]
                sessions.append((pid, {"X-Session": token}))
                acked_players.append(pid)
            items = client.get("/headlines/editable?limit=500",
                               headers=sessions[0][1]).json()["items"]
            for i, (pid, headers) in enumerate(sessions):
                for j in range(40):
                    item = items[(i * 40 + j) % len(items)]
                    r = client.post("/edits", json={
                        "headline_id": item["headline_id"],
                        "index": item["replaceable"][0],
                        "word": "walrus"}, headers=headers)
                    if r.status_code == 200:
                        acked_edits.append(r.json()["edit_id"])

        def rating_worker(worker_sessions):
            rng = random.Random(hash(worker_sessions[0][0]) & 0xFFFF)
            with httpx.Client(base_url=base, timeout=10.0) as c:
                while not stop.is_set():
                    for pid, headers in worker_sessions:
                        if stop.is_set():
                            return
                        try:
                            queue = c.get("/rate-queue?k=5",
                                          headers=headers).json().get("items", [])
                            for q in queue:
                                r = c.post("/ratings", json={
                                    "edit_id": q["edit_id"],
                                    "grade": rng.randint(0, 3)},
                                    headers=headers)
                                if r.status_code == 200:
                                    with lock:
                                        acked_ratings.append((q["edit_id"], pid))
                        except Exception:
                            if stop.is_set():
                                return

        workers = [threading.Thread(target=rating_worker,
                                    args=(sessions[w::4],)) for w in range(4)]
        for w in workers:
            w.start()
        # kill the process the moment enough mutations are acknowledged,
        # while the workers are still mid-flight
        while True:
            with lock:
                acked_total = (len(acked_players) + len(acked_edits)
                               + len(acked_ratings))
            if acked_total >= 10_050:
                proc.send_signal(signal.SIGKILL)
                break
            time.sleep(0.02)
        stop.set()
        proc.wait(timeout=10)
        for w in workers:
            w.join(timeout=10)

        assert len(acked_players) + len(acked_edits) + len(acked_ratings) >= 10_000

        # in-process replay of the surviving log (work on a copy)
        log_copy = tmp_path / "events-copy.ndjson"
        shutil.copy(log_path, log_copy)
        events, _ = read_log(log_copy, repair=True)
        engine = GameEngine.replay(events)
        for pid in acked_players:
            assert pid in engine.players
        for eid in acked_edits:
            assert eid in engine.edits
        for eid, pid in acked_ratings:
            assert pid in engine.edits[eid].rater_ids(), (eid, pid)
        expected_export = export_bytes(engine)

        # first restart: identical export and boards
        proc = _start_server(config_path, log_path, port)
        first_export = httpx.get(f"{base}/export", timeout=30.0).content
        first_boards = httpx.get(f"{base}/leaderboards", timeout=30.0).json()
        assert first_export == expected_export
        proc.terminate()
        proc.wait(timeout=10)

        # second restart: byte-identical again
        proc = _start_server(config_path, log_path, port)
        second_export = httpx.get(f"{base}/export", timeout=30.0).content
        second_boards = httpx.get(f"{base}/leaderboards", timeout=30.0).json()
        proc.terminate()
        proc.wait(timeout=10)
        assert second_export == first_export
        assert second_boards == first_boards
