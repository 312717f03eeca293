"""Synthetic populations driving the real engine.

Agents hold a latent editing skill and a rating-noise level. Edits carry a
latent funniness drawn around the editor's skill; grades are the latent
value plus rater noise, rounded and clamped to the 0-3 scale. Learning
agents decay their noise per rating and grow their skill per edit, which
is enough to reproduce the qualitative improvement curves. Time is
discrete: the clock advances ~25 simulated seconds per edit and ~5 per
rating, so recency weighting and dwell enforcement are both exercised.

Strategies: honest raters grade around the latent value; lowballers grade
everything 0; spammers mass-produce low-skill edits and click through
ratings under the dwell threshold; balanced agents steer their
ratings-to-edits ratio into the scoring band when that incentive is on.

Everything is deterministic for a fixed seed.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from pathlib import Path

from quipline import analytics, scoring
from quipline.analytics import Curves, QualityReport
from quipline.engine import GameConfig, GameEngine
from quipline.errors import CapReached, GameError, TooFast, UnknownKnob
from quipline.events import write_log
from quipline.ingestion import Ingestor, LexiconTagger
from quipline.moderation import ModerationPolicy
from quipline.sampler import Sampler, SamplerConfig
from quipline.scoring import Boards
from quipline.models import Standing

SIM_START = datetime(2024, 1, 1, tzinfo=timezone.utc)
EDIT_SECONDS = 25.0
RATE_SECONDS = 5.0
EDIT_LATENT_SD = 0.35

CATEGORIES = ["politics", "worldnews", "technology", "sports", "entertainment"]

_SUBJECTS = [
    "Mayor", "Senator", "Governor", "Coach", "Chef", "Doctor", "Farmer",
    "Singer", "Director", "Judge", "Pilot", "Teacher", "Banker", "Actor",
]
_VERBS = [
    "blocks", "approves", "cancels", "defends", "delays", "demands",
    "praises", "rejects", "reveals", "unveils", "warns", "sues",
]
_OBJECTS = [
    "new budget plan", "border treaty", "stadium deal", "tax reform",
    "rescue mission", "energy project", "trade pact", "housing scheme",
    "transit plan", "water deal", "school reform", "hiring freeze",
]
_TAILS = [
    "after long debate", "despite public protest", "before key vote",
    "amid growing pressure", "after secret meeting", "during live show",
]

_WORD_BANK = [
    "walrus", "pickle", "kazoo", "noodle", "llama", "spreadsheet", "tuba",
    "pigeon", "karaoke", "hammock", "pudding", "unicycle", "wig", "yodel",
    "cactus", "trampoline", "bagpipe", "meatball", "confetti", "sofa",
    "goose", "mustache", "pajamas", "wizard", "burrito", "kangaroo",
    "accordion", "waffle", "gnome", "disco", "pancake", "scooter",
    "banjo", "ferret", "turnip", "mime", "zamboni", "fondue", "poodle",
    "slinky", "glitter", "hoagie", "yeti", "maraca", "ukulele", "pylon",
    "hamster", "crouton", "gazebo", "spatula",
]


@dataclass(frozen=True)
class AgentProfile:
    strategy: str = "honest"  # honest | lowballer | spammer | balanced
    editor_skill: float = 1.2
    rating_noise: float = 0.7
    noise_decay: float = 0.0   # per rating, fraction of remaining noise
    skill_growth: float = 0.0  # per edit, fraction of current skill
    edit_propensity: float = 0.18
    dwell_s: float = 5.0

    def __post_init__(self):
        if not 0.0 <= self.editor_skill <= 3.0:
            raise ValueError("editor_skill must lie in [0, 3]")
        if self.rating_noise < 0:
            raise ValueError("rating_noise must be non-negative")


def default_profile(strategy: str, noise_decay: float = 0.0,
                    skill_growth: float = 0.0) -> AgentProfile:
    base = {
        "honest": AgentProfile("honest", 1.2, 0.7, noise_decay, skill_growth,
                               0.18, 5.0),
        "balanced": AgentProfile("balanced", 1.6, 0.6, noise_decay,
                                 skill_growth, 0.2, 5.0),
        "lowballer": AgentProfile("lowballer", 0.8, 0.5, 0.0, 0.0, 0.06, 3.0),
        "spammer": AgentProfile("spammer", 0.3, 1.2, 0.0, 0.0, 0.75, 0.1),
    }
    if strategy not in base:
        raise ValueError(f"unknown strategy {strategy!r}")
    return base[strategy]


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    n_agents: int = 20
    n_headlines: int = 800
    n_steps: int = 20000
    target_completed: int | None = None
    profile_mix: tuple[tuple[AgentProfile, float], ...] = (
        (AgentProfile(), 1.0),)
    # mechanism knobs
    pair_cap: int | None = 10
    min_dwell_ms: int = 2000
    fill_factor: bool = True
    balance_incentive: bool = True
    refresh_interval_s: float = 900.0
    jitter_seed: int = 0
    budget_cents: float = 100000.0
    skip_chance: float = 0.01
    flag_chance: float = 0.002


@dataclass
class _Agent:
    pid: str
    profile: AgentProfile
    skill: float
    noise: float
    can_edit: bool = True
    can_rate: bool = True


@dataclass
class SimResult:
    config: SimConfig
    engine: GameEngine
    report: QualityReport | None
    curves: Curves
    boards: Boards
    metrics: dict
    end_time: datetime


def _population(config: SimConfig, engine: GameEngine, rng: random.Random,
                now: datetime) -> list[_Agent]:
    """Deterministic largest-share allocation of strategies to agents.
    The roster is shuffled so strategies interleave in the action order."""
    agents: list[_Agent] = []
    total = sum(frac for _, frac in config.profile_mix)
    counts = []
    for profile, frac in config.profile_mix:
        counts.append([profile, int(config.n_agents * frac / total)])
    while sum(c for _, c in counts) < config.n_agents:
        counts[0][1] += 1
    i = 0
    for profile, count in counts:
        for _ in range(count):
            pid = engine.register_player(f"{profile.strategy}-{i}", now)
            agents.append(_Agent(pid, profile, profile.editor_skill,
                                 profile.rating_noise))
            i += 1
    rng.shuffle(agents)
    return agents


def _supply(config: SimConfig, engine: GameEngine, rng: random.Random,
            now: datetime) -> list[str]:
    ingestor = Ingestor(engine, LexiconTagger(),
                        daily_cap=max(config.n_headlines, 300))
    items = []
    for i in range(config.n_headlines):
        text = (f"{rng.choice(_SUBJECTS)} {rng.choice(_VERBS)} "
                f"{rng.choice(_OBJECTS)} {rng.choice(_TAILS)} {i}")
        items.append({
            "text": text,
            "category": CATEGORIES[i % len(CATEGORIES)],
            "source": "sim-wire",
            "url": f"http://sim.example/{i}",
            "published_at": (now - timedelta(seconds=config.n_headlines - i)
                             ).isoformat(),
        })
    report = ingestor.ingest_batch(items, now)
    return report.admitted_ids


def _choose_action(agent: _Agent, engine: GameEngine, config: SimConfig,
                   rng: random.Random) -> str:
    """Pick the next action. Point-seeking agents steer their ratio toward
    the balance band when that incentive exists; 'strict' means they would
    rather wait than act against the band."""
    player = engine.players[agent.pid]
    if not agent.can_edit and not agent.can_rate:
        return "idle"
    if not agent.can_rate:
        return "edit"
    if not agent.can_edit:
        return "rate"
    if config.balance_incentive and agent.profile.strategy in ("honest", "balanced"):
        e, r = player.edit_count, player.rating_count
        if e == 0:
            return "edit"
        rho = r / e
        if rho < 3.5:
            return "rate-strict"
        if rho > 8.5:
            return "edit-strict"
    return "edit" if rng.random() < agent.profile.edit_propensity else "rate"


def run(config: SimConfig) -> SimResult:
    rng = random.Random(config.seed)
    game_cfg = GameConfig(
        pair_cap=config.pair_cap,
        moderation=ModerationPolicy(min_dwell_ms=config.min_dwell_ms),
    )
    engine = GameEngine(game_cfg)
    sampler = Sampler(engine, SamplerConfig(
        refresh_interval_s=config.refresh_interval_s,
        jitter_seed=config.jitter_seed,
        fill_factor_enabled=config.fill_factor,
        pair_cap_enabled=config.pair_cap is not None,
    ))

    clock = SIM_START
    supply = _supply(config, engine, rng, clock)
    agents = _population(config, engine, rng, clock)
    latent: dict[str, float] = {}
    metrics = {
        "toofast_rejections": 0,
        "accepted_subdwell": 0,
        "edits": 0,
        "ratings": 0,
        "skips": 0,
        "flags": 0,
    }

    def do_edit(agent: _Agent) -> bool:
        nonlocal clock
        source_id = rng.choice(supply[-500:])
        source = engine.sources[source_id]
        index = rng.choice(sorted(source.replaceable))
        original = source.tokens[index].lower()
        word = rng.choice(_WORD_BANK)
        while word == original:
            word = rng.choice(_WORD_BANK)
        clock += timedelta(seconds=EDIT_SECONDS)
        try:
            result = engine.submit_edit(agent.pid, source_id, index, word, clock)
        except CapReached:
            agent.can_edit = False
            return False
        except GameError:
            return False
        latent[result.edit_id] = min(3.0, max(0.0, rng.gauss(
            agent.skill, EDIT_LATENT_SD)))
        agent.skill = min(3.0, agent.skill * (1.0 + agent.profile.skill_growth))
        metrics["edits"] += 1
        return True

    def pick_grade(agent: _Agent, edit_id: str) -> int:
        if agent.profile.strategy == "lowballer":
            return 0
        if agent.profile.strategy == "spammer":
            return rng.randint(0, 3)
        grade = round(latent[edit_id] + rng.gauss(0.0, agent.noise))
        agent.noise *= (1.0 - agent.profile.noise_decay)
        return min(3, max(0, grade))

    def do_rate(agent: _Agent) -> bool:
        nonlocal clock
        try:
            served = sampler.serve_for_rating(agent.pid, 3, clock)
        except CapReached:
            agent.can_rate = False
            return False
        if not served:
            return False
        # players see a short queue and pick from it, so the five raters of
        # a headline are not simply five consecutive actors
        edit_id = rng.choice(served)
        served_at = clock
        roll = rng.random()
        if roll < config.skip_chance:
            clock += timedelta(seconds=1)
            engine.skip_headline(agent.pid, edit_id, clock)
            metrics["skips"] += 1
            return True
        if roll < config.skip_chance + config.flag_chance:
            clock += timedelta(seconds=2)
            engine.flag_headline(agent.pid, edit_id, clock)
            metrics["flags"] += 1
            return True
        grade = pick_grade(agent, edit_id)
        dwell = agent.profile.dwell_s
        clock = served_at + timedelta(seconds=max(dwell, 0.05))
        try:
            engine.submit_rating(agent.pid, edit_id, grade, served_at, clock)
            if (clock - served_at).total_seconds() * 1000 < 2000:
                metrics["accepted_subdwell"] += 1
            metrics["ratings"] += 1
            return True
        except TooFast:
            metrics["toofast_rejections"] += 1
            # the bot adds just enough delay and tries again
            clock = served_at + timedelta(
                milliseconds=engine.config.moderation.min_dwell_ms)
            try:
                engine.submit_rating(agent.pid, edit_id, grade, served_at, clock)
                metrics["ratings"] += 1
                return True
            except GameError:
                return False
        except CapReached:
            agent.can_rate = False
            return False
        except GameError:
            return False

    idle_rounds = 0
    for step in range(config.n_steps):
        if config.target_completed is not None and \
                len(engine.completed_edits()) >= config.target_completed:
            break
        agent = agents[step % len(agents)]
        if engine.players[agent.pid].standing == Standing.SUSPENDED:
            continue
        action = _choose_action(agent, engine, config, rng)
        acted = False
        if action == "edit":
            acted = do_edit(agent) or do_rate(agent)
        elif action == "rate":
            acted = do_rate(agent) or do_edit(agent)
        elif action == "rate-strict":
            acted = do_rate(agent)  # waiting beats wrecking the ratio
        elif action == "edit-strict":
            acted = do_edit(agent)
        if not acted:
            # nothing to do right now: check back after the queue reorders
            clock += timedelta(seconds=60)
            idle_rounds += 1
            if idle_rounds > 20 * len(agents):
                break  # population exhausted (caps or empty pool)
        else:
            idle_rounds = 0

    completed = engine.completed_edits()
    per_agent = {}
    for agent in agents:
        player = engine.players[agent.pid]
        state = scoring.score_state(engine, agent.pid, game_cfg.scoring)
        per_agent[agent.pid] = {
            "strategy": agent.profile.strategy,
            "edits": player.edit_count,
            "ratings": player.rating_count,
            "ratio": player.rating_count / max(player.edit_count, 1),
            "editing_points": state.editing_points,
            "rating_points": state.rating_points,
            "balance_points": state.balance_points,
            "total": state.total,
            "standing": player.standing.value,
        }
    latencies = [(e.completed_at - e.created_at).total_seconds()
                 for e in completed]
    # how long an almost-complete headline waits for its fifth rating
    final_waits = [
        (e.ratings[4].submitted_at - e.ratings[3].submitted_at).total_seconds()
        for e in completed
    ]
    metrics.update({
        "events": engine.seq,
        "completed": len(completed),
        "max_pair_count": max(engine.pair_counts().values(), default=0),
        "mean_completion_latency_s": (sum(latencies) / len(latencies)
                                      if latencies else 0.0),
        "mean_final_wait_s": (sum(final_waits) / len(final_waits)
                              if final_waits else 0.0),
        "per_agent": per_agent,
    })

    report = None
    if completed:
        report = analytics.quality_report(engine, config.budget_cents)
    bin_size = max(1, len(completed) // 10) if completed else 1
    curves = analytics.improvement_curves(engine, bin_size)
    boards = scoring.leaderboards(engine, clock, game_cfg.scoring)
    return SimResult(config=config, engine=engine, report=report,
                     curves=curves, boards=boards, metrics=metrics,
                     end_time=clock)


# ----------------------------------------------------------------- ablations

ABLATION_KNOBS = ("per_pair_cap", "w_fill", "balance_points", "dwell")


def ablate(config: SimConfig, knob: str) -> dict:
    """Paired runs with a mechanism on vs off, plus the metric it moves."""
    if knob not in ABLATION_KNOBS:
        raise UnknownKnob(f"knob must be one of {ABLATION_KNOBS}")
    if knob == "per_pair_cap":
        on_cfg = replace(config, pair_cap=10)
        off_cfg = replace(config, pair_cap=None)
        metric = "max_pair_count"
    elif knob == "w_fill":
        on_cfg = replace(config, fill_factor=True)
        off_cfg = replace(config, fill_factor=False)
        metric = "mean_final_wait_s"
    elif knob == "balance_points":
        on_cfg = replace(config, balance_incentive=True)
        off_cfg = replace(config, balance_incentive=False)
        metric = "ratio_in_band_fraction"
    else:  # dwell
        on_cfg = replace(config, min_dwell_ms=2000)
        off_cfg = replace(config, min_dwell_ms=0)
        metric = "accepted_subdwell"

    on = run(on_cfg)
    off = run(off_cfg)

    def summarize(result: SimResult) -> dict:
        m = dict(result.metrics)
        ratios = [a["ratio"] for a in m["per_agent"].values()
                  if a["edits"] + a["ratings"] > 0]
        m["ratio_in_band_fraction"] = (
            sum(1 for r in ratios if 3.0 <= r <= 10.0) / len(ratios)
            if ratios else 0.0)
        m.pop("per_agent")
        return m

    return {
        "knob": knob,
        "metric": metric,
        "on": summarize(on),
        "off": summarize(off),
        "on_result": on,
        "off_result": off,
    }


# ----------------------------------------------------------------- outputs

def write_outputs(result: SimResult, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_log(result.engine.log, out / "events.ndjson")
    analytics.export_dataset(result.engine, out / "dataset.csv")
    metrics = dict(result.metrics)
    if result.report is not None:
        metrics["quality_report"] = result.report.rendered()
    (out / "report.json").write_text(
        json.dumps(metrics, indent=2, sort_keys=True), encoding="utf-8")
    analytics.write_curve_csv(result.curves.funniness_by_completion,
                              out / "funniness_by_completion.csv")
    analytics.write_curve_csv(result.curves.edit_quality_by_experience,
                              out / "edit_quality_by_experience.csv")
    analytics.write_curve_csv(result.curves.rating_deviation_by_experience,
                              out / "rating_deviation_by_experience.csv")
    boards = {
        "points_board": [
            {"rank": e.rank, "player": e.player_id, "value": e.value}
            for e in result.boards.points_board],
        "mean_rating_board": [
            {"rank": e.rank, "player": e.player_id, "value": e.value}
            for e in result.boards.mean_rating_board],
        "top10_funny": [
            {"rank": f.rank, "edit_id": f.edit_id, "editor": f.editor_id,
             "text": f.text, "value": f.value}
            for f in result.boards.top10_funny],
    }
    (out / "leaderboards.json").write_text(
        json.dumps(boards, indent=2, sort_keys=True), encoding="utf-8")


def parse_profile_mix(spec: str, noise_decay: float = 0.0,
                      skill_growth: float = 0.0) -> tuple:
    """Parse "honest:0.8,lowballer:0.2" into a profile mix."""
    mix = []
    for part in spec.split(","):
        name, _, frac = part.partition(":")
        mix.append((default_profile(name.strip(), noise_decay, skill_growth),
                    float(frac or 1.0)))
    return tuple(mix)
