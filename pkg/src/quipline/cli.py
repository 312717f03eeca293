"""Command-line entry points.

    quipline serve     --config cfg.yaml --log events.ndjson --port 8000
    quipline simulate  --seed 7 --agents 50 --headlines 2000 --steps 40000 \
                       --profile-mix honest:0.8,lowballer:0.2 --out runs/a
    quipline ablate    --knob w_fill --seed 7 --out runs/ablate
    quipline export    --log events.ndjson --out dataset.csv
    quipline report    --log events.ndjson --budget-cents 100000
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from quipline import analytics
from quipline.config import load_config
from quipline.engine import GameEngine
from quipline.events import read_log


def _add_sim_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--agents", type=int, default=20)
    p.add_argument("--headlines", type=int, default=800)
    p.add_argument("--steps", type=int, default=20000)
    p.add_argument("--target-completed", type=int, default=None)
    p.add_argument("--profile-mix", default="honest:1.0",
                   help="strategy:fraction pairs, comma separated")
    p.add_argument("--noise-decay", type=float, default=0.0)
    p.add_argument("--skill-growth", type=float, default=0.0)
    p.add_argument("--out", default=None, help="output directory")


def _sim_config(args) -> "SimConfig":
    from quipline.simulator import SimConfig, parse_profile_mix
    return SimConfig(
        seed=args.seed,
        n_agents=args.agents,
        n_headlines=args.headlines,
        n_steps=args.steps,
        target_completed=args.target_completed,
        profile_mix=parse_profile_mix(args.profile_mix, args.noise_decay,
                                      args.skill_growth),
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="quipline")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--config", default=None)
    serve.add_argument("--log", default="quipline-events.ndjson")
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--host", default="127.0.0.1")

    simulate = sub.add_parser("simulate", help="run a synthetic population")
    _add_sim_args(simulate)

    ablate = sub.add_parser("ablate", help="paired mechanism on/off runs")
    _add_sim_args(ablate)
    ablate.add_argument("--knob", required=True,
                        choices=["per_pair_cap", "w_fill", "balance_points",
                                 "dwell"])

    export = sub.add_parser("export", help="write the rated dataset as CSV")
    export.add_argument("--log", required=True)
    export.add_argument("--out", required=True)

    report = sub.add_parser("report", help="print the quality report")
    report.add_argument("--log", required=True)
    report.add_argument("--budget-cents", type=float, default=100000.0)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")

    if args.command == "serve":
        import uvicorn
        from quipline.service import GameService, build_app
        config = load_config(args.config)
        service = GameService(config, args.log)
        app = build_app(service)
        port = args.port if args.port is not None else config.service.port
        uvicorn.run(app, host=args.host, port=port, log_level="info")
        return 0

    if args.command == "simulate":
        from quipline.simulator import run, write_outputs
        result = run(_sim_config(args))
        summary = {k: v for k, v in result.metrics.items() if k != "per_agent"}
        print(json.dumps(summary, indent=2, sort_keys=True))
        if args.out:
            write_outputs(result, args.out)
            print(f"outputs written to {args.out}", file=sys.stderr)
        return 0

    if args.command == "ablate":
        from quipline.simulator import ablate as run_ablation
        outcome = run_ablation(_sim_config(args), args.knob)
        table = {
            "knob": outcome["knob"],
            "metric": outcome["metric"],
            "on": outcome["on"][outcome["metric"]],
            "off": outcome["off"][outcome["metric"]],
        }
        print(json.dumps(table, indent=2, sort_keys=True))
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / "ablation.json").write_text(json.dumps(
                {"knob": outcome["knob"], "metric": outcome["metric"],
                 "on": outcome["on"], "off": outcome["off"]},
                indent=2, sort_keys=True))
        return 0

    events, repaired = read_log(args.log, repair=True)
    if repaired:
        print("warning: dropped a partial trailing record", file=sys.stderr)
    engine = GameEngine.replay(events)

    if args.command == "export":
        n = analytics.export_dataset(engine, args.out)
        print(f"{n} rows written to {args.out}")
        return 0

    if args.command == "report":
        quality = analytics.quality_report(engine, args.budget_cents)
        print(json.dumps({
            "quality": quality.rendered(),
            "categories": analytics.category_report(engine),
        }, indent=2, sort_keys=True))
        return 0

    return 1


if __name__ == "__main__":
    sys.exit(main())
