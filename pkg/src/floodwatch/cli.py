"""Command line interface.

Subcommands cover the whole pipeline: build scenarios from archive CSVs,
generate pedagogical ones, validate any input document, run policies
headlessly, report on exported histories (tables plus figures), and serve
the HTTP API.  Failures print a single machine-parsable line to stderr
(``error: <code>: <message>``) and exit nonzero.
"""

from __future__ import annotations

import argparse
import datetime as dt
import sys
from dataclasses import replace
from pathlib import Path

from .agents import COLOURS
from .config import default_game_config, load_game_config
from .engine import SessionHistory, run_policy
from .errors import ConfigurationError, FloodwatchError
from .policies import POLICY_NAMES, build_policy
from .report import summarize_history, write_report
from .scenario import (
    GeneratorConfig,
    NoisyForecast,
    PerfectForecast,
    Scenario,
    TEMPLATES,
    build_historical_scenario,
    generate_pedagogical_scenario,
    load_rain_series,
    load_vigilance_series,
)


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = Scenario.load(args.scenario)
    config = load_game_config(args.config) if args.config else default_game_config()
    population = config.population
    if args.seed is not None:
        population = replace(population, seed=args.seed)
    policy = build_policy(args.policy, scenario)
    history = run_policy(
        scenario,
        population,
        config.trust,
        policy,
        policy_name=args.policy,
        event_rules=config.event_rules,
        return_after_quiet_days=config.return_after_quiet_days,
    )
    if args.output:
        history.save(args.output)
    summary = summarize_history(history)
    print(
        f"{summary['scenario']}: played {summary['days_played']} days under "
        f"{args.policy!r}; correct {summary['correct_days']}, "
        f"false alarms {summary['false_alarms']}, missed {summary['missed_alarms']}; "
        f"avg trust {summary['initial_avg_trust']:.3f} -> {summary['final_avg_trust']:.3f}"
        + (f"; history written to {args.output}" if args.output else "")
    )
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    episodes = []
    for item in args.episode:
        name, _, count = item.partition(":")
        if not count.isdigit():
            raise ConfigurationError(f"episode {item!r} is not NAME:COUNT")
        episodes.append((name, int(count)))
    config = GeneratorConfig(
        episodes=tuple(episodes),
        name=args.name,
        start_date=dt.date.fromisoformat(args.start_date),
    )
    scenario = generate_pedagogical_scenario(args.seed, config)
    scenario.save(args.output)
    print(f"generated {len(scenario)} days ({args.name}) -> {args.output}")
    return 0


def _cmd_build(args: argparse.Namespace) -> int:
    rain = load_rain_series(args.rain)
    vigilance = load_vigilance_series(args.vigilance)
    if args.noise > 0:
        model = NoisyForecast(seed=args.seed, spread=args.noise)
    else:
        model = PerfectForecast()
    scenario = build_historical_scenario(rain, vigilance, model, name=args.name)
    scenario.save(args.output)
    print(
        f"built {len(scenario)} days ({scenario.start_date} .. {scenario.end_date}) "
        f"-> {args.output}"
    )
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    if args.kind == "rain":
        rows = load_rain_series(args.path)
        print(f"ok: rain series {args.path}: {len(rows)} days")
    elif args.kind == "vigilance":
        rows = load_vigilance_series(args.path)
        print(f"ok: vigilance series {args.path}: {len(rows)} bulletins")
    elif args.kind == "scenario":
        scenario = Scenario.load(args.path)
        print(f"ok: scenario {args.path}: {len(scenario)} days ({scenario.provenance})")
    else:
        config = load_game_config(args.path)
        print(f"ok: config {args.path}: population of {config.population.size}")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    history = SessionHistory.load(args.history)
    summary = summarize_history(history)
    print(f"scenario:      {summary['scenario']}")
    print(f"policy:        {summary['policy'] or '(interactive)'}")
    print(f"days played:   {summary['days_played']}")
    print(
        f"classification: correct {summary['correct_days']}, "
        f"false alarms {summary['false_alarms']}, missed {summary['missed_alarms']}"
    )
    for c in COLOURS:
        row = summary["per_colour"][c.token]
        print(
            f"  {c.token:<7} announced {row['days_announced']:>5}  "
            f"false alarms {row['false_alarms']:>4}  missed {row['missed_alarms']:>4}"
        )
    if summary["days_played"]:
        print(
            f"avg trust:     {summary['initial_avg_trust']:.3f} -> "
            f"{summary['final_avg_trust']:.3f}"
        )
        print(f"peak evacuated fraction: {summary['peak_evacuated_fraction']:.3f}")
    if args.out:
        paths = write_report(history, args.out)
        for path in paths:
            print(f"wrote {path}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(content_dir=args.content, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floodwatch",
        description="Flood-vigilance communication simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="play a scenario headlessly under a policy")
    p.add_argument("scenario", help="scenario archive (JSON)")
    p.add_argument("--config", help="game config YAML (defaults apply if omitted)")
    p.add_argument("--policy", default="forecast", help=f"one of: {', '.join(POLICY_NAMES)}")
    p.add_argument("--seed", type=int, help="override the population seed")
    p.add_argument("--output", help="write the session history JSON here")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("generate", help="generate a pedagogical scenario")
    p.add_argument(
        "--episode",
        action="append",
        required=True,
        metavar="NAME:COUNT",
        help=f"episode template and day count; templates: {', '.join(sorted(TEMPLATES))}",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default="pedagogical")
    p.add_argument("--start-date", default="2021-03-01")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("build", help="build a scenario archive from CSV series")
    p.add_argument("--rain", required=True, help="daily rain CSV (date,rain_mm)")
    p.add_argument("--vigilance", required=True, help="vigilance CSV (date,colour)")
    p.add_argument("--name", required=True)
    p.add_argument("--noise", type=float, default=0.35, help="forecast noise spread; 0 = perfect")
    p.add_argument("--seed", type=int, default=0, help="forecast noise seed")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("validate", help="validate an input document")
    p.add_argument("kind", choices=["rain", "vigilance", "scenario", "config"])
    p.add_argument("path")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="summarize a history; optionally write tables and figures")
    p.add_argument("history", help="exported session history JSON")
    p.add_argument("--out", help="directory for CSV tables and PNG figures")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("serve", help="serve the HTTP API (and the web UI if built)")
    p.add_argument("--content", help="directory of scenario archives and configs")
    p.add_argument("--ui", help="directory of built web UI assets")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FloodwatchError as exc:
        message = " ".join(str(exc).split())
        print(f"error: {exc.code}: {message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
