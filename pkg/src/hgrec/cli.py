"""Command-line surface: synthetic data generation, single-shot
recommendation, the round simulation, and report rendering.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime
or convergence failure. Set ``HGREC_LOG`` to ``debug``/``info``/
``warning`` for log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import fairness, metrics, simulation
from .config import DEFAULT_THETA_GRID, RunConfig
from .data import SyntheticConfig, generate_synthetic, load, write_dataset
from .errors import (
    ConfigError,
    EmptyConfigError,
    HgrecError,
    MissingMetricsError,
    NonConvergenceError,
    ParseError,
    UnknownUserError,
)
from .state import RoundState, load_state, save_state

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4


def _setup_logging() -> None:
    level = os.environ.get("HGREC_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def cmd_synth(args: argparse.Namespace) -> int:
    config = SyntheticConfig(
        n_users=args.users,
        n_articles=args.articles,
        n_authors=args.authors,
        n_topics=args.topics,
        timespan_days=args.days,
        popularity_exponent=args.exponent,
        seed=args.seed,
    )
    interactions, catalog = generate_synthetic(config)
    events_path, articles_path = write_dataset(interactions, catalog, args.out)
    print(f"wrote {len(interactions)} events to {events_path}")
    print(f"wrote {catalog.n_articles} articles to {articles_path}")
    return EXIT_OK


def _load_config(args: argparse.Namespace, require_data: bool = True) -> RunConfig:
    overrides = {}
    for key in ("events", "articles", "out_dir", "theta", "seed", "k", "n_rounds", "solver"):
        if hasattr(args, key) and getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    if getattr(args, "methods", None):
        overrides["methods"] = [m.strip() for m in args.methods.split(",") if m.strip()]
    if getattr(args, "edges", None):
        overrides["edges"] = [e.strip() for e in args.edges.split(",") if e.strip()]
    if getattr(args, "theta_grid", False):
        overrides["theta_grid"] = list(DEFAULT_THETA_GRID)
    if args.config:
        config = RunConfig.from_file(args.config, overrides)
    else:
        config = RunConfig(**{k: v for k, v in overrides.items()})
    return config.validate(require_data=require_data)


def cmd_recommend(args: argparse.Namespace) -> int:
    config = _load_config(args)
    interactions, catalog = load(config.events, config.articles)
    if args.user not in interactions.user_ids:
        raise UnknownUserError(args.user)
    user_ds = interactions.user_ids.index(args.user)

    mode = args.mode
    state = load_state(args.state) if args.state else RoundState()
    model = simulation.build_round_model(
        interactions,
        catalog,
        config,
        need_author_columns=mode in ("fair", "coverage"),
        need_topic_columns=mode == "diversified",
        user_subset=np.array([user_ds], dtype=np.int64),
    )
    if not args.exclude_seen:
        model.seen = {}
    if user_ds not in model.user_positions:
        raise UnknownUserError(args.user)

    base = model.art_from_user[:, 0]
    scores = base
    if mode in ("fair", "coverage"):
        stats = fairness.author_stats(interactions, catalog, state)
        weights = fairness.coverage_weights(stats)
        wvec = np.array([weights.get(int(a), 0.0) for a in model.authors])
        if mode == "fair":
            relevance = simulation.normalize_relevance_matrix(
                model.auth_from_user, config.relevance_norm
            )[:, 0]
            scores = base + model.art_from_author @ (wvec * relevance)
        else:
            scores = base + model.art_from_author @ wvec
    elif mode == "diversified":
        from . import diversity

        rng = diversity.topic_rng(config.seed, state.rounds_completed + 1, user_ds)
        sampled = diversity.sample_uncovered_topics(
            state.topic_history.get(user_ds, set()),
            [int(t) for t in model.topics],
            config.diversity_n_samples,
            rng,
        )
        topic_pos = {int(t): i for i, t in enumerate(model.topics)}
        scores = base.copy()
        for t in sampled:
            scores += config.diversity_weight * model.art_from_topic[:, topic_pos[t]]

    ranked = simulation.topk_from_scores(scores[:, None], model, config.k)
    articles = ranked[user_ds]
    positions = model.article_positions
    payload = [
        {"article_id": catalog.article_ids[a], "score": float(scores[positions[a]])}
        for a in articles
    ]
    print(json.dumps({"user": args.user, "mode": mode, "recommendations": payload}, indent=2))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config.write(out_dir / "config.json")
    interactions, catalog = load(config.events, config.articles)
    rows = simulation.run_experiment(interactions, catalog, config, out_dir)
    if args.save_state:
        # re-run states are reconstructed by run_experiment; persist the
        # final snapshots for later single-shot adapted recommendations
        states = _replay_states(interactions, catalog, config)
        for method, state in states.items():
            save_state(state, out_dir / f"state_{method}.json")
    print(f"wrote {len(rows)} metric rows to {out_dir / 'metrics.csv'}")
    return EXIT_OK


def _replay_states(interactions, catalog, config) -> dict[str, RoundState]:
    """Rebuild per-method final states from the written recommendation
    log instead of keeping them in memory across the run."""
    out: dict[str, RoundState] = {method: RoundState() for method in config.methods}
    rec_path = Path(config.out_dir) / "recommendations.jsonl"
    article_index = {a: i for i, a in enumerate(catalog.article_ids)}
    user_index = {u: i for i, u in enumerate(interactions.user_ids)}
    from . import diversity

    per_round: dict[tuple[str, int], dict[int, list[int]]] = {}
    with open(rec_path, "r", encoding="utf-8") as fh:
        for line in fh:
            record = json.loads(line)
            key = (record["method"], record["round"])
            per_round.setdefault(key, {})[user_index[record["user"]]] = [
                article_index[a] for a in record["articles"]
            ]
    for (method, round_index), recs in sorted(per_round.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        fairness.update_coverage(out[method], recs, catalog, round_index)
        diversity.update_topic_history(out[method].topic_history, recs, catalog)
    return out


def cmd_report(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    csv_path = out_dir / "metrics.csv"
    if not csv_path.exists():
        raise MissingMetricsError(f"no metrics.csv under {out_dir}")
    rows = simulation.read_metrics_csv(csv_path)
    text = simulation.render_report(rows)
    (out_dir / "report.md").write_text(text, encoding="utf-8")
    print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hgrec",
        description="Multi-stakeholder news recommendation with hypergraph ranking",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a seeded synthetic dataset")
    p_synth.add_argument("--users", type=int, default=3600)
    p_synth.add_argument("--articles", type=int, default=700)
    p_synth.add_argument("--authors", type=int, default=150)
    p_synth.add_argument("--topics", type=int, default=850)
    p_synth.add_argument("--days", type=int, default=28)
    p_synth.add_argument("--exponent", type=float, default=1.2)
    p_synth.add_argument("--seed", type=int, default=7)
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.set_defaults(func=cmd_synth)

    def add_config_args(p):
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.add_argument("--events", help="events.jsonl path")
        p.add_argument("--articles", help="articles.jsonl path")
        p.add_argument("--edges", help="comma-separated edge kinds, e.g. E3,E6")
        p.add_argument("--theta", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--solver", choices=["iterative", "direct"])

    p_rec = sub.add_parser("recommend", help="top-k articles for one user")
    add_config_args(p_rec)
    p_rec.add_argument("--user", required=True, help="user id as it appears in events.jsonl")
    p_rec.add_argument(
        "--mode",
        choices=["plain", "fair", "coverage", "diversified"],
        default="plain",
    )
    p_rec.add_argument("--state", help="state JSON from a simulate run (for adapted modes)")
    p_rec.add_argument(
        "--exclude-seen",
        default=True,
        type=lambda s: s.lower() not in ("false", "0", "no"),
        help="drop articles the user already interacted with (default true)",
    )
    p_rec.set_defaults(func=cmd_recommend)

    p_sim = sub.add_parser("simulate", help="run the round-based experiment")
    add_config_args(p_sim)
    p_sim.add_argument("--out", dest="out_dir", help="output directory")
    p_sim.add_argument("--methods", help="comma-separated method list")
    p_sim.add_argument("--n-rounds", dest="n_rounds", type=int)
    p_sim.add_argument(
        "--theta-grid",
        action="store_true",
        help="sweep the default theta grid on a validation split",
    )
    p_sim.add_argument(
        "--save-state",
        action="store_true",
        help="persist per-method state snapshots for later adapted recommendations",
    )
    p_sim.set_defaults(func=cmd_simulate)

    p_rep = sub.add_parser("report", help="render report.md from metrics.csv")
    p_rep.add_argument("--out", required=True, help="run directory holding metrics.csv")
    p_rep.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, EmptyConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, UnknownUserError, MissingMetricsError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NonConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except HgrecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
