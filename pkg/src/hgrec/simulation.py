"""Time-sliced experiment driver.

The log is split into equal-duration rounds. Each round carves a
held-out test set from its last day, rebuilds the hypergraph on the
round's training events, produces top-k lists per method, folds them
into per-method state (author coverage, topic histories, recommendation
log) and evaluates precision, group-attention balance, popularity
calibration and covered topics.

All hypergraph-based methods share one per-round model: the base score
columns for every training user double as the plain ranking and as the
author-relevance source, and adapted rankings are linear combinations of
base columns with author or topic columns (the solve is linear in the
query). Adaptation is inactive in round 1 (weights initialize to zero),
so every hypergraph variant emits identical first-round lists. Methods
never share state: each runs in its own lane.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import diversity, fairness, metrics
from .builder import GraphConfig, VertexIndex, assemble
from .config import RunConfig
from .data import ArticleCatalog, InteractionLog, SECONDS_PER_DAY
from .errors import ConfigError, NoEvaluableUsersError
from .hypergraph import Hypergraph, VertexKind
from .ranking import solve_columns, solve_columns_direct
from .state import RoundState, recount_from_log

log = logging.getLogger(__name__)

HYPERGRAPH_METHODS = (
    "hypergraph",
    "hypergraph_fair",
    "hypergraph_coverage",
    "hypergraph_diversified",
    "coverage_reranking",
    "diversity_reranking",
)
ALL_METHODS = HYPERGRAPH_METHODS + ("popularity", "random")

# threshold for held-out carving: strictly more than this many last-day
# events, of which the newest HIDDEN_PER_USER move to test
LAST_DAY_MIN_EVENTS = 10
HIDDEN_PER_USER = 10

_RANDOM_LANE_SALT = 104729  # keeps the random lane's streams apart


@dataclass
class RoundPlan:
    """Equal-duration time slices over the log's span."""

    n_rounds: int
    boundaries: list[float]  # n_rounds + 1 fenceposts


def plan_rounds(interactions: InteractionLog, n_rounds: int = 4) -> RoundPlan:
    if n_rounds < 1:
        raise ConfigError("n_rounds must be >= 1")
    if len(interactions) == 0:
        raise ConfigError("cannot plan rounds over an empty log")
    start = float(interactions.timestamp.min())
    end = float(interactions.timestamp.max())
    if end <= start and n_rounds > 1:
        raise ConfigError("log timespan is a single instant; cannot split into rounds")
    step = (end - start) / n_rounds
    boundaries = [start + i * step for i in range(n_rounds)] + [end]
    plan = RoundPlan(n_rounds=n_rounds, boundaries=boundaries)
    for t in range(1, n_rounds + 1):
        if len(round_slice(interactions, plan, t)) == 0:
            raise ConfigError(f"round {t} contains no interactions")
    return plan


def round_slice(interactions: InteractionLog, plan: RoundPlan, t: int) -> InteractionLog:
    """Events of round ``t`` (1-based). The final slice includes its
    right boundary so the last event belongs somewhere."""
    lo, hi = plan.boundaries[t - 1], plan.boundaries[t]
    ts = interactions.timestamp
    if t == plan.n_rounds:
        mask = (ts >= lo) & (ts <= hi)
    else:
        mask = (ts >= lo) & (ts < hi)
    return interactions.select(mask)


def carve_round(
    slice_log: InteractionLog, slice_end: float
) -> tuple[InteractionLog, dict[int, set[int]]]:
    """Split one round's slice into train events and held-out test sets.

    For each user with strictly more than ``LAST_DAY_MIN_EVENTS`` events
    in the slice's final day, the ``HIDDEN_PER_USER`` most recent of
    those move to test; every other event stays in train. Users below
    the bar contribute training data only. Test sets are article-id
    sets. Emits a warning when no user qualifies.
    """
    if len(slice_log) == 0:
        raise ValueError("cannot carve an empty round slice")
    last_day = slice_log.timestamp >= (slice_end - SECONDS_PER_DAY)
    hidden = np.zeros(len(slice_log), dtype=bool)
    test: dict[int, set[int]] = {}
    for user in np.unique(slice_log.user[last_day]):
        rows = np.flatnonzero(last_day & (slice_log.user == user))
        if rows.size <= LAST_DAY_MIN_EVENTS:
            continue
        # rows are timestamp-sorted already; take the newest
        newest = rows[-HIDDEN_PER_USER:]
        hidden[newest] = True
        test[int(user)] = {int(a) for a in slice_log.article[newest]}
    if not test:
        log.warning("no user passed the held-out bar; precision will be absent this round")
    train = slice_log.select(~hidden)
    return train, test


@dataclass
class RoundModel:
    """Per-round frozen model shared by every hypergraph-based lane."""

    graph: Hypergraph
    index: VertexIndex
    theta: float
    users: np.ndarray  # dataset ids in vertex order
    articles: np.ndarray
    authors: np.ndarray
    topics: np.ndarray
    art_from_user: np.ndarray  # (n_articles, n_users) base ranking scores
    auth_from_user: np.ndarray  # (n_authors, n_users) relevance source
    art_from_author: np.ndarray | None  # (n_articles, n_authors)
    art_from_topic: np.ndarray | None  # (n_articles, n_topics)
    seen: dict[int, set[int]] = field(default_factory=dict)

    @property
    def user_positions(self) -> dict[int, int]:
        if not hasattr(self, "_user_pos"):
            self._user_pos = {int(u): i for i, u in enumerate(self.users)}
        return self._user_pos

    @property
    def article_positions(self) -> dict[int, int]:
        if not hasattr(self, "_article_pos"):
            self._article_pos = {int(a): i for i, a in enumerate(self.articles)}
        return self._article_pos


def build_round_model(
    train: InteractionLog,
    catalog: ArticleCatalog,
    config: RunConfig,
    theta: float | None = None,
    need_author_columns: bool = True,
    need_topic_columns: bool = False,
    user_subset: np.ndarray | None = None,
) -> RoundModel:
    """Assemble the hypergraph on the training slice and batch-solve the
    unit-query columns every lane needs.

    ``user_subset`` restricts the solved user columns (used for
    validation sweeps); by default all training users are solved.
    """
    theta = config.theta if theta is None else theta
    graph, index = assemble(
        train,
        catalog,
        GraphConfig.from_names(config.edges, config.knn_k_users, config.knn_k_articles),
    )
    user_verts = graph.vertices_of_kind(VertexKind.USER)
    article_verts = graph.vertices_of_kind(VertexKind.ARTICLE)
    author_verts = graph.vertices_of_kind(VertexKind.AUTHOR)
    topic_verts = graph.vertices_of_kind(VertexKind.TOPIC)
    users_ds = index.dataset_indices(VertexKind.USER)
    if user_subset is not None:
        keep = np.isin(users_ds, user_subset)
        user_verts = user_verts[keep]
        users_ds = users_ds[keep]

    cols = [user_verts]
    if need_author_columns:
        cols.append(author_verts)
    if need_topic_columns:
        cols.append(topic_verts)
    col_verts = np.concatenate(cols)
    rhs = sp.csr_matrix(
        (
            np.ones(col_verts.size),
            (col_verts, np.arange(col_verts.size)),
        ),
        shape=(graph.n_vertices, col_verts.size),
    )
    keep_rows = np.concatenate([article_verts, author_verts])
    if config.solver == "direct":
        scores = solve_columns_direct(graph, rhs, theta, keep_rows=keep_rows)
    else:
        scores = solve_columns(
            graph, rhs, theta, tol=config.tol, max_iters=config.max_iters, keep_rows=keep_rows
        )

    n_art, n_auth = article_verts.size, author_verts.size
    n_users = user_verts.size
    art_rows = scores[:n_art]
    auth_rows = scores[n_art : n_art + n_auth]
    offset = n_users
    art_from_author = None
    if need_author_columns:
        art_from_author = art_rows[:, offset : offset + n_auth].copy()
        offset += n_auth
    art_from_topic = None
    if need_topic_columns:
        art_from_topic = art_rows[:, offset : offset + topic_verts.size].copy()

    seen: dict[int, set[int]] = {}
    for u, a in zip(train.user, train.article):
        seen.setdefault(int(u), set()).add(int(a))

    return RoundModel(
        graph=graph,
        index=index,
        theta=theta,
        users=users_ds,
        articles=index.dataset_indices(VertexKind.ARTICLE),
        authors=index.dataset_indices(VertexKind.AUTHOR),
        topics=index.dataset_indices(VertexKind.TOPIC),
        art_from_user=art_rows[:, :n_users].copy(),
        auth_from_user=auth_rows[:, :n_users].copy(),
        art_from_author=art_from_author,
        art_from_topic=art_from_topic,
        seen=seen,
    )


def normalize_relevance_matrix(auth_from_user: np.ndarray, norm: str) -> np.ndarray:
    """Column-wise normalization of the author-score slice, one column
    per user. Mirrors ``ranking.normalize_relevance`` semantics."""
    x = auth_from_user
    if x.size == 0:
        return x.copy()
    if norm == "minmax":
        lo = x.min(axis=0, keepdims=True)
        hi = x.max(axis=0, keepdims=True)
        span = hi - lo
        out = np.ones_like(x)
        nontrivial = span[0] > 0
        out[:, nontrivial] = (x[:, nontrivial] - lo[:, nontrivial]) / span[:, nontrivial]
        return out
    if norm == "sum":
        totals = x.sum(axis=0, keepdims=True)
        out = np.ones_like(x)
        nontrivial = totals[0] != 0
        out[:, nontrivial] = x[:, nontrivial] / totals[:, nontrivial]
        return out
    raise ValueError(f"unknown normalization {norm!r}")


def topk_from_scores(
    scores: np.ndarray, model: RoundModel, k: int, limit: int | None = None
) -> dict[int, list[int]]:
    """Per-user ranked article lists from a score matrix, excluding each
    user's training articles. Ties break toward the lower article id."""
    out: dict[int, list[int]] = {}
    articles = model.articles
    take = k if limit is None else limit
    for j, user in enumerate(model.users):
        col = scores[:, j].copy()
        seen = model.seen.get(int(user), ())
        drop = [model.article_positions[a] for a in seen if a in model.article_positions]
        if drop:
            col[drop] = -np.inf
        order = np.lexsort((articles, -col))
        ranked = [int(articles[i]) for i in order if col[i] != -np.inf]
        out[int(user)] = ranked[:take]
    return out


def coverage_rerank(
    initial: list[int],
    k: int,
    authors_of: dict[int, list[int]],
    under_covered: set[int],
) -> list[int]:
    """Greedy provider-coverage re-ranking of one candidate list.

    At each step take the highest-ranked remaining article that adds at
    least one author who is globally under-covered and not yet in this
    list; when nothing adds coverage, fall back to rank order.
    """
    chosen: list[int] = []
    in_list: set[int] = set()
    remaining = list(initial)
    while remaining and len(chosen) < k:
        pick = None
        for pos, article in enumerate(remaining):
            gain = any(
                w not in in_list and w in under_covered for w in authors_of.get(article, ())
            )
            if gain:
                pick = pos
                break
        if pick is None:
            pick = 0
        article = remaining.pop(pick)
        chosen.append(article)
        in_list.update(authors_of.get(article, ()))
    return chosen


def diversity_rerank(
    initial: list[int],
    k: int,
    topics_of: dict[int, list[int]],
    already_covered: set[int],
) -> list[int]:
    """Same greedy skeleton with topic novelty as the gain predicate."""
    chosen: list[int] = []
    covered = set(already_covered)
    remaining = list(initial)
    while remaining and len(chosen) < k:
        pick = None
        for pos, article in enumerate(remaining):
            if any(t not in covered for t in topics_of.get(article, ())):
                pick = pos
                break
        if pick is None:
            pick = 0
        article = remaining.pop(pick)
        chosen.append(article)
        covered.update(topics_of.get(article, ()))
    return chosen


def _popularity_scores(train: InteractionLog, model: RoundModel) -> np.ndarray:
    counts = np.zeros(model.articles.size, dtype=np.float64)
    pos = model.article_positions
    for a in train.article:
        counts[pos[int(a)]] += 1
    return counts


def run_round(
    train: InteractionLog,
    test: dict[int, set[int]],
    state: RoundState,
    method: str,
    config: RunConfig,
    catalog: ArticleCatalog,
    model: RoundModel | None = None,
) -> tuple[dict[int, list[int]], RoundState]:
    """Produce one round of top-k lists for one method and fold them
    into the method's state.

    The round index is the state's completed-round count plus one; all
    adaptive behavior is disabled in round 1, where weights initialize
    to zero, so hypergraph variants coincide there.
    """
    if method not in ALL_METHODS:
        raise ConfigError(f"unknown method {method!r}")
    t = state.rounds_completed + 1
    if model is None:
        model = build_round_model(
            train,
            catalog,
            config,
            need_author_columns=method in ("hypergraph_fair", "hypergraph_coverage"),
            need_topic_columns=method == "hypergraph_diversified",
        )

    adapt = t > 1
    base = model.art_from_user

    if method == "popularity":
        scores = np.repeat(_popularity_scores(train, model)[:, None], model.users.size, axis=1)
        recs = topk_from_scores(scores, model, config.k)
    elif method == "random":
        recs = {}
        for user in model.users:
            rng = np.random.Generator(
                np.random.PCG64(
                    np.random.SeedSequence([config.seed, _RANDOM_LANE_SALT, t, int(user)])
                )
            )
            perm = rng.permutation(model.articles.size)
            seen = model.seen.get(int(user), set())
            ranked = [int(model.articles[i]) for i in perm if int(model.articles[i]) not in seen]
            recs[int(user)] = ranked[: config.k]
    elif method == "hypergraph" or not adapt:
        recs = topk_from_scores(base, model, config.k)
    elif method in ("hypergraph_fair", "hypergraph_coverage"):
        stats = fairness.author_stats(train, catalog, state)
        weights = fairness.coverage_weights(stats)
        wvec = np.array([weights.get(int(a), 0.0) for a in model.authors])
        if method == "hypergraph_fair":
            relevance = normalize_relevance_matrix(model.auth_from_user, config.relevance_norm)
            scores = base + model.art_from_author @ (wvec[:, None] * relevance)
        else:
            scores = base + (model.art_from_author @ wvec)[:, None]
        recs = topk_from_scores(scores, model, config.k)
    elif method == "hypergraph_diversified":
        topic_pos = {int(tp): i for i, tp in enumerate(model.topics)}
        rows, cols, vals = [], [], []
        for j, user in enumerate(model.users):
            rng = diversity.topic_rng(config.seed, t, int(user))
            sampled = diversity.sample_uncovered_topics(
                state.topic_history.get(int(user), set()),
                [int(tp) for tp in model.topics],
                config.diversity_n_samples,
                rng,
            )
            for tp in sampled:
                rows.append(topic_pos[tp])
                cols.append(j)
                vals.append(config.diversity_weight)
        combo = sp.csr_matrix(
            (vals, (rows, cols)), shape=(model.topics.size, model.users.size)
        )
        scores = base + model.art_from_topic @ combo
        recs = topk_from_scores(scores, model, config.k)
    elif method in ("coverage_reranking", "diversity_reranking"):
        pool = topk_from_scores(base, model, config.k, limit=config.rerank_pool * config.k)
        if method == "coverage_reranking":
            freq = fairness.author_frequencies(train, catalog)
            under = {a for a, p in freq.items() if state.coverage_of(a) < p}
            authors_of = {int(a): catalog.authors[int(a)] for a in model.articles}
            recs = {
                user: coverage_rerank(pool[user], config.k, authors_of, under)
                for user in sorted(pool)
            }
        else:
            topics_of = {int(a): catalog.topics[int(a)] for a in model.articles}
            recs = {
                user: diversity_rerank(
                    pool[user], config.k, topics_of, state.topic_history.get(user, set())
                )
                for user in sorted(pool)
            }
    else:  # pragma: no cover - guarded by the method check above
        raise ConfigError(f"unhandled method {method!r}")

    fairness.update_coverage(state, recs, catalog, t)
    diversity.update_topic_history(state.topic_history, recs, catalog)
    return recs, state


@dataclass
class MetricsRow:
    round_index: int
    method: str
    precision: float | None
    eagf: float
    spd: float
    covered_topics: float


def evaluate_round(
    train: InteractionLog,
    test: dict[int, set[int]],
    state: RoundState,
    recs: dict[int, list[int]],
    catalog: ArticleCatalog,
    method: str,
    round_index: int,
    k: int,
) -> MetricsRow:
    """Metrics after folding round ``round_index`` into the state.

    Precision is over this round's held-out users; attention balance and
    popularity calibration compare this round's recommendation slots
    against the same round's training popularity (groups recomputed per
    round, since popularity drifts), and covered topics is the running
    per-user average.
    """
    try:
        precision = metrics.precision_at_k(recs, test, k)
    except NoEvaluableUsersError:
        precision = None
    groups = metrics.split_groups(train, catalog)
    r_counts = metrics.group_slot_counts(
        [recs[user] for user in sorted(recs)], catalog, groups
    )
    d_counts = metrics.group_training_counts(train, catalog, groups)
    return MetricsRow(
        round_index=round_index,
        method=method,
        precision=precision,
        eagf=metrics.eagf(r_counts),
        spd=metrics.spd(r_counts, d_counts),
        covered_topics=metrics.covered_topics(state.topic_history),
    )


def verify_state_bookkeeping(state: RoundState, catalog: ArticleCatalog) -> None:
    """Assert the incremental coverage state matches a brute-force
    recount from the raw recommendation log. Exact equality."""
    slot_counts, total, topic_history = recount_from_log(state.recommendation_log, catalog)
    if total != state.total_slots:
        raise AssertionError(f"slot total drifted: {state.total_slots} vs recount {total}")
    if slot_counts != {a: n for a, n in state.author_slot_counts.items() if n}:
        raise AssertionError("author slot counts drifted from recount")
    if topic_history != {u: s for u, s in state.topic_history.items() if s}:
        raise AssertionError("topic histories drifted from recount")


def select_theta(
    train: InteractionLog,
    catalog: ArticleCatalog,
    config: RunConfig,
) -> float:
    """Pick theta from the grid on a validation split carved from the
    training slice's own last day, by plain-ranking precision. Ties and
    an empty validation set fall back to the smaller value / the
    configured default."""
    val_end = float(train.timestamp.max())
    tuning_train, validation = carve_round(train, val_end)
    if not validation:
        log.warning("no validation users; keeping configured theta %.3g", config.theta)
        return config.theta
    val_users = np.array(sorted(validation), dtype=np.int64)
    best_theta, best_precision = None, -1.0
    for theta in config.theta_grid:
        model = build_round_model(
            tuning_train,
            catalog,
            config,
            theta=theta,
            need_author_columns=False,
            user_subset=val_users,
        )
        recs = topk_from_scores(model.art_from_user, model, config.k)
        try:
            precision = metrics.precision_at_k(recs, validation, config.k)
        except NoEvaluableUsersError:
            precision = -1.0
        if precision > best_precision:
            best_theta, best_precision = theta, precision
    log.info("selected theta=%.3g (validation precision %.4f)", best_theta, best_precision)
    return best_theta


def run_experiment(
    interactions: InteractionLog,
    catalog: ArticleCatalog,
    config: RunConfig,
    out_dir: str | Path | None = None,
) -> list[MetricsRow]:
    """Run every configured method over all rounds and write outputs.

    Produces ``metrics.csv``, ``recommendations.jsonl`` and ``report.md``
    under ``out_dir`` (defaults to ``config.out_dir``). Rounds run
    sequentially; one shared frozen model per round serves all
    hypergraph lanes, while per-method state stays isolated.
    """
    config.validate(require_data=False)
    if out_dir is None:
        out_dir = config.out_dir
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    plan = plan_rounds(interactions, config.n_rounds)
    states = {method: RoundState() for method in config.methods}
    rows: list[MetricsRow] = []

    theta = config.theta
    need_theta_sweep = config.theta_grid is not None
    need_authors = any(
        m in ("hypergraph_fair", "hypergraph_coverage") for m in config.methods
    )
    need_topics = "hypergraph_diversified" in config.methods
    need_model = any(m in HYPERGRAPH_METHODS for m in config.methods)

    rec_path = out_dir / "recommendations.jsonl"
    with open(rec_path, "w", encoding="utf-8") as rec_file:
        for t in range(1, plan.n_rounds + 1):
            slice_log = round_slice(interactions, plan, t)
            train, test = carve_round(slice_log, plan.boundaries[t])
            if t == 1 and need_theta_sweep:
                theta = select_theta(train, catalog, config)
            model = None
            if need_model:
                model = build_round_model(
                    train,
                    catalog,
                    config,
                    theta=theta,
                    need_author_columns=need_authors,
                    need_topic_columns=need_topics,
                )
            for method in config.methods:
                recs, state = run_round(
                    train, test, states[method], method, config, catalog, model
                )
                verify_state_bookkeeping(state, catalog)
                rows.append(
                    evaluate_round(train, test, state, recs, catalog, method, t, config.k)
                )
                for user in sorted(recs):
                    rec_file.write(
                        json.dumps(
                            {
                                "round": t,
                                "method": method,
                                "user": interactions.user_ids[user],
                                "articles": [catalog.article_ids[a] for a in recs[user]],
                            }
                        )
                        + "\n"
                    )
            log.info("round %d/%d done (%d methods)", t, plan.n_rounds, len(config.methods))

    write_metrics_csv(rows, out_dir / "metrics.csv")
    (out_dir / "report.md").write_text(render_report(rows), encoding="utf-8")
    return rows


def _format_cell(value: float | None) -> str:
    return "" if value is None else f"{value:.10g}"


def write_metrics_csv(rows: list[MetricsRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "method", "precision", "eagf", "spd", "covered_topics"])
        for row in rows:
            writer.writerow(
                [
                    row.round_index,
                    row.method,
                    _format_cell(row.precision),
                    _format_cell(row.eagf),
                    _format_cell(row.spd),
                    _format_cell(row.covered_topics),
                ]
            )


def read_metrics_csv(path: str | Path) -> list[MetricsRow]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for record in csv.DictReader(fh):
            rows.append(
                MetricsRow(
                    round_index=int(record["round"]),
                    method=record["method"],
                    precision=float(record["precision"]) if record["precision"] else None,
                    eagf=float(record["eagf"]),
                    spd=float(record["spd"]),
                    covered_topics=float(record["covered_topics"]),
                )
            )
    return rows


def render_report(rows: list[MetricsRow]) -> str:
    """Markdown tables per measure (methods x rounds) plus the headline
    deltas of the fair variant against the plain ranking."""
    if not rows:
        return "# Simulation report\n\nNo metric rows.\n"
    methods = list(dict.fromkeys(row.method for row in rows))
    rounds = sorted({row.round_index for row in rows})
    by_key = {(row.method, row.round_index): row for row in rows}

    def table(title: str, getter) -> list[str]:
        lines = [f"## {title}", ""]
        lines.append("| method | " + " | ".join(f"round {t}" for t in rounds) + " |")
        lines.append("|" + "---|" * (len(rounds) + 1))
        for method in methods:
            cells = []
            for t in rounds:
                row = by_key.get((method, t))
                value = getter(row) if row else None
                cells.append("-" if value is None else f"{value:.4g}")
            lines.append(f"| {method} | " + " | ".join(cells) + " |")
        lines.append("")
        return lines

    lines = ["# Simulation report", ""]
    lines += table("Precision", lambda r: r.precision)
    lines += table("Group attention balance (eagf)", lambda r: r.eagf)
    lines += table("Popularity calibration gap (spd)", lambda r: r.spd)
    lines += table("Covered topics per user", lambda r: r.covered_topics)

    if "hypergraph" in methods and "hypergraph_fair" in methods:
        lines += ["## Fair vs plain", ""]
        lines.append("| round | precision drop % | spd reduction % |")
        lines.append("|---|---|---|")
        for t in rounds:
            plain = by_key.get(("hypergraph", t))
            fair = by_key.get(("hypergraph_fair", t))
            if not plain or not fair:
                continue
            if plain.precision and fair.precision is not None:
                drop = 100.0 * (plain.precision - fair.precision) / plain.precision
                drop_cell = f"{drop:.1f}"
            else:
                drop_cell = "-"
            if plain.spd > 0:
                reduction = 100.0 * (plain.spd - fair.spd) / plain.spd
                red_cell = f"{reduction:.1f}"
            else:
                red_cell = "-"
            lines.append(f"| {t} | {drop_cell} | {red_cell} |")
        lines.append("")
    return "\n".join(lines)
