"""Interaction-log and article-catalog ingestion, plus a seeded synthetic
dataset generator with skewed author popularity.

Interchange format is JSON Lines: one event object per line in
``events.jsonl`` (``user_id``, ``article_id``, ``timestamp`` as epoch
seconds or ISO-8601) and one article object per line in
``articles.jsonl`` (``article_id``, ``authors``, ``topics``, optional
``iptc_tags``, optional ``embedding``). String ids are interned to dense
integer indices in lexicographic id order, which makes indices
reproducible regardless of file row order.

All randomness in the generator comes from numpy's PCG64 generator
seeded through ``SeedSequence``, so a seed pins the output byte-for-byte
across platforms.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import ParseError

log = logging.getLogger(__name__)

BASE_EPOCH = 1_600_000_000  # synthetic timestamps start here
SECONDS_PER_DAY = 86_400


@dataclass
class InteractionLog:
    """Columnar (user, article, timestamp) events, timestamp-sorted.

    ``user`` and ``article`` hold dense indices into ``user_ids`` and the
    catalog's ``article_ids``. ``dropped_events`` counts events whose
    article was missing from the catalog at load time.
    """

    user: np.ndarray
    article: np.ndarray
    timestamp: np.ndarray
    user_ids: list[str]
    dropped_events: int = 0
    deduplicated: bool = False

    def __len__(self) -> int:
        return int(self.user.shape[0])

    @property
    def n_users(self) -> int:
        return len(self.user_ids)

    def select(self, mask: np.ndarray) -> "InteractionLog":
        """Row-subset view (copying) with the same id tables."""
        return replace(
            self,
            user=self.user[mask],
            article=self.article[mask],
            timestamp=self.timestamp[mask],
        )

    def deduplicate(self) -> "InteractionLog":
        """Keep the earliest event of each (user, article) pair."""
        seen: dict[tuple[int, int], int] = {}
        for row in range(len(self)):
            key = (int(self.user[row]), int(self.article[row]))
            if key not in seen:
                seen[key] = row
        keep = np.array(sorted(seen.values()), dtype=np.int64)
        out = self.select(keep)
        out.deduplicated = True
        return out


@dataclass
class ArticleCatalog:
    """Per-article metadata with interned author/topic/tag vocabularies.

    ``embeddings`` is ``None`` when no article carries one; otherwise a
    dense (n_articles, dim) array with ``has_embedding`` marking the
    valid rows.
    """

    article_ids: list[str]
    authors: list[list[int]]
    topics: list[list[int]]
    iptc_tags: list[list[int]]
    author_ids: list[str]
    topic_ids: list[str]
    iptc_ids: list[str]
    embeddings: np.ndarray | None = None
    has_embedding: np.ndarray | None = None

    @property
    def n_articles(self) -> int:
        return len(self.article_ids)

    @property
    def n_authors(self) -> int:
        return len(self.author_ids)

    @property
    def n_topics(self) -> int:
        return len(self.topic_ids)


def _parse_timestamp(value, path, line_number) -> float:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        text = value.replace("Z", "+00:00") if value.endswith("Z") else value
        try:
            parsed = datetime.fromisoformat(text)
        except ValueError as exc:
            raise ParseError(path, line_number, f"bad timestamp {value!r}: {exc}") from None
        if parsed.tzinfo is None:
            parsed = parsed.replace(tzinfo=timezone.utc)
        return parsed.timestamp()
    raise ParseError(path, line_number, f"timestamp must be number or string, got {value!r}")


def _read_jsonl(path: str | Path):
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(str(path), line_number, f"invalid JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise ParseError(str(path), line_number, "record must be a JSON object")
            yield line_number, record


def _require(record: dict, key: str, path, line_number):
    if key not in record:
        raise ParseError(str(path), line_number, f"missing field {key!r}")
    return record[key]


def load(events_path: str | Path, articles_path: str | Path) -> tuple[InteractionLog, ArticleCatalog]:
    """Load an interaction log and article catalog from JSON Lines files.

    Events referencing articles absent from the catalog are dropped with
    a counted warning; malformed lines raise ``ParseError`` with the
    offending line number.
    """
    raw_articles = {}
    for line_number, record in _read_jsonl(articles_path):
        article_id = str(_require(record, "article_id", articles_path, line_number))
        if article_id in raw_articles:
            raise ParseError(str(articles_path), line_number, f"duplicate article_id {article_id!r}")
        embedding = record.get("embedding")
        if embedding is not None:
            try:
                embedding = [float(x) for x in embedding]
            except (TypeError, ValueError):
                raise ParseError(
                    str(articles_path), line_number, "embedding must be a list of numbers"
                ) from None
        raw_articles[article_id] = {
            "authors": [str(a) for a in record.get("authors", [])],
            "topics": [str(t) for t in record.get("topics", [])],
            "iptc_tags": [str(t) for t in record.get("iptc_tags", [])],
            "embedding": embedding,
        }

    article_ids = sorted(raw_articles)
    article_index = {a: i for i, a in enumerate(article_ids)}
    author_ids = sorted({a for rec in raw_articles.values() for a in rec["authors"]})
    topic_ids = sorted({t for rec in raw_articles.values() for t in rec["topics"]})
    iptc_ids = sorted({t for rec in raw_articles.values() for t in rec["iptc_tags"]})
    author_index = {a: i for i, a in enumerate(author_ids)}
    topic_index = {t: i for i, t in enumerate(topic_ids)}
    iptc_index = {t: i for i, t in enumerate(iptc_ids)}

    dims = {len(rec["embedding"]) for rec in raw_articles.values() if rec["embedding"] is not None}
    if len(dims) > 1:
        raise ParseError(str(articles_path), 0, f"embedding dimensions differ across articles: {sorted(dims)}")
    embeddings = None
    has_embedding = None
    if dims:
        dim = dims.pop()
        embeddings = np.zeros((len(article_ids), dim), dtype=np.float64)
        has_embedding = np.zeros(len(article_ids), dtype=bool)
        for article_id, rec in raw_articles.items():
            if rec["embedding"] is not None:
                embeddings[article_index[article_id]] = rec["embedding"]
                has_embedding[article_index[article_id]] = True

    catalog = ArticleCatalog(
        article_ids=article_ids,
        authors=[[author_index[a] for a in raw_articles[aid]["authors"]] for aid in article_ids],
        topics=[[topic_index[t] for t in raw_articles[aid]["topics"]] for aid in article_ids],
        iptc_tags=[[iptc_index[t] for t in raw_articles[aid]["iptc_tags"]] for aid in article_ids],
        author_ids=author_ids,
        topic_ids=topic_ids,
        iptc_ids=iptc_ids,
        embeddings=embeddings,
        has_embedding=has_embedding,
    )

    events = []
    user_set = set()
    dropped = 0
    for line_number, record in _read_jsonl(events_path):
        user_id = str(_require(record, "user_id", events_path, line_number))
        article_id = str(_require(record, "article_id", events_path, line_number))
        if not user_id or not article_id:
            raise ParseError(str(events_path), line_number, "empty user_id or article_id")
        ts = _parse_timestamp(_require(record, "timestamp", events_path, line_number), str(events_path), line_number)
        if article_id not in article_index:
            dropped += 1
            continue
        user_set.add(user_id)
        events.append((user_id, article_index[article_id], ts))
    if dropped:
        log.warning("dropped %d events referencing articles missing from the catalog", dropped)

    user_ids = sorted(user_set)
    user_index = {u: i for i, u in enumerate(user_ids)}
    user_arr = np.array([user_index[u] for u, _, _ in events], dtype=np.int64)
    article_arr = np.array([a for _, a, _ in events], dtype=np.int64)
    ts_arr = np.array([t for _, _, t in events], dtype=np.float64)
    order = np.argsort(ts_arr, kind="stable")

    interactions = InteractionLog(
        user=user_arr[order],
        article=article_arr[order],
        timestamp=ts_arr[order],
        user_ids=user_ids,
        dropped_events=dropped,
    )
    return interactions, catalog


def _format_number(x: float) -> float | int:
    return int(x) if float(x).is_integer() else float(x)


def write_dataset(interactions: InteractionLog, catalog: ArticleCatalog, out_dir: str | Path) -> tuple[Path, Path]:
    """Write ``events.jsonl`` and ``articles.jsonl`` under ``out_dir``.

    Loading the written pair reproduces the in-memory structures exactly
    (see tests), which is what makes seeded experiment runs portable.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    events_path = out_dir / "events.jsonl"
    articles_path = out_dir / "articles.jsonl"

    with open(articles_path, "w", encoding="utf-8") as fh:
        for idx, article_id in enumerate(catalog.article_ids):
            record = {
                "article_id": article_id,
                "authors": [catalog.author_ids[a] for a in catalog.authors[idx]],
                "topics": [catalog.topic_ids[t] for t in catalog.topics[idx]],
            }
            if catalog.iptc_tags[idx]:
                record["iptc_tags"] = [catalog.iptc_ids[t] for t in catalog.iptc_tags[idx]]
            if catalog.embeddings is not None and catalog.has_embedding[idx]:
                record["embedding"] = [float(x) for x in catalog.embeddings[idx]]
            fh.write(json.dumps(record) + "\n")

    with open(events_path, "w", encoding="utf-8") as fh:
        for row in range(len(interactions)):
            fh.write(
                json.dumps(
                    {
                        "user_id": interactions.user_ids[int(interactions.user[row])],
                        "article_id": catalog.article_ids[int(interactions.article[row])],
                        "timestamp": _format_number(interactions.timestamp[row]),
                    }
                )
                + "\n"
            )
    return events_path, articles_path


@dataclass
class SyntheticConfig:
    """Knobs for the synthetic generator.

    Defaults mirror a mid-sized news dataset: a few thousand users, a few
    hundred articles and authors, four weeks of traffic. The author
    popularity law is ``(rank + plateau)^{-popularity_exponent}``; a zero
    exponent gives near-uniform popularity.
    """

    n_users: int = 3600
    n_articles: int = 700
    n_authors: int = 150
    n_topics: int = 850
    timespan_days: int = 28
    popularity_exponent: float = 1.2
    seed: int = 7
    # shape constants, rarely worth touching
    heavy_user_fraction: float = 0.05
    heavy_daily_rate: float = 12.0
    light_daily_rate: float = 0.4
    popularity_mix: float = 0.55  # probability an event is popularity-driven
    author_affinity_mix: float = 0.25  # probability it goes to a followed author
    recency_halflife_days: float = 6.0
    preferred_topics_per_user: int = 5
    followed_authors_per_user: int = 3
    two_author_fraction: float = 0.15
    embedding_dim: int = 24
    author_plateau: float = 0.7
    authorship_uniform_share: float = 0.3
    attractiveness_exponent: float = 0.3
    attractiveness_noise: float = 0.3

    def validate(self):
        for name in ("n_users", "n_articles", "n_authors", "n_topics", "timespan_days"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.popularity_mix + self.author_affinity_mix > 1.0:
            raise ValueError("channel mixture probabilities exceed 1")


def generate_synthetic(config: SyntheticConfig) -> tuple[InteractionLog, ArticleCatalog]:
    """Generate a seeded dataset with power-law author popularity.

    Articles carry 1-2 authors and 1-5 topics; events pick an article
    either from a global popularity channel (attractiveness scaled by the
    authors' weights and recency) or from the user's preferred topics.
    Heavy users produce enough last-day traffic for held-out evaluation.
    """
    config.validate()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))

    ranks = np.arange(config.n_authors, dtype=np.float64)
    author_weight = (ranks + 1.0 + config.author_plateau) ** (-config.popularity_exponent)
    author_weight /= author_weight.sum()

    topic_weight = (np.arange(config.n_topics, dtype=np.float64) + 1.0) ** -0.8
    topic_weight /= topic_weight.sum()

    # articles: authors, topics, publication day, attractiveness.
    # popular authors both write more articles and write more attractive
    # ones, so the head of the popularity law owns the most-read pieces
    u_share = config.authorship_uniform_share
    authorship_p = u_share / config.n_authors + (1.0 - u_share) * author_weight
    authorship_p /= authorship_p.sum()
    authors: list[list[int]] = []
    topics: list[list[int]] = []
    for _ in range(config.n_articles):
        n_auth = 2 if rng.random() < config.two_author_fraction else 1
        chosen = rng.choice(config.n_authors, size=n_auth, replace=False, p=authorship_p)
        authors.append(sorted(int(a) for a in chosen))
        n_top = int(rng.integers(1, 6))
        chosen_topics = rng.choice(config.n_topics, size=n_top, replace=False, p=topic_weight)
        topics.append(sorted(int(t) for t in chosen_topics))
    # spread publication evenly over the timespan so every slice sees a
    # comparable author mix
    pub_day = (np.arange(config.n_articles) * config.timespan_days) // config.n_articles
    base_quality = np.array([author_weight[a].sum() for a in authors])
    # sub-linear coupling keeps the head's event share near the figure's
    # shape instead of squaring the skew
    attractiveness = base_quality**config.attractiveness_exponent * rng.lognormal(
        0.0, config.attractiveness_noise, size=config.n_articles
    )

    # topic-anchored embeddings so nearest-neighbor articles are topical
    projection = rng.standard_normal((config.n_topics, config.embedding_dim))
    embeddings = np.zeros((config.n_articles, config.embedding_dim))
    for idx, topic_list in enumerate(topics):
        embeddings[idx] = projection[topic_list].mean(axis=0)
    embeddings += 0.15 * rng.standard_normal(embeddings.shape)
    embeddings /= np.linalg.norm(embeddings, axis=1, keepdims=True)

    # users: activity level, preferred topics, followed authors
    heavy = rng.random(config.n_users) < config.heavy_user_fraction
    rates = np.where(heavy, config.heavy_daily_rate, config.light_daily_rate)
    pref_count = min(config.preferred_topics_per_user, config.n_topics)
    pref_topics = np.empty((config.n_users, pref_count), dtype=np.int64)
    pref_weights = np.empty((config.n_users, pref_count))
    follow_count = min(config.followed_authors_per_user, config.n_authors)
    followed = np.empty((config.n_users, follow_count), dtype=np.int64)
    for u in range(config.n_users):
        pref_topics[u] = rng.choice(config.n_topics, size=pref_count, replace=False, p=topic_weight)
        w = rng.random(pref_count) + 0.2
        pref_weights[u] = w / w.sum()
        followed[u] = rng.choice(config.n_authors, size=follow_count, replace=False, p=author_weight)
    pref_matrix = sp.csr_matrix(
        (
            pref_weights.ravel(),
            (pref_topics.ravel(), np.repeat(np.arange(config.n_users), pref_count)),
        ),
        shape=(config.n_topics, config.n_users),
    )
    article_topic = sp.csr_matrix(
        (
            np.ones(sum(len(t) for t in topics)),
            (
                np.repeat(np.arange(config.n_articles), [len(t) for t in topics]),
                np.concatenate([np.array(t, dtype=np.int64) for t in topics]),
            ),
        ),
        shape=(config.n_articles, config.n_topics),
    )
    articles_by_author = [
        np.flatnonzero([author in lst for lst in authors]) for author in range(config.n_authors)
    ]

    users_out: list[int] = []
    articles_out: list[int] = []
    ts_out: list[float] = []
    for day in range(config.timespan_days):
        available = np.flatnonzero(pub_day <= day)
        recency_full = np.zeros(config.n_articles)
        recency_full[available] = np.exp(
            -(day - pub_day[available]) / config.recency_halflife_days
        )
        pool_mass = attractiveness * recency_full
        pop_p = pool_mass[available] / pool_mass[available].sum()
        # per-user topical affinity for today's pool
        match = np.asarray((article_topic[available] @ pref_matrix).todense())
        match *= recency_full[available][:, None]

        counts = rng.poisson(rates)
        active = np.flatnonzero(counts > 0)
        for u in active:
            n_ev = int(counts[u])
            # each event draws its channel: global popularity, followed
            # authors, or preferred topics
            channels = rng.random(n_ev)
            n_pop = int((channels < config.popularity_mix).sum())
            n_author = int(
                (channels < config.popularity_mix + config.author_affinity_mix).sum()
            ) - n_pop
            n_topic = n_ev - n_pop - n_author
            picks = []
            if n_author:
                followed_pool = np.concatenate([articles_by_author[a] for a in followed[u]])
                weights = pool_mass[followed_pool]
                total = weights.sum()
                if total > 0:
                    picks.append(
                        rng.choice(followed_pool, size=n_author, p=weights / total)
                    )
                else:
                    n_pop += n_author
            if n_pop:
                picks.append(rng.choice(available, size=n_pop, p=pop_p))
            if n_topic:
                affinity = match[:, u]
                total = affinity.sum()
                if total <= 0:
                    picks.append(rng.choice(available, size=n_topic, p=pop_p))
                else:
                    picks.append(rng.choice(available, size=n_topic, p=affinity / total))
            chosen = np.concatenate(picks)
            users_out.extend([u] * n_ev)
            articles_out.extend(int(a) for a in chosen)
            ts_out.extend(
                BASE_EPOCH + day * SECONDS_PER_DAY + rng.uniform(0, SECONDS_PER_DAY, size=n_ev)
            )

    user_arr = np.array(users_out, dtype=np.int64)
    article_arr = np.array(articles_out, dtype=np.int64)
    ts_arr = np.array(ts_out, dtype=np.float64)
    order = np.argsort(ts_arr, kind="stable")

    # keep only entities that actually occur, so writing these structures
    # and loading them back reproduces identical indices
    present_users = np.unique(user_arr)
    user_remap = {int(u): i for i, u in enumerate(present_users)}
    user_arr = np.array([user_remap[int(u)] for u in user_arr], dtype=np.int64)
    used_authors = sorted({a for lst in authors for a in lst})
    used_topics = sorted({t for lst in topics for t in lst})
    author_remap = {a: i for i, a in enumerate(used_authors)}
    topic_remap = {t: i for i, t in enumerate(used_topics)}

    width_u = len(str(config.n_users - 1))
    width_a = len(str(config.n_articles - 1))
    width_w = len(str(config.n_authors - 1))
    width_t = len(str(config.n_topics - 1))
    catalog = ArticleCatalog(
        article_ids=[f"a{i:0{width_a}d}" for i in range(config.n_articles)],
        authors=[[author_remap[a] for a in lst] for lst in authors],
        topics=[[topic_remap[t] for t in lst] for lst in topics],
        iptc_tags=[[] for _ in range(config.n_articles)],
        author_ids=[f"w{i:0{width_w}d}" for i in used_authors],
        topic_ids=[f"t{i:0{width_t}d}" for i in used_topics],
        iptc_ids=[],
        embeddings=embeddings,
        has_embedding=np.ones(config.n_articles, dtype=bool),
    )
    interactions = InteractionLog(
        user=user_arr[order],
        article=article_arr[order],
        timestamp=ts_arr[order],
        user_ids=[f"u{int(i):0{width_u}d}" for i in present_users],
    )
    return interactions, catalog
