"""Validated run configuration shared by the CLI and the simulator.

One declarative JSON file is the source of truth; CLI flags override
individual keys. The resolved configuration is serialized next to every
run's outputs so a run directory is sufficient to reproduce itself.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import ConfigError

VALID_METHODS = (
    "hypergraph",
    "hypergraph_fair",
    "hypergraph_coverage",
    "hypergraph_diversified",
    "popularity",
    "random",
    "coverage_reranking",
    "diversity_reranking",
)
VALID_EDGES = ("E1", "E2", "E3", "E4", "E5", "E6")
DEFAULT_THETA_GRID = (0.1, 0.5, 1.0, 2.0, 10.0)


@dataclass
class RunConfig:
    events: str = ""
    articles: str = ""
    out_dir: str = "run"
    edges: list[str] = field(default_factory=lambda: list(VALID_EDGES))
    knn_k_users: int = 10
    knn_k_articles: int = 10
    theta: float = 1.0
    theta_grid: list[float] | None = None
    solver: str = "iterative"
    tol: float = 1e-8
    max_iters: int = 10_000
    methods: list[str] = field(
        default_factory=lambda: [
            "hypergraph",
            "hypergraph_fair",
            "hypergraph_coverage",
            "coverage_reranking",
        ]
    )
    k: int = 20
    n_rounds: int = 4
    rerank_pool: int = 5  # candidate pool for re-ranking, as a multiple of k
    diversity_n_samples: int = 3
    diversity_weight: float = 0.5
    relevance_norm: str = "minmax"
    seed: int = 7

    def validate(self, require_data: bool = True) -> "RunConfig":
        if require_data:
            for name in ("events", "articles"):
                path = getattr(self, name)
                if not path:
                    raise ConfigError(f"missing required data path: {name}")
                if not Path(path).exists():
                    raise ConfigError(f"{name} path does not exist: {path}")
        if not self.methods:
            raise ConfigError("method list is empty")
        for m in self.methods:
            if m not in VALID_METHODS:
                raise ConfigError(f"unknown method {m!r}; valid: {', '.join(VALID_METHODS)}")
        if not self.edges:
            raise ConfigError("edge selection is empty")
        for e in self.edges:
            if e not in VALID_EDGES:
                raise ConfigError(f"unknown edge kind {e!r}")
        if self.solver not in ("iterative", "direct"):
            raise ConfigError(f"solver must be 'iterative' or 'direct', got {self.solver!r}")
        if not self.theta > 0:
            raise ConfigError("theta must be positive")
        if self.theta_grid is not None and (
            not self.theta_grid or any(not t > 0 for t in self.theta_grid)
        ):
            raise ConfigError("theta_grid must be a non-empty list of positive values")
        if self.k < 1 or self.n_rounds < 1 or self.rerank_pool < 1:
            raise ConfigError("k, n_rounds and rerank_pool must be >= 1")
        if self.knn_k_users < 1 or self.knn_k_articles < 1:
            raise ConfigError("knn sizes must be >= 1")
        if self.diversity_n_samples < 0 or self.diversity_weight < 0:
            raise ConfigError("diversity hyperparameters must be >= 0")
        if self.relevance_norm not in ("minmax", "sum"):
            raise ConfigError("relevance_norm must be 'minmax' or 'sum'")
        return self

    @classmethod
    def from_file(cls, path: str | Path, overrides: dict | None = None) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if overrides:
            raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**raw)

    def to_dict(self) -> dict:
        return asdict(self)

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
