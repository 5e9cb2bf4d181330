"""Buffer scores deciding which buffered node is evicted into the batch next."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence


class ScoreKind(str, enum.Enum):
    ANR = "anr"
    HAA = "haa"
    NSS = "nss"
    CMS = "cms"
    CBS = "cbs"


DEFAULT_THETA = {ScoreKind.HAA: 0.75, ScoreKind.CBS: 2.0}


@dataclass(frozen=True)
class ScoringConfig:
    kind: ScoreKind = ScoreKind.HAA
    theta: float | None = None
    beta: float = 2.0
    eta: float = 0.5
    d_max: int = 10_000

    def __post_init__(self):
        object.__setattr__(self, "kind", ScoreKind(self.kind))
        if self.theta is None:
            object.__setattr__(self, "theta", DEFAULT_THETA.get(self.kind, 0.0))
        if self.beta < 1:
            raise ValueError("beta must be >= 1")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        if self.theta < 0:
            raise ValueError("theta must be >= 0")
        if self.d_max < 1:
            raise ValueError("d_max must be >= 1")


@dataclass(frozen=True)
class NodeScoreInputs:
    degree: int
    assigned_neighbors: int = 0
    buffered_neighbors: int = 0
    per_block_assigned: Sequence[int] = ()

    def __post_init__(self):
        if self.assigned_neighbors + self.buffered_neighbors > self.degree:
            raise ValueError("assigned + buffered neighbors exceed degree")
        if self.per_block_assigned and sum(self.per_block_assigned) > self.assigned_neighbors:
            raise ValueError("per-block counts exceed assigned neighbors")


# scorer(degree, assigned, buffered, best_block_count) -> score
Scorer = Callable[[int, int, int, int], float]


def make_scorer(cfg: ScoringConfig) -> Scorer:
    """Return a fast closure evaluating the configured score.

    Degree-0 nodes score 0 for every kind.
    """
    kind, theta, beta, eta = cfg.kind, cfg.theta, cfg.beta, cfg.eta
    d_max = float(cfg.d_max)

    if kind is ScoreKind.ANR:
        def f(d, a, b, top):
            return a / d if d else 0.0
    elif kind is ScoreKind.HAA:
        def f(d, a, b, top):
            if not d:
                return 0.0
            dh = d / d_max
            if dh > 1.0:
                dh = 1.0
            return dh ** beta + theta * (1.0 - dh) * (a / d)
    elif kind is ScoreKind.NSS:
        def f(d, a, b, top):
            return (a + eta * b) / d if d else 0.0
    elif kind is ScoreKind.CMS:
        def f(d, a, b, top):
            return top / d if d else 0.0
    elif kind is ScoreKind.CBS:
        def f(d, a, b, top):
            return d / d_max + theta * (a / d) if d else 0.0
    else:  # pragma: no cover
        raise ValueError(kind)
    return f


def score(cfg: ScoringConfig, inputs: NodeScoreInputs) -> float:
    top = max(inputs.per_block_assigned, default=0)
    return make_scorer(cfg)(inputs.degree, inputs.assigned_neighbors, inputs.buffered_neighbors, top)


def max_score(cfg: ScoringConfig) -> float:
    """Upper bound of the score for buffered nodes (degree <= d_max).

    The HAA degree term is convex in the normalized degree and the ANR term
    is linear in it, so the maximum over [0, 1] sits at an endpoint:
    ``max(1, theta)``.
    """
    kind = cfg.kind
    if kind is ScoreKind.HAA:
        return max(1.0, cfg.theta)
    if kind is ScoreKind.CBS:
        return 1.0 + cfg.theta
    return 1.0
