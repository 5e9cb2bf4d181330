"""Buffered streaming graph partitioning with a prioritized buffer and batch-wise multilevel assignment."""

from .engine import EngineConfig, PartitionResult, partition, run_pass_one, run_restream
from .fennel import fennel_pass
from .graph import StreamGraph, load_metis, write_metis
from .metrics import build_report, edge_cut
from .ordering import StreamOrder, random_order, source_order
from .scoring import ScoreKind, ScoringConfig
from .state import PartitionState

__all__ = [
    "EngineConfig",
    "PartitionResult",
    "PartitionState",
    "ScoreKind",
    "ScoringConfig",
    "StreamGraph",
    "StreamOrder",
    "build_report",
    "edge_cut",
    "fennel_pass",
    "load_metis",
    "partition",
    "random_order",
    "run_pass_one",
    "run_restream",
    "source_order",
    "write_metis",
]
