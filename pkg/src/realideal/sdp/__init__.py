from .relax import (
    GapReport,
    Pop,
    SdpBlock,
    SdpInstance,
    TruncationData,
    build_dual,
    build_primal,
    gap_report,
    truncation,
    verify_dual_pair,
)
from .sdpa import export_sdpa, import_sdpa
from .solver import SolveResult, solve, solve_pair

__all__ = [
    "GapReport",
    "Pop",
    "SdpBlock",
    "SdpInstance",
    "TruncationData",
    "build_dual",
    "build_primal",
    "gap_report",
    "truncation",
    "verify_dual_pair",
    "export_sdpa",
    "import_sdpa",
    "SolveResult",
    "solve",
    "solve_pair",
]
