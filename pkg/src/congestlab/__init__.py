"""Desk-scale simulation laboratory for channel-typed synchronous protocols.

Subpackages by role:

- ``graphs``: typed tripartite instances and triangle oracles
- ``params``: per-level parameter schedules and feasibility checks
- ``randomness``: the public/pair/private tape model
- ``sampling``: the base, recursive, and restructured instance families
- ``protocols``: protocol specs, the synchronous simulator, and judging
- ``elimination``: the round-elimination compiler and hybrid-law samplers
- ``infotheory``: exact Shannon measures over finite tables
- ``oracles``: independent reference values for validation
- ``cli``: the experiment runner
"""

from .graphs import Layer, TypedTripartiteGraph, VertexId
from .params import ParamSchedule, canonical_params, feasibility_check
from .protocols import ProtocolSpec, Transcript, judge, registry, simulate
from .randomness import RandomnessView

__all__ = [
    "Layer", "TypedTripartiteGraph", "VertexId",
    "ParamSchedule", "canonical_params", "feasibility_check",
    "ProtocolSpec", "Transcript", "judge", "registry", "simulate",
    "RandomnessView",
]

__version__ = "0.1.0"
