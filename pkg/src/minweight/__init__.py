"""Minimum-weight random graphs with edge constraints.

A simulation laboratory for two stochastic optimization models: minimum
weight trees with an edge-count constraint on the complete graph under
uniformly heavy random weights, and hop-constrained minimum passage times on
the integer lattice. Exact small-instance oracles, certified bounds, and
reproducible Monte Carlo experiment drivers verify the models' scaling laws.
"""

from .rng import MIXER_ID
from .weights import PassageTimeSpec, SeedContext, TreeWeightSpec

__version__ = "0.1.0"

__all__ = [
    "MIXER_ID",
    "PassageTimeSpec",
    "SeedContext",
    "TreeWeightSpec",
    "__version__",
]
