"""Exact combinatorics of Ext groups of locally analytic generalized
Steinberg representations of GL_n over a p-adic field.

The engine materializes the first two pages of the staircase-complex
spectral sequence over the rationals, models the second page by atomic
tuples, computes cup products in atom coordinates, and parameterizes the
hyperplane invariants of the top Ext space.
"""

from .engine import Engine
from .errors import ConsistencyError, EngineError, NotInSpanError
from .pages import PageStore, TitsPage

__all__ = [
    "Engine",
    "TitsPage",
    "PageStore",
    "EngineError",
    "ConsistencyError",
    "NotInSpanError",
]

__version__ = "0.1.0"
