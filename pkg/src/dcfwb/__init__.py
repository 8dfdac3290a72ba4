"""dcfwb: exact differential-polynomial workbench with desk-scale
computability constructions (graph codings, jump-inversion forcing, and a
finite-injury isomorphism builder driven by scripted approximations)."""

from .diffpoly import DiffPoly, Rank, RANK_INFINITE, ORDER_INFINITE
from .grammar import parse, render

__all__ = ["DiffPoly", "Rank", "RANK_INFINITE", "ORDER_INFINITE", "parse", "render"]

__version__ = "0.1.0"
