"""Multiple Stratonovich integrals and their piecewise-linear approximations."""
from ._backend import BACKEND
from .funcs import Exp, FunctionTuple, Poly, Sin
from .multi_index import MultiIndex, enumerate_gn, weight
from .ordinary import ordinary_multiple, ordinary_via_decomposition, sup_error
from .paths import (
    DiscreteBrownianPath,
    PiecewiseLinearPath,
    RngSeed,
    gen_brownian,
    gen_transport,
    polygonal,
    refine_grid,
)
from .strat import GridFunction, StratMethod, strat_integral

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Poly",
    "Sin",
    "Exp",
    "FunctionTuple",
    "MultiIndex",
    "enumerate_gn",
    "weight",
    "RngSeed",
    "PiecewiseLinearPath",
    "DiscreteBrownianPath",
    "gen_brownian",
    "gen_transport",
    "polygonal",
    "refine_grid",
    "GridFunction",
    "StratMethod",
    "strat_integral",
    "ordinary_multiple",
    "ordinary_via_decomposition",
    "sup_error",
]
