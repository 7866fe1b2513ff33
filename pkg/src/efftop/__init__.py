"""Computable topology on numbered sets: program kernel, numberings, computable
reals, metric spaces, effective bases and opens, and their conversions."""

from .kernel import REGISTRY, Halted, Running, dovetail, pair, run, tup, unpair, untup
from .numberings import NO, NOT_YET, YES, Verdict
from .metric import balls_spreen_basis, cauchy_completion, get_space, make_ball

__all__ = [
    "REGISTRY",
    "Halted",
    "Running",
    "dovetail",
    "pair",
    "run",
    "tup",
    "unpair",
    "untup",
    "NO",
    "NOT_YET",
    "YES",
    "Verdict",
    "balls_spreen_basis",
    "cauchy_completion",
    "get_space",
    "make_ball",
]
