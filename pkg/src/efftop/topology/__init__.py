"""Bases, effective opens, and the conversions between their presentations."""

from .bases import FormalInclusion, LacombeBasisData, SpreenBasis, equality_inclusion, stream
from .opens import (
    ErshovOpen,
    MetricOpen,
    NoginaOpen,
    SpreenOpen,
    basic_as_open,
    ball_metric_open,
    interval_open,
    lacombe_member,
    nogina_basic,
    open_member,
    spreen_intersect,
    spreen_stream,
    spreen_union,
    spreen_union_of,
)
from .conversions import (
    lacombe_as_spreen_basis,
    lacombe_to_spreen,
    metric_to_spreen,
    spreen_basis_to_lacombe_basis,
    spreen_to_lacombe,
    spreen_to_metric,
)
from .moschovakis import moschovakis_pnk, nogina_to_lacombe, universal_dense_names, universal_dense_program
