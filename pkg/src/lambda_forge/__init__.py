"""Exact computer algebra for Witt vectors, delta-rings and lambda-rings."""

from .rings import CoeffRing, QQ, ZZ
from .poly import MultiPoly, exact_div_int, poly_arith, substitute
from .series import TruncSeries, series_ops
from .witt import (
    GhostVec,
    TruncationSet,
    WittVec,
    comult,
    counit,
    frobenius,
    from_series,
    ghost_inverse,
    ghost_map,
    restrict,
    structure_polys,
    teichmuller,
    to_series,
    verschiebung,
    w2_pullback_check,
    witt_arith,
)

__all__ = [
    "CoeffRing",
    "GhostVec",
    "MultiPoly",
    "QQ",
    "TruncSeries",
    "TruncationSet",
    "WittVec",
    "ZZ",
    "comult",
    "counit",
    "exact_div_int",
    "frobenius",
    "from_series",
    "ghost_inverse",
    "ghost_map",
    "poly_arith",
    "restrict",
    "series_ops",
    "structure_polys",
    "substitute",
    "teichmuller",
    "to_series",
    "verschiebung",
    "w2_pullback_check",
    "witt_arith",
]
