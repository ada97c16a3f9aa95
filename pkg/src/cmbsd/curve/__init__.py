"""Elliptic curves over Q and over imaginary quadratic fields of class number one."""

from .local import LocalK, LocalQ, local_at, vp
from .model import (
    BadReductionError,
    CurveModel,
    CurveParseError,
    Iso,
    SingularCurveError,
    ap,
    count_points,
    count_points_mod,
    invariants,
    parse_curve,
)
from .tate import (
    LocalData,
    NonMinimalError,
    conductor,
    is_minimal,
    local_data,
    minimal_model,
    tamagawa_ideal,
    tamagawa_product,
    tate_algorithm,
)
from .torsion import TorsionInfo, division_polys, torsion, torsion_K

__all__ = [
    "BadReductionError",
    "CurveModel",
    "CurveParseError",
    "Iso",
    "LocalData",
    "LocalK",
    "LocalQ",
    "NonMinimalError",
    "SingularCurveError",
    "TorsionInfo",
    "ap",
    "conductor",
    "count_points",
    "count_points_mod",
    "division_polys",
    "invariants",
    "is_minimal",
    "local_at",
    "local_data",
    "minimal_model",
    "parse_curve",
    "tamagawa_ideal",
    "tamagawa_product",
    "tate_algorithm",
    "torsion",
    "torsion_K",
    "vp",
]
