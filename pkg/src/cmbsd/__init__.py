"""Arithmetic of CM elliptic curves and numerical checks of the BSD formula."""

from .bsd import (
    BSDReport,
    GrossInput,
    congruent_sweep,
    gross_curve_model,
    gross_sha,
    verify_bsd_equivariant_K,
    verify_bsd_Q,
)
from .cm import HeckeChar, detect_cm, hecke_character
from .curve import CurveModel, parse_curve
from .lfun import LValue, curve_l_value, equivariant_l_value
from .periods import PeriodData, equivariant_period, neron_real_period, period_lattice
from .qfield import ClassGroup, FracIdeal, QElem, QuadField, class_group

__version__ = "0.1.0"

__all__ = [
    "BSDReport",
    "ClassGroup",
    "CurveModel",
    "FracIdeal",
    "GrossInput",
    "HeckeChar",
    "LValue",
    "PeriodData",
    "QElem",
    "QuadField",
    "class_group",
    "congruent_sweep",
    "curve_l_value",
    "detect_cm",
    "equivariant_l_value",
    "equivariant_period",
    "gross_curve_model",
    "gross_sha",
    "hecke_character",
    "neron_real_period",
    "parse_curve",
    "period_lattice",
    "verify_bsd_Q",
    "verify_bsd_equivariant_K",
]
