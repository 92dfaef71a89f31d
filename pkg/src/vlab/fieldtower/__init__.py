"""Exact field towers: finite fields, Q, rational functions, p-adics, series."""

from .base import Field, FieldElement, frobenius, has_pth_root, is_perfect
from .extension import SimpleExtension, adjoin_root
from .finite import PrimeField, gf
from .lazy_as import LazyASClosure
from .padic import PAdicField
from .poly import Poly
from .ratfunc import RationalFunctionField
from .rationals import QQ_FIELD, RationalField
from .series import LaurentSeriesField, PuiseuxSeriesField, SeriesField

__all__ = [
    "Field", "FieldElement", "frobenius", "has_pth_root", "is_perfect",
    "SimpleExtension", "adjoin_root", "PrimeField", "gf", "LazyASClosure",
    "PAdicField", "Poly", "RationalFunctionField", "QQ_FIELD", "RationalField",
    "LaurentSeriesField", "PuiseuxSeriesField", "SeriesField",
]
