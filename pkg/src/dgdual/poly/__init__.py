"""Polynomial arithmetic, Groebner bases and module presentations."""

from .groebner import buchberger, normal_form, s_polys_reduce_to_zero
from .modules import (
    INFINITE, ModulePres, QuotientRing, RingMap, k_dimension, kaehler_presentation,
    kernel, syzygies,
)
from .ring import MonomialOrder, Poly, PolyRing, RingMismatch, parse_expr, poly_ring

__all__ = [
    "INFINITE", "ModulePres", "MonomialOrder", "Poly", "PolyRing", "QuotientRing",
    "RingMap", "RingMismatch", "buchberger", "k_dimension", "kaehler_presentation",
    "kernel", "normal_form", "parse_expr", "poly_ring", "s_polys_reduce_to_zero",
    "syzygies",
]
