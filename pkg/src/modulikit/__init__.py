"""Alpha-stability, closed curves at critical values, torus chambers and divisor checks."""

from .curve_model import CurveGraph, load_curve
from .errors import ModuliKitError
from .stability import AlphaRegime, is_alpha_stable, regime_of
from .closed_points import classify_closed
from .vgit_engine import TorusAction, monomial_ideals, vgit_loci

__version__ = "0.1.0"

__all__ = [
    "AlphaRegime",
    "CurveGraph",
    "ModuliKitError",
    "TorusAction",
    "classify_closed",
    "is_alpha_stable",
    "load_curve",
    "monomial_ideals",
    "regime_of",
    "vgit_loci",
]
