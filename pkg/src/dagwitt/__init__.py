"""Overconvergent de Rham-Witt comparison engine at finite truncation."""
from .base_arith import GlobalParams, PAdicScalar, kappa_for
from .comparison import WittLift, pushforward_connection, t_f_on_forms
from .dagger import DaggerSeries, FrobeniusLift, MwConnection, MwForm
from .drw import DrwForm
from .kernels import BACKEND
from .mpoly import MPoly, parse_poly
from .witt import WittVector, teichmuller

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DaggerSeries",
    "DrwForm",
    "FrobeniusLift",
    "GlobalParams",
    "MPoly",
    "MwConnection",
    "MwForm",
    "PAdicScalar",
    "WittLift",
    "WittVector",
    "kappa_for",
    "parse_poly",
    "pushforward_connection",
    "t_f_on_forms",
    "teichmuller",
]
