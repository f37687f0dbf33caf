"""Truncated de Rham-Witt complex of a polynomial algebra over F_p."""
from .connection import DrwConnection
from .forms import (
    DrwForm,
    drw_d,
    drw_F,
    drw_to_witt,
    drw_V,
    split_integral_fractional,
    teichmuller_form,
    witt_to_drw,
)

__all__ = [
    "DrwConnection",
    "DrwForm",
    "drw_d",
    "drw_F",
    "drw_V",
    "drw_to_witt",
    "split_integral_fractional",
    "teichmuller_form",
    "witt_to_drw",
]
