"""Exact and numeric tools for trivalent map enumeration via recurrence coefficients."""

from .asymptotics import SelfSimilarFamily, solve_hierarchy, string_residual, toda_residual
from .equilibrium import equilibrium_numeric, equilibrium_series
from .genus import eg_closed, solve_free_energies
from .motzkin import OperatorPolynomial, enumerate_motzkin, operator_entry
from .oracle import BACKEND, count_maps, genus_census
from .series import PowerSeries, implicit_solve

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "OperatorPolynomial",
    "PowerSeries",
    "SelfSimilarFamily",
    "count_maps",
    "eg_closed",
    "enumerate_motzkin",
    "equilibrium_numeric",
    "equilibrium_series",
    "genus_census",
    "implicit_solve",
    "operator_entry",
    "solve_free_energies",
    "solve_hierarchy",
    "string_residual",
    "toda_residual",
]
