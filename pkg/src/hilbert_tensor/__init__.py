"""Hilbert tensor operator on Bergman and Hardy spaces of the unit disk."""

__version__ = "0.1.0"

from .experiments import (
    BoundAnomaly,
    Grids,
    extremal_search,
    f_operator,
    ratio,
    t_operator,
    verify_bound,
    verify_fh_bound,
    verify_slice_bound,
)
from .hilbert import (
    DomainError,
    apply_integral,
    apply_mobius,
    apply_series,
    apply_series_at,
    hilbert_matrix_apply,
    mobius_phi,
    mobius_psi,
    slice_operator,
    tensor_entry,
)
from .quadrature import DiskGrid, QuadratureRule, disk_grid, gauss_line_rule, singular_line_rule
from .reports import BoundReport, SearchResult
from .series import PowerSeries, convolve, evaluate, power
from .spaces import Family, QuasiNormWarning, SpaceSpec, bergman_norm, growth_bound_check, hardy_norm
from .special import BoundConstantSpec, Regime, beta, bound_constant, constant, gamma

__all__ = [
    "BoundAnomaly", "BoundConstantSpec", "BoundReport", "DiskGrid", "DomainError", "Family", "Grids",
    "PowerSeries", "QuadratureRule", "QuasiNormWarning", "Regime", "SearchResult", "SpaceSpec",
    "apply_integral", "apply_mobius", "apply_series", "apply_series_at", "bergman_norm", "beta",
    "bound_constant", "constant", "convolve", "disk_grid", "evaluate", "extremal_search", "f_operator",
    "gamma", "gauss_line_rule", "growth_bound_check", "hardy_norm", "hilbert_matrix_apply", "mobius_phi",
    "mobius_psi", "power", "ratio", "singular_line_rule", "slice_operator", "t_operator", "tensor_entry",
    "verify_bound", "verify_fh_bound", "verify_slice_bound",
]
