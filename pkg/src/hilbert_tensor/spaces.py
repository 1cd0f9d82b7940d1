"""Bergman and Hardy norms and the pointwise growth estimates.

Long series (the output of the Hilbert operator runs to ~1e5 terms near the
boundary) are evaluated on circles by folding the coefficients modulo the
number of angles and taking one FFT per radius. This is exact algebra, not
an approximation: ``sum_k c_k r^k w^k`` with ``w^n = 1`` only depends on the
residues ``k mod n``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .hilbert import DomainError, _check_disk
from .quadrature import DiskGrid, disk_grid
from .series import PowerSeries, as_series, evaluate

DEFAULT_HARDY_RADII = (0.9, 0.99, 0.999)
DEFAULT_HARDY_N_THETA = 1024
REPORT_RTOL = 1e-9


class QuasiNormWarning(UserWarning):
    """``p < 1``: the returned value is a quasi-norm."""


class Family(str, enum.Enum):
    BERGMAN = "bergman"
    HARDY = "hardy"


@dataclass(frozen=True)
class SpaceSpec:
    family: Family
    p: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        _check_p(self.p)


def _check_p(p: float) -> float:
    if not (p > 0 and math.isfinite(p)):
        raise DomainError(f"p must be positive and finite, got {p!r}")
    if p < 1:
        warnings.warn(f"p={p} < 1 gives a quasi-norm", QuasiNormWarning, stacklevel=3)
    return float(p)


def evaluate_on_circles(f: PowerSeries, radii: Sequence[float], n_theta: int) -> np.ndarray:
    """Values of ``f`` at ``r e^{2 pi i j / n_theta}``; shape ``(len(radii), n_theta)``."""
    c = as_series(f).coeffs
    radii = np.asarray(radii, dtype=float)
    if np.any(radii < 0) or np.any(radii >= 1):
        raise DomainError("radii must lie in [0, 1)")
    n = int(n_theta)
    folded = np.zeros((radii.size, n), dtype=complex)
    zero = radii == 0.0
    logr = np.log(np.where(zero, 1.0, radii))
    lmax = float(logr.max()) if radii.size else 0.0
    rpow = np.exp(logr[:, None] * np.arange(min(n, c.size), dtype=float)[None, :])
    for start in range(0, c.size, n):
        if start * lmax < -745.0 and start > 0:
            break  # r**k underflows for every radius
        block = c[start:start + n]
        lead = np.exp(logr * start)[:, None]
        folded[:, : block.size] += block[None, :] * (lead * rpow[:, : block.size])
    if np.any(zero):
        folded[zero] = 0.0
        folded[zero, 0] = c[0]
    # sum_l A_l e^{2 pi i l j / n} = n * ifft(A)_j
    return np.fft.ifft(folded, axis=1) * n


def evaluate_on_grid(f: PowerSeries, grid: DiskGrid) -> np.ndarray:
    return evaluate_on_circles(f, grid.radii, grid.n_theta)


def grid_values(f, grid: DiskGrid) -> np.ndarray:
    """Samples of ``f`` on ``grid.points`` for a series, a callable, or a ready array."""
    if isinstance(f, PowerSeries):
        return evaluate_on_grid(f, grid)
    if callable(f):
        return np.asarray(f(grid.points))
    values = np.asarray(f)
    if values.shape != grid.shape:
        raise ValueError(f"sampled values must have shape {grid.shape}")
    return values


def bergman_norm(f: PowerSeries | Callable | np.ndarray, p: float, grid: DiskGrid | None = None) -> float:
    """``||f||_{A^p} = (int_B |f|^p dmu)^(1/p)`` by disk quadrature."""
    p = _check_p(p)
    grid = grid or disk_grid()
    return grid.lp_norm(grid_values(f, grid), p)


def hardy_circle_means(f: PowerSeries, p: float, n_theta: int = DEFAULT_HARDY_N_THETA,
                       radii: Sequence[float] = DEFAULT_HARDY_RADII) -> np.ndarray:
    """Integral means ``M_p(r) = ((1/2pi) int |f(r e^{it})|^p dt)^(1/p)`` per radius."""
    p = _check_p(p)
    if int(n_theta) != n_theta or n_theta < 1:
        raise ValueError("n_theta must be a positive integer")
    vals = np.abs(evaluate_on_circles(f, radii, n_theta))
    scale = vals.max(axis=1)
    safe = np.where(scale > 0, scale, 1.0)
    return scale * np.mean((vals / safe[:, None]) ** p, axis=1) ** (1.0 / p)


def hardy_norm(f: PowerSeries, p: float, n_theta: int = DEFAULT_HARDY_N_THETA,
               radii: Sequence[float] = DEFAULT_HARDY_RADII) -> float:
    """Largest circle mean over the radius ladder.

    This is a lower estimate of the true supremum over ``r < 1``. The ladder
    is scanned in full; means that decrease with ``r`` (impossible for an
    analytic ``f``) trigger a warning.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0:
        raise ValueError("need at least one radius")
    means = hardy_circle_means(f, p, n_theta, radii)
    order = np.argsort(radii)
    ordered = means[order]
    if np.any(np.diff(ordered) < -1e-12 * np.maximum(ordered[1:], 1e-300)):
        warnings.warn("Hardy circle means are not monotone in r; increase n_theta", RuntimeWarning,
                      stacklevel=2)
    return float(means.max())


@dataclass(frozen=True)
class GrowthCheck:
    lhs: float
    rhs: float
    holds: bool | None  # None: Hardy check inside the radius-truncation slack

    @property
    def indeterminate(self) -> bool:
        return self.holds is None


def growth_bound_check(f: PowerSeries, spec: SpaceSpec, z: complex, norm: float,
                       hardy_radius: float = max(DEFAULT_HARDY_RADII)) -> GrowthCheck:
    """Compare ``|f(z)|`` with the pointwise bound for ``f`` in ``A^p`` or ``H^p``.

    Bergman: ``|f(z)| <= (1 - |z|^2)^(-2/p) ||f||_{A^p}``.
    Hardy: ``|f(z)| <= (2 / (1 - |z|))^(1/p) ||f||_{H^p}``. The Hardy ``norm`` is
    taken at radius ``hardy_radius``; for a polynomial of degree ``d`` the true
    norm is at most ``hardy_radius**(-d)`` times larger, and a violation inside
    that margin is reported as indeterminate.
    """
    f = as_series(f)
    z = complex(_check_disk(z))
    lhs = float(abs(evaluate(f, z)))
    az = abs(z)
    if spec.family is Family.BERGMAN:
        rhs = (1.0 / (1.0 - az * az)) ** (2.0 / spec.p) * norm
        return GrowthCheck(lhs, rhs, lhs <= rhs * (1.0 + REPORT_RTOL))
    rhs = (2.0 / (1.0 - az)) ** (1.0 / spec.p) * norm
    if lhs <= rhs * (1.0 + REPORT_RTOL):
        return GrowthCheck(lhs, rhs, True)
    slack = hardy_radius ** -(f.trunc_len - 1)
    return GrowthCheck(lhs, rhs, None if lhs <= rhs * slack else False)
