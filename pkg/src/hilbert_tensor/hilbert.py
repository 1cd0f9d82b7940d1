"""The Hilbert tensor and the operator it induces on analytic functions.

For ``f(z) = sum a_k z^k`` and tensor order ``m`` the operator is

    H(f)(z) = sum_k ( sum_{i_2..i_m} a_{i_2} ... a_{i_m} / (k + i_2 + ... + i_m + 1) ) z^k.

Because the entries depend only on the index sum, the inner multi-index sum
collapses to ``sum_j b_j / (k + j + 1)`` with ``b`` the coefficients of
``f**(m-1)``. Three evaluation routes are provided and must agree:

* :func:`apply_series` -- coefficient contraction (the Hankel route),
* :func:`apply_integral` -- ``int_0^1 f(s)**(m-1) / (1 - z s) ds``,
* :func:`apply_mobius` -- the same integral along the path
  ``s = t / ((t - 1) z + 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quadrature import QuadratureRule, default_line_rule, mirrored
from .series import PowerSeries, as_series, check_out_len, coeff_array, evaluate, exact_power_length, power

# points per block when an integral path is vectorized over many z
_Z_BLOCK = 2048
_K_BLOCK = 1 << 16
KERNEL_DENOMINATOR_FLOOR = 1e-14


class DomainError(ValueError):
    """Parameters outside the region where an operation is defined."""


def check_order(m) -> int:
    if isinstance(m, bool) or int(m) != m or m < 2:
        raise DomainError(f"tensor order must be an integer >= 2, got {m!r}")
    return int(m)


def _check_disk(z, closed: bool = False) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("z must be finite")
    mod = np.abs(z)
    if np.any(mod > 1.0) if closed else np.any(mod >= 1.0):
        raise DomainError("z must lie in the open unit disk (|z| < 1)")
    return z


def tensor_entry(idx: Sequence[int]) -> float:
    """Entry ``1 / (i_1 + ... + i_m + 1)`` of the order-``len(idx)`` Hilbert tensor."""
    idx = list(idx)
    check_order(len(idx))
    if any(isinstance(i, bool) or int(i) != i or i < 0 for i in idx):
        raise DomainError("tensor indices must be nonnegative integers")
    return 1.0 / (sum(int(i) for i in idx) + 1)


def hilbert_matrix_apply(x, out_len: int) -> np.ndarray:
    """Truncated Hilbert matrix action ``y_i = sum_j x_j / (i + j + 1)``, ``i < out_len``."""
    x = coeff_array(x)
    out_len = check_out_len(out_len)
    j = np.arange(x.size, dtype=float)
    out = np.empty(out_len, dtype=complex)
    for start in range(0, out_len, _K_BLOCK):
        i = np.arange(start, min(out_len, start + _K_BLOCK), dtype=float)
        # row sums over ascending j; numpy reduces contiguous rows pairwise
        out[start:start + i.size] = np.sum(x[None, :] / (i[:, None] + j[None, :] + 1.0), axis=1)
    return out


@dataclass(frozen=True)
class OperatorOutput:
    """Coefficients of ``H(f)`` (first ``len(series)`` of them)."""

    series: PowerSeries
    source_trunc: int
    m: int

    @property
    def coeffs(self) -> np.ndarray:
        return self.series.coeffs

    def __call__(self, z):
        return evaluate(self.series, z)


def inner_coefficients(f: PowerSeries, m: int) -> PowerSeries:
    """Exact coefficients ``b`` of ``f**(m-1)``; no truncation."""
    f = as_series(f)
    m = check_order(m)
    return power(f, m - 1, exact_power_length(f.trunc_len, m - 1))


def apply_series(f: PowerSeries, m: int, out_len: int) -> OperatorOutput:
    """First ``out_len`` coefficients of ``H(f)`` by contraction through ``f**(m-1)``.

    The inner sum runs over the full support of ``f**(m-1)``; only the
    output index is truncated.
    """
    f = as_series(f)
    m = check_order(m)
    out_len = check_out_len(out_len)
    b = inner_coefficients(f, m)
    c = hilbert_matrix_apply(b.coeffs, out_len)
    return OperatorOutput(PowerSeries(c), f.trunc_len, m)


def tail_truncation(b_l1: float, radius: float, tol: float = 1e-8) -> int:
    """Smallest ``K`` with ``b_l1 * radius**K / ((K + 1) (1 - radius)) < tol``.

    Uses ``|c_k| <= ||b||_1 / (k + 1)``, so the quantity bounds the omitted
    tail ``sum_{k >= K} |c_k| radius**k`` of ``H(f)`` on ``|z| <= radius``.
    """
    if not 0.0 <= radius < 1.0:
        raise DomainError("radius must lie in [0, 1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if b_l1 == 0.0 or radius == 0.0:
        return 1

    def excess(k):
        return (math.log(b_l1) + k * math.log(radius) - math.log(k + 1.0)
                - math.log1p(-radius) - math.log(tol))

    if excess(1) < 0:
        return 1
    lo, hi = 1, 2
    while excess(hi) >= 0:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if excess(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return hi


def series_truncation(f: PowerSeries, m: int, radius: float, tol: float = 1e-8) -> int:
    """Output length for :func:`apply_series` good to ``tol`` on ``|z| <= radius``."""
    return tail_truncation(inner_coefficients(f, m).l1, radius, tol)


def _integrand_power(values: np.ndarray, m: int) -> np.ndarray:
    return values ** (m - 1)


def apply_integral(f: PowerSeries, m: int, z, rule: QuadratureRule | None = None):
    """``H(f)(z)`` as ``int_0^1 f(s)**(m-1) / (1 - z s) ds`` by quadrature.

    ``z`` may be a scalar or an array of points in the open disk.
    """
    f = as_series(f)
    m = check_order(m)
    z = _check_disk(z)
    rule = rule or default_line_rule()
    numer = _integrand_power(evaluate(f, rule.nodes), m) * rule.weights
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for start in range(0, flat.size, _Z_BLOCK):
        zz = flat[start:start + _Z_BLOCK, None]
        out[start:start + zz.shape[0]] = np.sum(numer[None, :] / (1.0 - zz * rule.nodes[None, :]), axis=1)
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


def _kernel_denominator(t, z):
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=complex)
    den = (t - 1.0) * z + 1.0
    if np.any(np.abs(den) < KERNEL_DENOMINATOR_FLOOR):
        raise DomainError("Mobius kernel denominator vanishes; need t in [0, 1] and |z| < 1")
    return den


def _check_t(t, open_interval: bool = False):
    t = np.asarray(t, dtype=float)
    bad = np.any((t <= 0) | (t >= 1)) if open_interval else np.any((t < 0) | (t > 1))
    if bad or not np.all(np.isfinite(t)):
        raise DomainError("t must lie in (0, 1)" if open_interval else "t must lie in [0, 1]")
    return t


def mobius_phi(t, z):
    """``phi(t, z) = t / ((t - 1) z + 1)``; maps the disk into itself for t in [0, 1]."""
    t = _check_t(t)
    z = _check_disk(z)
    return t / _kernel_denominator(t, z)


def mobius_psi(t, z):
    """``psi(t, z) = 1 / ((t - 1) z + 1)``."""
    t = _check_t(t)
    z = _check_disk(z)
    return 1.0 / _kernel_denominator(t, z)


def slice_operator(f: PowerSeries, m: int, t, z):
    """Slice integrand ``T_t(f)(z) = psi(t, z) * f(phi(t, z))**(m-1)``.

    ``t`` and ``z`` broadcast against each other.
    """
    f = as_series(f)
    m = check_order(m)
    t = _check_t(t, open_interval=True)
    z = _check_disk(z)
    den = _kernel_denominator(t, z)
    return _integrand_power(evaluate(f, t / den), m) / den


def default_mobius_rule() -> QuadratureRule:
    # for z near 1 the kernel psi(t, z) peaks at t = 0, so refine there
    return mirrored(default_line_rule())


def apply_mobius(f: PowerSeries, m: int, z, rule: QuadratureRule | None = None):
    """``H(f)(z)`` as ``int_0^1 psi(t, z) f(phi(t, z))**(m-1) dt`` by quadrature."""
    f = as_series(f)
    m = check_order(m)
    z = _check_disk(z)
    rule = rule or default_mobius_rule()
    t = rule.nodes[None, :]
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for start in range(0, flat.size, _Z_BLOCK):
        zz = flat[start:start + _Z_BLOCK, None]
        den = (t - 1.0) * zz + 1.0
        vals = _integrand_power(evaluate(f, t / den), m) / den
        out[start:start + zz.shape[0]] = np.sum(vals * rule.weights[None, :], axis=1)
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


def apply_series_at(f: PowerSeries, m: int, z, tol: float = 1e-9):
    """Evaluate ``H(f)`` at points ``z`` from the series route with a tail bound below ``tol``."""
    z = _check_disk(z)
    radius = float(np.max(np.abs(z))) if z.size else 0.0
    out = apply_series(f, m, series_truncation(f, m, radius, tol))
    return evaluate(out.series, z)
