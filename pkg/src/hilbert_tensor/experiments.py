"""Normalized operators T_H and F_H, bound verification and extremal search.

Norms of ``H(f)`` need far more angles than norms of polynomial inputs:
``H(f)`` carries a logarithmic singularity at ``z = 1`` whose angular width
on the circle of radius ``r`` is about ``1 - r``. Inputs are therefore
measured on the ``input`` grid and outputs on the much wider ``output`` grid.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .hilbert import (
    DomainError,
    OperatorOutput,
    apply_integral,
    apply_series,
    check_order,
    inner_coefficients,
    series_truncation,
    slice_operator,
    tail_truncation,
)
from .quadrature import DiskGrid, QuadratureRule, default_line_rule, disk_grid
from .reports import BoundReport, SearchResult
from .series import PowerSeries, as_series, exact_power_length, power
from .spaces import bergman_norm, evaluate_on_circles
from .special import bound_constant, BoundConstantSpec, fh_regime, slice_bound_factor, tensor_regime

log = logging.getLogger(__name__)

ZERO_NORM = 1e-300
ROOT_ZERO = 1e-13
SEARCH_SLACK = 1e-6
BRANCH = "principal"


@dataclass(frozen=True)
class Grids:
    """Disk grids used by a verification: inputs, operator outputs, F_H values."""

    input: DiskGrid = field(default_factory=lambda: disk_grid(64, 256))
    output: DiskGrid = field(default_factory=lambda: disk_grid(64, 16384))
    fh: DiskGrid = field(default_factory=lambda: disk_grid(64, 1024))
    search: DiskGrid = field(default_factory=lambda: disk_grid(64, 2048))
    tail_tol: float = 1e-8

    def config(self) -> dict:
        return {
            "input": self.input.config(),
            "output": self.output.config(),
            "fh": self.fh.config(),
            "search": self.search.config(),
            "tail_tol": self.tail_tol,
        }


DEFAULT_GRIDS = Grids()


def _check_p_tensor(p: float) -> float:
    if not (p > 2 and math.isfinite(p)):
        raise DomainError(f"the tensor bound needs 2 < p < inf; got p={p}")
    return float(p)


def _coeff_list(f: PowerSeries) -> list:
    return [[float(c.real), float(c.imag)] for c in f.coeffs]


def t_operator(f: PowerSeries, p: float, m: int, out_len: int,
               grid: DiskGrid | None = None) -> OperatorOutput:
    """``T_H(f) = ||f||_{A^{p(m-1)}}^{2-m} H(f)``, with ``T_H(0) = 0``."""
    f = as_series(f)
    m = check_order(m)
    p = _check_p_tensor(p)
    grid = grid or DEFAULT_GRIDS.input
    norm = bergman_norm(f, p * (m - 1), grid)
    if norm < ZERO_NORM:
        return OperatorOutput(PowerSeries(np.zeros(out_len)), f.trunc_len, m)
    out = apply_series(f, m, out_len)
    if m == 2:
        return out
    return OperatorOutput(out.series.scale(norm ** (2 - m)), f.trunc_len, m)


def _check_even(m: int) -> int:
    m = check_order(m)
    if m % 2:
        raise DomainError(f"F_H is defined for even m only; got m={m}")
    return m


def f_operator(f: PowerSeries, m: int, z, rule: QuadratureRule | None = None,
               return_flags: bool = False):
    """``F_H(f)(z) = H(f)(z)**(1/(m-1))`` on the principal branch, ``m`` even.

    ``H(f)(z)`` comes from the integral route. Where ``|H(f)(z)| < 1e-13`` the
    root is set to 0 and the branch flag is raised.
    """
    m = _check_even(m)
    w = np.asarray(apply_integral(f, m, z, rule))
    flags = np.abs(w) < ROOT_ZERO
    if m == 2:
        out = np.where(flags, 0.0, w).astype(complex)
    else:
        safe = np.where(flags, 1.0, w)
        out = np.where(flags, 0.0, np.exp(np.log(safe) / (m - 1)))
    out = out[()] if out.ndim == 0 else out
    if return_flags:
        return out, (bool(flags) if flags.ndim == 0 else flags)
    return out


def operator_norm(f: PowerSeries, p: float, m: int, grid: DiskGrid, tol: float = 1e-8) -> tuple[float, int]:
    """``||H(f)||_{A^p}`` from the series route; returns ``(norm, K)``."""
    K = series_truncation(f, m, grid.max_radius, tol)
    return bergman_norm(apply_series(f, m, K).series, p, grid), K


def verify_bound(f: PowerSeries, p: float, m: int, grids: Grids | None = None) -> BoundReport:
    """Check ``||H(f)||_{A^p} <= C(p) ||f||_{A^{p(m-1)}}^{m-1}`` for one ``f``."""
    f = as_series(f)
    m = check_order(m)
    p = _check_p_tensor(p)
    grids = grids or DEFAULT_GRIDS
    fnorm = bergman_norm(f, p * (m - 1), grids.input)
    if fnorm < ZERO_NORM:
        raise DomainError("verify_bound needs a nonzero f")
    regime = tensor_regime(p)
    const = bound_constant(BoundConstantSpec(p, m, regime))
    lhs, K = operator_norm(f, p, m, grids.output, grids.tail_tol)
    config = {"p": p, "m": m, "coeffs": _coeff_list(f), "truncation": K, "grids": grids.config()}
    return BoundReport("tensor", config, lhs, const * fnorm ** (m - 1), regime.value)


def verify_slice_bound(f: PowerSeries, p: float, m: int, t: float, grid: DiskGrid | None = None) -> BoundReport:
    """Check the single-slice bound on ``||T_t(f)||_{A^p}``."""
    f = as_series(f)
    m = check_order(m)
    p = _check_p_tensor(p)
    if not 0 < t < 1:
        raise DomainError(f"t must lie in (0, 1); got t={t}")
    grid = grid or DEFAULT_GRIDS.input
    fnorm = bergman_norm(f, p * (m - 1), grid)
    lhs = grid.lp_norm(slice_operator(f, m, t, grid.points), p)
    rhs = slice_bound_factor(p, t) * fnorm ** (m - 1)
    regime = "slice_large_p" if p >= 4 else "slice_small_p"
    config = {"p": p, "m": m, "t": float(t), "coeffs": _coeff_list(f), "grids": {"input": grid.config()}}
    return BoundReport("slice", config, lhs, rhs, regime)


def verify_fh_bound(f: PowerSeries, p: float, m: int, grids: Grids | None = None,
                    rule: QuadratureRule | None = None) -> BoundReport:
    """Check ``||F_H(f)||_{A^p} <= C_F(p, m) ||f||_{A^p}`` for even ``m``."""
    f = as_series(f)
    m = _check_even(m)
    regime = fh_regime(p, m)
    grids = grids or DEFAULT_GRIDS
    rule = rule or default_line_rule()
    fnorm = bergman_norm(f, p, grids.input)
    if fnorm < ZERO_NORM:
        raise DomainError("verify_fh_bound needs a nonzero f")
    values, flags = f_operator(f, m, grids.fh.points, rule, return_flags=True)
    lhs = grids.fh.lp_norm(values, p)
    const = bound_constant(BoundConstantSpec(p, m, regime))
    n_flag = int(np.count_nonzero(flags))
    notes = [f"branch={BRANCH}"]
    if n_flag:
        notes.append(f"{n_flag} grid points with |H(f)| < {ROOT_ZERO}: root set to 0")
    config = {"p": float(p), "m": m, "coeffs": _coeff_list(f), "branch": BRANCH,
              "rule": rule.description, "grids": grids.config()}
    return BoundReport("fh", config, lhs, const * fnorm, regime.value, certifying=n_flag == 0, notes=notes)


class BoundAnomaly(RuntimeError):
    """A measured ratio exceeded a proven bound constant."""

    def __init__(self, message: str, result: SearchResult | None = None):
        super().__init__(message)
        self.result = result


class _RatioEvaluator:
    """Cheap ``||H(f)||_{A^p} / ||f||_{A^{p(m-1)}}^{m-1}`` for length-``n`` real ``f``.

    ``H(f) = sum_j b_j h_j`` with ``h_j(z) = sum_k z^k / (k + j + 1)``; the
    ``h_j`` are sampled on the search grid once.
    """

    def __init__(self, p: float, m: int, n: int, grids: Grids):
        self.p, self.m, self.n = p, m, n
        self.in_grid = grids.input
        self.out_grid = grids.search
        self.q = p * (m - 1)
        pts = self.in_grid.points
        self.powers = pts[None, :, :] ** np.arange(n)[:, None, None]
        J = exact_power_length(n, m - 1)
        K = tail_truncation(1.0, self.out_grid.max_radius, grids.tail_tol * 1e-2)
        base = 1.0 / (np.arange(K + J, dtype=float) + 1.0)
        self.basis = np.stack([
            evaluate_on_circles(PowerSeries(base[j:j + K]), self.out_grid.radii, self.out_grid.n_theta)
            for j in range(J)
        ])
        self.count = 0

    def normalize(self, x: np.ndarray) -> tuple[np.ndarray, float]:
        vals = np.tensordot(x, self.powers, axes=1)
        norm = self.in_grid.lp_norm(vals, self.q)
        if norm < ZERO_NORM:
            return x, 0.0
        return x / norm, norm

    def __call__(self, x: np.ndarray) -> float:
        self.count += 1
        x, norm = self.normalize(x)
        if norm == 0.0:
            return 0.0
        b = power(PowerSeries(x), self.m - 1, exact_power_length(self.n, self.m - 1)).coeffs
        values = np.tensordot(b, self.basis, axes=1)
        return self.out_grid.lp_norm(values, self.p)


def _pattern_search(evaluate, x0: np.ndarray, budget: int, step: float = 0.5, floor: float = 1e-6):
    """Coordinate pattern search with step halving; returns ``(x, value, history)``."""
    x = x0.copy()
    best = evaluate(x)
    used = 1
    history = [(used, best)]
    while step >= floor and used < budget:
        improved = False
        for i in range(x.size):
            for sign in (1.0, -1.0):
                if used >= budget:
                    break
                trial = x.copy()
                trial[i] += sign * step
                val = evaluate(trial)
                used += 1
                if val > best:
                    x, best = trial, val
                    history.append((used, best))
                    improved = True
                    break
        if not improved:
            step *= 0.5
    return x, best, used, history


def ratio(f: PowerSeries, p: float, m: int, grids: Grids | None = None) -> float:
    """``||H(f)||_{A^p} / ||f||_{A^{p(m-1)}}^{m-1}`` through the full series route."""
    grids = grids or DEFAULT_GRIDS
    f = as_series(f)
    fnorm = bergman_norm(f, p * (m - 1), grids.input)
    if fnorm < ZERO_NORM:
        return 0.0
    lhs, _ = operator_norm(f, p, m, grids.output, grids.tail_tol)
    return lhs / fnorm ** (m - 1)


def extremal_search(p: float, m: int, n_coeffs: int, budget: int, seed: int, restarts: int = 8,
                    grids: Grids | None = None, init: np.ndarray | None = None,
                    workers: int = 1) -> SearchResult:
    """Lower-bound ``||T_H||`` by maximizing the ratio over real length-``n_coeffs`` polynomials.

    Each restart draws its own start from ``default_rng([seed, restart])`` (or
    uses ``init`` for restart 0) and runs a coordinate pattern search on its
    share of ``budget`` evaluations. The winner is re-measured from scratch on
    the output grid; that value is ``best_ratio``.
    """
    m = check_order(m)
    p = _check_p_tensor(p)
    regime = tensor_regime(p)
    if int(n_coeffs) != n_coeffs or n_coeffs < 1:
        raise DomainError("n_coeffs must be a positive integer")
    if int(budget) != budget or budget < 1:
        raise DomainError("budget must be a positive integer")
    restarts = max(1, min(int(restarts), int(budget)))
    grids = grids or DEFAULT_GRIDS
    evaluator = _RatioEvaluator(p, m, int(n_coeffs), grids)
    shares = [budget // restarts + (1 if i < budget % restarts else 0) for i in range(restarts)]

    def run(i):
        rng = np.random.default_rng([int(seed), i])
        x0 = rng.standard_normal(n_coeffs)
        if i == 0 and init is not None:
            x0 = np.zeros(n_coeffs)
            init_arr = np.asarray(init, dtype=float).ravel()[:n_coeffs]
            x0[: init_arr.size] = init_arr
        x0, _ = evaluator.normalize(x0)

        def objective(x):
            return evaluator(x)

        return _pattern_search(objective, x0, shares[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run, range(restarts)))
    else:
        runs = [run(i) for i in range(restarts)]

    trajectory, offset, running = [], 0, -math.inf
    for (_, _, used, history) in runs:
        for k, val in history:
            if val > running:
                running = val
                trajectory.append((offset + k, val))
        offset += used
    winner = max(range(restarts), key=lambda i: (runs[i][1], -i))
    x_best, search_ratio = runs[winner][0], runs[winner][1]
    x_best, _ = evaluator.normalize(x_best)
    best = PowerSeries(x_best)
    best_ratio = ratio(best, p, m, grids)
    const = bound_constant(BoundConstantSpec(p, m, regime))
    config = {"p": p, "m": m, "n_coeffs": int(n_coeffs), "budget": int(budget), "seed": int(seed),
              "restarts": restarts, "regime": regime.value, "grids": grids.config(),
              "warm_start": init is not None}
    result = SearchResult(best, best_ratio, offset, int(seed), trajectory, config,
                          search_ratio=search_ratio, bound=const)
    if best_ratio > const + SEARCH_SLACK:
        raise BoundAnomaly(f"ratio {best_ratio!r} exceeds bound constant {const!r}", result)
    return result
