"""Gamma/beta functions and the closed-form operator-norm constants.

Every constant is formed in log space. ``Gamma(1 - 2/p)`` blows up as
``p -> 2+``; anything above :data:`DIVERGENCE_THRESHOLD` is reported as
``inf`` rather than as a huge finite number.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .hilbert import DomainError, check_order

DIVERGENCE_THRESHOLD = 1e15
_LOG_PI = math.log(math.pi)


def log_gamma(x: float) -> float:
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"gamma needs a finite positive argument, got {x!r}")
    return math.lgamma(x)


def gamma(x: float) -> float:
    """Gamma function on the positive reals."""
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"gamma needs a finite positive argument, got {x!r}")
    return math.gamma(x)


def log_beta(u: float, v: float) -> float:
    return log_gamma(u) + log_gamma(v) - log_gamma(u + v)


def beta(u: float, v: float) -> float:
    """``B(u, v) = Gamma(u) Gamma(v) / Gamma(u + v)`` for ``u, v > 0``."""
    if not (u > 0 and v > 0):
        raise DomainError(f"beta needs positive arguments, got ({u!r}, {v!r})")
    return math.exp(log_beta(u, v))


class Regime(str, enum.Enum):
    MATRIX_LP = "matrix_lp"
    TENSOR_LARGE_P = "tensor_large_p"
    TENSOR_SMALL_P = "tensor_small_p"
    FH_LARGE_P = "fh_large_p"
    FH_SMALL_P = "fh_small_p"


@dataclass(frozen=True)
class BoundConstantSpec:
    p: float
    m: int = 2
    regime: Regime = Regime.TENSOR_LARGE_P

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        object.__setattr__(self, "m", check_order(self.m))
        if not math.isfinite(self.p):
            raise DomainError("p must be finite")
        self.check_domain()

    def check_domain(self) -> None:
        p, m = self.p, self.m
        if self.regime is Regime.MATRIX_LP:
            ok, rule = 1 < p, "1 < p"
        elif self.regime is Regime.TENSOR_LARGE_P:
            ok, rule = p >= 4, "p >= 4"
        elif self.regime is Regime.TENSOR_SMALL_P:
            ok, rule = 2 < p <= 4, "2 < p <= 4"
        elif self.regime is Regime.FH_LARGE_P:
            ok, rule = p >= 4 * (m - 1), "p >= 4(m-1)"
        else:
            ok, rule = 2 * (m - 1) < p <= 4 * (m - 1), "2(m-1) < p <= 4(m-1)"
        if not ok:
            raise DomainError(f"regime {self.regime.value} requires {rule}; got p={p}, m={m}")


def tensor_regime(p: float) -> Regime:
    """Regime of the bound on ``||H(f)||_{A^p}``; p = 4 belongs to both, large wins."""
    if p >= 4:
        return Regime.TENSOR_LARGE_P
    if p > 2:
        return Regime.TENSOR_SMALL_P
    raise DomainError(f"the tensor bound needs p > 2; got p={p}")


def fh_regime(p: float, m: int) -> Regime:
    m = check_order(m)
    if p >= 4 * (m - 1):
        return Regime.FH_LARGE_P
    if p > 2 * (m - 1):
        return Regime.FH_SMALL_P
    raise DomainError(f"the F_H bound needs p > 2(m-1) = {2 * (m - 1)}; got p={p}")


def _log_small_p_constant(q: float) -> float:
    # log of 4^(4/q - 1) sqrt(pi) Gamma(1 - 2/q) / Gamma(3/2 - 2/q)
    return ((4.0 / q - 1.0) * math.log(4.0) + 0.5 * _LOG_PI
            + math.lgamma(1.0 - 2.0 / q) - math.lgamma(1.5 - 2.0 / q))


def _log_sine_constant(angle: float) -> float:
    # log of pi / sin(angle), angle in (0, pi)
    return _LOG_PI - math.log(math.sin(angle))


def log_bound_constant(spec: BoundConstantSpec) -> float:
    p, m = spec.p, spec.m
    r = spec.regime
    if r is Regime.MATRIX_LP:
        return _log_sine_constant(math.pi / p)
    if r is Regime.TENSOR_LARGE_P:
        return _log_sine_constant(2.0 * math.pi / p)
    if r is Regime.TENSOR_SMALL_P:
        return _log_small_p_constant(p)
    q = p / (m - 1)
    if r is Regime.FH_LARGE_P:
        return _log_sine_constant(2.0 * math.pi / q) / (m - 1)
    # 4^(4/p) (sqrt(pi) Gamma(1 - 2/q) / (4 Gamma(3/2 - 2/q)))^(1/(m-1))
    inner = 0.5 * _LOG_PI + math.lgamma(1.0 - 2.0 / q) - math.log(4.0) - math.lgamma(1.5 - 2.0 / q)
    return (4.0 / p) * math.log(4.0) + inner / (m - 1)


def bound_constant(spec: BoundConstantSpec) -> float:
    """Closed-form bound constant for ``spec``; ``inf`` past the divergence threshold."""
    value = log_bound_constant(spec)
    if value > math.log(DIVERGENCE_THRESHOLD):
        return math.inf
    return math.exp(value)


def constant(regime: str | Regime, p: float, m: int = 2) -> float:
    return bound_constant(BoundConstantSpec(p, m, Regime(regime)))


def slice_bound_factor(p: float, t: float) -> float:
    """Coefficient of ``||f||^{m-1}`` bounding ``||T_t(f)||_{A^p}`` at one slice ``t``."""
    if not 0 < t < 1:
        raise DomainError("t must lie in (0, 1)")
    if p >= 4:
        return t ** (2.0 / p - 1.0) * (1.0 - t) ** (-2.0 / p)
    if p > 2:
        return 2.0 ** (4.0 / p - 1.0) * t ** (-2.0 / p) * (1.0 - t) ** (-2.0 / p)
    raise DomainError(f"slice bound needs p > 2; got p={p}")
