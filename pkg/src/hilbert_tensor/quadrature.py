"""Deterministic quadrature on [0, 1] and on the unit disk.

Line rules integrate against ds on [0, 1]; the singular rule refines
geometrically toward s = 1, where integrands like ``f(s)**(m-1) / (1 - z s)``
blow up. The disk grid integrates against the normalized area measure
``dmu = r dr dtheta / pi`` so that ``mu(B) = 1``.

All reductions go through ``numpy.sum`` over contiguous arrays, which uses
pairwise summation, so results are reproducible for a fixed configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_ORDER = 16
DEFAULT_LEVELS = 40
DEFAULT_RADIAL_ORDER = 64
DEFAULT_N_THETA = 256

# The last panel [1 - 2**-levels, 1] is mapped through s = 1 - h u**q,
# which flattens algebraic endpoint singularities (1 - s)**(-a).
_FINAL_PANEL_GRADING = 8


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights on (0, 1).

    ``tails`` holds ``1 - nodes`` computed without cancellation, which
    matters for integrands singular at s = 1.
    """

    nodes: np.ndarray
    weights: np.ndarray
    tails: np.ndarray
    description: str = ""

    def __post_init__(self):
        if not (self.nodes.shape == self.weights.shape == self.tails.shape):
            raise ValueError("nodes, weights and tails must have equal length")
        if np.any(self.nodes <= 0) or np.any(self.tails <= 0):
            raise ValueError("nodes must lie strictly inside (0, 1)")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")

    def __len__(self):
        return self.nodes.size

    def integrate(self, values) -> complex | float:
        """Weighted sum of integrand samples taken at ``nodes``.

        ``values`` may carry extra leading axes; the last axis runs over nodes.
        """
        values = np.asarray(values)
        return np.sum(values * self.weights, axis=-1)

    def __call__(self, func):
        return self.integrate(func(self.nodes))


@lru_cache(maxsize=None)
def _legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


@lru_cache(maxsize=64)
def gauss_line_rule(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on [0, 1], exact up to degree ``2*order - 1``."""
    if int(order) != order or order < 1:
        raise ValueError("order must be a positive integer")
    x, w = _legendre(int(order))
    nodes = (x + 1.0) / 2.0
    tails = (1.0 - x) / 2.0
    return QuadratureRule(_readonly(nodes), _readonly(w / 2.0), _readonly(tails),
                          f"gauss(order={order})")


@lru_cache(maxsize=64)
def singular_line_rule(order: int = DEFAULT_ORDER, levels: int = DEFAULT_LEVELS) -> QuadratureRule:
    """Composite Gauss rule on [0, 1] refined geometrically toward s = 1.

    Panels are ``[1 - 2**-j, 1 - 2**-(j+1)]`` for ``j = 0 .. levels-1`` plus a
    final panel ``[1 - 2**-levels, 1]`` on which the nodes are graded toward
    the endpoint. Works for any integrable endpoint exponent without knowing it.
    """
    if int(order) != order or order < 1:
        raise ValueError("order must be a positive integer")
    if int(levels) != levels or levels < 1:
        raise ValueError("levels must be a positive integer")
    if levels > 60:
        raise ValueError("levels > 60 puts nodes within rounding distance of 1")
    x, w = _legendre(int(order))
    u = (x + 1.0) / 2.0
    nodes, weights, tails = [], [], []
    for j in range(int(levels)):
        # panel [1 - 2^-j, 1 - 2^-(j+1)], width 2^-(j+1); tails are exact scalings
        width = 2.0 ** -(j + 1)
        t = width * (2.0 - u)  # 1 - s, from 2*width down to width
        tails.append(t)
        nodes.append(1.0 - t)
        weights.append(width * w / 2.0)
    h = 2.0 ** -levels
    q = min(_FINAL_PANEL_GRADING, 2 * int(order))
    t = h * u**q
    tails.append(t)
    nodes.append(1.0 - t)
    weights.append(h * q * u ** (q - 1) * w / 2.0)
    return QuadratureRule(
        _readonly(np.concatenate(nodes)),
        _readonly(np.concatenate(weights)),
        _readonly(np.concatenate(tails)),
        f"singular(order={order}, levels={levels})",
    )


def default_line_rule() -> QuadratureRule:
    return singular_line_rule(DEFAULT_ORDER, DEFAULT_LEVELS)


@dataclass(frozen=True, eq=False)
class DiskGrid:
    """Tensor grid on the unit disk for the normalized area measure.

    Radially a Gauss rule in ``u = r**2`` (so ``dmu = du dtheta / (2 pi)``),
    angularly the uniform trapezoid rule with ``n_theta`` points.
    """

    u_nodes: np.ndarray
    u_weights: np.ndarray
    n_theta: int
    radial_order: int

    @property
    def radii(self) -> np.ndarray:
        return np.sqrt(self.u_nodes)

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    @property
    def max_radius(self) -> float:
        return float(np.sqrt(self.u_nodes.max()))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.u_nodes.size, self.n_theta)

    @property
    def points(self) -> np.ndarray:
        """Grid points, shape ``(n_radial, n_theta)``."""
        return self.radii[:, None] * np.exp(1j * self.thetas)[None, :]

    @property
    def weights(self) -> np.ndarray:
        return np.broadcast_to((self.u_weights / self.n_theta)[:, None], self.shape)

    def integrate(self, values) -> complex | float:
        """Integral over the disk of samples given on ``points``."""
        values = np.asarray(values)
        if values.shape[-2:] != self.shape:
            raise ValueError(f"values must have trailing shape {self.shape}")
        ring_sums = np.sum(values, axis=-1) / self.n_theta
        return np.sum(ring_sums * self.u_weights, axis=-1)

    def lp_norm(self, values, p: float) -> float:
        """``(integral of |values|**p dmu)**(1/p)`` for samples on the grid."""
        a = np.abs(np.asarray(values))
        scale = float(a.max()) if a.size else 0.0
        if scale == 0.0 or not np.isfinite(scale):
            return scale
        # scaled to avoid overflow of |v|**p for large p
        return scale * float(self.integrate((a / scale) ** p)) ** (1.0 / p)

    def config(self) -> dict:
        return {"radial_order": self.radial_order, "n_theta": self.n_theta}


@lru_cache(maxsize=16)
def disk_grid(radial_order: int = DEFAULT_RADIAL_ORDER, n_theta: int = DEFAULT_N_THETA) -> DiskGrid:
    if int(radial_order) != radial_order or radial_order < 1:
        raise ValueError("radial_order must be a positive integer")
    if int(n_theta) != n_theta or n_theta < 1:
        raise ValueError("n_theta must be a positive integer")
    rule = gauss_line_rule(int(radial_order))
    return DiskGrid(rule.nodes, rule.weights, int(n_theta), int(radial_order))


def mirrored(rule: QuadratureRule) -> QuadratureRule:
    """Reflect a rule through s -> 1 - s, moving its refinement to s = 0."""
    return QuadratureRule(rule.tails[::-1].copy(), rule.weights[::-1].copy(),
                          rule.nodes[::-1].copy(), f"mirrored {rule.description}")
