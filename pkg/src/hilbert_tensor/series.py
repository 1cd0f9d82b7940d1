"""Truncated power series on the unit disk.

A :class:`PowerSeries` holds the dense coefficients ``c_0 .. c_{N-1}`` of
``f(z) = sum_k c_k z^k``. Nothing here grows or shrinks a series behind the
caller's back: every product takes an explicit output length.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Above this length the Cauchy product goes through the FFT.
FFT_THRESHOLD = 512


@dataclass(frozen=True, eq=False)
class PowerSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size < 1:
            raise ValueError("a power series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def trunc_len(self) -> int:
        return self.coeffs.size

    def __len__(self):
        return self.coeffs.size

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"PowerSeries({np.array2string(self.coeffs, precision=6)})"

    def scale(self, alpha) -> "PowerSeries":
        return PowerSeries(alpha * self.coeffs)

    def padded(self, out_len: int) -> "PowerSeries":
        """Truncate or zero-pad to exactly ``out_len`` coefficients."""
        if out_len < 1:
            raise ValueError("out_len must be >= 1")
        c = np.zeros(out_len, dtype=complex)
        n = min(out_len, self.coeffs.size)
        c[:n] = self.coeffs[:n]
        return PowerSeries(c)

    def is_real_nonnegative(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0) and np.all(self.coeffs.real >= 0))

    @property
    def l1(self) -> float:
        return float(np.abs(self.coeffs).sum())


def as_series(f) -> PowerSeries:
    if isinstance(f, PowerSeries):
        return f
    return PowerSeries(f)


def evaluate(f: PowerSeries, z):
    """Horner evaluation of ``f`` at a scalar or array ``z``."""
    f = as_series(f)
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise ValueError("evaluation point must be finite")
    c = f.coeffs
    acc = np.full(z.shape, c[-1], dtype=complex)
    for ck in c[-2::-1]:
        acc = acc * z + ck
    return acc[()] if acc.ndim == 0 else acc


def _direct_product(a: np.ndarray, b: np.ndarray, out_len: int) -> np.ndarray:
    a = a[:out_len]
    b = b[:out_len]
    full = np.convolve(a, b)
    out = np.zeros(out_len, dtype=complex)
    n = min(out_len, full.size)
    out[:n] = full[:n]
    return out


def _fft_product(a: np.ndarray, b: np.ndarray, out_len: int) -> np.ndarray:
    a = a[:out_len]
    b = b[:out_len]
    n = a.size + b.size - 1
    size = 1 << (n - 1).bit_length()
    full = np.fft.ifft(np.fft.fft(a, size) * np.fft.fft(b, size))[:n]
    out = np.zeros(out_len, dtype=complex)
    k = min(out_len, n)
    out[:k] = full[:k]
    return out


def convolve(a: PowerSeries, b: PowerSeries, out_len: int, method: str = "auto") -> PowerSeries:
    """Cauchy product of ``a`` and ``b`` truncated to ``out_len`` terms.

    ``method`` is ``"direct"``, ``"fft"`` or ``"auto"``; the direct formula
    defines the result and the FFT path is only an acceleration.
    """
    a, b = as_series(a), as_series(b)
    if out_len < 1:
        raise ValueError("out_len must be >= 1")
    if method == "auto":
        method = "fft" if min(a.trunc_len, b.trunc_len, out_len) > FFT_THRESHOLD else "direct"
    if method == "direct":
        return PowerSeries(_direct_product(a.coeffs, b.coeffs, out_len))
    if method == "fft":
        return PowerSeries(_fft_product(a.coeffs, b.coeffs, out_len))
    raise ValueError(f"unknown method {method!r}")


def power(f: PowerSeries, e: int, out_len: int) -> PowerSeries:
    """``f**e`` by repeated convolution, truncated to ``out_len`` at each step."""
    f = as_series(f)
    if int(e) != e or e < 1:
        raise ValueError("exponent must be an integer >= 1")
    base = f.padded(out_len)
    result = base
    for _ in range(int(e) - 1):
        result = convolve(result, base, out_len)
    return result


def exact_power_length(n: int, e: int) -> int:
    """Length of the untruncated ``e``-th power of a length-``n`` series."""
    return e * (n - 1) + 1


# --- serialization ---------------------------------------------------------


def coeffs_from_json(data) -> np.ndarray:
    """Parse ``[re, im]`` pairs or bare real numbers into a complex array."""
    if isinstance(data, dict) and "coeffs" in data:
        data = data["coeffs"]
    if not isinstance(data, list) or not data:
        raise ValueError("series JSON must be a non-empty array")
    out = []
    for item in data:
        if isinstance(item, bool):
            raise ValueError(f"bad coefficient {item!r}")
        if isinstance(item, (int, float)):
            out.append(complex(item, 0.0))
        elif isinstance(item, list) and len(item) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in item
        ):
            out.append(complex(item[0], item[1]))
        else:
            raise ValueError(f"bad coefficient {item!r}")
    return np.array(out, dtype=complex)


def series_from_json(text: str) -> PowerSeries:
    return PowerSeries(coeffs_from_json(json.loads(text)))


def series_to_list(f: PowerSeries) -> list:
    return [[float(c.real), float(c.imag)] for c in as_series(f).coeffs]


def series_to_json(f: PowerSeries) -> str:
    return json.dumps(series_to_list(f))


def monomial(k: int, coef: complex = 1.0) -> PowerSeries:
    c = np.zeros(k + 1, dtype=complex)
    c[k] = coef
    return PowerSeries(c)


def from_real(values: Iterable[float]) -> PowerSeries:
    return PowerSeries(np.asarray(list(values), dtype=float))


def random_polynomial(rng: np.random.Generator, max_len: int = 8, low: float = -1.0,
                      high: float = 1.0, length: int | None = None) -> PowerSeries:
    n = length if length is not None else int(rng.integers(1, max_len + 1))
    c = rng.uniform(low, high, size=n)
    if not np.any(c):
        c[0] = 1.0
    return PowerSeries(c)


def random_corpus(count: int, seed: int, max_len: int = 8) -> list[PowerSeries]:
    """Seeded regression corpus of real polynomials with coefficients in [-1, 1]."""
    rng = np.random.default_rng(seed)
    return [random_polynomial(rng, max_len) for _ in range(count)]


def check_out_len(out_len: int) -> int:
    if int(out_len) != out_len or out_len < 1:
        raise ValueError("out_len must be a positive integer")
    return int(out_len)


def coeff_array(x: Sequence[complex]) -> np.ndarray:
    a = np.asarray(x, dtype=complex).ravel()
    if not np.all(np.isfinite(a)):
        raise ValueError("sequence entries must be finite")
    return a
