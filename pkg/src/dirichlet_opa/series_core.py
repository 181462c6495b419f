"""
Truncated power series and the Hilbert-space structure of D_alpha.

A function f(z) = sum_k a_k z^k on the unit disk is represented by its first
N+1 Taylor coefficients.  The D_alpha inner product weights coefficient k by
(k+1)**alpha:

    <f, g>_alpha = sum_k a_k conj(b_k) (k+1)**alpha

so alpha = -1, 0, 1 give the Bergman, Hardy and Dirichlet norms.

Builders for infinite series (reproducing kernels, geometric series) take the
truncation degree explicitly and, where a geometric tail estimate exists,
record a certified bound on the D_alpha norm of the discarded tail in
``PowerSeries.tail_bound``.  The space the bound refers to is
``PowerSeries.tail_alpha``; because ||.||_beta <= ||.||_alpha for beta <= alpha
the bound also holds in every D_beta with beta <= tail_alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

__all__ = [
    "PowerSeries",
    "weight",
    "weights",
    "inner_product",
    "norm",
    "shift",
    "shift_operator_norm",
    "evaluate",
    "multiply",
    "exp_series",
    "weighted_geometric_tail",
    "build_kernel",
    "build_geometric",
    "singular_inner_exponent",
    "build_singular_inner",
]

Number = Union[int, float, complex]


@dataclass(frozen=True)
class PowerSeries:
    """Immutable truncated power series a_0 + a_1 z + ... + a_N z^N.

    ``tail_bound``, when set, bounds the D_alpha norm (alpha = ``tail_alpha``)
    of the coefficients beyond degree N that were dropped by the builder.
    """

    coeffs: np.ndarray
    tail_bound: Optional[float] = None
    tail_alpha: Optional[float] = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a power series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("power series coefficients must be finite")
        if self.tail_bound is not None and not self.tail_bound >= 0:
            raise ValueError(f"tail_bound must be non-negative, got {self.tail_bound}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Number]) -> "PowerSeries":
        return cls(np.asarray(coeffs, dtype=complex))

    @property
    def degree(self) -> int:
        """Truncation degree N (not the algebraic degree)."""
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def padded(self, N: int) -> np.ndarray:
        """Coefficient vector of length N+1, zero-padded or truncated."""
        out = np.zeros(N + 1, dtype=complex)
        m = min(N + 1, self.coeffs.size)
        out[:m] = self.coeffs[:m]
        return out

    def truncate(self, N: int) -> "PowerSeries":
        return PowerSeries(self.padded(N))

    def _combine(self, other, sign):
        if isinstance(other, PowerSeries):
            N = max(self.degree, other.degree)
            return PowerSeries(self.padded(N) + sign * other.padded(N))
        if np.isscalar(other):
            c = self.coeffs.copy()
            c[0] += sign * other
            return PowerSeries(c)
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return PowerSeries(-self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return PowerSeries(self.coeffs * other)
        if isinstance(other, PowerSeries):
            return multiply(self, other, self.degree + other.degree)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return PowerSeries(self.coeffs / other)
        return NotImplemented

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        return f"PowerSeries(N={self.degree}, coeffs={np.array2string(self.coeffs[:6], precision=4)}{'...' if self.degree > 5 else ''})"


def weight(k: int, alpha: float) -> float:
    """The D_alpha weight (k+1)**alpha of coefficient k."""
    if k < 0:
        raise ValueError(f"coefficient index must be non-negative, got {k}")
    return float((k + 1) ** alpha)


def weights(N: int, alpha: float) -> np.ndarray:
    """Vector of weights (k+1)**alpha for k = 0..N."""
    return np.arange(1, N + 2, dtype=float) ** alpha


def inner_product(f: PowerSeries, g: PowerSeries, alpha: float) -> complex:
    """<f, g>_alpha; linear in f, conjugate-linear in g."""
    m = min(f.coeffs.size, g.coeffs.size)
    return complex(np.sum(f.coeffs[:m] * np.conj(g.coeffs[:m]) * weights(m - 1, alpha)))


def norm(f: PowerSeries, alpha: float) -> float:
    return math.sqrt(float(np.sum(np.abs(f.coeffs) ** 2 * weights(f.degree, alpha))))


def shift(f: PowerSeries, t: int = 1) -> PowerSeries:
    """S^t f = z^t f.  The truncation degree grows to N + t."""
    if t < 0:
        raise ValueError(f"shift count must be non-negative, got {t}")
    return PowerSeries(np.concatenate([np.zeros(t, dtype=complex), f.coeffs]))


def shift_operator_norm(t: int, alpha: float) -> float:
    """Exact operator norm of S^t on D_alpha.

    ||S^t||^2 = sup_k ((k+t+1)/(k+1))**alpha, attained at k = 0 for
    alpha >= 0 and approached as k -> infinity (value 1) for alpha < 0.
    """
    if t < 0:
        raise ValueError(f"shift count must be non-negative, got {t}")
    if alpha >= 0:
        return float((t + 1) ** (alpha / 2))
    return 1.0


def evaluate(f: PowerSeries, z: Number) -> complex:
    """Horner evaluation of the truncated polynomial at a point of the closed disk."""
    z = complex(z)
    if abs(z) > 1:
        raise ValueError(f"evaluation point must lie in the closed unit disk, got |z| = {abs(z)}")
    acc = 0j
    for a in f.coeffs[::-1]:
        acc = acc * z + a
    return acc


def multiply(f: PowerSeries, g: PowerSeries, N: int) -> PowerSeries:
    """Cauchy product of f and g truncated at degree N."""
    if N < 0:
        raise ValueError(f"truncation degree must be non-negative, got {N}")
    prod = np.convolve(f.coeffs[: N + 1], g.coeffs[: N + 1])
    out = np.zeros(N + 1, dtype=complex)
    m = min(N + 1, prod.size)
    out[:m] = prod[:m]
    return PowerSeries(out)


def exp_series(h: PowerSeries) -> PowerSeries:
    """Taylor coefficients of exp(h) to the truncation degree of h.

    Uses b_0 = exp(h_0) and n b_n = sum_{k=1}^{n} k h_k b_{n-k}, which follows
    from differentiating exp(h) = b.
    """
    N = h.degree
    kh = np.arange(N + 1) * h.coeffs
    b = np.zeros(N + 1, dtype=complex)
    b[0] = np.exp(h.coeffs[0])
    for n in range(1, N + 1):
        # b[n-1::-1][:n] is (b_{n-1}, ..., b_0), matched with (k h_k) for k = 1..n
        b[n] = np.dot(kh[1 : n + 1], b[n - 1 :: -1][:n]) / n
    return PowerSeries(b)


def weighted_geometric_tail(x: float, power: float, start: int) -> float:
    """Upper bound for sum_{k >= start} x**k (k+1)**power, with 0 <= x < 1.

    The term ratio x ((k+2)/(k+1))**power is non-increasing in k, so the tail
    is dominated by a geometric series with the ratio at k = start.  Returns
    ``inf`` when that ratio is not below 1.
    """
    if x == 0:
        return 0.0 if start > 0 else 1.0
    if not 0 < x < 1:
        raise ValueError(f"ratio must lie in [0, 1), got {x}")
    rho = x * ((start + 2) / (start + 1)) ** power if power > 0 else x
    if rho >= 1:
        return math.inf
    first = math.exp(start * math.log(x) + power * math.log(start + 1))
    return first / (1 - rho)


def build_kernel(w: Number, alpha: float, N: int) -> PowerSeries:
    """Reproducing kernel k_w(z) = sum_k conj(w)^k z^k / (k+1)**alpha, truncated at N.

    Satisfies <f, k_w>_alpha = f(w).  The tail bound is in the D_alpha norm.
    """
    w = complex(w)
    if abs(w) >= 1:
        raise ValueError(f"kernel point must lie in the open unit disk, got |w| = {abs(w)}")
    if N < 0:
        raise ValueError(f"truncation degree must be non-negative, got {N}")
    k = np.arange(N + 1)
    coeffs = np.conj(w) ** k / (k + 1.0) ** alpha
    tail = math.sqrt(weighted_geometric_tail(abs(w) ** 2, -alpha, N + 1))
    return PowerSeries(coeffs, tail_bound=tail, tail_alpha=alpha)


def build_geometric(a: Number, N: int, alpha: float = 0.0) -> PowerSeries:
    """1 / (1 - z/a) = sum_k a^{-k} z^k for |a| > 1, truncated at N.

    ``alpha`` selects the space in which the tail bound is certified.
    """
    a = complex(a)
    if abs(a) <= 1:
        raise ValueError(f"geometric series needs |a| > 1, got |a| = {abs(a)}")
    if N < 0:
        raise ValueError(f"truncation degree must be non-negative, got {N}")
    k = np.arange(N + 1)
    coeffs = np.exp(-k * np.log(a))
    tail = math.sqrt(weighted_geometric_tail(abs(a) ** -2, alpha, N + 1))
    return PowerSeries(coeffs, tail_bound=tail, tail_alpha=alpha)


def singular_inner_exponent(c: float, N: int) -> PowerSeries:
    """Coefficients of h(z) = -(1+z)/(c-z) for c >= 1.

    For c > 1: h_0 = -1/c and h_k = -(c+1)/c^{k+1}.  For c = 1 the expansion
    is -1 - 2 sum_{k>=1} z^k.
    """
    if c < 1:
        raise ValueError(f"singular inner parameter must satisfy c >= 1, got {c}")
    if N < 0:
        raise ValueError(f"truncation degree must be non-negative, got {N}")
    h = np.empty(N + 1, dtype=complex)
    if c == 1:
        h[0] = -1.0
        h[1:] = -2.0
    else:
        k = np.arange(1, N + 1)
        h[0] = -1.0 / c
        h[1:] = -(c + 1) * np.power(float(c), -(k + 1.0))
    return PowerSeries(h)


def build_singular_inner(c: float, N: int) -> PowerSeries:
    """exp(-(1+z)/(c-z)) truncated at degree N.

    c = 1 gives the atomic singular inner function exp(-(1+z)/(1-z)); c > 1
    gives a function analytic across the unit circle.  No closed tail bound is
    available, so ``tail_bound`` is left unset.
    """
    return exp_series(singular_inner_exponent(c, N))
