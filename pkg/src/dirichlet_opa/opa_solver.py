"""
Optimal polynomial approximants to 1/f in D_alpha.

The d-th optimal polynomial approximant p_d minimizes ||p f - 1||_alpha over
polynomials of degree <= d.  Its coefficient vector c solves the Gram system
M c = b with

    m_{j,k} = <S^k f, S^j f>_alpha,    b_k = <1, S^k f>_alpha,

so only b_0 = conj(f(0)) is nonzero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy import linalg

from .errors import ConditioningError, SingularSystemError
from .series_core import (
    PowerSeries,
    multiply,
    norm,
    shift_operator_norm,
    weighted_geometric_tail,
    weights,
)

__all__ = [
    "GramSystem",
    "OpaResult",
    "build_gram",
    "solve_opa",
    "opa",
    "opa_sequence",
    "kernel_norm_squared",
    "noncyclic_lower_bound",
    "MAX_CONDITION",
]

# beyond this the Cholesky solve no longer carries 1e-8 relative accuracy
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class GramSystem:
    degree: int
    matrix: np.ndarray
    rhs: np.ndarray
    alpha: float


@dataclass(frozen=True)
class OpaResult:
    """Coefficients of p_d and the residual ||p_d f - 1||_alpha.

    ``residual`` is the direct norm of p_d f - 1 formed to degree N + d;
    ``residual_projection`` comes from residual^2 = 1 - sum_k c_k conj(b_k).
    """

    degree: int
    coefficients: np.ndarray
    residual: float
    residual_projection: float
    cond: float
    residual_tail_bound: Optional[float] = None
    flags: tuple = field(default_factory=tuple)

    @property
    def polynomial(self) -> PowerSeries:
        return PowerSeries(self.coefficients)

    @property
    def consistent(self) -> bool:
        """Whether the direct and projection residuals agree.

        The tolerance is 1e-8 relative, widened by the rounding error the
        projection formula picks up from cancellation in 1 - sum c_k conj(b_k).
        """
        d2 = self.residual ** 2
        p2 = self.residual_projection ** 2
        slack = 1e-8 * max(d2, p2) + 64 * np.finfo(float).eps * max(self.cond, 1.0)
        return abs(d2 - p2) <= slack


def _shift_columns(f: PowerSeries, d: int) -> np.ndarray:
    """Matrix whose column k holds the coefficients of S^k f (length N+d+1)."""
    N = f.degree
    A = np.zeros((N + d + 1, d + 1), dtype=complex)
    for k in range(d + 1):
        A[k : k + N + 1, k] = f.coeffs
    return A


def build_gram(f: PowerSeries, d: int, alpha: float) -> GramSystem:
    if d < 0:
        raise ValueError(f"approximant degree must be non-negative, got {d}")
    if f.is_zero():
        raise SingularSystemError("the zero function has a singular Gram matrix")
    A = _shift_columns(f, d)
    w = weights(A.shape[0] - 1, alpha)
    M = A.conj().T @ (w[:, None] * A)
    # exact Hermitian symmetry; the products above agree only to rounding
    M = 0.5 * (M + M.conj().T)
    b = np.zeros(d + 1, dtype=complex)
    b[0] = np.conj(f.coeffs[0])
    return GramSystem(degree=d, matrix=M, rhs=b, alpha=alpha)


def solve_opa(system: GramSystem, f: PowerSeries) -> OpaResult:
    M, b, d, alpha = system.matrix, system.rhs, system.degree, system.alpha
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise ConditioningError(f"Gram matrix is numerically singular (cond ~ {cond:.3e})", cond)
    try:
        factor = linalg.cho_factor(M, lower=True)
    except linalg.LinAlgError as exc:
        raise ConditioningError(f"Gram matrix is not numerically positive definite (cond ~ {cond:.3e})", cond) from exc
    c = linalg.cho_solve(factor, b)

    flags = []
    if f.coeffs[0] == 0:
        flags.append("f_vanishes_at_origin")

    p = PowerSeries(c)
    r = multiply(p, f, f.degree + d) - 1
    residual = norm(r, alpha)
    proj2 = 1.0 - float(np.real(np.vdot(b, c)))
    residual_projection = math.sqrt(max(proj2, 0.0))

    tail = None
    if f.tail_bound is not None:
        if f.tail_alpha is None or f.tail_alpha >= alpha:
            # ||p (f - f_N)|| <= sum_k |c_k| ||S^k|| ||f - f_N||
            mult = sum(abs(ck) * shift_operator_norm(k, alpha) for k, ck in enumerate(c))
            tail = float(mult * f.tail_bound)
        else:
            flags.append("tail_bound_in_weaker_norm")

    return OpaResult(
        degree=d,
        coefficients=c,
        residual=residual,
        residual_projection=residual_projection,
        cond=cond,
        residual_tail_bound=tail,
        flags=tuple(flags),
    )


def opa(f: PowerSeries, d: int, alpha: float) -> OpaResult:
    """Shorthand for ``solve_opa(build_gram(f, d, alpha), f)``."""
    return solve_opa(build_gram(f, d, alpha), f)


def opa_sequence(f: PowerSeries, d_max: int, alpha: float) -> List[OpaResult]:
    """Approximants of degree 0..d_max.  Residuals are non-increasing in d."""
    if d_max < 0:
        raise ValueError(f"maximum degree must be non-negative, got {d_max}")
    if f.is_zero():
        raise SingularSystemError("the zero function has a singular Gram matrix")
    return [opa(f, d, alpha) for d in range(d_max + 1)]


def kernel_norm_squared(z0: complex, alpha: float, rtol: float = 1e-16):
    """||k_{z0}||_alpha^2 = sum_k |z0|^{2k} (k+1)^{-alpha} with a tail bound.

    Returns ``(partial_sum, tail_bound)``; the true value lies in
    [partial_sum, partial_sum + tail_bound].
    """
    x = abs(complex(z0)) ** 2
    if x >= 1:
        raise ValueError(f"point must lie in the open unit disk, got |z0| = {math.sqrt(x)}")
    if x == 0:
        return 1.0, 0.0
    N = 64
    while True:
        s = float(np.sum(x ** np.arange(N + 1) * weights(N, -alpha)))
        tail = weighted_geometric_tail(x, -alpha, N + 1)
        if tail <= rtol * s:
            return s, tail
        N *= 2


def noncyclic_lower_bound(z0: complex, alpha: float) -> float:
    """1 / ||k_{z0}||_alpha, a floor for ||p f - 1||_alpha whenever f(z0) = 0.

    If f(z0) = 0 then 1 = |<p f - 1, k_{z0}>| <= ||p f - 1|| ||k_{z0}||.
    The tail of the kernel norm is added before inverting, so the returned
    value never exceeds the exact floor.
    """
    s, tail = kernel_norm_squared(z0, alpha)
    return 1.0 / math.sqrt(s + tail)
