"""
Perturbation bounds for the Gram system of optimal polynomial approximants.

Polynomials of degree <= d carry two natural orthonormal bases: the monomials
z^k (orthonormal in D_0) and z^k / (k+1)^{alpha/2} (orthonormal in D_alpha).
The diagonal change-of-basis matrix D = diag((k+1)^{-alpha/2}) links them, and
a matrix T written in the monomial basis has D_alpha-basis Frobenius norm

    ||D^{-1} T D||_F^2 = sum_{j,k} |t_{j,k}|^2 (j+1)^alpha / (k+1)^alpha.

Given f_n -> f, ``check_theorem41`` compares both sides of

    (a)  ||b_n - b||_0 <= ||f_n - f||_alpha
    (b)  ||M_n - M||_F <= phi(d, alpha) (||f_n|| + ||f||) ||f_n - f||
    (c)  ||p_{d,n} - p_d||_alpha
             <= psi(d, alpha) ||M_n^{-1}||_F (||b_n - b||_0
                                              + ||M^{-1}||_F ||M - M_n||_F ||b||_0)

with ||M_n - M||_F taken in the D_alpha basis and the inverse factors in the
monomial basis.  The plain monomial-basis variant of every matrix difference
is recorded alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .opa_solver import build_gram, solve_opa
from .series_core import PowerSeries, norm, weights

__all__ = [
    "BasisScaling",
    "basis_scaling",
    "frobenius_D",
    "frobenius_Dinv",
    "frobenius_Dinv2",
    "phi",
    "psi",
    "corollary_caps",
    "estimate_corollary_constant",
    "weighted_frobenius",
    "poly_norm",
    "TheoremCheckRecord",
    "TheoremCheckReport",
    "check_theorem41",
    "perturbation_rates",
]


@dataclass(frozen=True)
class BasisScaling:
    """D = diag(1/(k+1)^{alpha/2}), k = 0..d, mapping D_alpha coordinates to monomial ones."""

    degree: int
    alpha: float
    diagonal: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)

    def to_weighted_basis(self, T: np.ndarray) -> np.ndarray:
        """D^{-1} T D."""
        return T * self.diagonal[None, :] / self.diagonal[:, None]


def basis_scaling(d: int, alpha: float) -> BasisScaling:
    if d < 0:
        raise ValueError(f"degree must be non-negative, got {d}")
    return BasisScaling(d, alpha, weights(d, -alpha / 2))


def frobenius_D(d: int, alpha: float) -> float:
    return math.sqrt(float(np.sum(weights(d, -alpha))))


def frobenius_Dinv(d: int, alpha: float) -> float:
    return math.sqrt(float(np.sum(weights(d, alpha))))


def frobenius_Dinv2(d: int, alpha: float) -> float:
    return math.sqrt(float(np.sum(weights(d, 2 * alpha))))


def phi(d: int, alpha: float) -> float:
    """Constant in the Gram-matrix perturbation bound (b)."""
    if alpha < 0:
        return frobenius_D(d, alpha) * frobenius_Dinv(d, alpha)
    if alpha == 0:
        return float(d + 1)
    return (d + 1) * frobenius_Dinv2(d, alpha)


def psi(d: int, alpha: float) -> float:
    """Constant in the approximant perturbation bound (c); equals ||D^{-1}||_F."""
    return frobenius_Dinv(d, alpha)


def corollary_caps(d: int, alpha: float) -> Tuple[float, float]:
    """Published growth caps (phi_cap, psi_cap) for phi' and psi.

    Returned as stated; they are not all valid as literal upper bounds (see
    ``estimate_corollary_constant`` and the test suite).
    """
    n = d + 1
    if alpha < -1:
        phi_cap = n ** ((2 - alpha) / 2)
    elif alpha == -1:
        phi_cap = n ** ((1 - alpha) / 2) * math.sqrt(math.log(d + 2))
    elif alpha < 0:
        phi_cap = float(n)
    else:
        phi_cap = n ** (alpha + 1)

    if alpha < -1:
        psi_cap = float(n)
    elif alpha == -1:
        psi_cap = math.log(d + 2)
    else:
        psi_cap = n ** (alpha + 1) / (alpha + 1)
    return float(phi_cap), float(psi_cap)


def estimate_corollary_constant(alpha: float, d_max: int = 200, growth_tol: float = 0.05):
    """Empirical C(alpha) = max_{d <= d_max} phi(d, alpha) / phi_cap(d, alpha).

    Returns ``(C, stabilized)`` where ``stabilized`` says the running maximum
    grew by at most ``growth_tol`` (relative) over the second half of the grid.
    """
    ratios = np.array([phi(d, alpha) / corollary_caps(d, alpha)[0] for d in range(d_max + 1)])
    running = np.maximum.accumulate(ratios)
    half = running[d_max // 2]
    C = float(running[-1])
    return C, bool(C <= half * (1 + growth_tol))


def weighted_frobenius(A: np.ndarray, alpha: float) -> float:
    """Frobenius norm of a monomial-basis matrix after conjugation into the D_alpha basis."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    w = weights(A.shape[0] - 1, alpha)
    return math.sqrt(float(np.sum(np.abs(A) ** 2 * w[:, None] / w[None, :])))


def poly_norm(c: np.ndarray, alpha: float) -> float:
    """D_alpha norm of the polynomial with coefficient vector c."""
    c = np.asarray(c)
    return math.sqrt(float(np.sum(np.abs(c) ** 2 * weights(c.size - 1, alpha))))


def _passes(lhs, rhs, slack):
    return bool(lhs <= rhs + slack * (1 + rhs))


@dataclass(frozen=True)
class TheoremCheckRecord:
    index: int
    f_diff: float
    fn_norm: float
    f_norm: float
    b_diff: float
    M_diff: float
    M_diff_plain: float
    p_diff: float
    Mn_inv_fro: float
    bound_a: float
    bound_b: float
    bound_c: float
    bound_c_plain: float
    pass_a: bool
    pass_b: bool
    pass_b_plain: bool
    pass_c: bool
    pass_c_plain: bool

    @property
    def passed(self) -> bool:
        return self.pass_a and self.pass_b and self.pass_c


@dataclass
class TheoremCheckReport:
    degree: int
    alpha: float
    phi: float
    psi: float
    M_inv_fro: float
    b_norm: float
    records: List[TheoremCheckRecord] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> List[TheoremCheckRecord]:
        return [r for r in self.records if not r.passed]


def check_theorem41(
    f_seq: Sequence[PowerSeries],
    f: PowerSeries,
    d: int,
    alpha: float,
    slack: float = 1e-10,
    indices: Iterable[int] = None,
) -> TheoremCheckReport:
    """Evaluate both sides of (a), (b) and (c) for every f_n in ``f_seq``."""
    sys_f = build_gram(f, d, alpha)
    c = solve_opa(sys_f, f).coefficients
    M, b = sys_f.matrix, sys_f.rhs
    M_inv_fro = float(np.linalg.norm(np.linalg.inv(M)))
    b_norm = float(np.linalg.norm(b))
    f_norm = norm(f, alpha)
    ph, ps = phi(d, alpha), psi(d, alpha)

    report = TheoremCheckReport(d, alpha, ph, ps, M_inv_fro, b_norm)
    if indices is None:
        indices = range(1, len(f_seq) + 1)
    for n, fn in zip(indices, f_seq):
        sys_n = build_gram(fn, d, alpha)
        cn = solve_opa(sys_n, fn).coefficients
        Mn, bn = sys_n.matrix, sys_n.rhs

        f_diff = norm(fn - f, alpha)
        fn_norm = norm(fn, alpha)
        b_diff = float(np.linalg.norm(bn - b))
        M_diff = weighted_frobenius(Mn - M, alpha)
        M_diff_plain = float(np.linalg.norm(Mn - M))
        p_diff = poly_norm(cn - c, alpha)
        Mn_inv_fro = float(np.linalg.norm(np.linalg.inv(Mn)))

        bound_a = f_diff
        bound_b = ph * (fn_norm + f_norm) * f_diff
        bound_c = ps * Mn_inv_fro * (b_diff + M_inv_fro * M_diff * b_norm)
        bound_c_plain = ps * Mn_inv_fro * (b_diff + M_inv_fro * M_diff_plain * b_norm)

        report.records.append(
            TheoremCheckRecord(
                index=n,
                f_diff=f_diff,
                fn_norm=fn_norm,
                f_norm=f_norm,
                b_diff=b_diff,
                M_diff=M_diff,
                M_diff_plain=M_diff_plain,
                p_diff=p_diff,
                Mn_inv_fro=Mn_inv_fro,
                bound_a=bound_a,
                bound_b=bound_b,
                bound_c=bound_c,
                bound_c_plain=bound_c_plain,
                pass_a=_passes(b_diff, bound_a, slack),
                pass_b=_passes(M_diff, bound_b, slack),
                pass_b_plain=_passes(M_diff_plain, bound_b, slack),
                pass_c=_passes(p_diff, bound_c, slack),
                pass_c_plain=_passes(p_diff, bound_c_plain, slack),
            )
        )
    return report


def perturbation_rates(f: PowerSeries, g: PowerSeries, d: int, alpha: float, ns: Sequence[int]) -> np.ndarray:
    """Ratios ||p_{d,n} - p_d||_alpha / ||f_n - f||_alpha along f_n = f + g/n."""
    c = solve_opa(build_gram(f, d, alpha), f).coefficients
    out = []
    for n in ns:
        fn = f + g / n
        cn = solve_opa(build_gram(fn, d, alpha), fn).coefficients
        out.append(poly_norm(cn - c, alpha) / norm(fn - f, alpha))
    return np.array(out)
