"""
Cantor sets on the unit circle, Riesz/logarithmic kernels and two-sided
capacity estimates.

For a Cantor set built from nested arcs E_n^j (two children per parent),

    sum_n K(d_n) / 2^{n+1}  <=  1 / c(E)  <=  sum_n K(e_n) / 2^{n+1}

where d_n is the largest diameter in generation n and e_n the smallest
distance between two siblings inside a generation-n parent.  Distances are
chordal: two points of the circle at angular separation t are 2 sin(t/2)
apart.

Arcs are measured in radians.  The middle-eps sets built here have congruent
arcs within each generation, so per-generation statistics are computed from
the generation's arc length; ``CantorSet.arc_starts`` materializes the arcs
when an explicit enumeration is wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

__all__ = [
    "Arc",
    "CantorSet",
    "KernelKind",
    "chord",
    "kernel_value",
    "build_middle_eps",
    "level_stats",
    "CapacityBounds",
    "capacity_bounds",
    "eps_for_alpha",
    "hausdorff_dimension",
    "CarlesonSum",
    "carleson_sum",
    "carleson_generation_closed_form",
    "METRIC",
]

TWO_PI = 2 * math.pi
METRIC = "chordal"


@dataclass(frozen=True)
class Arc:
    start: float
    length: float

    def __post_init__(self):
        if not 0 < self.length <= TWO_PI:
            raise ValueError(f"arc length must lie in (0, 2pi], got {self.length}")
        object.__setattr__(self, "start", self.start % TWO_PI)

    @property
    def end(self) -> float:
        return self.start + self.length


@dataclass(frozen=True)
class KernelKind:
    """Riesz kernel t^{alpha-1} for 0 < alpha < 1, logarithmic kernel for alpha = 1."""

    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"kernel exponent must lie in (0, 1], got {self.alpha}")

    @property
    def is_logarithmic(self) -> bool:
        return self.alpha == 1

    @property
    def name(self) -> str:
        return "logarithmic" if self.is_logarithmic else f"riesz({self.alpha:g})"


def kernel_value(kind: KernelKind, t: float) -> float:
    if not t > 0:
        raise ValueError(f"kernel argument must be positive, got {t}")
    if kind.is_logarithmic:
        return max(math.log(2 / t), 0.0)
    return t ** (kind.alpha - 1)


def chord(angle: float) -> float:
    """Diameter of an arc of the given angular length (chordal metric)."""
    return 2 * math.sin(min(angle, math.pi) / 2)


@dataclass(frozen=True)
class CantorSet:
    """Middle-eps Cantor set on the circle, generations 0..depth.

    Generation n has 2^n arcs of length ((1-eps)/2)^n * root_length.
    """

    eps: float
    depth: int
    root_length: float = 1.0
    root_start: float = 0.0

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if self.depth < 0:
            raise ValueError(f"depth must be non-negative, got {self.depth}")
        if not 0 < self.root_length <= TWO_PI:
            raise ValueError(f"root arc length must lie in (0, 2pi], got {self.root_length}")

    def arc_length(self, n: int) -> float:
        return ((1 - self.eps) / 2) ** n * self.root_length

    def gap_length(self, n: int) -> float:
        """Length of the open middle arc removed from each generation-n arc."""
        return self.arc_length(n) - 2 * self.arc_length(n + 1)

    def count(self, n: int) -> int:
        return 2 ** n

    def arc_starts(self, n: int) -> np.ndarray:
        """Start angles of the 2^n generation-n arcs, in order along the circle."""
        self._check_generation(n)
        s = np.array([self.root_start])
        for m in range(1, n + 1):
            offset = self.arc_length(m - 1) - self.arc_length(m)
            s = np.stack([s, s + offset], axis=1).ravel()
        return s

    def arcs(self, n: int) -> List[Arc]:
        ell = self.arc_length(n)
        return [Arc(float(s), ell) for s in self.arc_starts(n)]

    def levels(self) -> List[List[Arc]]:
        return [self.arcs(n) for n in range(self.depth + 1)]

    def _check_generation(self, n):
        if not 0 <= n <= self.depth:
            raise IndexError(f"generation {n} outside 0..{self.depth}")


def build_middle_eps(eps: float, depth: int, L0: float = 1.0, start: float = 0.0) -> CantorSet:
    """Remove the open middle eps-fraction of every arc, ``depth`` times over."""
    return CantorSet(eps=eps, depth=depth, root_length=L0, root_start=start)


def level_stats(cset: CantorSet, n: int) -> Tuple[float, Optional[float]]:
    """(d_n, e_n) for generation n.  e_n needs generation n+1 and is None at n = depth."""
    cset._check_generation(n)
    d_n = chord(cset.arc_length(n))
    if n == cset.depth:
        return d_n, None
    # siblings are separated by the middle gap one way and by 2pi - parent length the other
    sep = min(cset.gap_length(n), TWO_PI - cset.arc_length(n))
    return d_n, chord(sep)


def _ratios(terms: np.ndarray) -> np.ndarray:
    prev, nxt = terms[:-1], terms[1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(prev > 0, nxt / np.where(prev > 0, prev, 1.0), np.where(nxt > 0, np.inf, 0.0))
    return r


def _ratio_test(terms: np.ndarray, window: int, threshold: float) -> bool:
    if terms.size < window + 1:
        return False
    return bool(np.all(_ratios(terms)[-window:] < threshold))


@dataclass(frozen=True)
class CapacityBounds:
    kernel: str
    lower_partial: float
    upper_partial: float
    converged: bool
    lower_partials: np.ndarray
    upper_partials: np.ndarray
    upper_terms: np.ndarray
    upper_extrapolated: Optional[float]
    capacity_lower_bound: Optional[float]
    metric: str = METRIC
    extrapolation: str = "geometric tail from last term ratio (not rigorous)"


def capacity_bounds(
    cset: CantorSet, kind: KernelKind, window: int = 5, threshold: float = 0.99
) -> CapacityBounds:
    """Partial sums of both capacity series over generations 0..depth-1.

    ``converged`` is a ratio test on the last ``window`` upper-series terms.
    When it passes, the upper series is closed off with a geometric tail and
    1 / (upper sum + tail) is reported as a lower bound for the capacity.
    """
    if cset.depth < 2:
        raise ValueError(f"capacity bounds need depth >= 2, got {cset.depth}")
    lower, upper = [], []
    for n in range(cset.depth):
        d_n, e_n = level_stats(cset, n)
        if e_n <= 0:
            raise ValueError(f"sibling distance vanishes at generation {n}; kernel undefined")
        scale = 2.0 ** (n + 1)
        lower.append(kernel_value(kind, d_n) / scale)
        upper.append(kernel_value(kind, e_n) / scale)
    lower = np.array(lower)
    upper = np.array(upper)
    lower_partials = np.cumsum(lower)
    upper_partials = np.cumsum(upper)
    converged = _ratio_test(upper, window, threshold)

    extrapolated = cap = None
    if converged:
        r = _ratios(upper)[-1]
        extrapolated = float(upper_partials[-1] + upper[-1] * r / (1 - r))
        cap = 1.0 / extrapolated
    return CapacityBounds(
        kernel=kind.name,
        lower_partial=float(lower_partials[-1]),
        upper_partial=float(upper_partials[-1]),
        converged=converged,
        lower_partials=lower_partials,
        upper_partials=upper_partials,
        upper_terms=upper,
        upper_extrapolated=extrapolated,
        capacity_lower_bound=cap,
    )


def eps_for_alpha(alpha: float) -> float:
    """Removal fraction whose middle-eps set has Hausdorff dimension 1 - alpha/2."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return 1 - 2 ** (alpha / (alpha - 2))


def hausdorff_dimension(eps: float) -> float:
    """log 2 / log(2/(1-eps)) for the middle-eps Cantor set."""
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return math.log(2) / math.log(2 / (1 - eps))


def _xlog(x: float) -> float:
    return x * math.log(1 / x)


@dataclass(frozen=True)
class CarlesonSum:
    partial: float
    converged: bool
    root_term: float
    generation_terms: np.ndarray


def carleson_sum(cset: CantorSet, window: int = 5, threshold: float = 0.99) -> CarlesonSum:
    """Partial sum of |I| log(1/|I|) over the complementary arcs found so far.

    The complement of the root arc (if any) is included; arcs longer than 1
    contribute negatively, as the formula gives.  Generation n >= 1 removes
    2^{n-1} middle arcs, one from each generation-(n-1) arc.
    """
    rest = TWO_PI - cset.root_length
    root_term = _xlog(rest) if rest > 0 else 0.0
    gens = np.array([cset.count(n - 1) * _xlog(cset.gap_length(n - 1)) for n in range(1, cset.depth + 1)])
    return CarlesonSum(
        partial=float(root_term + gens.sum()),
        converged=_ratio_test(gens, window, threshold),
        root_term=root_term,
        generation_terms=gens,
    )


def carleson_generation_closed_form(eps: float, n: int, L0: float = 1.0) -> float:
    """2^{n-1} l_n log(1/l_n) with l_n = eps ((1-eps)/2)^{n-1} L0."""
    ell = eps * ((1 - eps) / 2) ** (n - 1) * L0
    return 2 ** (n - 1) * ell * math.log(1 / ell)
