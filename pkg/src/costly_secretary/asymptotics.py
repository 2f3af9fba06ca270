"""Large-market diagnostics: gamma evaluation, limit constants, threshold
bounds, and convergence reports for the costly-interview hiring game.

The success probability decays like K * N^(-cost) with
K = e^(cost-1) / Gamma(2-cost); the threshold stage sits between N/e and
(N-1)/e + 2.  The functions here evaluate those constants and bounds and
measure how fast solved instances approach them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .equilibrium import (
    GameConfig,
    _as_count,
    _check_cost,
    record_survival_product,
    solve_values,
)

__all__ = [
    "AsymptoticReport",
    "gamma",
    "limit_constant",
    "threshold_bounds",
    "gauss_product_check",
    "convergence_report",
]

# Lanczos approximation, g = 7, 9 terms.  Standard published coefficient set;
# relative error is far below 1e-12 on the range used here.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-06,
    1.5056327351493116e-07,
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def gamma(x: float) -> float:
    """Gamma function for positive real arguments.

    Lanczos approximation with reflection below 1/2.  Validated to a relative
    error of 1e-12 on (0, 3], the range needed for the limit constants
    Gamma(1-cost) and Gamma(2-cost) with cost in [0, 1).
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"gamma requires a positive finite argument, got {x!r}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * t ** (z + 0.5) * math.exp(-t) * acc


def limit_constant(cost: float) -> float:
    """Limit of N^cost * success probability as N grows: e^(cost-1)/Gamma(2-cost)."""
    cost = _check_cost(cost)
    return math.exp(cost - 1.0) / gamma(2.0 - cost)


def threshold_bounds(n_applicants: int) -> tuple[float, float]:
    """Enclosing interval (N/e, (N-1)/e + 2) for the threshold stage."""
    n_applicants = _as_count(n_applicants, 2, "n_applicants")
    return n_applicants / math.e, (n_applicants - 1) / math.e + 2.0


def gauss_product_check(cost: float, n: int) -> float:
    """n^cost times the record survival product through stage n.

    Converges to 1/Gamma(1-cost) as n grows, which makes the slowly
    convergent product a useful independent check on the gamma evaluation.
    """
    cost = _check_cost(cost)
    n = _as_count(n, 1, "n")
    return n**cost * record_survival_product(n, cost)


@dataclass(frozen=True)
class AsymptoticReport:
    """Convergence diagnostics for one cost across a ladder of instance sizes.

    ``samples`` holds (N, N^cost * success probability); ``threshold_samples``
    holds (N, threshold, lower bound, upper bound).  ``tolerance`` is the
    declared relative deviation allowed for the final sample; the limit
    theory proves no convergence rate, so the tolerance is empirical (see
    ``note``).
    """

    cost: float
    limit_constant: float
    tolerance: float
    samples: tuple[tuple[int, float], ...]
    threshold_samples: tuple[tuple[int, int, float, float], ...]
    note: str

    def deviations(self) -> list[float]:
        """Relative deviation of each scaled sample from the limit constant."""
        return [abs(s - self.limit_constant) / self.limit_constant for _, s in self.samples]

    def violations(self) -> list[str]:
        """Invariant breaches: threshold outside its bounds, or a final
        scaled value farther from the limit constant than the tolerance."""
        out = []
        for n_apps, n_star, lower, upper in self.threshold_samples:
            if not lower <= n_star <= upper:
                out.append(
                    f"threshold {n_star} at N={n_apps} outside [{lower}, {upper}]"
                )
        final_dev = self.deviations()[-1]
        if not final_dev < self.tolerance:
            out.append(
                f"final scaled value deviates by {final_dev:.3g} "
                f"(declared tolerance {self.tolerance:g})"
            )
        return out


def convergence_report(
    cost: float, n_list: Sequence[int], tolerance: float = 0.05
) -> AsymptoticReport:
    """Solve each instance size and report scaled values and thresholds.

    ``n_list`` must be non-empty and strictly ascending with every entry at
    least 2.  The default 5% tolerance is an empirical acceptance threshold,
    not a proved rate.
    """
    cost = _check_cost(cost)
    sizes = [_as_count(n, 2, "n_list entry") for n in n_list]
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("n_list must be non-empty and strictly ascending")
    if not 0.0 < tolerance:
        raise ValueError("tolerance must be positive")
    samples = []
    thresholds = []
    for n_apps in sizes:
        tables = solve_values(GameConfig(n_apps, cost))
        samples.append((n_apps, n_apps**cost * tables.success_probability))
        lower, upper = threshold_bounds(n_apps)
        thresholds.append((n_apps, tables.threshold, lower, upper))
    note = (
        f"tolerance {tolerance:g} is an empirical acceptance threshold; "
        "the limit theory provides no convergence rate"
    )
    return AsymptoticReport(
        cost=cost,
        limit_constant=limit_constant(cost),
        tolerance=float(tolerance),
        samples=tuple(samples),
        threshold_samples=tuple(thresholds),
        note=note,
    )
