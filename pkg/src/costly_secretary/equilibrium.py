"""Backward-induction solver for the costly-interview hiring game.

An administrator interviews N applicants in uniformly random order and wants
to hire the overall best.  Completing an interview costs each applicant a
fraction ``cost`` of the job's value, so a current-best applicant only shows
their ability when the acceptance probability covers the cost.  This module
computes the threshold stage, the per-stage continuation values, the
resulting acceptance policy, and closed forms for the success probability
and the expected length of search.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GameConfig",
    "ValueTables",
    "EquilibriumPolicy",
    "compute_threshold",
    "compute_threshold_sequence",
    "solve_values",
    "build_policy",
    "record_survival_product",
    "closed_form_success",
    "expected_stopping_time",
]


def _as_count(value, minimum: int, name: str) -> int:
    if isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got a bool")
    try:
        value = operator.index(value)
    except TypeError:
        raise ValueError(f"{name} must be an integer, got {value!r}") from None
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def _check_cost(cost: float) -> float:
    cost = float(cost)
    if not math.isfinite(cost) or not 0.0 <= cost < 1.0:
        raise ValueError(f"cost must lie in [0, 1), got {cost!r}")
    return cost


@dataclass(frozen=True)
class GameConfig:
    """A single hiring instance.

    ``n_applicants`` is the number of applicants interviewed in random order;
    ``cost`` is the interview-completion cost paid by an applicant, expressed
    as a fraction of the job's value.
    """

    n_applicants: int
    cost: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "n_applicants", _as_count(self.n_applicants, 2, "n_applicants")
        )
        object.__setattr__(self, "cost", _check_cost(self.cost))


def compute_threshold(n_applicants: int) -> int:
    """First stage from which a current-best applicant is accepted outright.

    Returns the least n with sum_{k=n}^{N-1} 1/k <= 1.  The tail sums are
    accumulated backward with Kahan compensation, so the comparison against 1
    carries an absolute error below ~1e-15; the only instance whose tail sum
    equals 1 exactly (N = 2) is computed exactly in binary floating point.
    """
    n_applicants = _as_count(n_applicants, 2, "n_applicants")
    total = 0.0
    comp = 0.0
    candidate = n_applicants
    for k in range(n_applicants - 1, 0, -1):
        y = 1.0 / k - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if total <= 1.0:
            candidate = k
        else:
            break
    return candidate


def compute_threshold_sequence(max_applicants: int) -> np.ndarray:
    """Thresholds for every instance size 2..max_applicants in one pass.

    Entry [N] of the returned array is compute_threshold(N); entries 0 and 1
    are zero.  Uses compensated cumulative harmonic sums and the fact that
    the threshold never decreases with N, so the whole scan is linear.
    """
    max_applicants = _as_count(max_applicants, 2, "max_applicants")
    harmonic = np.zeros(max_applicants, dtype=np.float64)  # harmonic[m] = H_m
    total = 0.0
    comp = 0.0
    for m in range(1, max_applicants):
        y = 1.0 / m - comp
        t = total + y
        comp = (t - total) - y
        total = t
        harmonic[m] = total + comp
    out = np.zeros(max_applicants + 1, dtype=np.int64)
    t = 1
    for n_apps in range(2, max_applicants + 1):
        tail_end = harmonic[n_apps - 1]
        while tail_end - harmonic[t - 1] > 1.0:
            t += 1
        out[n_apps] = t
    return out


@dataclass(frozen=True, eq=False)
class ValueTables:
    """Per-stage normalized continuation values for one instance.

    ``v0[n]`` / ``v1[n]`` is the value per remaining candidate when applicant
    n is dominated / the current best (index 0 is unused and set to NaN).
    ``threshold`` is the stage from which a current best is accepted with
    probability one, and ``success_probability`` is v1[1], the probability of
    hiring the overall best under the solved policy.
    """

    config: GameConfig
    v0: np.ndarray
    v1: np.ndarray
    threshold: int
    success_probability: float

    @property
    def unnormalized_v0(self) -> np.ndarray:
        """Stage values n * v0[n] (the not-current-best state)."""
        return np.arange(len(self.v0), dtype=np.float64) * self.v0

    @property
    def unnormalized_v1(self) -> np.ndarray:
        """Stage values n * v1[n] (the current-best state)."""
        return np.arange(len(self.v1), dtype=np.float64) * self.v1


def solve_values(config: GameConfig) -> ValueTables:
    """Solve the stage values by backward induction.

    Boundary: v0[N] = 0 and v1[N] = 1/N.  Recursion, for n = N-1 down to 1:

        v0[n] = v1[n+1] / n + v0[n+1]
        v1[n] = max(cost/N + (1 - cost) * v0[n], 1/N)

    The max picks between accepting a current best with the incentive-minimum
    probability (cost) and accepting it outright.
    """
    n_apps = config.n_applicants
    cost = config.cost
    floor = 1.0 / n_apps
    pay = cost / n_apps
    keep = 1.0 - cost
    v0 = [0.0] * (n_apps + 1)
    v1 = [0.0] * (n_apps + 1)
    v1[n_apps] = floor
    prev0 = 0.0
    prev1 = floor
    for n in range(n_apps - 1, 0, -1):
        x = prev1 / n + prev0
        y = pay + keep * x
        if y < floor:
            y = floor
        v0[n] = x
        v1[n] = y
        prev0 = x
        prev1 = y
    arr0 = np.asarray(v0, dtype=np.float64)
    arr1 = np.asarray(v1, dtype=np.float64)
    arr0[0] = math.nan
    arr1[0] = math.nan
    return ValueTables(
        config=config,
        v0=arr0,
        v1=arr1,
        threshold=compute_threshold(n_apps),
        success_probability=float(arr1[1]),
    )


@dataclass(frozen=True, eq=False)
class EquilibriumPolicy:
    """Acceptance plan of the administrator.

    ``accept_record[n]`` is the probability of accepting applicant n when
    their output is a strictly new positive maximum (index 0 unused, NaN);
    any other output is accepted with probability ``accept_nonrecord`` = 0.
    """

    config: GameConfig
    accept_record: np.ndarray
    accept_nonrecord: float = 0.0


def build_policy(config: GameConfig, tables: ValueTables) -> EquilibriumPolicy:
    """Acceptance probabilities implied by solved value tables.

    A current best before the threshold stage is accepted with the minimum
    probability that still makes completing the interview worthwhile (the
    cost); from the threshold stage on it is accepted outright.
    """
    if tables.config != config:
        raise ValueError(
            "value tables were solved for a different instance: "
            f"{tables.config} vs {config}"
        )
    n_apps = config.n_applicants
    accept = np.ones(n_apps + 1, dtype=np.float64)
    accept[: tables.threshold] = config.cost
    accept[0] = math.nan
    return EquilibriumPolicy(config=config, accept_record=accept)


def record_survival_product(n: int, cost: float) -> float:
    """prod_{k=1}^{n} (1 - cost/k), with the empty product equal to 1.

    This is the probability that no current-best applicant has been accepted
    through stage n while every current best is accepted with probability
    ``cost``.  Always in (0, 1].
    """
    n = _as_count(n, 0, "n")
    cost = _check_cost(cost)
    if n == 0:
        return 1.0
    return float(np.prod(1.0 - cost / np.arange(1.0, n + 1.0)))


def _acceptance_mass(config: GameConfig) -> float:
    """Shared closed-form core: returns N * success probability.

    The same quantity is the expected index of the accepted applicant (with
    no acceptance contributing zero), so both public closed forms read off
    this value and the stopping-time identity holds to a rounding error.

    When the threshold is 1 the factored form degenerates (its trailing sum
    picks up a 1/0 term that is annihilated by a zero prefactor), so the
    state-0 value recursion is iterated directly instead.
    """
    n_apps = config.n_applicants
    cost = config.cost
    n_star = compute_threshold(n_apps)
    if n_star == 1:
        value = 0.0
        for n in range(n_apps, 0, -1):
            value = 1.0 / n_apps + (1.0 - 1.0 / n) * value
        return n_apps * value
    if n_star == 2:
        survivals = [1.0]
    else:
        survivals = np.concatenate(
            ([1.0], np.cumprod(1.0 - cost / np.arange(1.0, n_star - 1.0)))
        ).tolist()
    pre_sum = math.fsum(survivals)  # sum of S_0 .. S_{n*-2}
    survival_at_threshold = survivals[-1] * (1.0 - cost / (n_star - 1))
    tail_sum = math.fsum(1.0 / m for m in range(n_star - 1, n_apps))
    return cost * pre_sum + (n_star - 1) * survival_at_threshold * tail_sum


def closed_form_success(config: GameConfig) -> float:
    """Success probability without running the backward induction.

    Evaluates (cost/N) * sum_{n<n*} S_{n-1} + ((n*-1)/N) * S_{n*-1} *
    sum_{n=n*}^{N} 1/(n-1), where S is record_survival_product.  Agrees with
    solve_values(config).success_probability to well below 1e-12 on
    moderate instance sizes.
    """
    return _acceptance_mass(config) / config.n_applicants


def expected_stopping_time(config: GameConfig) -> float:
    """Expected index of the accepted applicant.

    Trials where nobody is accepted contribute zero to the expectation.  The
    value equals N times closed_form_success(config) up to a rounding error.
    """
    return _acceptance_mass(config)
