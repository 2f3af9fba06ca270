"""Exact desk-scale verification for the costly-interview hiring game.

Everything here is deliberately independent of the backward-induction
solver: success probabilities are obtained by enumerating all N! arrival
orders and propagating acceptance probabilities analytically along each
order, in exact rational arithmetic.  On top of that sit a fast per-policy
stage recursion (cross-checked against the enumeration), an exhaustive
policy-space scan that looks for anything beating the solved policy, and a
prefix audit of the full-learning property.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .equilibrium import GameConfig, _as_count, compute_threshold, solve_values
from .simulator import StrategyProfile, applicant_action

__all__ = [
    "VerificationError",
    "PolicySpec",
    "ScanReport",
    "exact_success_probability",
    "exact_expected_tau",
    "policy_success_probability",
    "optimality_scan",
    "full_learning_audit",
    "full_learning_counterexample",
    "exact_state_value",
]

_MAX_ENUM = 10
Prob = Union[float, Fraction]


class VerificationError(RuntimeError):
    """An exact check that should hold for the solved policy failed."""


@dataclass(frozen=True)
class PolicySpec:
    """Per-stage acceptance plan evaluated by the oracle.

    A learning stage accepts a strictly new positive maximum with the stated
    probability (zero means outright rejection, which also removes any reason
    to complete the interview); a non-learning stage accepts blindly with the
    stated probability and reveals nothing.  Learning stages must offer
    either zero or at least the interview cost, otherwise no applicant would
    complete.
    """

    accept_probs: tuple
    learning: tuple

    def __post_init__(self) -> None:
        probs = tuple(self.accept_probs)
        flags = tuple(bool(f) for f in self.learning)
        if len(probs) != len(flags):
            raise ValueError("accept_probs and learning must have equal length")
        for p in probs:
            if not 0 <= p <= 1:
                raise ValueError(f"acceptance probability {p!r} outside [0, 1]")
        object.__setattr__(self, "accept_probs", probs)
        object.__setattr__(self, "learning", flags)

    @classmethod
    def equilibrium(cls, config: GameConfig) -> "PolicySpec":
        n_star = compute_threshold(config.n_applicants)
        probs = tuple(
            config.cost if n < n_star else 1.0
            for n in range(1, config.n_applicants + 1)
        )
        return cls(accept_probs=probs, learning=(True,) * config.n_applicants)

    @classmethod
    def from_acceptance_masses(cls, masses: Sequence[Prob]) -> "PolicySpec":
        """Blind policy from unconditional acceptance masses.

        ``masses`` gives the total probability of accepting each applicant
        (non-negative, summing to at most 1); any mass vector summing to 1
        hires the best with probability exactly 1/N.  Conversion to
        conditional per-stage probabilities is exact when the masses are
        Fractions.
        """
        probs = []
        remaining = Fraction(1)
        for p in masses:
            p = p if isinstance(p, Fraction) else Fraction(p)
            if p < 0:
                raise ValueError("acceptance masses must be non-negative")
            if p > remaining:
                if p - remaining > Fraction(1, 10**9):
                    raise ValueError("acceptance masses sum to more than 1")
                p = remaining
            probs.append(p / remaining if remaining else Fraction(0))
            remaining -= p
        return cls(accept_probs=tuple(probs), learning=(False,) * len(probs))

    def validate_for(self, config: GameConfig) -> None:
        if len(self.accept_probs) != config.n_applicants:
            raise ValueError(
                f"policy has {len(self.accept_probs)} stages, instance has "
                f"{config.n_applicants} applicants"
            )
        for n, (q, learn) in enumerate(zip(self.accept_probs, self.learning), start=1):
            if learn and q != 0 and q < config.cost:
                raise ValueError(
                    f"stage {n}: record acceptance {q!r} is below the cost "
                    f"{config.cost} but not outright rejection"
                )


def _exact_stats(config: GameConfig, policy: PolicySpec) -> tuple[Fraction, Fraction]:
    """Enumerate all N! arrival orders and average exactly.

    Per order the only randomness left is the administrator's coin flips, so
    the walk carries the surviving probability mass along the order and
    accumulates hiring-the-best and stopping-index mass at each acceptance
    opportunity.  All arithmetic is rational (floats enter exactly).
    """
    policy.validate_for(config)
    n_apps = config.n_applicants
    if n_apps > _MAX_ENUM:
        raise ValueError(f"enumeration supports at most {_MAX_ENUM} applicants")
    cost = Fraction(config.cost)
    probs = [p if isinstance(p, Fraction) else Fraction(p) for p in policy.accept_probs]
    # live: the stage both reveals and may accept; dead learning stages
    # (acceptance below cost) see no completed interview at all.
    live = [
        learn and q >= cost for q, learn in zip(probs, policy.learning)
    ]
    learning = policy.learning
    one = Fraction(1)
    success = Fraction(0)
    tau_mass = Fraction(0)
    for order in itertools.permutations(range(1, n_apps + 1)):
        alive = one
        revealed = 0
        for idx in range(n_apps):
            if learning[idx]:
                if not live[idx]:
                    continue
                rank = order[idx]
                if rank <= revealed:
                    continue
                revealed = rank
                q = probs[idx]
                if q:
                    win = alive * q
                    if rank == n_apps:
                        success += win
                    tau_mass += win * (idx + 1)
                    alive -= win
                    if not alive:
                        break
            else:
                p = probs[idx]
                if p:
                    win = alive * p
                    if order[idx] == n_apps:
                        success += win
                    tau_mass += win * (idx + 1)
                    alive -= win
                    if not alive:
                        break
    weight = Fraction(1, math.factorial(n_apps))
    return success * weight, tau_mass * weight


def exact_success_probability(config: GameConfig, policy: PolicySpec) -> Fraction:
    """Probability of hiring the overall best, by exhaustive enumeration.

    Exact rational result; convert with float() as needed.
    """
    return _exact_stats(config, policy)[0]


def exact_expected_tau(config: GameConfig, policy: PolicySpec) -> Fraction:
    """Expected stopping index (zero when nobody is accepted), exactly.

    For the solved policy this equals N times exact_success_probability in
    exact arithmetic, because a record accepted at stage n is the overall
    best with probability exactly n/N.
    """
    return _exact_stats(config, policy)[1]


def policy_success_probability(config: GameConfig, policy: PolicySpec) -> float:
    """Success probability of a policy by an O(N) stage recursion.

    Within the completing subsequence of stages, the j-th completed
    interview reveals a new maximum with probability 1/j independently, and
    an acceptance there hires the overall best with probability j/N; a blind
    acceptance hires the best with probability 1/N.  The recursion carries
    the surviving probability mass across stages.  Used by the policy scan;
    cross-checked against the exhaustive enumeration in the test suite.
    """
    policy.validate_for(config)
    cost = config.cost
    inv_n = 1.0 / config.n_applicants
    alive = 1.0
    total = 0.0
    j = 0
    for q, learn in zip(policy.accept_probs, policy.learning):
        q = float(q)
        if learn:
            if q < cost:  # nobody completes; the stage is inert
                continue
            j += 1
            total += alive * q * inv_n
            alive *= 1.0 - q / j
        elif q > 0.0:
            total += alive * q * inv_n
            alive *= 1.0 - q
    return total


@dataclass(frozen=True)
class ScanReport:
    """Outcome of an exhaustive policy-space scan."""

    config: GameConfig
    grid_step: float
    n_policies: int
    max_success: float
    n_maximizers: int
    maximizers: tuple[PolicySpec, ...]
    maximizers_truncated: bool
    equilibrium_success: float
    dp_success: float
    equilibrium_attains_max: bool


def optimality_scan(
    config: GameConfig,
    grid_step: float,
    max_policies: int = 5_000_000,
    max_kept: int = 256,
) -> ScanReport:
    """Scan every gridded policy and verify none beats the solved one.

    Each stage independently either learns with record-acceptance in
    {cost, cost+step, ..., 1}, rejects outright, or accepts blindly with a
    probability from {0} plus the same grid.  Raises VerificationError if
    any scanned policy exceeds the solved success probability by more than
    1e-12 or if the solved policy misses the scan maximum.  A grid scan is
    evidence, not proof: deviations off the grid are not examined.
    """
    if config.n_applicants > 8:
        raise ValueError("optimality_scan supports at most 8 applicants")
    grid_step = float(grid_step)
    if not 0.0 < grid_step <= 0.25:
        raise ValueError(f"grid_step must lie in (0, 0.25], got {grid_step}")
    cost = config.cost
    n_apps = config.n_applicants

    qgrid: list[float] = []
    v = cost
    while v < 1.0 - 1e-12:
        qgrid.append(v)
        v = cost + len(qgrid) * grid_step
    qgrid.append(1.0)
    # (learning, 0) is outright rejection with nobody completing, which plays
    # identically to blind acceptance with probability 0; scan it once.
    options = [(True, q) for q in qgrid]
    options.append((False, 0.0))
    options.extend((False, q) for q in qgrid)

    n_policies = len(options) ** n_apps
    if n_policies > max_policies:
        raise ValueError(
            f"scan would evaluate {n_policies} policies, over the budget "
            f"of {max_policies}"
        )

    inv_n = 1.0 / n_apps
    best = -1.0
    kept: list[tuple[float, tuple]] = []
    n_max = 0
    truncated = False
    for combo in itertools.product(options, repeat=n_apps):
        alive = 1.0
        total = 0.0
        j = 0
        for learn, q in combo:
            if learn:
                j += 1
                total += alive * q * inv_n
                alive *= 1.0 - q / j
            elif q > 0.0:
                total += alive * q * inv_n
                alive *= 1.0 - q
        if total > best + 1e-12:
            best = total
            kept = [(total, combo)]
            n_max = 1
            truncated = False
        elif total >= best - 1e-12:
            n_max += 1
            if len(kept) < max_kept:
                kept.append((total, combo))
            else:
                truncated = True
    kept = [(v, combo) for v, combo in kept if v >= best - 1e-12]

    dp_success = solve_values(config).success_probability
    eq_policy = PolicySpec.equilibrium(config)
    eq_success = policy_success_probability(config, eq_policy)
    attains = eq_success >= best - 1e-12
    if best > dp_success + 1e-12:
        raise VerificationError(
            f"scan found a policy with success {best!r} above the solved "
            f"value {dp_success!r}"
        )
    if not attains:
        raise VerificationError(
            f"solved policy (success {eq_success!r}) misses the scan "
            f"maximum {best!r}"
        )
    maximizers = tuple(
        PolicySpec(
            accept_probs=tuple(q for _, q in combo),
            learning=tuple(learn for learn, _ in combo),
        )
        for _, combo in kept
    )
    return ScanReport(
        config=config,
        grid_step=grid_step,
        n_policies=n_policies,
        max_success=best,
        n_maximizers=n_max,
        maximizers=maximizers,
        maximizers_truncated=truncated,
        equilibrium_success=eq_success,
        dp_success=dp_success,
        equilibrium_attains_max=attains,
    )


def full_learning_counterexample(
    config: GameConfig, profile: Optional[StrategyProfile] = None
) -> Optional[tuple[tuple[int, ...], int]]:
    """Search every arrival order for a reachable prefix where the running
    maximum of outputs differs from the running maximum of abilities.

    Returns (rank order, stage) for the first violating prefix, or None.
    Prefixes behind a certain acceptance (probability one) are unreachable
    and are not checked.
    """
    n_apps = config.n_applicants
    if n_apps > _MAX_ENUM:
        raise ValueError(f"audit supports at most {_MAX_ENUM} applicants")
    if profile is None:
        profile = StrategyProfile.equilibrium(config)
    if profile.n_stages != n_apps or profile.cost != config.cost:
        raise ValueError("profile does not match the instance")
    for order in itertools.permutations(range(1, n_apps + 1)):
        max_y = 0
        max_theta = 0
        for n in range(1, n_apps + 1):
            rank = order[n - 1]
            act = applicant_action(profile, n, float(rank), float(max_y))
            y = rank if act else 0
            p = profile.admin_acceptance(n, y > max_y, y > 0)
            if y > max_y:
                max_y = y
            if rank > max_theta:
                max_theta = rank
            if max_y != max_theta:
                return order, n
            if p >= 1.0:
                break  # the game surely ends here; deeper prefixes unreachable
    return None


def full_learning_audit(
    config: GameConfig, profile: Optional[StrategyProfile] = None
) -> bool:
    """True when every reachable prefix of every arrival order keeps the
    output maximum equal to the ability maximum."""
    return full_learning_counterexample(config, profile) is None


def exact_state_value(config: GameConfig, stage: int, state: int) -> Fraction:
    """Continuation value of the solved policy by exhaustive enumeration.

    ``state`` 1 means the stage's applicant is the best interviewed so far,
    0 means dominated.  Averages the success probability of equilibrium play
    from that point over all arrival orders consistent with the state.
    Stage 1 in state 0 never occurs; it is defined, as in the backward
    recursion, as the average of the two stage-2 values.
    """
    n_apps = config.n_applicants
    if n_apps > _MAX_ENUM:
        raise ValueError(f"enumeration supports at most {_MAX_ENUM} applicants")
    stage = _as_count(stage, 1, "stage")
    if stage > n_apps:
        raise ValueError(f"stage must be in 1..{n_apps}, got {stage}")
    if state not in (0, 1):
        raise ValueError(f"state must be 0 or 1, got {state!r}")
    if stage == 1 and state == 0:
        return (
            exact_state_value(config, 2, 1) + exact_state_value(config, 2, 0)
        ) / 2
    policy = PolicySpec.equilibrium(config)
    probs = [Fraction(p) for p in policy.accept_probs]
    one = Fraction(1)
    total = Fraction(0)
    count = 0
    for order in itertools.permutations(range(1, n_apps + 1)):
        prefix_max = max(order[:stage])
        if (order[stage - 1] == prefix_max) != (state == 1):
            continue
        count += 1
        alive = one
        revealed = prefix_max
        acc = Fraction(0)
        if state == 1:
            q = probs[stage - 1]
            if q:
                win = alive * q
                if order[stage - 1] == n_apps:
                    acc += win
                alive -= win
        for idx in range(stage, n_apps):
            if not alive:
                break
            rank = order[idx]
            if rank <= revealed:
                continue
            revealed = rank
            q = probs[idx]
            if q:
                win = alive * q
                if rank == n_apps:
                    acc += win
                alive -= win
        total += acc
    return total / count
