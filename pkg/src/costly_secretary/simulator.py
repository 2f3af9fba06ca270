"""Forward play of the interview game under per-stage strategy rules.

A strategy profile pairs, for every stage, an administrator acceptance rule
with the applicant's interview decision.  A *learning* stage accepts a
strictly new positive maximum output with some probability and everything
else with probability zero; the applicant completes the interview exactly
when their ability beats all previous outputs and the acceptance probability
covers the interview cost.  A *non-learning* stage accepts blindly with a
fixed probability and the applicant never completes.  This covers the solved
policy, the decline-everything profiles, partial-learning mixtures, and
forced-decline deviations.

Monte Carlo aggregation is batched: trial batches draw from independent
counter-based substreams keyed by (seed, batch index) and are reduced in a
fixed order, so results are bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .equilibrium import GameConfig, _as_count, _check_cost, compute_threshold

__all__ = [
    "StageRule",
    "StrategyProfile",
    "AbilityDraw",
    "GameTranscript",
    "AggregateStats",
    "IncentiveViolation",
    "sample_abilities",
    "applicant_action",
    "play_game",
    "estimate",
    "incentive_audit",
]

_BATCH = 32768  # fixed batch width; part of the reproducibility contract
_LEARN, _BLIND, _DEAD = 0, 1, 2


@dataclass(frozen=True)
class StageRule:
    """Acceptance rule for one stage.

    learning=True: accept a strictly new positive maximum with probability
    ``accept_prob``, anything else with probability zero.  learning=False:
    accept with probability ``accept_prob`` regardless of the output.
    ``force_decline`` overrides the applicant to decline unconditionally
    (used to construct off-path deviations).
    """

    learning: bool
    accept_prob: float
    force_decline: bool = False

    def __post_init__(self) -> None:
        p = float(self.accept_prob)
        if not math.isfinite(p) or not 0.0 <= p <= 1.0:
            raise ValueError(f"accept_prob must lie in [0, 1], got {p!r}")
        object.__setattr__(self, "accept_prob", p)


@dataclass(frozen=True, eq=False)
class StrategyProfile:
    """Per-stage rules plus the interview cost they are played against."""

    cost: float
    stages: tuple[StageRule, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cost", _check_cost(self.cost))
        stages = tuple(self.stages)
        if len(stages) < 2:
            raise ValueError("a profile needs at least two stages")
        if not all(isinstance(r, StageRule) for r in stages):
            raise ValueError("stages must be StageRule instances")
        object.__setattr__(self, "stages", stages)

    @property
    def n_stages(self) -> int:
        return len(self.stages)

    def rule(self, stage: int) -> StageRule:
        """Rule for 1-based stage number."""
        if not 1 <= stage <= len(self.stages):
            raise ValueError(f"stage must be in 1..{len(self.stages)}, got {stage}")
        return self.stages[stage - 1]

    def admin_acceptance(
        self, stage: int, is_new_strict_max: bool, output_positive: bool
    ) -> float:
        """Acceptance probability given the outcome classification."""
        r = self.rule(stage)
        if r.learning:
            return r.accept_prob if (is_new_strict_max and output_positive) else 0.0
        return r.accept_prob

    @classmethod
    def equilibrium(cls, config: GameConfig) -> "StrategyProfile":
        """The solved full-learning profile: accept a current best with
        probability cost before the threshold stage and outright after."""
        n_star = compute_threshold(config.n_applicants)
        rules = tuple(
            StageRule(True, config.cost if n < n_star else 1.0)
            for n in range(1, config.n_applicants + 1)
        )
        return cls(cost=config.cost, stages=rules)

    @classmethod
    def no_learning(
        cls, config: GameConfig, acceptance_masses: Sequence[float]
    ) -> "StrategyProfile":
        """Blind acceptance; applicants always decline.

        ``acceptance_masses`` gives the unconditional probability of
        accepting each applicant (entries non-negative, summing to at most
        1), the parametrization under which every mass vector summing to 1
        hires the best with probability exactly 1/N.  The masses are
        converted to per-stage acceptance probabilities conditional on
        reaching the stage.
        """
        if len(acceptance_masses) != config.n_applicants:
            raise ValueError("need one acceptance mass per applicant")
        rules = tuple(
            StageRule(False, q) for q in _masses_to_stage_probs(acceptance_masses)
        )
        return cls(cost=config.cost, stages=rules)


def _masses_to_stage_probs(masses: Sequence[float]) -> list[float]:
    """Unconditional acceptance masses -> conditional-on-reaching stage
    probabilities: q_n = p_n / (1 - p_1 - ... - p_{n-1})."""
    total = math.fsum(float(p) for p in masses)
    if any(float(p) < 0.0 for p in masses):
        raise ValueError("acceptance masses must be non-negative")
    if total > 1.0 + 1e-9:
        raise ValueError(f"acceptance masses sum to {total}, over 1")
    probs = []
    remaining = 1.0
    for p in masses:
        p = float(p)
        if remaining <= 0.0:
            probs.append(0.0)
            continue
        probs.append(min(p / remaining, 1.0))
        remaining -= p
    return probs


def _check_profile(config: GameConfig, profile: StrategyProfile) -> None:
    if profile.n_stages != config.n_applicants:
        raise ValueError(
            f"profile has {profile.n_stages} stages, instance has "
            f"{config.n_applicants} applicants"
        )
    if profile.cost != config.cost:
        raise ValueError(
            f"profile cost {profile.cost} does not match instance cost {config.cost}"
        )


@dataclass(frozen=True, eq=False)
class AbilityDraw:
    """Abilities of the N applicants: positive and pairwise distinct."""

    abilities: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.abilities, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("abilities must be a 1-d array with at least 2 entries")
        if not np.all(arr > 0.0):
            raise ValueError("abilities must be strictly positive")
        if len(set(arr.tolist())) != arr.size:
            raise ValueError("abilities must be pairwise distinct")
        object.__setattr__(self, "abilities", arr)


def sample_abilities(n_applicants: int, rng: np.random.Generator) -> AbilityDraw:
    """Draw i.i.d. uniform abilities on (0, 1), redrawing exact collisions.

    Only the rank order matters downstream; i.i.d. uniforms make every
    arrival order equally likely.
    """
    n_applicants = _as_count(n_applicants, 2, "n_applicants")
    seen: set[float] = set()
    values: list[float] = []
    while len(values) < n_applicants:
        x = float(rng.random())
        if x <= 0.0 or x in seen:
            continue
        seen.add(x)
        values.append(x)
    return AbilityDraw(np.asarray(values))


def applicant_action(
    profile: StrategyProfile, stage: int, ability: float, past_output_max: float
) -> int:
    """Interview decision of the stage's applicant (1 = complete, 0 = decline).

    Under a learning rule the applicant completes exactly when their ability
    beats every previous output and the record-acceptance probability covers
    the cost; at stage 1 the empty output history counts as maximum 0, so any
    ability qualifies.  Blind and forced-decline stages never complete.
    """
    if not ability > 0.0:
        raise ValueError(f"ability must be positive, got {ability!r}")
    if past_output_max < 0.0:
        raise ValueError(f"past_output_max must be >= 0, got {past_output_max!r}")
    r = profile.rule(stage)
    if r.force_decline or not r.learning:
        return 0
    return int(ability > past_output_max and r.accept_prob >= profile.cost)


@dataclass(frozen=True, eq=False)
class GameTranscript:
    """One play of the game.

    ``actions``/``outputs``/``applicant_payoffs`` stop at the accepted
    applicant (or run to the end if nobody is accepted); ``abilities`` keeps
    the full draw since success is judged against the overall best.
    ``accepted_index`` is the 1-based position of the accepted applicant or
    None.  Payoffs follow the three-case table: 1-cost if accepted after
    completing, -cost if rejected after completing, 0 otherwise.
    """

    abilities: np.ndarray
    actions: tuple[int, ...]
    outputs: tuple[float, ...]
    accepted_index: Optional[int]
    success: bool
    applicant_payoffs: tuple[float, ...]


def play_game(
    config: GameConfig, profile: StrategyProfile, rng: np.random.Generator
) -> GameTranscript:
    """Play one game forward and record the transcript."""
    _check_profile(config, profile)
    draw = sample_abilities(config.n_applicants, rng)
    theta = draw.abilities
    actions: list[int] = []
    outputs: list[float] = []
    accepted: Optional[int] = None
    past_max = 0.0
    for n in range(1, config.n_applicants + 1):
        ability = float(theta[n - 1])
        act = applicant_action(profile, n, ability, past_max)
        y = ability if act else 0.0
        actions.append(act)
        outputs.append(y)
        p = profile.admin_acceptance(n, y > past_max, y > 0.0)
        if p >= 1.0 or (p > 0.0 and rng.random() < p):
            accepted = n
            break
        if y > past_max:
            past_max = y
    success = accepted is not None and float(theta[accepted - 1]) == float(theta.max())
    payoffs = []
    for k, act in enumerate(actions, start=1):
        if act and k == accepted:
            payoffs.append(1.0 - config.cost)
        elif act:
            payoffs.append(-config.cost)
        else:
            payoffs.append(0.0)
    return GameTranscript(
        abilities=theta,
        actions=tuple(actions),
        outputs=tuple(outputs),
        accepted_index=accepted,
        success=success,
        applicant_payoffs=tuple(payoffs),
    )


@dataclass(frozen=True)
class AggregateStats:
    """Monte Carlo summary of repeated plays.

    ``mean_tau_unconditional`` counts a trial without acceptance as stopping
    index 0; ``mean_tau_conditional`` averages only accepted trials (NaN if
    none).  ``success_se`` and ``tau_se`` are standard errors of the
    corresponding means.
    """

    trials: int
    success_rate: float
    success_se: float
    acceptance_rate: float
    mean_tau_unconditional: float
    mean_tau_conditional: float
    tau_se: float
    seed: int


def _stage_plan(profile: StrategyProfile) -> tuple[np.ndarray, np.ndarray]:
    kinds = np.empty(profile.n_stages, dtype=np.int8)
    probs = np.empty(profile.n_stages, dtype=np.float64)
    for j, r in enumerate(profile.stages):
        probs[j] = r.accept_prob
        if not r.learning:
            kinds[j] = _BLIND
        elif r.force_decline or r.accept_prob < profile.cost:
            kinds[j] = _DEAD
        else:
            kinds[j] = _LEARN
    return kinds, probs


def _run_batch(
    kinds: np.ndarray, probs: np.ndarray, size: int, key: int
) -> tuple[int, int, int, int]:
    """Simulate one batch; returns integer totals (successes, acceptances,
    sum of stopping indices, sum of squared stopping indices)."""
    rng = np.random.Generator(np.random.Philox(key=key))
    alive = np.ones(size, dtype=bool)
    revealed_max = np.zeros(size)
    true_max = np.zeros(size)
    tau = np.zeros(size, dtype=np.int64)
    chosen = np.full(size, -1.0)
    for j in range(kinds.size):
        theta = rng.random(size)
        u = rng.random(size)
        np.maximum(true_max, theta, out=true_max)
        kind = kinds[j]
        if kind == _DEAD:
            continue
        q = probs[j]
        if kind == _LEARN:
            complete = theta > revealed_max
            if q > 0.0:
                newly = alive & complete & (u < q)
                tau[newly] = j + 1
                chosen[newly] = theta[newly]
                alive &= ~newly
            np.copyto(revealed_max, theta, where=complete)
        else:  # blind acceptance, nothing revealed
            if q > 0.0:
                newly = alive & (u < q)
                tau[newly] = j + 1
                chosen[newly] = theta[newly]
                alive &= ~newly
    accepted = tau > 0
    success = accepted & (chosen == true_max)
    return (
        int(success.sum()),
        int(accepted.sum()),
        int(tau.sum()),
        int((tau * tau).sum()),
    )


def estimate(
    config: GameConfig,
    profile: StrategyProfile,
    trials: int,
    seed: int,
    workers: int = 1,
) -> AggregateStats:
    """Aggregate many plays into success and stopping-time statistics.

    Bit-identical output for fixed (config, profile, trials, seed) no matter
    how many workers run the batches.
    """
    _check_profile(config, profile)
    trials = _as_count(trials, 1, "trials")
    seed = _as_count(seed, 0, "seed")
    if seed >= 2**64:
        raise ValueError("seed must fit in 64 bits")
    workers = _as_count(workers, 1, "workers")
    kinds, probs = _stage_plan(profile)
    n_batches = (trials + _BATCH - 1) // _BATCH

    def one(batch: int) -> tuple[int, int, int, int]:
        size = min(_BATCH, trials - batch * _BATCH)
        return _run_batch(kinds, probs, size, key=(seed << 64) | batch)

    if workers == 1 or n_batches == 1:
        results = [one(b) for b in range(n_batches)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(n_batches)))
    n_success = sum(r[0] for r in results)
    n_accepted = sum(r[1] for r in results)
    tau_sum = sum(r[2] for r in results)
    tau_sq_sum = sum(r[3] for r in results)

    success_rate = n_success / trials
    success_se = math.sqrt(success_rate * (1.0 - success_rate) / trials)
    mean_tau = tau_sum / trials
    if trials > 1:
        tau_var = max(tau_sq_sum - tau_sum * tau_sum / trials, 0.0) / (trials - 1)
    else:
        tau_var = 0.0
    return AggregateStats(
        trials=trials,
        success_rate=success_rate,
        success_se=success_se,
        acceptance_rate=n_accepted / trials,
        mean_tau_unconditional=mean_tau,
        mean_tau_conditional=tau_sum / n_accepted if n_accepted else math.nan,
        tau_se=math.sqrt(tau_var / trials),
        seed=seed,
    )


@dataclass(frozen=True)
class IncentiveViolation:
    stage: int
    code: str
    detail: str


def incentive_audit(
    config: GameConfig, profile: StrategyProfile
) -> list[IncentiveViolation]:
    """Check the profile's incentive constraints stage by stage.

    Flags learning stages whose record-acceptance probability falls short of
    the cost, nonzero acceptance of non-record outputs in a full-learning
    profile, and stages whose completion behavior contradicts the sign of
    the applicant's payoff from completing.  Returns an empty list for the
    solved profile and for pure blind-acceptance profiles.
    """
    _check_profile(config, profile)
    out: list[IncentiveViolation] = []
    full_learning = all(r.learning for r in profile.stages)
    for n, r in enumerate(profile.stages, start=1):
        if r.learning and r.accept_prob < config.cost:
            out.append(
                IncentiveViolation(
                    stage=n,
                    code="record-acceptance-below-cost",
                    detail=(
                        f"record acceptance {r.accept_prob} < cost {config.cost} "
                        "at a stage expecting a completed interview"
                    ),
                )
            )
        if full_learning:
            for positive in (False, True):
                if profile.admin_acceptance(n, False, positive) != 0.0:
                    out.append(
                        IncentiveViolation(
                            stage=n,
                            code="nonrecord-acceptance-nonzero",
                            detail="full-learning profile accepts a non-record output",
                        )
                    )
        if r.learning:
            completing_pays = r.accept_prob >= config.cost
            completes = not r.force_decline and r.accept_prob >= config.cost
            if completing_pays != completes:
                out.append(
                    IncentiveViolation(
                        stage=n,
                        code="completion-mismatch",
                        detail=(
                            "profile declines although completing pays"
                            if completing_pays
                            else "profile completes although completing loses"
                        ),
                    )
                )
    return out
