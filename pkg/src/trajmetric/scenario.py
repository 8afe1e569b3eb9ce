"""Synthetic ground truth, surrogate estimates and Monte Carlo aggregation.

Truth trajectories follow a nearly constant-velocity model.  Estimates are
produced by a parametric surrogate of a tracking filter: per object and
step a Bernoulli is emitted with the configured detection probability, its
Gaussian density centered on the true state plus isotropic perturbation
noise.  Two existence models are available:

* ``HoldHigh(level)`` keeps every emitted existence at ``level``.
* ``DecayAfterDeath(rate)`` models a smoothed posterior that grows unsure
  of existence around an object's death: emitted existence follows
  ``clamp(rate ** (k - death + 1), floor, 1)``, so it dips to ``rate`` at
  the death step and keeps decaying on coasted (extrapolated) emissions
  after death until it reaches the floor.  Steps where that value is below
  one are always emitted, mirroring a filter that maintains the track even
  without a detection.

All randomness comes from counter-based Philox streams keyed by
``(seed, object, step, channel)`` with channels 0 = process noise,
1 = detection, 2 = perturbation, so runs are bit-reproducible and the
detection/noise draws are identical across existence models for a seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError
from .ptgospa import MetricReport
from .types import (
    BernoulliDensity,
    BernoulliSequence,
    DiracDensity,
    GaussianDensity,
    SequenceSet,
    lift_ground_truth,
)

__all__ = [
    "HoldHigh",
    "DecayAfterDeath",
    "ExistenceModel",
    "ScenarioConfig",
    "RunSeries",
    "AggregateSeries",
    "generate_truth",
    "generate_estimates",
    "run_series",
    "aggregate_rms",
    "default_scenario",
    "EXISTENCE_FLOOR",
]

EXISTENCE_FLOOR = 0.01

_CH_PROCESS = 0
_CH_DETECT = 1
_CH_PERTURB = 2

_KEY_SALT = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def _stream(seed: int, obj: int, step: int, channel: int) -> np.random.Generator:
    """Independent Philox stream for one (object, step, channel) cell."""
    key = np.array([seed & _MASK64, _KEY_SALT], dtype=np.uint64)
    counter = np.array([0, channel, step, obj], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


@dataclass(frozen=True)
class HoldHigh:
    """Emitted Bernoullis keep a fixed existence level."""

    level: float = 1.0

    def __post_init__(self) -> None:
        lv = float(self.level)
        if not 0.0 < lv <= 1.0:
            raise DomainError(f"hold_high level must be in (0, 1], got {lv!r}")
        object.__setattr__(self, "level", lv)


@dataclass(frozen=True)
class DecayAfterDeath:
    """Existence decays geometrically through and past the death step."""

    rate: float

    def __post_init__(self) -> None:
        r = float(self.rate)
        if not 0.0 < r < 1.0:
            raise DomainError(f"decay rate must be in (0, 1), got {r!r}")
        object.__setattr__(self, "rate", r)

    def existence(self, k: int, death: int) -> float:
        raw = self.rate ** (k - death + 1)
        return min(1.0, max(EXISTENCE_FLOOR, raw))

    def coast_end(self, death: int, window_length: int) -> int:
        """Last step with raw decay value still at or above the floor."""
        # rate^(k - death + 1) >= floor  <=>  k <= death - 1 + log(floor)/log(rate)
        k = death - 1 + int(math.floor(math.log(EXISTENCE_FLOOR) / math.log(self.rate)))
        return min(k, window_length)


ExistenceModel = Union[HoldHigh, DecayAfterDeath]


@dataclass(frozen=True)
class ScenarioConfig:
    """Parameters of one synthetic scenario; all times are in 1..K."""

    window_length: int
    birth_times: tuple[int, ...]
    death_times: tuple[int, ...]
    initial_states: tuple[np.ndarray, ...]
    process_noise_std: float = 0.3
    detection_prob: float = 0.7
    existence_model: ExistenceModel = field(default_factory=HoldHigh)
    perturbation_std: float = 1.0
    swap_injections: tuple[tuple[int, tuple[int, int]], ...] = ()
    seed: int = 0

    def __post_init__(self) -> None:
        K = int(self.window_length)
        births = tuple(int(b) for b in self.birth_times)
        deaths = tuple(int(d) for d in self.death_times)
        states = tuple(np.asarray(s, dtype=float) for s in self.initial_states)
        if K < 1:
            raise DomainError(f"window length must be >= 1, got {K}")
        if not len(births) == len(deaths) == len(states):
            raise DomainError("birth_times, death_times and initial_states must have equal length")
        for o, (b, d) in enumerate(zip(births, deaths)):
            if not 1 <= b <= d <= K:
                raise DomainError(f"object {o}: need 1 <= birth <= death <= K, got ({b}, {d}, K={K})")
        dims = {s.size for s in states}
        if states:
            if len(dims) != 1:
                raise DomainError("all initial states must share one dimension")
            dim = dims.pop()
            if dim % 2 or dim < 2:
                raise DomainError(f"state dimension must be even (position+velocity), got {dim}")
            for s in states:
                if not np.all(np.isfinite(s)):
                    raise DomainError("initial states must be finite")
        if not 0.0 <= float(self.detection_prob) <= 1.0:
            raise DomainError(f"detection probability must be in [0, 1], got {self.detection_prob!r}")
        if float(self.process_noise_std) < 0 or float(self.perturbation_std) < 0:
            raise DomainError("noise standard deviations must be >= 0")
        if not isinstance(self.existence_model, (HoldHigh, DecayAfterDeath)):
            raise DomainError("existence_model must be HoldHigh or DecayAfterDeath")
        swaps = tuple((int(t), (int(a), int(b))) for t, (a, b) in self.swap_injections)
        n = len(births)
        for t, (a, b) in swaps:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise DomainError(f"swap injection references invalid object pair ({a}, {b})")
            if not (births[a] <= t <= deaths[a] and births[b] <= t <= deaths[b]):
                raise DomainError(
                    f"swap at step {t} requires objects {a} and {b} to overlap there"
                )
        object.__setattr__(self, "window_length", K)
        object.__setattr__(self, "birth_times", births)
        object.__setattr__(self, "death_times", deaths)
        object.__setattr__(self, "initial_states", states)
        object.__setattr__(self, "process_noise_std", float(self.process_noise_std))
        object.__setattr__(self, "detection_prob", float(self.detection_prob))
        object.__setattr__(self, "perturbation_std", float(self.perturbation_std))
        object.__setattr__(self, "swap_injections", swaps)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def num_objects(self) -> int:
        return len(self.birth_times)

    @property
    def state_dim(self) -> int:
        return self.initial_states[0].size if self.initial_states else 0


def _true_states(config: ScenarioConfig) -> list[list[np.ndarray]]:
    """Per-object state sequences from birth to death (CV + process noise)."""
    out = []
    for o in range(config.num_objects):
        d = config.state_dim
        half = d // 2
        x = config.initial_states[o].copy()
        states = [x.copy()]
        for k in range(config.birth_times[o] + 1, config.death_times[o] + 1):
            w = config.process_noise_std * _stream(config.seed, o, k, _CH_PROCESS).standard_normal(half)
            x[:half] += x[half:] + 0.5 * w
            x[half:] += w
            states.append(x.copy())
        out.append(states)
    return out


def generate_truth(config: ScenarioConfig) -> SequenceSet:
    """Ground truth as unit-existence Dirac sequences, one per object."""
    states = _true_states(config)
    return lift_ground_truth(
        [(config.birth_times[o], states[o]) for o in range(config.num_objects)],
        config.window_length,
    )


def _truth_states_from(truth: SequenceSet, config: ScenarioConfig) -> list[list[np.ndarray]]:
    if len(truth) != config.num_objects or truth.window_length != config.window_length:
        raise DomainError("truth does not match the scenario configuration")
    out = []
    for o, seq in enumerate(truth.sequences):
        if seq.start_time != config.birth_times[o] or seq.end_time != config.death_times[o]:
            raise DomainError(f"truth sequence {o} does not match the configured birth/death times")
        states = []
        for b in seq.densities:
            if not isinstance(b.density, DiracDensity):
                raise DomainError("truth sequences must hold Dirac densities")
            states.append(np.asarray(b.density.point))
        out.append(states)
    return out


def generate_estimates(truth: SequenceSet, config: ScenarioConfig) -> SequenceSet:
    """Surrogate tracker output for ``truth`` under the configured models.

    Swap injections exchange the remainder of two objects' emission streams
    from the given step onward, before streams are split into contiguous
    sequences.
    """
    states = _truth_states_from(truth, config)
    model = config.existence_model
    d = config.state_dim
    half = d // 2
    cov = config.perturbation_std**2 * np.eye(d)

    emissions: list[dict[int, BernoulliDensity]] = []
    for o in range(config.num_objects):
        birth, death = config.birth_times[o], config.death_times[o]
        per_step: dict[int, BernoulliDensity] = {}
        for k in range(birth, death + 1):
            detected = float(_stream(config.seed, o, k, _CH_DETECT).random()) < config.detection_prob
            if isinstance(model, HoldHigh):
                emit, r = detected, model.level
            else:
                r = model.existence(k, death)
                emit = detected or r < 1.0
            if emit:
                noise = config.perturbation_std * _stream(config.seed, o, k, _CH_PERTURB).standard_normal(d)
                per_step[k] = BernoulliDensity(r, GaussianDensity(states[o][k - birth] + noise, cov))
        if isinstance(model, DecayAfterDeath):
            last = states[o][-1]
            for k in range(death + 1, model.coast_end(death, config.window_length) + 1):
                mean = last.copy()
                mean[:half] += last[half:] * (k - death)
                per_step[k] = BernoulliDensity(model.existence(k, death), GaussianDensity(mean, cov))
        emissions.append(per_step)

    for t, (a, b) in config.swap_injections:
        ea, eb = emissions[a], emissions[b]
        for k in sorted(set(ea) | set(eb)):
            if k >= t:
                va, vb = ea.get(k), eb.get(k)
                if vb is None:
                    ea.pop(k, None)
                else:
                    ea[k] = vb
                if va is None:
                    eb.pop(k, None)
                else:
                    eb[k] = va

    sequences: list[BernoulliSequence] = []
    for per_step in emissions:
        run: list[BernoulliDensity] = []
        run_start = 0
        for k in sorted(per_step):
            if run and k != run_start + len(run):
                sequences.append(BernoulliSequence(run_start, tuple(run)))
                run = []
            if not run:
                run_start = k
            run.append(per_step[k])
        if run:
            sequences.append(BernoulliSequence(run_start, tuple(run)))
    return SequenceSet(config.window_length, tuple(sequences))


@dataclass(frozen=True)
class RunSeries:
    """Per-step error series of one run, in distance units (1/p power).

    ``total`` includes each step's switch cost to the next step; ``switch``
    itself has length K - 1.
    """

    window_length: int
    p: float
    total: np.ndarray
    localization: np.ndarray
    existence_mismatch: np.ndarray
    missed: np.ndarray
    false_det: np.ndarray
    switch: np.ndarray


@dataclass(frozen=True)
class AggregateSeries:
    """Per-step RMS of run series across Monte Carlo runs."""

    window_length: int
    p: float
    num_runs: int
    total: np.ndarray
    localization: np.ndarray
    existence_mismatch: np.ndarray
    missed: np.ndarray
    false_det: np.ndarray
    switch: np.ndarray


_COMPONENTS = ("total", "localization", "existence_mismatch", "missed", "false_det", "switch")


def run_series(report: MetricReport, p: float) -> RunSeries:
    """Turn a metric report's p-th-power components into plot-ready series."""
    inv = 1.0 / float(p)
    K = len(report.per_step)
    return RunSeries(
        window_length=K,
        p=float(p),
        total=np.array([s.step_cost**inv for s in report.per_step]),
        localization=np.array([s.expected_localization**inv for s in report.per_step]),
        existence_mismatch=np.array([s.existence_mismatch**inv for s in report.per_step]),
        missed=np.array([s.expected_missed**inv for s in report.per_step]),
        false_det=np.array([s.expected_false**inv for s in report.per_step]),
        switch=np.array([s.switch_to_next**inv for s in report.per_step if s.switch_to_next is not None]),
    )


def aggregate_rms(runs: list[RunSeries]) -> AggregateSeries:
    """Root-mean-square across runs, per step and component."""
    if not runs:
        raise DomainError("at least one run is required for aggregation")
    K = runs[0].window_length
    p = runs[0].p
    for r in runs:
        if r.window_length != K or r.p != p:
            raise DomainError("all runs must share one window length and order p")
    rms = {
        name: np.sqrt(np.mean(np.square([getattr(r, name) for r in runs]), axis=0))
        for name in _COMPONENTS
    }
    return AggregateSeries(window_length=K, p=p, num_runs=len(runs), **rms)


def default_scenario(
    seed: int = 0,
    existence_model: ExistenceModel | None = None,
) -> ScenarioConfig:
    """Six-object crossing scenario: objects head through a common meeting
    region and diverge again, with staggered births and deaths."""
    births = (1, 1, 11, 11, 21, 21)
    deaths = (61, 61, 71, 71, 81, 81)
    speed = 1.5
    meet_step = 42
    initial = []
    for o, b in enumerate(births):
        angle = 2.0 * math.pi * o / len(births)
        direction = np.array([math.cos(angle), math.sin(angle)])
        pos = direction * speed * (meet_step - b)
        vel = -direction * speed
        initial.append(np.concatenate([pos, vel]))
    return ScenarioConfig(
        window_length=90,
        birth_times=births,
        death_times=deaths,
        initial_states=tuple(initial),
        process_noise_std=0.3,
        detection_prob=0.7,
        existence_model=existence_model if existence_model is not None else DecayAfterDeath(0.8),
        perturbation_std=1.0,
        seed=seed,
    )
