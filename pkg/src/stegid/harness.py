"""Seeded synthetic experiment harness.

Each trial draws a corpus of i.i.d. standard-normal feature vectors, picks one
guilty actor uniformly, and shifts that actor's mean by delta on a random
subset of ceil(rho * H) components.  The detectors then rank actors and the
guilty actor's 1-based rank is recorded; the headline metric is the average
rank over trials (1 = always caught, (n+1)/2 = random guessing).

When both detectors run, they consume the same normalized corpus per trial,
so differences are attributable to the method alone.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .bagging import detect_bagged
from .corpus import Corpus, normalize
from .detector import detect_single
from .distance import Kernel, LINEAR
from .lof import LofParams

NOISE_MODELS = ("iid-gaussian",)


@dataclass(frozen=True)
class SyntheticConfig:
    """Parameters of the synthetic guilty-actor experiment."""

    n: int = 50
    m: int = 100
    H: int = 274
    delta: float = 0.0
    rho: float = 1.0
    noise_model: str = "iid-gaussian"
    trials: int = 100
    master_seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.H < 2:
            raise ValueError(f"H must be >= 2, got {self.H}")
        if not (0.0 < self.rho <= 1.0):
            raise ValueError(f"rho must be in (0, 1], got {self.rho}")
        if self.noise_model not in NOISE_MODELS:
            raise ValueError(f"unknown noise model {self.noise_model!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")


@dataclass(frozen=True)
class TrialResult:
    """Guilty actor's rank under each detector for one trial."""

    trial: int
    guilty: int
    single_rank: int | None = None
    bagged_rank: int | None = None


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregated trial results plus the configuration that produced them."""

    config: SyntheticConfig
    p: int
    k: int
    T: int
    kernel: Kernel
    results: tuple[TrialResult, ...]
    average_single: float | None
    average_bagged: float | None
    stderr_single: float | None
    stderr_bagged: float | None
    wall_clock_seconds: float


def generate_trial(config: SyntheticConfig, trial: int) -> tuple[Corpus, int]:
    """Build the trial's raw (unnormalized) corpus and its guilty actor.

    Deterministic given (master_seed, trial): the guilty index, the shifted
    component subset, and all noise draws come from a per-trial RNG stream.
    """
    if trial < 0:
        raise ValueError(f"trial must be >= 0, got {trial}")
    rng = np.random.default_rng(
        np.random.SeedSequence(config.master_seed, spawn_key=(0, trial))
    )
    guilty = int(rng.integers(config.n))
    n_informative = math.ceil(config.rho * config.H)
    informative = np.sort(rng.choice(config.H, size=n_informative, replace=False))
    features = rng.standard_normal((config.n, config.m, config.H))
    features[guilty][:, informative] += config.delta
    return Corpus(features), guilty


def _detector_seed(config: SyntheticConfig, trial: int) -> int:
    ss = np.random.SeedSequence(config.master_seed, spawn_key=(1, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def _mean_stderr(ranks: list[int]) -> tuple[float, float]:
    mean = sum(ranks) / len(ranks)
    if len(ranks) == 1:
        return mean, 0.0
    return mean, float(np.std(ranks, ddof=1) / math.sqrt(len(ranks)))


def run_trials(
    config: SyntheticConfig,
    p: int = 1,
    kernel: Kernel = LINEAR,
    lof: LofParams = LofParams(),
    T: int = 16,
    run_single: bool = True,
    run_bagged: bool = True,
) -> ExperimentReport:
    """Run the experiment with an explicit choice of which detectors to run."""
    if not (run_single or run_bagged):
        raise ValueError("at least one of run_single/run_bagged must be set")
    start = time.perf_counter()
    results = []
    for trial in range(config.trials):
        raw, guilty = generate_trial(config, trial)
        corpus = normalize(raw)
        single_rank = None
        bagged_rank = None
        if run_single:
            single_rank = detect_single(corpus, p, kernel, lof).rank_of(guilty)
        if run_bagged:
            bagged = detect_bagged(
                corpus, p, kernel, lof, T, _detector_seed(config, trial)
            )
            bagged_rank = bagged.final.rank_of(guilty)
        results.append(TrialResult(trial, guilty, single_rank, bagged_rank))

    avg_s = std_s = avg_b = std_b = None
    if run_single:
        avg_s, std_s = _mean_stderr([r.single_rank for r in results])
    if run_bagged:
        avg_b, std_b = _mean_stderr([r.bagged_rank for r in results])
    return ExperimentReport(
        config=config,
        p=p,
        k=lof.k,
        T=T,
        kernel=kernel,
        results=tuple(results),
        average_single=avg_s,
        average_bagged=avg_b,
        stderr_single=std_s,
        stderr_bagged=std_b,
        wall_clock_seconds=time.perf_counter() - start,
    )


def run_experiment(
    config: SyntheticConfig,
    p: int = 1,
    kernel: Kernel = LINEAR,
    lof: LofParams = LofParams(),
    T: int = 16,
    compare: bool = True,
) -> ExperimentReport:
    """Run the trial loop: the single-model detector always, and the bagged
    detector alongside it (on the same per-trial corpora) when `compare`."""
    return run_trials(
        config, p=p, kernel=kernel, lof=lof, T=T,
        run_single=True, run_bagged=compare,
    )


def average_rank(results, which: str) -> float:
    """Arithmetic mean of the guilty actor's ranks for one method."""
    if which not in ("single", "bagged"):
        raise ValueError(f"which must be 'single' or 'bagged', got {which!r}")
    field = f"{which}_rank"
    ranks = []
    for r in results:
        value = getattr(r, field)
        if value is None:
            raise ValueError(f"trial {r.trial} is missing its {which} rank")
        ranks.append(value)
    if not ranks:
        raise ValueError("no trial results given")
    return sum(ranks) / len(ranks)
