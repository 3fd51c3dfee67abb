"""Monte Carlo simulator for the multiplicative Q-model of careers.

Each author ``i`` has a latent ability ``Q_i`` and each of their works an
independent luck factor ``P_ij``; the impact of the work is
``c10_ij = Q_i * P_ij``. Both factors are lognormal.

Random streams come from NumPy's Philox4x64-10 counter-based generator,
seeded through :class:`numpy.random.SeedSequence` with a per-purpose spawn
key (0 = population, 1 = prize noise). Normals use NumPy's ziggurat
``standard_normal``. Draw order for a population: one normal per author for
``log Q`` (author order), then, only when ``productivity_sigma > 0``, one
normal per author for the paper count, then one normal per paper for
``log P`` (author-major order).
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import EmptyCareerError, InvalidCountsError, InvalidParamsError
from .sieve import LabeledRanking, SieveReport, analyze, build_ranking

STREAM_POPULATION = 0
STREAM_PRIZES = 1

_U64_MAX = 2**64 - 1


def make_rng(seed: int, stream: int) -> np.random.Generator:
    if not 0 <= int(seed) <= _U64_MAX:
        raise InvalidParamsError(f"seed must be an unsigned 64-bit integer, got {seed}")
    ss = np.random.SeedSequence(int(seed), spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class QModelParams:
    mu_q: float = 0.0
    sigma_q: float = 0.5
    mu_p: float = 0.0
    sigma_p: float = 1.0
    papers_per_author: int = 20
    population_size: int = 2915
    seed: int = 0
    # 0 keeps papers_per_author constant; > 0 draws each author's count lognormally.
    productivity_sigma: float = 0.0

    def __post_init__(self):
        if self.sigma_q < 0 or self.sigma_p < 0 or self.productivity_sigma < 0:
            raise InvalidParamsError("standard deviations must be non-negative")
        if self.population_size < 2:
            raise InvalidParamsError("population_size must be at least 2")
        if self.papers_per_author < 1:
            raise InvalidParamsError("papers_per_author must be at least 1")
        if not 0 <= self.seed <= _U64_MAX:
            raise InvalidParamsError("seed must be an unsigned 64-bit integer")
        for name in ("mu_q", "sigma_q", "mu_p", "sigma_p", "productivity_sigma"):
            if not np.isfinite(getattr(self, name)):
                raise InvalidParamsError(f"{name} must be finite")


@dataclass(frozen=True, eq=False)
class Career:
    author_id: str
    true_q: float
    impacts: np.ndarray

    def __post_init__(self):
        if len(self.impacts) < 1:
            raise EmptyCareerError(f"career {self.author_id} has no works")


@dataclass(frozen=True, eq=False)
class Population:
    params: QModelParams
    careers: tuple[Career, ...]
    prize_labels: np.ndarray | None = None
    n_prizes: int | None = None

    @property
    def true_q(self) -> np.ndarray:
        return np.array([c.true_q for c in self.careers])

    def all_impacts(self) -> np.ndarray:
        return np.concatenate([c.impacts for c in self.careers])


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def sample_population(params: QModelParams) -> Population:
    rng = make_rng(params.seed, STREAM_POPULATION)
    m = params.population_size
    log_q = params.mu_q + params.sigma_q * rng.standard_normal(m)
    if params.productivity_sigma > 0:
        z = rng.standard_normal(m)
        counts = np.maximum(1, np.rint(params.papers_per_author * np.exp(params.productivity_sigma * z)))
        counts = counts.astype(np.int64)
    else:
        counts = np.full(m, params.papers_per_author, dtype=np.int64)
    log_p = params.mu_p + params.sigma_p * rng.standard_normal(int(counts.sum()))
    impacts = np.exp(np.repeat(log_q, counts) + log_p)

    width = max(5, len(str(m)))
    bounds = np.concatenate(([0], np.cumsum(counts)))
    careers = tuple(
        Career(f"a{i:0{width}d}", float(np.exp(log_q[i])), _frozen(impacts[bounds[i]:bounds[i + 1]].copy()))
        for i in range(m)
    )
    return Population(params, careers)


def estimate_q(career: Career, mu_p: float = 0.0) -> float:
    """Maximum-likelihood Q under the lognormal model: exp(mean log c10 - mu_p)."""
    if len(career.impacts) == 0:
        raise EmptyCareerError(f"career {career.author_id} has no works")
    return float(np.exp(np.mean(np.log(career.impacts)) - mu_p))


def assign_prizes(pop: Population, n_prizes: int, noise_sigma: float, seed: int) -> Population:
    """Award prizes to the top ``n_prizes`` authors by log Q plus Gaussian noise.

    Ties in the noisy key go to the lower author index.
    """
    m = len(pop.careers)
    if not 1 <= n_prizes < m:
        raise InvalidCountsError(f"need 1 <= n_prizes < {m}, got {n_prizes}")
    if not noise_sigma >= 0:
        raise InvalidParamsError("noise_sigma must be non-negative")
    rng = make_rng(seed, STREAM_PRIZES)
    key = np.log(pop.true_q) + noise_sigma * rng.standard_normal(m)
    winners = np.argsort(-key, kind="stable")[:n_prizes]
    labels = np.zeros(m, dtype=np.uint8)
    labels[winners] = 1
    return dataclasses.replace(pop, prize_labels=_frozen(labels), n_prizes=n_prizes)


@dataclass(frozen=True, eq=False)
class Experiment:
    population: Population
    q_hat: np.ndarray
    ranking: LabeledRanking
    report: SieveReport


def simulate(params: QModelParams, n_prizes: int, noise_sigma: float,
             seed: int | None = None) -> Experiment:
    """Sample, award prizes, rank by estimated Q, and analyse the sieve.

    ``seed`` drives the prize noise and defaults to ``params.seed``.
    """
    pop = sample_population(params)
    pop = assign_prizes(pop, n_prizes, noise_sigma, params.seed if seed is None else seed)
    q_hat = np.array([estimate_q(c, params.mu_p) for c in pop.careers])
    rows = [(c.author_id, q, int(lab)) for c, q, lab in zip(pop.careers, q_hat, pop.prize_labels)]
    ranking = build_ranking(rows)
    return Experiment(pop, q_hat, ranking, analyze(ranking))


def run_experiment(params: QModelParams, n_prizes: int, noise_sigma: float,
                   seed: int | None = None) -> SieveReport:
    return simulate(params, n_prizes, noise_sigma, seed).report
