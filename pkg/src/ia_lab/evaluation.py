"""Monte-Carlo SNR sweeps, slope and gap estimation, region decomposition.

A sweep regenerates channels per trial (never per SNR point: the same
realization is evaluated across the whole grid so constant terms cancel out
of slope estimates), rebuilds the scheme, and records zero-forcing rates.
Trials whose construction or alignment fails are recorded as failure rows.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction

import numpy as np

from .channels import extend_channel, generate_channels
from .designed import build_designed_channel
from .errors import (AlignmentError, DegeneracyError, InsufficientDataError,
                     ParameterError, RegionMembershipError, SingularChannelError)
from .mimo import build_mimo_even, build_mimo_odd, mimo_extension
from .receiver import check_alignment, zf_rates
from .siso import (DEFAULT_SIZE_CAP, build_precoders_general, build_precoders_k3,
                   guarded_extension_general)

FAMILIES = ("siso-k3", "siso-general", "mimo", "designed")


@dataclass(frozen=True)
class SchemeConfig:
    """Everything needed to rebuild one scheme family from a seed."""

    family: str
    K: int = 3
    M: int = 1
    n: int = 1
    a_min: float = 0.5
    a_max: float = 2.0
    size_cap: int = DEFAULT_SIZE_CAP

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(
                f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.family == "siso-k3" and (self.K, self.M) != (3, 1):
            raise ParameterError("siso-k3 requires K=3, M=1")
        if self.family == "siso-general" and (self.K < 3 or self.M != 1):
            raise ParameterError("siso-general requires K>=3, M=1")
        if self.family == "mimo" and (self.K != 3 or self.M < 2):
            raise ParameterError("mimo requires K=3, M>=2")
        if self.family == "designed" and self.K < 2:
            raise ParameterError("designed requires K>=2")

    @property
    def claimed_dof(self) -> Fraction:
        """Sum degrees of freedom the family is designed to achieve."""
        if self.family == "siso-k3":
            return Fraction(3 * self.n + 1, 2 * self.n + 1)
        if self.family == "siso-general":
            big_n = (self.K - 1) * (self.K - 2) - 1
            length = (self.n + 1) ** big_n + self.n ** big_n
            return Fraction((self.n + 1) ** big_n + (self.K - 1) * self.n ** big_n,
                            length)
        if self.family == "mimo":
            return Fraction(3 * self.M, 2)
        return Fraction(self.K, 2)

    def build(self, seed: int):
        """Build (scheme, extended channel) for one realization."""
        if self.family == "siso-k3":
            length = 2 * self.n + 1
            ch = generate_channels(3, 1, length, self.a_min, self.a_max, seed)
            ext = extend_channel(ch, length)
            return build_precoders_k3(ext, self.n), ext
        if self.family == "siso-general":
            length = guarded_extension_general(self.K, self.n, self.size_cap)
            ch = generate_channels(self.K, 1, length, self.a_min, self.a_max, seed)
            ext = extend_channel(ch, length)
            return build_precoders_general(ext, self.n, size_cap=self.size_cap), ext
        if self.family == "mimo":
            ch = generate_channels(3, self.M, 1, self.a_min, self.a_max, seed)
            scheme = build_mimo_even(ch) if self.M % 2 == 0 else build_mimo_odd(ch)
            return scheme, mimo_extension(ch, scheme)
        ext, scheme = build_designed_channel(self.K)
        return scheme, ext


@dataclass(frozen=True)
class RateRecord:
    snr_db: float
    seed: int
    rates: tuple  # None when the trial failed
    status: str  # "ok" | "failed"

    @property
    def sum_rate(self) -> float:
        return float(sum(self.rates)) if self.rates is not None else math.nan


@dataclass(frozen=True)
class RateTable:
    """Per-SNR, per-trial zero-forcing rates of one scheme family."""

    K: int
    snr_db: tuple
    records: tuple

    def ok_records(self, snr_db: float = None):
        return [r for r in self.records if r.status == "ok"
                and (snr_db is None or r.snr_db == snr_db)]

    def failures(self):
        return [r for r in self.records if r.status != "ok"]

    def mean_sum_rates(self) -> np.ndarray:
        """Mean sum rate per grid point over successful trials (nan if none)."""
        out = np.full(len(self.snr_db), np.nan)
        for i, s in enumerate(self.snr_db):
            ok = self.ok_records(s)
            if ok:
                out[i] = float(np.mean([r.sum_rate for r in ok]))
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["snr_db", "seed", "user", "rate_bits",
                             "sum_rate_bits", "status"])
            for rec in self.records:
                for user in range(self.K):
                    rate = rec.rates[user] if rec.rates is not None else math.nan
                    writer.writerow([rec.snr_db, rec.seed, user + 1,
                                     repr(float(rate)), repr(rec.sum_rate),
                                     rec.status])


def _trial_seed(root_seed: int, trial: int) -> int:
    ss = np.random.SeedSequence(root_seed, spawn_key=(trial,))
    return int(ss.generate_state(1, np.uint64)[0])


def snr_sweep(config: SchemeConfig, snr_db, trials: int, seed: int,
              threads: int = 1) -> RateTable:
    """Evaluate a scheme family over an SNR grid with fresh channels per trial.

    The channel seed of each trial is derived from ``seed`` and the trial
    index only, so one realization spans the whole grid. ``threads`` > 1
    runs trials concurrently; results are identical either way.
    """
    grid = tuple(float(s) for s in snr_db)
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ParameterError("snr grid must be nonempty and strictly increasing")
    if trials < 1:
        raise ParameterError(f"need at least one trial, got {trials}")

    def run_trial(trial: int):
        tseed = _trial_seed(seed, trial)
        try:
            scheme, ext = config.build(tseed)
            report = check_alignment(scheme, ext)
            if not report.passed:
                raise AlignmentError("alignment checks failed")
            out = []
            for snr in grid:
                rho = 10.0 ** (snr / 10.0)
                result = zf_rates(scheme, ext, rho, report=report)
                out.append(RateRecord(snr, tseed, tuple(result.rates), "ok"))
            return out
        except (AlignmentError, DegeneracyError, SingularChannelError):
            return [RateRecord(snr, tseed, None, "failed") for snr in grid]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_trial = list(pool.map(run_trial, range(trials)))
    else:
        per_trial = [run_trial(t) for t in range(trials)]
    records = tuple(rec for rows in per_trial for rec in rows)
    return RateTable(K=config.K, snr_db=grid, records=records)


@dataclass(frozen=True)
class DofEstimate:
    slope: float
    half_width: float
    snr_db: tuple
    trials_used: int


MIN_FIT_SNR_DB = 40.0


def estimate_dof(table: RateTable) -> DofEstimate:
    """Least-squares slope of mean sum rate against log2(rho).

    Only grid points at 40 dB or above enter the fit (lower points bias the
    slope through their constant terms); at least two such points with
    successful trials are required. The half-width is a normal 95% interval
    from the spread of per-trial slopes.
    """
    usable = [s for s in table.snr_db
              if s >= MIN_FIT_SNR_DB and table.ok_records(s)]
    if len(usable) < 2:
        raise InsufficientDataError(
            "need at least two SNR points at >= 40 dB with successful trials")
    x = np.array([s / 10.0 * math.log2(10.0) for s in usable])

    means = np.array([np.mean([r.sum_rate for r in table.ok_records(s)])
                      for s in usable])
    slope = float(np.polyfit(x, means, 1)[0])

    by_seed = {}
    for s in usable:
        for rec in table.ok_records(s):
            by_seed.setdefault(rec.seed, {})[s] = rec.sum_rate
    trial_slopes = [np.polyfit(x, [rows[s] for s in usable], 1)[0]
                    for rows in by_seed.values() if len(rows) == len(usable)]
    if len(trial_slopes) > 1:
        half = 1.96 * float(np.std(trial_slopes, ddof=1)) / math.sqrt(len(trial_slopes))
    else:
        half = 0.0
    return DofEstimate(slope=slope, half_width=half, snr_db=tuple(usable),
                       trials_used=len(trial_slopes))


@dataclass(frozen=True)
class GapProbe:
    claimed_dof: float
    snr_db: tuple
    gaps: tuple
    oscillation: float


def estimate_o1_gap(table: RateTable, claimed_dof: float) -> GapProbe:
    """Gap of the mean sum rate to claimed_dof * log2(1 + rho) over the grid.

    A bounded oscillation (max minus min of the gap) over a wide grid is
    evidence that the rate curve differs from the claimed line by a
    constant; growing oscillation is evidence against.
    """
    if table.snr_db[-1] - table.snr_db[0] < MIN_FIT_SNR_DB - 1e-9:
        raise ParameterError("gap probing needs a grid spanning at least 40 dB")
    usable = [s for s in table.snr_db if table.ok_records(s)]
    gaps = []
    for s in usable:
        rho = 10.0 ** (s / 10.0)
        mean = float(np.mean([r.sum_rate for r in table.ok_records(s)]))
        gaps.append(mean - float(claimed_dof) * math.log2(1.0 + rho))
    return GapProbe(claimed_dof=float(claimed_dof), snr_db=tuple(usable),
                    gaps=tuple(gaps), oscillation=float(max(gaps) - min(gaps)))


# corners of the three-user degrees-of-freedom region: one user alone (three
# ways), the symmetric alignment point, and silence
REGION_CORNERS = np.array([
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
    [0.5, 0.5, 0.5],
    [0.0, 0.0, 0.0],
])

_REGION_TOL = 1e-12


def in_dof_region(point, tol: float = _REGION_TOL) -> bool:
    """Membership in the region: nonnegative with all pairwise sums <= 1."""
    d = np.asarray(point, dtype=float)
    if d.shape != (3,):
        raise ParameterError("a degrees-of-freedom point has exactly 3 components")
    pair_ok = all(d[i] + d[j] <= 1.0 + tol for i in range(3) for j in range(i + 1, 3))
    return bool(np.all(d >= -tol) and pair_ok)


def decompose_dof_point(point) -> np.ndarray:
    """Convex weights over the five region corners reconstructing ``point``.

    For total s = d1+d2+d3 <= 1 the single-user corners take the
    coordinates themselves and silence absorbs 1-s. For s > 1 the symmetric
    corner takes 2(s-1) and single-user corner i takes 1-d_j-d_k, which is
    nonnegative exactly because the pairwise sums stay below one. Weights
    are nonnegative, sum to one, and reconstruct the point exactly.
    """
    d = np.asarray(point, dtype=float)
    if not in_dof_region(d):
        raise RegionMembershipError(
            f"point {tuple(d)} violates the pairwise-sum constraints")
    total = float(d.sum())
    if total <= 1.0:
        weights = np.array([d[0], d[1], d[2], 0.0, 1.0 - total])
    else:
        weights = np.array([
            1.0 - d[1] - d[2],
            1.0 - d[0] - d[2],
            1.0 - d[0] - d[1],
            2.0 * (total - 1.0),
            0.0,
        ])
    return weights


def sample_dof_region(count: int, seed: int = 0) -> np.ndarray:
    """Uniform samples from the region by rejection from the unit cube."""
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    out = np.empty((count, 3))
    have = 0
    while have < count:
        batch = rng.uniform(0.0, 1.0, size=(4 * (count - have) + 8, 3))
        sums = batch @ np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]]).T
        keep = batch[np.all(sums <= 1.0, axis=1)]
        take = min(count - have, keep.shape[0])
        out[have:have + take] = keep[:take]
        have += take
    return out


class CognitiveScenario(IntEnum):
    """Message-sharing scenarios on the three-user channel."""

    ONE_MESSAGE_SHARED = 1       # one message at every other node
    TWO_MESSAGES_SHARED = 2      # two messages at every other node
    COGNITIVE_RECEIVER = 3       # one receiver knows all other messages
    COGNITIVE_TRANSMITTER = 4    # one transmitter knows all other messages

_COGNITIVE_DOF = {
    CognitiveScenario.ONE_MESSAGE_SHARED: Fraction(3, 2),
    CognitiveScenario.TWO_MESSAGES_SHARED: Fraction(2),
    CognitiveScenario.COGNITIVE_RECEIVER: Fraction(3, 2),
    CognitiveScenario.COGNITIVE_TRANSMITTER: Fraction(2),
}


def cognitive_dof(scenario) -> Fraction:
    """Total degrees of freedom under one cognitive-sharing scenario.

    Sharing a single message changes nothing (3/2); sharing two messages,
    or giving one transmitter full knowledge, reaches 2; a fully cognitive
    receiver stays at 3/2. A cognitive transmitter can cancel interference
    it knows about, a cognitive receiver without its own message cannot
    contribute, hence the asymmetry.
    """
    return _COGNITIVE_DOF[CognitiveScenario(scenario)]
