"""Indistinguishability experiments on transmitted and shared-key matrices.

For every trial a fresh ``(M, H)`` is generated and two matrices are drawn,
one for each side of the comparison:

``POWER_VS_RANDOM``
    first component of ``(M, phi_H)**n`` against an independent random
    augmentation-zero matrix ``N``.
``POWER_VS_SUMPOWER``
    first component of ``(M, phi_H)**n`` against the key an honest exchange
    with exponents ``a`` and ``b`` produces, i.e. ``(M, phi_H)**(a+b)``.
``CALIBRATION``
    two independent random matrices; the null case for the statistics.

In each of the nine matrix cells an element ``g`` of A5 *occurs* once per trial
when its coefficient is nonzero.  The resulting 9 x 60 frequency tables are
compared through quantiles of the distribution they define over the canonical
element order, and by a chi-square statistic.
"""

from __future__ import annotations

import csv
import enum
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from .algebra import DIM, ORDER, GRMatrix
from .paramgen import generate_params, sample_M
from .platforms import MatrixParams
from .semidirect import run_exchange, sd_pow

CELLS = DIM * DIM
MIN_EXPECTED = 5


class Mode(enum.Enum):
    POWER_VS_RANDOM = "power-vs-random"
    POWER_VS_SUMPOWER = "power-vs-sumpower"
    CALIBRATION = "calibration"


@dataclass(frozen=True)
class ExperimentConfig:
    trial_count: int = 100
    exponent_low: int = 10**10
    exponent_high: int = 10**13
    mode: Mode = Mode.POWER_VS_RANDOM
    seed: int = 0
    fixed_params: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.trial_count <= 0:
            raise ValueError("trial_count must be positive")
        if not 0 < self.exponent_low < self.exponent_high:
            raise ValueError("need 0 < exponent_low < exponent_high")


FULL_SCALE = dict(trial_count=500, exponent_low=10**44, exponent_high=10**55)


@dataclass
class FrequencyTable:
    """Per-cell occurrence counts.

    ``counts[c, g]`` is the number of trials in which element ``g`` has a
    nonzero coefficient in cell ``c = 3 * row + col``; ``weighted`` sums the
    coefficient values instead.
    """

    counts: np.ndarray
    weighted: np.ndarray
    trials: int

    @classmethod
    def empty(cls) -> "FrequencyTable":
        return cls(np.zeros((CELLS, ORDER), dtype=np.int64), np.zeros((CELLS, ORDER), dtype=np.int64), 0)

    @classmethod
    def from_matrices(cls, mats: list[GRMatrix]) -> "FrequencyTable":
        table = cls.empty()
        for X in mats:
            table.add(X)
        return table

    def add(self, X: GRMatrix):
        data = X.data.reshape(CELLS, ORDER)
        self.counts += data != 0
        self.weighted += data
        self.trials += 1

    def __eq__(self, other):
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        return (
            self.trials == other.trials
            and np.array_equal(self.counts, other.counts)
            and np.array_equal(self.weighted, other.weighted)
        )


def _trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"sdkx-stats:{seed}:{trial}")


def trial_pair(config: ExperimentConfig, trial: int, params: MatrixParams | None = None) -> tuple[GRMatrix, GRMatrix]:
    """The two matrices contributed by one trial."""
    rng = _trial_rng(config.seed, trial)
    if params is None:
        params = generate_params(rng)
    lo, hi = config.exponent_low, config.exponent_high

    def draw() -> int:
        return rng.randrange(lo, hi + 1)

    if config.mode is Mode.CALIBRATION:
        return sample_M(rng), sample_M(rng)
    n = draw()
    power = sd_pow(params.M, params, n)
    if config.mode is Mode.POWER_VS_RANDOM:
        return power, sample_M(rng)
    a, b = draw(), draw()
    key_a, key_b = run_exchange(params.M, params, a, b)
    if key_a != key_b:
        raise RuntimeError("key agreement failed inside experiment")
    return power, key_a


def _trial_job(args):
    config, trial, params = args
    return trial_pair(config, trial, params)


def run_experiment(config: ExperimentConfig) -> tuple[FrequencyTable, FrequencyTable]:
    """Run all trials; the output depends only on ``config`` (not on ``workers``)."""
    params = generate_params(random.Random(f"sdkx-stats:{config.seed}:params")) if config.fixed_params else None
    jobs = [(config, i, params) for i in range(config.trial_count)]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            pairs = list(pool.map(_trial_job, jobs))
    else:
        pairs = [_trial_job(j) for j in jobs]
    table_a, table_b = FrequencyTable.empty(), FrequencyTable.empty()
    for x, y in pairs:
        table_a.add(x)
        table_b.add(y)
    return table_a, table_b


def frequency_quantiles(counts: np.ndarray, buckets: int = ORDER) -> np.ndarray:
    """Quantiles at ``k / (buckets + 1)``, ``k = 1..buckets``, of the distribution
    over element positions that ``counts`` defines.

    Bucket ``j`` spreads its mass uniformly over ``[j, j + 1)`` so the CDF is
    piecewise linear.  An all-zero row has every quantile at 0.
    """
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total == 0:
        return np.zeros(buckets)
    cum = np.cumsum(counts)
    targets = np.arange(1, buckets + 1) / (buckets + 1) * total
    j = np.searchsorted(cum, targets, side="left")
    before = np.where(j > 0, cum[j - 1], 0.0)
    return j + (targets - before) / counts[j]


def qq_data(table_a: FrequencyTable, table_b: FrequencyTable) -> list[np.ndarray]:
    """Nine ``(60, 2)`` arrays of paired quantiles, one per matrix cell."""
    if table_a.trials != table_b.trials:
        raise ValueError("tables aggregate different trial counts")
    return [
        np.column_stack([frequency_quantiles(table_a.counts[c]), frequency_quantiles(table_b.counts[c])])
        for c in range(CELLS)
    ]


def qq_fit(series: np.ndarray) -> tuple[float, float]:
    """Least-squares slope of B on A and the Pearson correlation of a Q-Q series."""
    x, y = series[:, 0], series[:, 1]
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return float("nan"), float("nan")
    slope = np.polyfit(x, y, 1)[0]
    return float(slope), float(np.corrcoef(x, y)[0, 1])


@dataclass
class ChiSquareResult:
    per_cell: list[tuple[float, int]]
    statistic: float
    dof: int

    @property
    def p_value(self) -> float:
        return float(stats.chi2.sf(self.statistic, self.dof))

    def cell_p_values(self) -> list[float]:
        return [float(stats.chi2.sf(s, d)) for s, d in self.per_cell]

    def rejected(self, alpha: float = 0.01) -> bool:
        return self.p_value < alpha


def _pool(present: np.ndarray, trials: int) -> list[list[int]]:
    """Merge consecutive buckets until every group expects >= 5 present and
    >= 5 absent occurrences; a short remainder joins the last group."""
    groups, current = [], []
    for g in range(len(present)):
        current.append(g)
        exp_present = present[current].sum() / 2
        exp_absent = trials * len(current) - exp_present
        if exp_present >= MIN_EXPECTED and exp_absent >= MIN_EXPECTED:
            groups.append(current)
            current = []
    if current:
        if not groups:
            raise ValueError("frequency table too sparse for a chi-square test")
        groups[-1].extend(current)
    return groups


def chi_square_distance(table_a: FrequencyTable, table_b: FrequencyTable) -> ChiSquareResult:
    """Two-sample chi-square on the occurrence counts.

    Each bucket is a 2x2 table (occurs / does not occur, by side) over
    ``trials`` draws per side; a cell contributes the sum over its (pooled)
    buckets with one degree of freedom each.  The aggregate sums all cells.
    """
    if table_a.trials != table_b.trials:
        raise ValueError("tables aggregate different trial counts")
    trials = table_a.trials
    if trials == 0:
        raise ValueError("empty frequency tables")
    per_cell = []
    for c in range(CELLS):
        a, b = table_a.counts[c], table_b.counts[c]
        stat = 0.0
        groups = _pool(a + b, trials)
        for grp in groups:
            n = trials * len(grp)
            oa, ob = a[grp].sum(), b[grp].sum()
            observed = np.array([[oa, n - oa], [ob, n - ob]], dtype=np.float64)
            expected = observed.sum(axis=0, keepdims=True) / 2
            with np.errstate(invalid="ignore", divide="ignore"):
                terms = np.where(expected > 0, (observed - expected) ** 2 / expected, 0.0)
            stat += terms.sum()
        per_cell.append((float(stat), len(groups)))
    return ChiSquareResult(per_cell, sum(s for s, _ in per_cell), sum(d for _, d in per_cell))


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def frequency_csv(table_a: FrequencyTable, table_b: FrequencyTable, weighted: bool = False) -> str:
    a = table_a.weighted if weighted else table_a.counts
    b = table_b.weighted if weighted else table_b.counts
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["cell_row", "cell_col", "element_index", "count_A", "count_B"])
    for c in range(CELLS):
        for g in range(ORDER):
            w.writerow([c // DIM, c % DIM, g, int(a[c, g]), int(b[c, g])])
    return out.getvalue()


def qq_csv(series: list[np.ndarray]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["cell_row", "cell_col", "quantile_A", "quantile_B"])
    for c, s in enumerate(series):
        for qa, qb in s:
            w.writerow([c // DIM, c % DIM, _fmt(qa), _fmt(qb)])
    return out.getvalue()


def summary_csv(series: list[np.ndarray], chi: ChiSquareResult) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["cell_row", "cell_col", "qq_slope", "qq_correlation", "chi2", "dof", "p_value"])
    for c, (s, (stat, dof), p) in enumerate(zip(series, chi.per_cell, chi.cell_p_values())):
        slope, corr = qq_fit(s)
        w.writerow([c // DIM, c % DIM, _fmt(slope), _fmt(corr), _fmt(stat), dof, _fmt(p)])
    w.writerow(["all", "all", "", "", _fmt(chi.statistic), chi.dof, _fmt(chi.p_value)])
    return out.getvalue()


def write_experiment(out_dir: str | Path, config: ExperimentConfig, tables=None) -> dict[str, Path]:
    """Run (unless ``tables`` is given) and write the four CSV files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_a, table_b = tables if tables is not None else run_experiment(config)
    series = qq_data(table_a, table_b)
    chi = chi_square_distance(table_a, table_b)
    prefix = config.mode.value
    files = {
        "freq": (frequency_csv(table_a, table_b), f"{prefix}_freq.csv"),
        "freq_weighted": (frequency_csv(table_a, table_b, weighted=True), f"{prefix}_freq_weighted.csv"),
        "qq": (qq_csv(series), f"{prefix}_qq.csv"),
        "summary": (summary_csv(series, chi), f"{prefix}_summary.csv"),
    }
    paths = {}
    for key, (text, name) in files.items():
        path = out_dir / name
        path.write_text(text)
        paths[key] = path
    return paths
