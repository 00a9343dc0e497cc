"""On-line prediction protocol and validity diagnostics.

``run_online`` drives a predictor over a stream one observation at a time:
regions for every significance level are computed strictly before the true
response is revealed, errors and widths go into an :class:`OnlineLedger`,
and the realized p-value at the true response goes into a
:class:`PValueTrace`.  The diagnostics below check the exact finite-sample
guarantees: smoothed p-values are IID uniform, smoothed errors are IID
Bernoulli(eps), and deterministic predictors are conservative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .ledger import OnlineLedger
from .linalg import NumericalError
from .randomness import RandomStream
from .residuals import FeatureSchedule
from .stream import Observation, check_stream
from .predictors import (
    GaussPredictor,
    IidGaussPredictor,
    IidPredictor,
    MvaPredictor,
    OnlinePredictor,
    WilksPredictor,
)

PREDICTOR_KINDS = ("iid", "gauss", "mva", "iid-gauss", "wilks")

# Two-sided 0.01-level critical value of a standard normal.
NORMAL_CRIT_01 = 2.5758293035489004


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run besides the data stream."""

    predictor: str
    epsilons: tuple[float, ...] = (0.05, 0.01, 0.005)
    smoothed: bool = True
    seed: int = 0
    mc_samples: int = 1000
    schedule: FeatureSchedule = FeatureSchedule()
    report_hull: bool = True

    def __post_init__(self):
        if self.predictor not in PREDICTOR_KINDS:
            raise ValueError(
                f"unknown predictor {self.predictor!r}; choose one of {PREDICTOR_KINDS}"
            )
        eps = tuple(float(e) for e in self.epsilons)
        if not eps:
            raise ValueError("need at least one significance level")
        if any(not 0.0 < e < 1.0 for e in eps):
            raise ValueError(f"significance levels must lie in (0, 1), got {eps}")
        if any(a <= b for a, b in zip(eps, eps[1:])):
            raise ValueError(f"significance levels must be strictly decreasing, got {eps}")
        if self.mc_samples < 1:
            raise ValueError(f"mc_samples must be at least 1, got {self.mc_samples}")
        object.__setattr__(self, "epsilons", eps)


@dataclass
class PValueTrace:
    """Realized p-value and tie-breaking draw at each step."""

    smoothed: bool
    pvalues: list[float] = field(default_factory=list)
    taus: list[float] = field(default_factory=list)

    def append(self, pvalue: float, tau: float) -> None:
        if not 0.0 <= pvalue <= 1.0:
            raise ValueError(f"p-value {pvalue} outside [0, 1]")
        self.pvalues.append(float(pvalue))
        self.taus.append(float(tau))

    def __len__(self) -> int:
        return len(self.pvalues)

    def pvalue_array(self) -> np.ndarray:
        return np.asarray(self.pvalues, dtype=float)

    def errors(self, eps: float) -> np.ndarray:
        """Raw-region error indicators: the region {y : p(y) > eps} missed
        the truth exactly when the realized p-value is <= eps."""
        return (self.pvalue_array() <= eps).astype(int)


def make_predictor(config: RunConfig) -> OnlinePredictor:
    if config.predictor == "iid":
        return IidPredictor(config.schedule)
    if config.predictor == "gauss":
        return GaussPredictor()
    if config.predictor == "mva":
        return MvaPredictor(config.schedule)
    if config.predictor == "iid-gauss":
        return IidGaussPredictor(
            config.schedule, RandomStream(config.seed, substream=1), config.mc_samples
        )
    return WilksPredictor()


def _tau_stream(config: RunConfig) -> RandomStream | None:
    return RandomStream(config.seed, substream=0) if config.smoothed else None


def run_online(config: RunConfig, stream) -> tuple[OnlineLedger, PValueTrace]:
    """Feed the stream through the configured predictor step by step."""
    stream = list(stream)
    check_stream(stream)
    predictor = make_predictor(config)
    taus = _tau_stream(config)
    ledger = OnlineLedger(config.epsilons)
    trace = PValueTrace(smoothed=config.smoothed)
    for n, obs in enumerate(stream, start=1):
        tau = taus.uniform() if taus is not None else 1.0
        try:
            ctx = predictor.begin_step(obs.x)
            errors, raw_errors, widths = {}, {}, {}
            for eps in config.epsilons:
                raw = predictor.raw_region(ctx, eps, tau)
                reported = raw.convex_hull() if config.report_hull else raw
                errors[eps] = 0 if reported.contains(obs.y) else 1
                raw_errors[eps] = 0 if raw.contains(obs.y) else 1
                widths[eps] = reported.length
            pvalue = predictor.pvalue(ctx, obs.y, tau)
            predictor.observe(obs)
        except (ValueError, ArithmeticError) as exc:
            raise type(exc)(f"step {n}: {exc}") from exc
        ledger.record_step(errors, raw_errors, widths)
        trace.append(pvalue, tau)
    return ledger, trace


def run_trace(config: RunConfig, stream) -> PValueTrace:
    """P-value trace only — skips region assembly for the test batteries.

    Raw-region errors are recoverable from the trace because membership in
    {y : p(y) > eps} is by definition the event p(truth) > eps.
    """
    stream = list(stream)
    check_stream(stream)
    predictor = make_predictor(config)
    taus = _tau_stream(config)
    trace = PValueTrace(smoothed=config.smoothed)
    for n, obs in enumerate(stream, start=1):
        tau = taus.uniform() if taus is not None else 1.0
        try:
            ctx = predictor.begin_step(obs.x)
            pvalue = predictor.pvalue(ctx, obs.y, tau)
            predictor.observe(obs)
        except (ValueError, ArithmeticError) as exc:
            raise type(exc)(f"step {n}: {exc}") from exc
        trace.append(pvalue, tau)
    return trace


@dataclass(frozen=True)
class UniformityReport:
    statistic: float
    pvalue: float
    level: float
    passed: bool


def uniformity_test(trace: PValueTrace, level: float = 0.01) -> UniformityReport:
    """One-sample Kolmogorov-Smirnov test of the p-value trace against U[0,1]."""
    if not trace.smoothed:
        raise ValueError(
            "uniformity requires a smoothed run: deterministic p-values are only super-uniform"
        )
    if len(trace) < 100:
        raise ValueError(f"need at least 100 steps for the uniformity test, got {len(trace)}")
    result = stats.kstest(trace.pvalue_array(), "uniform")
    return UniformityReport(
        statistic=float(result.statistic),
        pvalue=float(result.pvalue),
        level=level,
        passed=bool(result.pvalue > level),
    )


@dataclass(frozen=True)
class IndependenceReport:
    lag1: float
    lag1_critical: float
    runs_z: float
    runs_critical: float
    passed: bool
    degenerate: bool = False


def independence_test(values, level: float = 0.01) -> IndependenceReport:
    """Lag-1 autocorrelation plus a runs test on a binary or continuous sequence."""
    z = np.asarray(values, dtype=float)
    if z.ndim != 1 or z.size < 200:
        raise ValueError(f"need a 1-D sequence of at least 200 values, got shape {z.shape}")
    n = z.size
    crit = NORMAL_CRIT_01 / np.sqrt(n)
    centered = z - z.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        return IndependenceReport(0.0, crit, 0.0, NORMAL_CRIT_01, passed=True, degenerate=True)
    lag1 = float(centered[:-1] @ centered[1:]) / denom
    binary = z > np.median(z) if np.unique(z).size > 2 else z > z.min()
    n_hi = int(binary.sum())
    n_lo = n - n_hi
    if n_hi == 0 or n_lo == 0:
        return IndependenceReport(lag1, crit, 0.0, NORMAL_CRIT_01, passed=True, degenerate=True)
    runs = 1 + int(np.sum(binary[1:] != binary[:-1]))
    mean_runs = 1.0 + 2.0 * n_hi * n_lo / n
    var_runs = 2.0 * n_hi * n_lo * (2.0 * n_hi * n_lo - n) / (n * n * (n - 1.0))
    runs_z = (runs - mean_runs) / np.sqrt(var_runs) if var_runs > 0.0 else 0.0
    passed = abs(lag1) < crit and abs(runs_z) < NORMAL_CRIT_01
    return IndependenceReport(lag1, crit, float(runs_z), NORMAL_CRIT_01, passed=passed)


@dataclass(frozen=True)
class FrequencyReport:
    frequency: float
    errors: int
    trials: int
    lower: int
    upper: int
    passed: bool


def binomial_band(trials: int, eps: float, level: float = 0.01) -> tuple[int, int]:
    """Central (1 - level) band of error counts under Binomial(trials, eps)."""
    lower = int(stats.binom.ppf(level / 2.0, trials, eps))
    upper = int(stats.binom.ppf(1.0 - level / 2.0, trials, eps))
    return lower, upper


def error_frequency_check(
    ledger: OnlineLedger,
    eps: float,
    n: int | None = None,
    eligible_from: int = 1,
    use_raw: bool = False,
    level: float = 0.01,
) -> FrequencyReport:
    """Compare the realized error frequency with the exact binomial band.

    ``eligible_from`` restricts the count to steps where an error was
    actually possible (e.g. the first informative step of a model-based
    predictor); earlier steps predict the whole line and cannot err.
    """
    errs = ledger.raw_errors(eps) if use_raw else ledger.errors(eps)
    if n is None:
        n = len(errs)
    if not 1 <= n <= len(errs):
        raise ValueError(f"step {n} outside the recorded range 1..{len(errs)}")
    window = errs[eligible_from - 1 : n]
    count = int(sum(window))
    trials = len(window)
    lower, upper = binomial_band(trials, eps, level)
    return FrequencyReport(
        frequency=count / trials if trials else 0.0,
        errors=count,
        trials=trials,
        lower=lower,
        upper=upper,
        passed=lower <= count <= upper,
    )


def first_bounded_step(ledger, eps: float) -> int | None:
    """Smallest step whose reported region had finite length, if any.

    Accepts a live ledger or a deserialized table; both expose the query.
    """
    return ledger.first_bounded_step(eps)


def first_finite_median_step(ledger, eps: float) -> int | None:
    """Smallest step whose running median length was finite, if any.

    Accepts a live ledger or a deserialized table; both expose the query.
    """
    return ledger.first_finite_median_step(eps)
