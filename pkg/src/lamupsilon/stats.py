"""Seeded random experiments over uniform terms.

Each sample index owns a derived random stream, so results are a pure
function of (size, sample count, seed): re-runs and different worker
counts produce bit-identical summaries.  Moments are accumulated as exact
integers and only divided at the end; the stored decimals are rounded to
12 significant digits, which also makes export/import round-trips exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .rewrite import count_all_redexes, has_nested_substitution, unsuspended_constructors
from .series import ParamKind, expected_param_exact, nested_free_fraction
from .trees import InvalidSize, Rng, sample_term

#: Extra experiment parameter: 0/1 indicator of a nested substitution.
NESTED = "nested"

ParamName = Union[ParamKind, str]


class InsufficientSamples(ValueError):
    """Unbiased variance needs at least two samples."""


#: Known limits of E(X_n)/n for each redex count (exact rationals).
LIMIT_MEAN_SLOPE = {
    ParamKind.BETA: Fraction(3, 64),
    ParamKind.APP: Fraction(1, 32),
    ParamKind.LAMBDA: Fraction(1, 32),
    ParamKind.VARSHIFT: Fraction(1, 64),
    ParamKind.FVAR: Fraction(3, 256),
    ParamKind.FVARLIFT: Fraction(1, 128),
    ParamKind.RVAR: Fraction(1, 256),
    ParamKind.RVARLIFT: Fraction(1, 384),
}

#: Known limits of V(X_n)/n for each redex count (exact rationals).
LIMIT_VARIANCE_SLOPE = {
    ParamKind.BETA: Fraction(153, 4096),
    ParamKind.APP: Fraction(45, 2048),
    ParamKind.LAMBDA: Fraction(53, 2048),
    ParamKind.VARSHIFT: Fraction(57, 4096),
    ParamKind.FVAR: Fraction(729, 65536),
    ParamKind.FVARLIFT: Fraction(241, 32768),
    ParamKind.RVAR: Fraction(249, 65536),
    ParamKind.RVARLIFT: Fraction(377, 147456),
}

#: Limit of the expected number of unsuspended constructors.
UNSUSPENDED_MEAN_LIMIT = Fraction(316, 3)


def round12(x: float) -> float:
    """Round to 12 significant digits (the printed precision)."""
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class SampleSummary:
    """Empirical statistics of one parameter at one size."""

    param: str
    size: int
    samples: int
    seed: int
    mean: float
    variance: float  # unbiased, divisor m - 1
    min: int
    max: int
    third_central_moment: float  # divisor m


@dataclass(frozen=True)
class Tolerance:
    """Acceptance band: absolute, relative, or k standard errors."""

    mode: str  # "abs" | "rel" | "se"
    value: float

    def __post_init__(self):
        if self.mode not in ("abs", "rel", "se"):
            raise ValueError(f"unknown tolerance mode {self.mode!r}")


@dataclass(frozen=True)
class ComparisonReport:
    observed: float
    reference: float
    abs_err: float
    rel_err: float
    standard_error: float
    tolerance_mode: str
    tolerance_value: float
    verdict: bool


def _param_name(param: ParamName) -> str:
    if isinstance(param, ParamKind):
        return param.value
    if param == NESTED:
        return NESTED
    return ParamKind(param).value  # raises on unknown names


def _evaluate(term, names: tuple[str, ...]) -> tuple[int, ...]:
    redexes = None
    values = []
    for name in names:
        if name == NESTED:
            values.append(1 if has_nested_substitution(term) else 0)
        elif name == ParamKind.UNSUSPENDED.value:
            values.append(unsuspended_constructors(term))
        else:
            if redexes is None:
                redexes = count_all_redexes(term)
            values.append(redexes[ParamKind(name).rule_kind])
    return tuple(values)


def _accumulate(n: int, seed: int, lo: int, hi: int, names: tuple[str, ...]):
    """Exact moment sums over sample indices [lo, hi)."""
    k = len(names)
    s1 = [0] * k
    s2 = [0] * k
    s3 = [0] * k
    mn = [None] * k
    mx = [None] * k
    for i in range(lo, hi):
        term = sample_term(n, Rng.derived(seed, i))
        for j, x in enumerate(_evaluate(term, names)):
            s1[j] += x
            s2[j] += x * x
            s3[j] += x * x * x
            if mn[j] is None or x < mn[j]:
                mn[j] = x
            if mx[j] is None or x > mx[j]:
                mx[j] = x
    return s1, s2, s3, mn, mx


def _worker_count(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("UPSILON_THREADS", "")
    if env.strip():
        count = int(env)
        if count < 1:
            raise ValueError("UPSILON_THREADS must be a positive integer")
        return count
    return 1


def run_experiment(
    n: int,
    m: int,
    seed: int,
    params: Iterable[ParamName],
    workers: Optional[int] = None,
) -> dict[str, SampleSummary]:
    """Sample m uniform size-n terms and summarize the given parameters.

    ``params`` may contain ParamKind values and the string ``"nested"``.
    Deterministic in (n, m, seed) regardless of ``workers`` (default: the
    UPSILON_THREADS environment variable, else serial).
    """
    if n < 1:
        raise InvalidSize("term size must be positive")
    if m < 2:
        raise InsufficientSamples("need at least two samples")
    names = tuple(dict.fromkeys(_param_name(p) for p in params))
    if not names:
        raise ValueError("no parameters requested")

    workers = _worker_count(workers)
    if workers == 1 or m < 4 * workers:
        parts = [_accumulate(n, seed, 0, m, names)]
    else:
        bounds = [m * w // workers for w in range(workers + 1)]
        jobs = [(n, seed, bounds[w], bounds[w + 1], names) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_accumulate_star, jobs))

    k = len(names)
    s1 = [sum(part[0][j] for part in parts) for j in range(k)]
    s2 = [sum(part[1][j] for part in parts) for j in range(k)]
    s3 = [sum(part[2][j] for part in parts) for j in range(k)]
    mn = [min(part[3][j] for part in parts) for j in range(k)]
    mx = [max(part[4][j] for part in parts) for j in range(k)]

    out: dict[str, SampleSummary] = {}
    for j, name in enumerate(names):
        mean = Fraction(s1[j], m)
        variance = (Fraction(s2[j]) - Fraction(s1[j] * s1[j], m)) / (m - 1)
        m3 = (Fraction(s3[j]) - 3 * mean * s2[j] + 2 * mean**2 * s1[j]) / m
        out[name] = SampleSummary(
            param=name,
            size=n,
            samples=m,
            seed=seed,
            mean=round12(float(mean)),
            variance=round12(float(variance)),
            min=mn[j],
            max=mx[j],
            third_central_moment=round12(float(m3)),
        )
    return out


def _accumulate_star(job):
    return _accumulate(*job)


def standard_error(summary: SampleSummary) -> float:
    """Standard error of the sample mean."""
    return math.sqrt(summary.variance / summary.samples)


def standardized_skewness(summary: SampleSummary) -> float:
    """Third central moment over variance^(3/2)."""
    if summary.variance == 0:
        return 0.0
    return summary.third_central_moment / summary.variance**1.5


def compare_to_reference(
    summary: SampleSummary, reference: float, tolerance: Tolerance
) -> ComparisonReport:
    """Check the empirical mean against a reference value."""
    observed = summary.mean
    abs_err = abs(observed - reference)
    rel_err = abs_err / abs(reference) if reference else math.inf
    se = standard_error(summary)
    if tolerance.mode == "abs":
        verdict = abs_err <= tolerance.value
    elif tolerance.mode == "rel":
        verdict = abs_err <= tolerance.value * abs(reference)
    else:
        verdict = abs_err <= tolerance.value * se
    return ComparisonReport(
        observed=observed,
        reference=round12(float(reference)),
        abs_err=round12(abs_err),
        rel_err=round12(rel_err) if rel_err != math.inf else math.inf,
        standard_error=round12(se),
        tolerance_mode=tolerance.mode,
        tolerance_value=tolerance.value,
        verdict=verdict,
    )


def default_comparisons(summary: SampleSummary) -> list[ComparisonReport]:
    """Reference checks for one summary: the exact finite-size expectation
    (3 standard errors) and, where known, the limiting constant."""
    reports = []
    name = summary.param
    n = summary.size
    if name == NESTED:
        exact = 1 - nested_free_fraction(n)
        reports.append(compare_to_reference(summary, float(exact), Tolerance("se", 3)))
        return reports
    param = ParamKind(name)
    exact = expected_param_exact(param, n)
    reports.append(compare_to_reference(summary, float(exact), Tolerance("se", 3)))
    if param is ParamKind.UNSUSPENDED:
        reports.append(
            compare_to_reference(summary, float(UNSUSPENDED_MEAN_LIMIT), Tolerance("rel", 0.05))
        )
    else:
        slope = LIMIT_MEAN_SLOPE[param]
        reports.append(
            compare_to_reference(summary, float(slope * n), Tolerance("rel", 0.03))
        )
    return reports


_CSV_HEADER = ("param", "n", "m", "seed", "mean", "variance", "min", "max", "m3")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def export_report(
    results: Sequence[SampleSummary],
    format: str = "csv",
    destination=None,
    comparisons: Optional[dict[str, list[ComparisonReport]]] = None,
) -> int:
    """Write summaries as CSV or JSON; returns the number of bytes written.

    ``destination`` is a path or a writable text file object.  JSON
    mirrors SampleSummary fields plus any comparisons; CSV uses the fixed
    schema ``param,n,m,seed,mean,variance,min,max,m3``.
    """
    results = list(results)
    if not results:
        raise ValueError("nothing to export")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for s in results:
            writer.writerow(
                (s.param, s.size, s.samples, s.seed, _fmt(s.mean), _fmt(s.variance),
                 s.min, s.max, _fmt(s.third_central_moment))
            )
        text = buf.getvalue()
    elif format == "json":
        rows = []
        for s in results:
            row = asdict(s)
            if comparisons and s.param in comparisons:
                row["comparisons"] = [asdict(c) for c in comparisons[s.param]]
            rows.append(row)
        text = json.dumps(rows, indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {format!r}")

    data = text.encode("utf-8")
    if destination is None:
        raise ValueError("a destination is required")
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8") as handle:
            handle.write(text)
    return len(data)


def import_summaries(text: str) -> list[SampleSummary]:
    """Parse summaries back from the JSON export format."""
    fields = set(SampleSummary.__dataclass_fields__)
    return [
        SampleSummary(**{k: v for k, v in row.items() if k in fields})
        for row in json.loads(text)
    ]
