"""Monte Carlo experiment runners and goodness-of-fit machinery.

Each ``run_*`` function samples uniform non-crossing partitions, compares
observed statistics against references from the exact module (labeled
"exact") or the limit laws (labeled "asymptotic"), and returns a
reproducible ExperimentReport.  Declared tolerances live in
``tolerances.json``, not in code.

Parallelism: sample index i is always drawn from Philox stream
i // SAMPLES_PER_STREAM, so reports are bit-identical for any thread
count; threads only split the work units.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Iterable, Mapping

import numpy as np

from . import exact, limitlaws, statistics
from .sampling import SAMPLES_PER_STREAM, RngState, sample_dyck_steps, sample_nc_partition

_CHUNK_ELEMENT_BUDGET = 1 << 23


def load_tolerances() -> dict:
    """Per-experiment parameters and thresholds from the config file."""
    text = resources.files(__package__).joinpath("tolerances.json").read_text()
    return json.loads(text)


_CONFIG = load_tolerances()


@dataclass
class ExperimentReport:
    """Structured, reproducible record of one experiment."""

    experiment_id: str
    parameters: dict
    observed: dict
    reference: dict  # name -> {"value": ..., "provenance": "exact"|"asymptotic"}
    tolerances: dict
    checks: dict  # name -> bool
    passed: bool
    schema: int = 1

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(dataclasses.asdict(self), indent=indent, default=str)


def _reference(value, provenance: str) -> dict:
    if provenance not in ("exact", "asymptotic"):
        raise ValueError("provenance must be 'exact' or 'asymptotic'")
    return {"value": value, "provenance": provenance}


def ks_distance(samples: Iterable[float], cdf: Callable[[float], float]) -> float:
    """Kolmogorov-Smirnov distance between a sample and a reference CDF.

    Uses both one-sided gaps at every sample point, so ties (lattice data)
    are handled correctly.
    """
    arr = samples if isinstance(samples, np.ndarray) else np.asarray(list(samples))
    arr = np.sort(arr.astype(float))
    if arr.size == 0:
        raise ValueError("need at least one sample")
    values, counts = np.unique(arr, return_counts=True)
    cum = np.cumsum(counts)
    ref = np.array([cdf(float(v)) for v in values])
    size = arr.size
    upper = float(np.max(cum / size - ref))
    lower = float(np.max(ref - (cum - counts) / size))
    return max(upper, lower, 0.0)


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF by bisection (ample for thresholds)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be strictly inside (0, 1)")
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if limitlaws.std_normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def chi_square_statistic(counts: Iterable[float], expected: Iterable[float]) -> float:
    c = np.asarray(list(counts), dtype=float)
    e = np.asarray(list(expected), dtype=float)
    if c.shape != e.shape or np.any(e <= 0):
        raise ValueError("counts and positive expectations must align")
    return float(np.sum((c - e) ** 2 / e))


def chi_square_critical(df: int, significance: float) -> float:
    """Upper chi-square quantile via the Wilson-Hilferty cube approximation."""
    if df < 1:
        raise ValueError("df must be >= 1")
    z = normal_quantile(1.0 - significance)
    t = 1.0 - 2.0 / (9.0 * df) + z * math.sqrt(2.0 / (9.0 * df))
    return df * t**3


# ---------------------------------------------------------------------------
# sampling loop


def map_sample_statistics(
    n: int,
    samples: int,
    seed: int,
    kernels: Mapping[str, Callable[[np.ndarray], np.ndarray]],
    threads: int = 1,
) -> dict[str, np.ndarray]:
    """Draw ``samples`` paths and apply every kernel, streaming in chunks.

    Work units of SAMPLES_PER_STREAM samples each use their own Philox
    stream; units are merged in index order, so output does not depend on
    ``threads``.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rows_cap = max(8, min(256, _CHUNK_ELEMENT_BUDGET // (2 * n + 1)))
    units = []
    start = 0
    while start < samples:
        count = min(SAMPLES_PER_STREAM, samples - start)
        units.append((len(units), count))
        start += count

    def run_unit(unit: tuple[int, int]) -> dict[str, list[np.ndarray]]:
        index, count = unit
        gen = RngState(seed, index).generator()
        parts: dict[str, list[np.ndarray]] = {name: [] for name in kernels}
        remaining = count
        while remaining > 0:
            rows = min(rows_cap, remaining)
            steps = sample_dyck_steps(n, rows, gen)
            for name, kernel in kernels.items():
                parts[name].append(np.asarray(kernel(steps)))
            remaining -= rows
        return parts

    if threads > 1 and len(units) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_unit, units))
    else:
        results = [run_unit(u) for u in units]
    return {
        name: np.concatenate([chunk for res in results for chunk in res[name]])
        for name in kernels
    }


# ---------------------------------------------------------------------------
# experiments


def run_clt_blocks(
    n: int,
    samples: int,
    seed: int,
    *,
    threads: int = 1,
    ks_max: float | None = None,
    mean_sigma_band: float | None = None,
    var_rel_tol: float | None = None,
) -> ExperimentReport:
    """Normalized block count against the standard Gaussian."""
    cfg = _CONFIG["clt_blocks"]
    ks_max = cfg["ks_max"] if ks_max is None else ks_max
    mean_sigma_band = cfg["mean_sigma_band"] if mean_sigma_band is None else mean_sigma_band
    var_rel_tol = cfg["var_rel_tol"] if var_rel_tol is None else var_rel_tol
    if n < 2:
        raise ValueError("n must be >= 2")
    counts = map_sample_statistics(
        n, samples, seed, {"blocks": statistics.batch_num_blocks}, threads
    )["blocks"]
    mean_ref = float(exact.mean_blocks(n))
    var_ref = float(exact.var_blocks_total(n))
    z = (counts - mean_ref) / math.sqrt(var_ref)
    ks = ks_distance(z, limitlaws.std_normal_cdf)
    sample_mean = float(counts.mean())
    sample_var = float(counts.var(ddof=1))
    mean_band = mean_sigma_band * math.sqrt(var_ref / samples)
    checks = {
        "ks_below_threshold": ks < ks_max,
        "mean_within_band": abs(sample_mean - mean_ref) < mean_band,
        "variance_within_relative_tolerance": abs(sample_var - var_ref)
        < var_rel_tol * var_ref,
    }
    return ExperimentReport(
        experiment_id="clt-blocks",
        parameters={"n": n, "samples": samples, "seed": seed},
        observed={
            "ks_distance": ks,
            "sample_mean": sample_mean,
            "sample_variance": sample_var,
        },
        reference={
            "mean": _reference(mean_ref, "exact"),
            "variance": _reference(var_ref, "exact"),
        },
        tolerances={
            "ks_max": ks_max,
            "mean_band": mean_band,
            "var_rel_tol": var_rel_tol,
        },
        checks=checks,
        passed=all(checks.values()),
    )


def run_clt_blocks_of_size(
    n: int,
    l: int,
    samples: int,
    seed: int,
    *,
    threads: int = 1,
    ks_max: float | None = None,
    mean_rel_tol: float | None = None,
) -> ExperimentReport:
    """Normalized count of size-l blocks against the standard Gaussian."""
    cfg = _CONFIG["clt_blocks_of_size"]
    ks_max = cfg["ks_max"] if ks_max is None else ks_max
    mean_rel_tol = cfg["mean_rel_tol"] if mean_rel_tol is None else mean_rel_tol
    if not 1 <= l < n:
        raise ValueError("need 1 <= l < n")
    counts = map_sample_statistics(
        n,
        samples,
        seed,
        {"size": lambda s: statistics.batch_count_blocks_of_size(s, l)},
        threads,
    )["size"]
    mean_ref = float(exact.mean_blocks_of_size(n, l))
    var_ref = float(exact.var_blocks_of_size(n, l))
    z = (counts - mean_ref) / math.sqrt(var_ref)
    ks = ks_distance(z, limitlaws.std_normal_cdf)
    sample_mean = float(counts.mean())
    geometric = 2.0 ** -(l + 1)
    checks = {
        "ks_below_threshold": ks < ks_max,
        "mean_per_element_near_geometric": abs(sample_mean / n - geometric)
        < mean_rel_tol * geometric,
    }
    return ExperimentReport(
        experiment_id=f"clt-size-{l}",
        parameters={"n": n, "l": l, "samples": samples, "seed": seed},
        observed={
            "ks_distance": ks,
            "sample_mean": sample_mean,
            "sample_mean_per_element": sample_mean / n,
        },
        reference={
            "mean": _reference(mean_ref, "exact"),
            "variance": _reference(var_ref, "exact"),
            "geometric_rate": _reference(geometric, "asymptotic"),
        },
        tolerances={"ks_max": ks_max, "mean_rel_tol": mean_rel_tol},
        checks=checks,
        passed=all(checks.values()),
    )


def run_geometric_profile(
    n: int,
    samples: int,
    seed: int,
    *,
    l_max: int | None = None,
    rel_tol: float | None = None,
    threads: int = 1,
) -> ExperimentReport:
    """Mean size-l counts per element against the geometric profile 2^-(l+1)."""
    cfg = _CONFIG["geometric_profile"]
    l_max = cfg["l_max"] if l_max is None else l_max
    rel_tol = cfg["rel_tol"] if rel_tol is None else rel_tol
    kernels = {
        f"size_{l}": (lambda ll: lambda s: statistics.batch_count_blocks_of_size(s, ll))(l)
        for l in range(1, l_max + 1)
    }
    stats = map_sample_statistics(n, samples, seed, kernels, threads)
    observed = {}
    reference = {}
    checks = {}
    for l in range(1, l_max + 1):
        per_element = float(stats[f"size_{l}"].mean()) / n
        target = 2.0 ** -(l + 1)
        observed[f"mean_per_element_size_{l}"] = per_element
        reference[f"geometric_size_{l}"] = _reference(target, "asymptotic")
        reference[f"exact_mean_size_{l}"] = _reference(
            float(exact.mean_blocks_of_size(n, l)) / n, "exact"
        )
        checks[f"size_{l}_within_tolerance"] = abs(per_element - target) < rel_tol * target
    return ExperimentReport(
        experiment_id="geometric-profile",
        parameters={"n": n, "samples": samples, "seed": seed, "l_max": l_max},
        observed=observed,
        reference=reference,
        tolerances={"rel_tol": rel_tol},
        checks=checks,
        passed=all(checks.values()),
    )


def run_negative_correlation(
    n: int,
    k: int,
    l: int,
    samples: int,
    seed: int,
    *,
    threads: int = 1,
    sigma_band: float | None = None,
) -> ExperimentReport:
    """Empirical covariance of two size counts against the exact value."""
    cfg = _CONFIG["negative_correlation"]
    sigma_band = cfg["sigma_band"] if sigma_band is None else sigma_band
    if k == l:
        raise ValueError("sizes must differ")
    stats = map_sample_statistics(
        n,
        samples,
        seed,
        {
            "first": lambda s: statistics.batch_count_blocks_of_size(s, k),
            "second": lambda s: statistics.batch_count_blocks_of_size(s, l),
        },
        threads,
    )
    a = stats["first"].astype(float)
    b = stats["second"].astype(float)
    da = a - a.mean()
    db = b - b.mean()
    emp_cov = float(np.dot(da, db) / (samples - 1))
    # plug-in standard error of the sample covariance
    second_moment = float(np.mean((da * db) ** 2))
    se = math.sqrt(max(second_moment - emp_cov**2, 0.0) / samples)
    exact_cov = float(exact.covariance(n, k, l))
    checks = {
        "exact_covariance_negative": exact_cov < 0,
        "empirical_covariance_negative": emp_cov < 0,
        "empirical_within_band": abs(emp_cov - exact_cov) < sigma_band * se,
    }
    return ExperimentReport(
        experiment_id=f"covariance-{k}-{l}",
        parameters={"n": n, "k": k, "l": l, "samples": samples, "seed": seed},
        observed={"empirical_covariance": emp_cov, "standard_error": se},
        reference={
            "covariance": _reference(exact_cov, "exact"),
            "leading_term": _reference(exact.asymptotic_cov(k, l, n), "asymptotic"),
        },
        tolerances={"sigma_band": sigma_band},
        checks=checks,
        passed=all(checks.values()),
    )


def _exact_largest_block_table(n: int, k_hi: int) -> dict[int, float]:
    """Exact CDF values P[largest <= k] for k = 1..k_hi, as floats."""
    counts = exact.bounded_block_counts(n, range(1, k_hi + 1))
    total = exact.catalan(n)
    return {k: float(Fraction(c, total)) for k, c in counts.items()}


def largest_block_exact_vs_approx(n: int, window: int | None = None) -> dict:
    """Max gap between the exact CDF and its double-exponential form.

    Scans k in floor(log2 n) +- window; the comparison bound
    10 (ln n)^2 / n tracks the approximation's stated error order.
    """
    cfg = _CONFIG["largest_block_gap"]
    window = cfg["window"] if window is None else window
    center = n.bit_length() - 1
    ks = [k for k in range(center - window, center + window + 1) if 1 <= k <= n]
    table = _exact_largest_block_table(n, max(ks))
    diffs = {
        k: abs(table[k] - limitlaws.largest_block_cdf_approx(n, k)) for k in ks
    }
    bound = 10.0 * math.log(n) ** 2 / n
    worst = max(diffs.values())
    return {
        "n": n,
        "ks": ks,
        "max_abs_diff": worst,
        "bound": bound,
        "within_bound": worst < bound,
        "per_k": diffs,
    }


def run_largest_block(
    n: int,
    samples: int,
    seed: int,
    *,
    threads: int = 1,
    epsilon: float | None = None,
    outside_max: float | None = None,
    tv_max: float | None = None,
    window: int | None = None,
) -> ExperimentReport:
    """Largest-block law: concentration, exact CDF fit, approximation gap."""
    cfg = _CONFIG["largest_block_tv"]
    epsilon = cfg["epsilon"] if epsilon is None else epsilon
    outside_max = cfg["outside_max"] if outside_max is None else outside_max
    tv_max = cfg["tv_max"] if tv_max is None else tv_max
    window = cfg["window"] if window is None else window
    if n < 4:
        raise ValueError("n must be >= 4")
    largest = map_sample_statistics(
        n, samples, seed, {"largest": statistics.batch_largest_block}, threads
    )["largest"]
    log2n = math.log2(n)
    outside = float(np.mean(np.abs(largest / log2n - 1.0) > epsilon))

    k_hi = min(n, (n.bit_length() - 1) + 30)
    cdf_exact = _exact_largest_block_table(n, k_hi)
    pmf_exact = {1: cdf_exact[1]}
    for k in range(2, k_hi + 1):
        pmf_exact[k] = cdf_exact[k] - cdf_exact[k - 1]
    tail_exact = 1.0 - cdf_exact[k_hi]
    hist = np.bincount(np.minimum(largest, k_hi + 1), minlength=k_hi + 2)
    tv = 0.5 * sum(
        abs(hist[k] / samples - pmf_exact[k]) for k in range(1, k_hi + 1)
    )
    tv += 0.5 * abs(hist[k_hi + 1] / samples - tail_exact)

    gap = largest_block_exact_vs_approx(n, window)
    checks = {
        "concentration_outside_below_budget": outside < outside_max,
        "total_variation_below_threshold": tv < tv_max,
        "approximation_within_error_order": gap["within_bound"],
    }
    return ExperimentReport(
        experiment_id="largest-block",
        parameters={
            "n": n,
            "samples": samples,
            "seed": seed,
            "epsilon": epsilon,
            "window": window,
        },
        observed={
            "fraction_outside_window": outside,
            "total_variation_vs_exact": tv,
            "exact_vs_approx_max_diff": gap["max_abs_diff"],
            "mean_largest": float(largest.mean()),
        },
        reference={
            "log2_n": _reference(log2n, "exact"),
            "approx_error_bound": _reference(gap["bound"], "asymptotic"),
        },
        tolerances={
            "outside_max": outside_max,
            "tv_max": tv_max,
            "gap_bound": gap["bound"],
        },
        checks=checks,
        passed=all(checks.values()),
    )


def run_width(
    n: int,
    samples: int,
    seed: int,
    *,
    threads: int = 1,
    grid: tuple[float, ...] | None = None,
    mean_rel_tol: float | None = None,
    tail_x: float | None = None,
    tail_abs_tol: float | None = None,
    second_moment_rel_tol: float | None = None,
) -> ExperimentReport:
    """Width statistics against the Theta law and its moments."""
    cfg = _CONFIG["width"]
    mean_rel_tol = cfg["mean_rel_tol"] if mean_rel_tol is None else mean_rel_tol
    tail_x = cfg["tail_x"] if tail_x is None else tail_x
    tail_abs_tol = cfg["tail_abs_tol"] if tail_abs_tol is None else tail_abs_tol
    second_moment_rel_tol = (
        cfg["second_moment_rel_tol"]
        if second_moment_rel_tol is None
        else second_moment_rel_tol
    )
    if grid is None:
        start, stop, step = cfg["grid_start"], cfg["grid_stop"], cfg["grid_step"]
        count = int(round((stop - start) / step)) + 1
        grid = tuple(start + i * step for i in range(count))
    if n < 16:
        raise ValueError("n must be >= 16")
    widths = map_sample_statistics(
        n, samples, seed, {"width": statistics.batch_width}, threads
    )["width"].astype(float)
    scale = math.sqrt(n) / 2.0
    mean_obs = float(widths.mean())
    m2_obs = float(np.mean(widths**2))
    mean_ref = limitlaws.mean_width_asymptotic(n)
    m2_ref = limitlaws.width_moment(2, n)
    tails_obs = {x: float(np.mean(widths >= x * scale)) for x in grid}
    tails_ref = {x: limitlaws.theta_tail(x) for x in grid}
    checks = {
        "mean_within_relative_tolerance": abs(mean_obs - mean_ref)
        < mean_rel_tol * mean_ref,
        "tail_at_reference_point": abs(tails_obs[tail_x] - tails_ref[tail_x])
        < tail_abs_tol,
        "second_moment_within_relative_tolerance": abs(m2_obs - m2_ref)
        < second_moment_rel_tol * m2_ref,
    }
    return ExperimentReport(
        experiment_id="width",
        parameters={"n": n, "samples": samples, "seed": seed, "grid": list(grid)},
        observed={
            "mean": mean_obs,
            "second_moment": m2_obs,
            "tails": {str(x): tails_obs[x] for x in grid},
        },
        reference={
            "mean": _reference(mean_ref, "asymptotic"),
            "second_moment": _reference(m2_ref, "asymptotic"),
            "tails": _reference({str(x): tails_ref[x] for x in grid}, "asymptotic"),
        },
        tolerances={
            "mean_rel_tol": mean_rel_tol,
            "tail_abs_tol": tail_abs_tol,
            "second_moment_rel_tol": second_moment_rel_tol,
        },
        checks=checks,
        passed=all(checks.values()),
    )


def export_width_process(n: int, seed: int) -> list[tuple[int, int]]:
    """One sampled partition's width profile, as (x, w_x) rows."""
    if n < 2:
        raise ValueError("n must be >= 2")
    pi = sample_nc_partition(n, RngState(seed, 0))
    profile = statistics.width_profile(pi)
    return [(x + 1, w) for x, w in enumerate(profile)]
