"""
Summaries of anonymization sweeps
"""
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from ..experiments import SweepResults
from .plots import FLOAT_FORMAT, write_loglog_svg, write_svg_plot, write_trace_csv

logger = logging.getLogger(__name__)


def print_section_header(title: str, char: str = "="):
    """Print formatted section header"""
    print("\n" + char * 80)
    print(f" {title}")
    print(char * 80)


def summarize_sweep(results: SweepResults) -> pd.DataFrame:
    """
    Median anonymization time per (n, beta, scope)

    Columns: n, beta, scope, replicates, detected, median_t_hat, n2logn, ratio
    where ratio = median_t_hat / (n^2 log n).
    """
    frame = results.estimates_frame()
    if frame.empty:
        return pd.DataFrame(columns=['n', 'beta', 'scope', 'replicates', 'detected', 'median_t_hat', 'n2logn', 'ratio'])
    summary = frame.groupby(['n', 'beta', 'scope'], sort=True).agg(
        replicates=('t_hat', 'size'),
        detected=('t_hat', 'count'),
        median_t_hat=('t_hat', 'median'),
    ).reset_index()
    summary['n2logn'] = summary['n'].map(lambda n: n * n * math.log(n))
    summary['ratio'] = summary['median_t_hat'] / summary['n2logn']
    return summary


def fits_frame(results: SweepResults) -> pd.DataFrame:
    """Log-log slope per (beta, scope) wherever two or more n have a median"""
    rows = []
    scopes = sorted(set(results.estimates_frame()['scope']))
    for beta in results.config.betas:
        for scope in scopes:
            fit = results.fit(beta, scope)
            if fit is None:
                continue
            rows.append({'beta': beta, 'scope': scope, 'slope': fit.slope, 'intercept': fit.intercept})
    return pd.DataFrame(rows, columns=['beta', 'scope', 'slope', 'intercept'])


def community_order_rate(results: SweepResults, beta: float = 0.5) -> Dict[int, float]:
    """
    Per n, the share of replicates whose smallest community anonymizes strictly
    before the largest one (an undetected time counts as infinite)
    """
    rates: Dict[int, List[bool]] = {}
    for result in results.successful:
        if not result.community_sizes:
            continue
        sizes = np.asarray(result.community_sizes)
        smallest, largest = int(np.argmin(sizes)), int(np.argmax(sizes))
        small = result.t_hat(beta, smallest)
        large = result.t_hat(beta, largest)
        small = math.inf if small is None else small
        large = math.inf if large is None else large
        rates.setdefault(result.n, []).append(small < large)
    return {n: float(np.mean(flags)) for n, flags in sorted(rates.items())}


def write_sweep_outputs(results: SweepResults, out_dir: str, plots: bool = True) -> Path:
    """
    Write one trace CSV per (n, replicate), replicates.csv, summary.csv and fits.csv

    Args:
        results: completed sweep
        out_dir: output root; files go under out_dir/<experiment>/
        plots: also write trace and log-log SVGs

    Returns:
        Experiment output directory
    """
    root = Path(out_dir) / results.experiment
    root.mkdir(parents=True, exist_ok=True)

    for result in results.successful:
        stem = root / 'traces' / f"n{result.n}_rep{result.replicate}"
        write_trace_csv(result.trace, f"{stem}.csv")
        if plots:
            write_svg_plot(result.trace, f"{stem}.svg", title=f"{results.experiment}, n={result.n}")

    results.to_frame().to_csv(root / 'replicates.csv', index=False, float_format=FLOAT_FORMAT)
    summary = summarize_sweep(results)
    summary.to_csv(root / 'summary.csv', index=False, float_format=FLOAT_FORMAT)
    fits_frame(results).to_csv(root / 'fits.csv', index=False, float_format=FLOAT_FORMAT)

    if plots:
        for beta in results.config.betas:
            medians = results.median_t_hat(beta)
            points = [(n, t) for n, t in sorted(medians.items()) if np.isfinite(t) and t > 0]
            if points:
                write_loglog_svg(
                    points, results.fit(beta), str(root / f"loglog_beta{beta:g}.svg"),
                    label=f"{beta:g}-anonymization time"
                )

    logger.info(f"✅ Wrote {results.experiment} outputs to {root}")
    return root


def print_sweep_report(results: SweepResults, beta: Optional[float] = 0.5):
    """Print per-n medians, fitted slopes and failures"""
    print_section_header(f"SWEEP: {results.experiment}")
    print(f"Replicates: {len(results.replicates)} ({len(results.failed)} failed)")

    summary = summarize_sweep(results)
    global_rows = summary[summary['scope'] == 'global']
    if not global_rows.empty:
        print("\nMedian anonymization time (global):")
        print(global_rows[['n', 'beta', 'detected', 'replicates', 'median_t_hat', 'ratio']].to_string(index=False))

    fits = fits_frame(results)
    if not fits.empty:
        print("\nLog-log slopes:")
        print(fits.to_string(index=False))

    if beta is not None:
        order = community_order_rate(results, beta)
        if order:
            print(f"\nSmallest community anonymized first (beta={beta:g}):")
            for n, rate in order.items():
                print(f"   n={n}: {rate:.0%} of replicates")

    for result in results.failed:
        print(f"\n❌ n={result.n} replicate {result.replicate}: {result.error}")
