"""Primorial scan, threshold classification, and extreme-value checks.

The primorial N_k = 2*3*...*p_k overflows fixed-width integers near
k = 15, so everything here stays in the log domain: log N_k is the
theta prefix, and the ratios psi(N_k)/N_k = prod(1 + 1/p) and
N_k/phi(N_k) = prod(1 - 1/p)^(-1) live as exp of compensated log sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import expm1, log, log1p
from typing import Iterator

import numpy as np

from .arith import psi_table
from .constants import get_constant
from .sieve import SieveTables
from .summation import compensated_cumsum

__all__ = [
    "PrimorialRecord",
    "ClassRecord",
    "Label",
    "primorial_stream",
    "verify_theorem1",
    "jump_delta",
    "psi_ratio_extremes",
    "classify_range",
    "loglog_gap",
    "distribution_tail",
    "gap_exponent_check",
]

_THRESHOLD = get_constant("threshold").value
_GAP_ALPHA = get_constant("gap_alpha").value


@dataclass(frozen=True)
class PrimorialRecord:
    """Log-domain state of the k-th primorial."""

    k: int
    p_k: int
    log_N: float          # theta(p_k)
    psi_ratio: float      # prod_{p <= p_k} (1 + 1/p)
    inv_phi_ratio: float  # prod_{p <= p_k} (1 - 1/p)^(-1)
    loglog_N: float
    threshold: float      # (6 e^gamma / pi^2) * loglog_N
    margin: float         # psi_ratio - threshold


class Label(Enum):
    ABOVE = "ABOVE"
    BELOW = "BELOW"


@dataclass(frozen=True)
class ClassRecord:
    n: int
    psi_over_n: float
    threshold: float
    label: Label


def _primorial_arrays(p_limit: int, tables: SieveTables) -> dict[str, np.ndarray]:
    """Vectorized per-k columns for all primes p_k <= p_limit."""
    if p_limit > tables.limit:
        raise ValueError(
            f"p_limit {p_limit} beyond table limit {tables.limit}")
    count = int(np.searchsorted(tables.primes, p_limit, side="right"))
    if count == 0:
        raise ValueError(f"no primes <= {p_limit}")
    ps = tables.primes[:count].astype(np.float64)
    log_n = tables.theta_prefix[:count]
    psi_ratio = np.exp(compensated_cumsum(np.log1p(1.0 / ps)))
    inv_phi = np.exp(compensated_cumsum(-np.log1p(-1.0 / ps)))
    loglog_n = np.log(log_n)
    threshold = _THRESHOLD * loglog_n
    return {
        "p": tables.primes[:count],
        "log_N": log_n,
        "psi_ratio": psi_ratio,
        "inv_phi_ratio": inv_phi,
        "loglog_N": loglog_n,
        "threshold": threshold,
        "margin": psi_ratio - threshold,
    }


def primorial_stream(p_limit: int,
                     tables: SieveTables) -> Iterator[PrimorialRecord]:
    """Yield one record per prime p_k <= p_limit, k ascending from 1."""
    cols = _primorial_arrays(p_limit, tables)
    for i in range(len(cols["p"])):
        yield PrimorialRecord(
            k=i + 1,
            p_k=int(cols["p"][i]),
            log_N=float(cols["log_N"][i]),
            psi_ratio=float(cols["psi_ratio"][i]),
            inv_phi_ratio=float(cols["inv_phi_ratio"][i]),
            loglog_N=float(cols["loglog_N"][i]),
            threshold=float(cols["threshold"][i]),
            margin=float(cols["margin"][i]),
        )


def verify_theorem1(p_limit: int,
                    tables: SieveTables) -> tuple[bool, float, int]:
    """Scan every primorial with p_k <= p_limit for a positive margin.

    Checks psi(N_k)/N_k > (6 e^gamma / pi^2) log log N_k at each k and
    locates the tightest point.

    Returns:
        (all_positive, min_margin, argmin_k) with k 1-based.
    """
    if p_limit < 2:
        raise ValueError(f"p_limit must be >= 2, got {p_limit}")
    margin = _primorial_arrays(p_limit, tables)["margin"]
    i = int(np.argmin(margin))
    return bool(np.all(margin > 0)), float(margin[i]), i + 1


def jump_delta(k: int, tables: SieveTables) -> float:
    """Increase of psi(N)/N from primorial k to k+1.

    Evaluates both readings and cross-checks them: the difference
    psi(N_{k+1})/N_{k+1} - psi(N_k)/N_k and the closed form
    (psi(N_k)/N_k) / p_{k+1}.  The difference is formed as
    ratio_k * expm1(log1p(1/p)) -- exact exponent increment -- because
    subtracting two separately rounded ratios would lose the jump in
    rounding noise once p_{k+1} is large.
    """
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k >= len(tables.primes):
        raise ValueError(
            f"k={k} needs prime {k + 1} beyond table limit {tables.limit}")
    ps = tables.primes[:k].astype(np.float64)
    ratio_k = float(np.exp(compensated_cumsum(np.log1p(1.0 / ps))[-1]))
    p_next = int(tables.primes[k])
    difference = ratio_k * expm1(log1p(1.0 / p_next))
    closed = ratio_k / p_next
    if abs(difference - closed) > 1e-12 * closed:
        raise FloatingPointError(
            f"jump forms disagree at k={k}: {difference} vs {closed}")
    return closed


def psi_ratio_extremes(
        x: int, tables: SieveTables) -> tuple[int, float, int, float]:
    """Brute-force argmax/argmin of psi(n)/n over 2 <= n <= x.

    Ties resolve to the smallest n (equal rationals round to identical
    floats, and argmax/argmin take the first hit).

    Returns:
        (max_n, max_ratio, min_n, min_ratio).
    """
    x = int(x)
    if not 2 <= x <= tables.limit:
        raise ValueError(f"x must be in [2, limit={tables.limit}], got {x}")
    psi = psi_table(x, tables)
    ns = np.arange(2, x + 1, dtype=np.float64)
    ratios = psi[2:] / ns
    hi = int(np.argmax(ratios))
    lo = int(np.argmin(ratios))
    return hi + 2, float(ratios[hi]), lo + 2, float(ratios[lo])


def _class_arrays(x: int, tables: SieveTables) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = int(x)
    if not 2 <= x <= tables.limit:
        raise ValueError(f"x must be in [2, limit={tables.limit}], got {x}")
    psi = psi_table(x, tables)
    ns = np.arange(2, x + 1)
    ratios = psi[2:] / ns.astype(np.float64)
    thresholds = _THRESHOLD * np.log(np.log(ns.astype(np.float64)))
    return ns, ratios, thresholds


def classify_range(
        x: int, tables: SieveTables
) -> tuple[int, int, Iterator[ClassRecord]]:
    """Split [2, x] by whether psi(n)/n exceeds its slow-growing threshold.

    Every n is labeled ABOVE when psi(n)/n > (6 e^gamma / pi^2)
    log log n, strictly; exact float equality lands BELOW.  n = 2
    starts the domain (log log is undefined at 1) and its negative
    threshold makes it ABOVE.

    Returns:
        (above_count, below_count, lazy stream of per-n records).
    """
    ns, ratios, thresholds = _class_arrays(x, tables)
    above_mask = ratios > thresholds
    above = int(np.count_nonzero(above_mask))
    below = len(ns) - above

    def records() -> Iterator[ClassRecord]:
        for i in range(len(ns)):
            yield ClassRecord(
                n=int(ns[i]),
                psi_over_n=float(ratios[i]),
                threshold=float(thresholds[i]),
                label=Label.ABOVE if above_mask[i] else Label.BELOW,
            )

    return above, below, records()


def loglog_gap(k: int, tables: SieveTables) -> float:
    """log log p_k - log log log N_k for the k-th primorial.

    Defined for k >= 2 only: at k = 1, log N_1 = log 2 < 1 makes the
    innermost logarithm negative.
    """
    k = int(k)
    if k < 2:
        raise ValueError(f"k must be >= 2 (inner log undefined), got {k}")
    if k > len(tables.primes):
        raise ValueError(
            f"k={k} beyond the {len(tables.primes)} primes in tables")
    p_k = int(tables.primes[k - 1])
    log_n = float(tables.theta_prefix[k - 1])
    return log(log(p_k)) - log(log(log_n))


def distribution_tail(x: int, t_grid, tables: SieveTables) -> list[tuple[float, float]]:
    """Fraction of n in [2, x] with psi(n)/n > t, for each t in t_grid.

    Strict inequality: an exact hit like psi(6)/6 = 2 at t = 2 is
    excluded.
    """
    t_list = [float(t) for t in t_grid]
    if not t_list:
        raise ValueError("t_grid must be nonempty")
    _, ratios, _ = _class_arrays(x, tables)
    count = len(ratios)
    return [(t, float(np.count_nonzero(ratios > t)) / count) for t in t_list]


def gap_exponent_check(p_limit: int,
                       tables: SieveTables) -> tuple[bool, int]:
    """Test p_{k+1} < p_k + p_k^0.526 over consecutive primes <= p_limit.

    The exponent bound is asymptotic, so small ranges contain honest
    violations (already at the pair 7, 11); the check reports them
    rather than masking them.

    Returns:
        (holds_everywhere, worst_k) where worst_k maximizes
        (p_{k+1} - p_k) / p_k^0.526.
    """
    if p_limit > tables.limit:
        raise ValueError(
            f"p_limit {p_limit} beyond table limit {tables.limit}")
    count = int(np.searchsorted(tables.primes, p_limit, side="right"))
    if count < 2:
        raise ValueError(f"need at least two primes <= {p_limit}")
    ps = tables.primes[:count].astype(np.float64)
    scores = (ps[1:] - ps[:-1]) / ps[:-1] ** _GAP_ALPHA
    worst = int(np.argmax(scores))
    return bool(scores[worst] < 1.0), worst + 1
