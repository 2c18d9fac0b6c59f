"""Spark, mutual coherence, Welch bound, and restricted-isometry certification.

The guaranteed-unique sparsity limits derived here follow three routes:

* spark: a K-sparse solution is unique whenever ``K < spark/2``;
* coherence: unique whenever ``K < (1 + 1/mu) / 2`` (Gershgorin disc argument
  on the Gram matrix), which also yields ``spark >= 1 + 1/mu``;
* restricted isometry: unique whenever ``delta_{2K} < 1``, with the tighter
  thresholds ``sqrt(2) - 1`` and ``0.493`` guaranteeing that l1 minimization
  finds the same solution as l0 minimization.

Spark and the isometry constants are combinatorial: every K-column subset is
enumerated, so both operations take an evaluation budget and flag their result
as approximate (a lower bound) when the budget runs out before the sweep ends.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._linalg import dependent_mask, iter_combination_chunks
from .matrix_core import DegenerateColumnError, MeasurementMatrix, SupportSet, gram

# Default cap on submatrix evaluations per operation call.
DEFAULT_BUDGET = 20_000_000

# Two published thresholds on delta_{2K} for l0/l1 equivalence.
L1_THRESHOLD_SQRT2 = math.sqrt(2.0) - 1.0
L1_THRESHOLD_0493 = 0.493

# Normalized Gram magnitudes within this relative band of the maximum count as
# joint coherence maximizers; keeps the reported pair stable under BLAS noise.
_TIE_RTOL = 1e-12


class NormalizationError(ValueError):
    """The operation requires unit-norm columns."""


class SparkResult(NamedTuple):
    value: int | None  # None: no dependent column subset exists (full column rank)
    exact: bool
    evaluations: int


class CoherenceResult(NamedTuple):
    mu: float
    pair: tuple[int, int]
    ties: tuple[tuple[int, int], ...]


class RipResult(NamedTuple):
    delta: float
    exact: bool
    evaluations: int
    lambda_min: float
    lambda_max: float


def next_combination(c: SupportSet, n: int) -> SupportSet | None:
    """Lexicographic successor among k-combinations of range(n), or None after the last.

    The last k-combination is ``{n-k, ..., n-1}``.
    """
    idx = list(c.indices)
    k = len(idx)
    if k > n or (idx and idx[-1] >= n):
        raise ValueError(f"{idx} is not a valid {k}-combination of range({n})")
    i = k - 1
    while i >= 0 and idx[i] == n - k + i:
        i -= 1
    if i < 0:
        return None
    idx[i] += 1
    for j in range(i + 1, k):
        idx[j] = idx[j - 1] + 1
    return SupportSet(tuple(idx))


def spark(a: MeasurementMatrix, budget: int = DEFAULT_BUDGET, *, chunk: int = 4096) -> SparkResult:
    """Smallest number of linearly dependent columns, by exhaustive enumeration.

    Scans subset sizes k = 1, 2, ... and returns the first k admitting a
    rank-deficient M x k submatrix. If every subset up to size min(M, N) is
    full rank, the spark is M+1 for a wide matrix (any M+1 columns of an
    M-row matrix are dependent); for N <= M no dependent subset exists at all
    and ``value`` is None. On budget exhaustion the best-known lower bound is
    returned with ``exact=False``.
    """
    m, n = a.shape
    entries = a.entries
    used = 0
    for k in range(1, min(m, n) + 1):
        for combs in iter_combination_chunks(n, k, chunk):
            exhausted = False
            if used + len(combs) > budget:
                combs = combs[: max(0, budget - used)]
                exhausted = True
            if len(combs):
                stack = entries[:, combs].transpose(1, 0, 2)
                dep = dependent_mask(stack)
                if dep.any():
                    # count evaluations as a sequential scan would have
                    used += int(np.argmax(dep)) + 1
                    return SparkResult(k, True, used)
                used += len(combs)
            if exhausted:
                # sizes < k fully verified independent, size k only partially
                return SparkResult(k, False, used)
    if n > m:
        return SparkResult(m + 1, True, used)
    return SparkResult(None, True, used)


def coherence(a: MeasurementMatrix) -> CoherenceResult:
    """Maximal normalized absolute inner product between distinct columns.

    Returns the maximum ``mu``, one maximizing pair (the lexicographically
    smallest), and every pair attaining the maximum within a relative 1e-12
    band. Ties are genuinely common: equiangular frames tie on all pairs.
    """
    m, n = a.shape
    if n < 2:
        raise ValueError("coherence needs at least two columns")
    norms = a.column_norms()
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise DegenerateColumnError(int(zero[0]))
    g = np.abs(gram(a).entries) / np.outer(norms, norms)
    iu, ju = np.triu_indices(n, k=1)
    vals = g[iu, ju]
    mu = float(vals.max())
    tied = vals >= mu * (1.0 - _TIE_RTOL)
    ties = tuple(zip(iu[tied].tolist(), ju[tied].tolist()))
    return CoherenceResult(mu, ties[0], ties)


def welch_bound(m: int, n: int) -> float:
    """Lower bound sqrt((N-M)/(M(N-1))) on the coherence of an M x N matrix."""
    if n < 2:
        raise ValueError(f"need at least two columns, got n={n}")
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    return math.sqrt((n - m) / (m * (n - 1)))


def rip_constant(
    a: MeasurementMatrix,
    k: int,
    budget: int = DEFAULT_BUDGET,
    *,
    chunk: int = 4096,
) -> RipResult:
    """Isometry constant delta_K = max(1 - lambda_min, lambda_max - 1).

    The extreme eigenvalues are tracked over the Gram matrices of every
    K-column submatrix (principal K x K submatrices of the full Gram).
    Requires unit-norm columns; with an exhausted budget the result is the
    lower bound seen so far, flagged ``exact=False``.
    """
    m, n = a.shape
    if not 1 <= k <= min(m, n):
        raise ValueError(f"order must satisfy 1 <= K <= min(M, N) = {min(m, n)}, got {k}")
    if not a.normalized:
        raise NormalizationError(
            "isometry constants assume unit-norm columns; apply normalize_columns first"
        )
    g = gram(a).entries
    lam_min, lam_max = math.inf, -math.inf
    used = 0
    for combs in iter_combination_chunks(n, k, chunk):
        if used + len(combs) > budget:
            combs = combs[: max(0, budget - used)]
            if len(combs) == 0:
                break
        stack = g[combs[:, :, None], combs[:, None, :]]
        w = np.linalg.eigvalsh(stack)
        lam_min = min(lam_min, float(w[:, 0].min()))
        lam_max = max(lam_max, float(w[:, -1].max()))
        used += len(combs)
        if used >= budget:
            break
    exact = used == math.comb(n, k)
    if used == 0:
        return RipResult(0.0, False, 0, math.nan, math.nan)
    delta = max(1.0 - lam_min, lam_max - 1.0)
    return RipResult(delta, exact, used, lam_min, lam_max)


@dataclass(frozen=True)
class RipProfile:
    """Isometry constants per order with exactness flags and budget accounting."""

    deltas: dict[int, float]
    exact: dict[int, bool]
    budget_used: int


def rip_profile(
    a: MeasurementMatrix, k_max: int, budget: int = DEFAULT_BUDGET, *, chunk: int = 4096
) -> RipProfile:
    """Isometry constants for orders 1..k_max sharing one evaluation budget."""
    deltas: dict[int, float] = {}
    exact: dict[int, bool] = {}
    used = 0
    for k in range(1, k_max + 1):
        res = rip_constant(a, k, budget - used, chunk=chunk)
        deltas[k] = res.delta
        exact[k] = res.exact
        used += res.evaluations
    return RipProfile(deltas, exact, used)


def condition_number_bound(delta: float) -> float:
    """Upper bound (1+delta)/(1-delta) on the Gram condition number under RIP."""
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"bound requires 0 <= delta < 1, got {delta}")
    return (1.0 + delta) / (1.0 - delta)


def _q12(x: float) -> float:
    """Round to 12 significant digits, the precision carried by JSON reports."""
    return float(f"{x:.12g}")


def _largest_k_below(threshold: float) -> int:
    """Largest integer K with K < threshold, robust to 1-ulp threshold noise."""
    return max(0, math.ceil(threshold - 1e-9) - 1)


@dataclass(frozen=True)
class CertificationReport:
    """Spark, coherence, Welch, and RIP summary with per-criterion sparsity limits.

    Real-valued fields are stored rounded to 12 significant digits so a report
    round-trips exactly through its JSON form. Integer limits are the largest
    K satisfying each criterion's strict inequality; ``*_threshold`` fields
    keep the raw real bounds for traceability.
    """

    rows: int
    cols: int
    kind: str
    spark: int | None
    spark_exact: bool
    spark_limit: int
    coherence: float
    coherence_pair: tuple[int, int]
    coherence_ties: tuple[tuple[int, int], ...]
    coherence_k_threshold: float | None
    coherence_limit: int
    spark_lower_bound_from_mu: float | None
    welch: float
    welch_k_bound: float | None
    rip: RipProfile
    rip_unique_limit: int
    l1_equiv_limit_sqrt2: int
    l1_equiv_limit_0493: int
    cond_bounds: dict[int, float]

    @property
    def all_exact(self) -> bool:
        return self.spark_exact and all(self.rip.exact.values())

    def to_json(self) -> str:
        d = {
            "rows": self.rows,
            "cols": self.cols,
            "kind": self.kind,
            "spark": self.spark,
            "spark_exact": self.spark_exact,
            "spark_limit": self.spark_limit,
            "coherence": self.coherence,
            "coherence_pair": list(self.coherence_pair),
            "coherence_ties": [list(p) for p in self.coherence_ties],
            "coherence_k_threshold": self.coherence_k_threshold,
            "coherence_limit": self.coherence_limit,
            "spark_lower_bound_from_mu": self.spark_lower_bound_from_mu,
            "welch": self.welch,
            "welch_k_bound": self.welch_k_bound,
            "rip": {
                "deltas": {str(k): v for k, v in self.rip.deltas.items()},
                "exact": {str(k): v for k, v in self.rip.exact.items()},
                "budget_used": self.rip.budget_used,
            },
            "rip_unique_limit": self.rip_unique_limit,
            "l1_equiv_limit_sqrt2": self.l1_equiv_limit_sqrt2,
            "l1_equiv_limit_0493": self.l1_equiv_limit_0493,
            "cond_bounds": {str(k): v for k, v in self.cond_bounds.items()},
        }
        return json.dumps(d, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CertificationReport":
        d = json.loads(text)
        rip = RipProfile(
            deltas={int(k): v for k, v in d["rip"]["deltas"].items()},
            exact={int(k): v for k, v in d["rip"]["exact"].items()},
            budget_used=d["rip"]["budget_used"],
        )
        return cls(
            rows=d["rows"],
            cols=d["cols"],
            kind=d["kind"],
            spark=d["spark"],
            spark_exact=d["spark_exact"],
            spark_limit=d["spark_limit"],
            coherence=d["coherence"],
            coherence_pair=tuple(d["coherence_pair"]),
            coherence_ties=tuple(tuple(p) for p in d["coherence_ties"]),
            coherence_k_threshold=d["coherence_k_threshold"],
            coherence_limit=d["coherence_limit"],
            spark_lower_bound_from_mu=d["spark_lower_bound_from_mu"],
            welch=d["welch"],
            welch_k_bound=d["welch_k_bound"],
            rip=rip,
            rip_unique_limit=d["rip_unique_limit"],
            l1_equiv_limit_sqrt2=d["l1_equiv_limit_sqrt2"],
            l1_equiv_limit_0493=d["l1_equiv_limit_0493"],
            cond_bounds={int(k): v for k, v in d["cond_bounds"].items()},
        )

    def to_text(self) -> str:
        lines = [
            f"matrix: {self.kind} {self.rows}x{self.cols}",
            f"spark: {self.spark if self.spark is not None else 'not applicable (full column rank)'}"
            f" ({'exact' if self.spark_exact else 'lower bound, budget exhausted'})",
            f"  unique for K <= {self.spark_limit}  (K < spark/2)",
            f"coherence: {self.coherence}  worst pair {self.coherence_pair}"
            + (f"  ({len(self.coherence_ties)} pairs tie)" if len(self.coherence_ties) > 1 else ""),
            f"  unique for K <= {self.coherence_limit}  (K < {self.coherence_k_threshold})",
            f"  spark >= 1 + 1/mu = {self.spark_lower_bound_from_mu}",
            f"welch bound: {self.welch}  (best possible coherence; K < {self.welch_k_bound})",
            "rip deltas: "
            + "  ".join(
                f"{k}:{v}{'' if self.rip.exact[k] else '(approx)'}"
                for k, v in sorted(self.rip.deltas.items())
            ),
            f"  unique for K <= {self.rip_unique_limit}  (delta_2K < 1)",
            f"  l1-equivalent for K <= {self.l1_equiv_limit_sqrt2}  (delta_2K < sqrt(2)-1)",
            f"  l1-equivalent for K <= {self.l1_equiv_limit_0493}  (delta_2K < 0.493)",
            "condition-number bounds: "
            + (
                "  ".join(f"{k}:{v}" for k, v in sorted(self.cond_bounds.items()))
                or "none (all deltas >= 1)"
            ),
        ]
        return "\n".join(lines) + "\n"


def certify(
    a: MeasurementMatrix,
    *,
    k_max: int | None = None,
    budget: int = DEFAULT_BUDGET,
    chunk: int = 4096,
) -> CertificationReport:
    """Full certification: spark, coherence, Welch bound, RIP profile, limits.

    ``k_max`` defaults to min(M, 5). Spark and the RIP profile each receive
    ``budget`` submatrix evaluations. Limits derived from RIP constants use
    exactly-computed orders only, since a budget-truncated delta is a lower
    bound and cannot certify an upper-bound criterion.
    """
    m, n = a.shape
    if k_max is None:
        k_max = min(m, 5)
    k_max = min(k_max, m, n)

    mu_res = coherence(a)
    welch = welch_bound(m, n)
    spark_res = spark(a, budget, chunk=chunk)
    profile = rip_profile(a, k_max, budget, chunk=chunk)

    if spark_res.value is None:
        spark_limit = n  # full column rank: every support is identifiable
    else:
        spark_limit = _largest_k_below(spark_res.value / 2.0)

    mu = mu_res.mu
    if mu > 0.0:
        coh_threshold = 0.5 * (1.0 + 1.0 / mu)
        coh_limit = _largest_k_below(coh_threshold)
        spark_lb = 1.0 + 1.0 / mu
    else:
        coh_threshold = None
        coh_limit = n
        spark_lb = None

    def limit_from_deltas(threshold: float) -> int:
        ks = [
            k
            for k in range(1, k_max // 2 + 1)
            if profile.exact.get(2 * k, False) and profile.deltas[2 * k] < threshold
        ]
        return max(ks, default=0)

    rip_unique_limit = limit_from_deltas(1.0)
    l1_sqrt2 = limit_from_deltas(L1_THRESHOLD_SQRT2)
    l1_0493 = limit_from_deltas(L1_THRESHOLD_0493)

    cond_bounds = {
        k: _q12(condition_number_bound(d))
        for k, d in sorted(profile.deltas.items())
        if profile.exact[k] and d < 1.0
    }

    quantized_profile = RipProfile(
        deltas={k: _q12(v) for k, v in profile.deltas.items()},
        exact=dict(profile.exact),
        budget_used=profile.budget_used,
    )

    return CertificationReport(
        rows=m,
        cols=n,
        kind=a.kind,
        spark=spark_res.value,
        spark_exact=spark_res.exact,
        spark_limit=spark_limit,
        coherence=_q12(mu),
        coherence_pair=mu_res.pair,
        coherence_ties=mu_res.ties,
        coherence_k_threshold=None if coh_threshold is None else _q12(coh_threshold),
        coherence_limit=coh_limit,
        spark_lower_bound_from_mu=None if spark_lb is None else _q12(spark_lb),
        welch=_q12(welch),
        welch_k_bound=_q12(0.5 * (1.0 + 1.0 / welch)) if welch > 0.0 else None,
        rip=quantized_profile,
        rip_unique_limit=rip_unique_limit,
        l1_equiv_limit_sqrt2=l1_sqrt2,
        l1_equiv_limit_0493=l1_0493,
        cond_bounds=cond_bounds,
    )
