"""Shared dense linear-algebra helpers: batched rank tests and eigenvalue ranges."""

from __future__ import annotations

import itertools

import numpy as np

# One notion of numerical rank across the whole package: a column set is
# dependent iff sigma_min <= RANK_RTOL * sigma_max of the submatrix.
RANK_RTOL = 1e-10


def iter_combination_chunks(n: int, k: int, chunk: int = 4096):
    """Yield (B, k) int arrays of k-combinations of range(n) in lexicographic order."""
    if not 0 < k <= n:
        raise ValueError(f"need 0 < k <= n, got k={k}, n={n}")
    it = itertools.combinations(range(n), k)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def dependent_mask(stack: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Boolean mask over a (B, M, k) stack: True where the k columns are dependent.

    A zero submatrix (sigma_max = 0) counts as dependent.
    """
    s = np.linalg.svd(stack, compute_uv=False)
    # fewer singular values than columns means rank < k regardless of values
    if s.shape[-1] < stack.shape[-1]:
        return np.ones(stack.shape[0], dtype=bool)
    return s[:, -1] <= rtol * s[:, 0]


def eig_range_hermitian(stack: np.ndarray) -> tuple[float, float]:
    """Extreme eigenvalues (min, max) over a (B, k, k) stack of Hermitian matrices."""
    w = np.linalg.eigvalsh(stack)
    return float(w[:, 0].min()), float(w[:, -1].max())
