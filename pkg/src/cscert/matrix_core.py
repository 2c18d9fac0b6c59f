"""Measurement-matrix construction, CSV loading, normalization, and column ops.

Matrices are dense complex arrays; real matrices are stored as complex with
zero imaginary parts so that partial Fourier constructions and loaded real
fixtures share one code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MATRIX_KINDS = ("loaded", "gaussian", "partial_idft", "random_partial_fourier")

# Column norms within this distance of one count as normalized.
NORMALIZED_ATOL = 1e-9


class CsvParseError(ValueError):
    """A CSV cell could not be parsed as a real or complex number."""


class CsvShapeError(ValueError):
    """Rows of a matrix CSV file have inconsistent lengths."""


class DegenerateColumnError(ValueError):
    """An operation hit a zero column it cannot handle."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"column {index} has zero norm")


@dataclass(frozen=True, eq=False)
class MeasurementMatrix:
    """Dense M x N measurement matrix with provenance metadata.

    ``normalized`` is measured at construction, never supplied: it is true
    iff every column norm lies within ``NORMALIZED_ATOL`` of one.
    """

    entries: np.ndarray
    kind: str = "loaded"
    normalized: bool = field(init=False)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128, order="C")
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"matrix must be 2-D and nonempty, got shape {arr.shape}")
        if self.kind not in MATRIX_KINDS:
            raise ValueError(f"unknown matrix kind {self.kind!r}")
        if self.kind == "partial_idft":
            mods = np.abs(arr)
            scale = float(mods.flat[0])
            if scale == 0.0 or not np.allclose(mods, scale, rtol=1e-12, atol=0.0):
                raise ValueError("partial_idft entries must all share one modulus")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        norms = np.linalg.norm(arr, axis=0)
        object.__setattr__(
            self, "normalized", bool(np.all(np.abs(norms - 1.0) <= NORMALIZED_ATOL))
        )

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def column_norms(self) -> np.ndarray:
        return np.linalg.norm(self.entries, axis=0)

    def describe(self) -> str:
        return f"{self.kind} {self.rows}x{self.cols}"


@dataclass(frozen=True)
class SupportSet:
    """Strictly increasing set of column indices (a candidate sparsity support)."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(i < 0 for i in idx):
            raise ValueError(f"negative index in support: {idx}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"support indices must be strictly increasing: {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, iterable) -> "SupportSet":
        """Build a support from any iterable of indices, rejecting duplicates."""
        idx = sorted(int(i) for i in iterable)
        return cls(tuple(idx))

    @property
    def size(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def as_array(self) -> np.ndarray:
        return np.array(self.indices, dtype=np.intp)


@dataclass(frozen=True, eq=False)
class HermitianGram:
    """Gram matrix of measurement-matrix columns (conjugate-transpose product)."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {arr.shape}")
        if not np.allclose(arr, arr.conj().T, rtol=0.0, atol=1e-12):
            raise ValueError("Gram matrix is not Hermitian within 1e-12")
        diag = np.diagonal(arr)
        if np.any(diag.real < 0) or np.any(np.abs(diag.imag) > 1e-12):
            raise ValueError("Gram diagonal must be real and nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


def _parse_cell(text: str, row: int, col: int) -> complex:
    s = text.strip().replace(" ", "")
    if not s:
        raise CsvParseError(f"row {row}, column {col}: empty cell")
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise CsvParseError(f"row {row}, column {col}: cannot parse {text!r}") from None


def load_matrix_csv(path) -> MeasurementMatrix:
    """Load a matrix from CSV, one matrix row per line, cells real or ``a+bi``."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise CsvShapeError(f"{path}: no rows")
    rows = []
    width = None
    for r, line in enumerate(lines):
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise CsvShapeError(
                f"{path}: row {r} has {len(cells)} fields, expected {width}"
            )
        rows.append([_parse_cell(c, r, i) for i, c in enumerate(cells)])
    return MeasurementMatrix(np.array(rows, dtype=np.complex128), kind="loaded")


def _format_cell(z: complex) -> str:
    re, im = float(z.real), float(z.imag)
    if im == 0.0:
        return repr(re)
    sign = "+" if im >= 0 else "-"
    return f"{re!r}{sign}{abs(im)!r}i"


def save_matrix_csv(a: MeasurementMatrix, path) -> None:
    """Write a matrix in the CSV dialect accepted by :func:`load_matrix_csv`."""
    lines = [",".join(_format_cell(z) for z in row) for row in a.entries]
    Path(path).write_text("\n".join(lines) + "\n")


def build_partial_idft(
    n: int, sample_positions, normalize: bool = False
) -> MeasurementMatrix:
    """Rows of the inverse DFT matrix kept at the given sample positions.

    Entry (m, k) is ``exp(2j*pi*n_m*k/n) * s`` with ``s = 1/n`` by default, or
    ``s = 1/sqrt(M)`` when ``normalize`` is set so each column has unit energy.
    """
    positions = [int(p) for p in sample_positions]
    if not positions:
        raise ValueError("at least one sample position is required")
    if len(set(positions)) != len(positions):
        raise ValueError(f"duplicate sample positions: {positions}")
    if any(p < 0 or p >= n for p in positions):
        raise ValueError(f"sample positions must lie in [0, {n})")
    m = len(positions)
    scale = 1.0 / math.sqrt(m) if normalize else 1.0 / n
    pos = np.array(positions, dtype=np.float64)[:, None]
    k = np.arange(n, dtype=np.float64)[None, :]
    entries = np.exp(2j * np.pi * pos * k / n) * scale
    return MeasurementMatrix(entries, kind="partial_idft")


def build_random_partial_fourier(
    n: int, interval: float, times, normalize: bool = False
) -> MeasurementMatrix:
    """Inverse Fourier-series rows sampled at arbitrary instants in [0, interval).

    Entry (m, k) is ``exp(2j*pi*t_m*k/interval)``, with an optional 1/sqrt(M)
    column-energy normalization.
    """
    t = np.array([float(x) for x in times], dtype=np.float64)
    if t.size < 1:
        raise ValueError("at least one sampling instant is required")
    if interval <= 0:
        raise ValueError(f"interval must be positive, got {interval}")
    if np.any(t < 0) or np.any(t >= interval):
        raise ValueError(f"sampling instants must lie in [0, {interval})")
    scale = 1.0 / math.sqrt(t.size) if normalize else 1.0
    k = np.arange(n, dtype=np.float64)[None, :]
    entries = np.exp(2j * np.pi * t[:, None] * k / interval) * scale
    return MeasurementMatrix(entries, kind="random_partial_fourier")


def build_gaussian(rows: int, cols: int, seed: int) -> MeasurementMatrix:
    """I.i.d. standard-normal entries scaled by 1/sqrt(rows), unit column energy
    in expectation.

    Uses numpy's PCG64 generator, so a fixed seed reproduces the same matrix.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be positive, got {rows}x{cols}")
    rng = np.random.default_rng(seed)
    entries = rng.standard_normal((rows, cols)) / math.sqrt(rows)
    return MeasurementMatrix(entries, kind="gaussian")


def normalize_columns(a: MeasurementMatrix) -> MeasurementMatrix:
    """Divide each column by its Euclidean norm."""
    norms = a.column_norms()
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise DegenerateColumnError(int(zero[0]))
    return MeasurementMatrix(a.entries / norms[None, :], kind=a.kind)


def gram(a: MeasurementMatrix) -> HermitianGram:
    """Conjugate-transpose product of the matrix with itself."""
    g = a.entries.conj().T @ a.entries
    g = (g + g.conj().T) / 2.0
    return HermitianGram(g)


def select_columns(a: MeasurementMatrix, s: SupportSet) -> MeasurementMatrix:
    """Reduced matrix keeping only the support's columns, order preserved."""
    if len(s) == 0:
        raise ValueError("support is empty")
    idx = s.as_array()
    if idx[-1] >= a.cols:
        raise ValueError(f"support index {idx[-1]} out of range for {a.cols} columns")
    return MeasurementMatrix(a.entries[:, idx], kind=a.kind)
