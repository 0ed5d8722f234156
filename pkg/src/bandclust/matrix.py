"""Two-mode matrices, row/column arrangements and the weighted bandwidth objective.

The objective minimised throughout the package is

    cost(A, arr) = sum_ij a_ij**2 * (i - j)**2

where (i, j) is the position of a cell *after* the arrangement has been applied.
Only position differences enter, so the index base does not matter; 0-based
positions are used internally.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, InputError

ROWS = "rows"
COLS = "cols"

_MODE_ALIASES = {
    "rows": ROWS, "row": ROWS, "r": ROWS, 0: ROWS,
    "cols": COLS, "col": COLS, "columns": COLS, "c": COLS, 1: COLS,
}


def normalize_mode(mode) -> str:
    """Map any accepted spelling of a mode ("R", "row", 0, ...) to ROWS or COLS."""
    key = mode.lower() if isinstance(mode, str) else mode
    try:
        return _MODE_ALIASES[key]
    except (KeyError, TypeError):
        raise ValueError(f"unknown mode {mode!r}; expected 'rows' or 'cols'") from None


def is_permutation(perm, size: Optional[int] = None) -> bool:
    """True if ``perm`` contains every index 0..k-1 exactly once."""
    perm = np.asarray(perm)
    if perm.ndim != 1 or (size is not None and perm.size != size):
        return False
    if perm.size == 0:
        return True
    if not np.issubdtype(perm.dtype, np.integer):
        return False
    seen = np.zeros(perm.size, dtype=bool)
    if perm.min() < 0 or perm.max() >= perm.size:
        return False
    seen[perm] = True
    return bool(seen.all())


def inverse_permutation(perm) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.intp)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size, dtype=np.intp)
    return inv


def _as_perm(perm, name: str) -> np.ndarray:
    arr = np.array(perm, dtype=np.intp).reshape(-1)
    if not is_permutation(arr):
        raise ValueError(f"{name} is not a permutation of 0..{arr.size - 1}: {list(perm)}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """Dense m x n real matrix with optional row and column labels."""

    values: np.ndarray
    row_labels: Optional[tuple] = None
    col_labels: Optional[tuple] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values.reshape(1, -1)
        if values.ndim != 2:
            raise DimensionError(f"matrix must be 2-D, got {values.ndim} dimensions")
        if not np.all(np.isfinite(values)):
            raise InputError("matrix contains NaN or infinite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        m, n = values.shape
        for attr, expected in (("row_labels", m), ("col_labels", n)):
            labels = getattr(self, attr)
            if labels is None:
                continue
            labels = tuple(str(x) for x in labels)
            if len(labels) != expected:
                raise DimensionError(f"{attr} has {len(labels)} entries, expected {expected}")
            object.__setattr__(self, attr, labels)

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def has_labels(self) -> bool:
        return self.row_labels is not None or self.col_labels is not None

    def labels(self, mode) -> tuple:
        """Labels for a mode, falling back to stringified 0-based indices."""
        mode = normalize_mode(mode)
        given = self.row_labels if mode == ROWS else self.col_labels
        if given is not None:
            return given
        size = self.rows if mode == ROWS else self.cols
        return tuple(str(i) for i in range(size))

    def transpose(self) -> "DataMatrix":
        return DataMatrix(self.values.T, self.col_labels, self.row_labels)

    def scaled(self, factor: float) -> "DataMatrix":
        return DataMatrix(self.values * factor, self.row_labels, self.col_labels)

    def __eq__(self, other):
        if not isinstance(other, DataMatrix):
            return NotImplemented
        return (self.shape == other.shape
                and bool(np.array_equal(self.values, other.values))
                and self.row_labels == other.row_labels
                and self.col_labels == other.col_labels)

    __hash__ = None

    def __repr__(self):
        return f"DataMatrix({self.rows}x{self.cols})"


def as_data_matrix(A) -> DataMatrix:
    return A if isinstance(A, DataMatrix) else DataMatrix(A)


@dataclass(frozen=True, eq=False)
class Arrangement:
    """A (row permutation, column permutation) pair.

    Applying it to A yields B with ``B[r, c] = A[row_perm[r], col_perm[c]]``,
    i.e. ``row_perm[r]`` is the original row shown at position r.
    """

    row_perm: np.ndarray
    col_perm: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "row_perm", _as_perm(self.row_perm, "row_perm"))
        object.__setattr__(self, "col_perm", _as_perm(self.col_perm, "col_perm"))

    @classmethod
    def identity(cls, m: int, n: int) -> "Arrangement":
        return cls(np.arange(m), np.arange(n))

    @property
    def shape(self) -> tuple:
        return (self.row_perm.size, self.col_perm.size)

    def perm(self, mode) -> np.ndarray:
        return self.row_perm if normalize_mode(mode) == ROWS else self.col_perm

    def inverse(self) -> "Arrangement":
        return Arrangement(inverse_permutation(self.row_perm), inverse_permutation(self.col_perm))

    def then(self, other: "Arrangement") -> "Arrangement":
        """Arrangement equivalent to applying ``self`` first and ``other`` second."""
        if self.shape != other.shape:
            raise DimensionError(f"cannot compose arrangements of shape {self.shape} and {other.shape}")
        return Arrangement(self.row_perm[other.row_perm], self.col_perm[other.col_perm])

    def transpose(self) -> "Arrangement":
        return Arrangement(self.col_perm, self.row_perm)

    def is_identity(self) -> bool:
        return (bool(np.array_equal(self.row_perm, np.arange(self.row_perm.size)))
                and bool(np.array_equal(self.col_perm, np.arange(self.col_perm.size))))

    def to_dict(self) -> dict:
        return {"row_perm": self.row_perm.tolist(), "col_perm": self.col_perm.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Arrangement":
        return cls(data["row_perm"], data["col_perm"])

    def __eq__(self, other):
        if not isinstance(other, Arrangement):
            return NotImplemented
        return (self.shape == other.shape
                and bool(np.array_equal(self.row_perm, other.row_perm))
                and bool(np.array_equal(self.col_perm, other.col_perm)))

    __hash__ = None

    def __repr__(self):
        return f"Arrangement(row_perm={self.row_perm.tolist()}, col_perm={self.col_perm.tolist()})"


def _check_shapes(A: DataMatrix, arr: Arrangement):
    if arr.shape != A.shape:
        raise DimensionError(f"arrangement of shape {arr.shape} does not fit a {A.rows}x{A.cols} matrix")


def _weighted_cost(W: np.ndarray, row_pos: np.ndarray, col_pos: np.ndarray) -> float:
    # W holds squared values; row_pos[i] / col_pos[j] are arranged positions of original row i / column j
    diff = row_pos[:, None].astype(np.float64) - col_pos[None, :].astype(np.float64)
    return float(np.sum(W * diff * diff))


def bandwidth_cost(A, arr: Optional[Arrangement] = None) -> float:
    """Weighted bandwidth ``sum a_ij^2 (i - j)^2`` of A after applying ``arr``."""
    A = as_data_matrix(A)
    if arr is None:
        arr = Arrangement.identity(*A.shape)
    _check_shapes(A, arr)
    W = A.values * A.values
    return _weighted_cost(W, inverse_permutation(arr.row_perm), inverse_permutation(arr.col_perm))


def _swap_delta(W: np.ndarray, other_pos: np.ndarray, a: int, b: int, p: int, q: int) -> float:
    """Cost change when original line ``a`` (at position p) and ``b`` (at q) trade places.

    ``W`` is oriented so the swapped mode indexes its rows; ``other_pos`` gives the
    arranged position of every line of the other mode.
    """
    # (q - c)^2 - (p - c)^2 == (q - p) * (q + p - 2c)
    lever = (p + q) - 2.0 * other_pos
    return float((q - p) * np.dot(W[a] - W[b], lever))


def bandwidth_cost_delta(A, arr: Arrangement, swap) -> float:
    """Change in :func:`bandwidth_cost` caused by swapping two arranged positions.

    ``swap`` is ``(mode, p, q)``: exchange the rows (or columns) currently shown at
    positions p and q. Only the two affected lines are touched.
    """
    A = as_data_matrix(A)
    _check_shapes(A, arr)
    mode, p, q = swap
    mode = normalize_mode(mode)
    perm = arr.perm(mode)
    k = perm.size
    for idx in (p, q):
        if not 0 <= idx < k:
            raise IndexError(f"position {idx} out of range for {mode} of size {k}")
    if p == q:
        return 0.0
    W = A.values * A.values
    if mode == ROWS:
        other_pos = inverse_permutation(arr.col_perm)
    else:
        W = W.T
        other_pos = inverse_permutation(arr.row_perm)
    return _swap_delta(W, other_pos, int(perm[p]), int(perm[q]), int(p), int(q))


def swap_positions(arr: Arrangement, mode, p: int, q: int) -> Arrangement:
    """Return a copy of ``arr`` with positions p and q of one mode exchanged."""
    mode = normalize_mode(mode)
    rows, cols = arr.row_perm.copy(), arr.col_perm.copy()
    target = rows if mode == ROWS else cols
    if not (0 <= p < target.size and 0 <= q < target.size):
        raise IndexError(f"swap ({p}, {q}) out of range for {mode} of size {target.size}")
    target[p], target[q] = target[q], target[p]
    return Arrangement(rows, cols)


def classic_bandwidth(A) -> int:
    """Largest |i - j| over strictly nonzero cells (0 for an all-zero matrix)."""
    A = as_data_matrix(A)
    i, j = np.nonzero(A.values)
    if i.size == 0:
        return 0
    return int(np.max(np.abs(i - j)))


def apply_arrangement(A, arr: Arrangement) -> DataMatrix:
    A = as_data_matrix(A)
    _check_shapes(A, arr)
    values = A.values[np.ix_(arr.row_perm, arr.col_perm)]
    rl = None if A.row_labels is None else tuple(A.row_labels[i] for i in arr.row_perm)
    cl = None if A.col_labels is None else tuple(A.col_labels[j] for j in arr.col_perm)
    return DataMatrix(values, rl, cl)


def random_arrangement(m: int, n: int, rng: np.random.Generator) -> Arrangement:
    return Arrangement(rng.permutation(m), rng.permutation(n))


def scramble(A, seed: int):
    """Randomly permute rows and columns; returns ``(scrambled, arrangement)``.

    ``apply_arrangement(scrambled, arrangement.inverse())`` recovers ``A``.
    """
    A = as_data_matrix(A)
    rng = np.random.default_rng(seed)
    arr = random_arrangement(A.rows, A.cols, rng)
    return apply_arrangement(A, arr), arr

