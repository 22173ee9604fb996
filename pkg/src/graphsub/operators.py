"""Cyclic and combined k-shift operators over length-n signal graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CyclicShiftOperator",
    "CombinedShiftOperator",
    "GraphSignalFrame",
    "cyclic_shift_matrix",
    "combined_shift_matrix",
    "apply_shift",
    "materialize",
]


@dataclass(frozen=True)
class CyclicShiftOperator:
    """Rotation by k positions on a length-n cycle, stored as the pair (n, k).

    The materialized matrix is the permutation with a one at (i, j) exactly
    when (j - i) mod n == k. k = 0 is the identity.
    """

    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got n={self.n}")
        if not 0 <= self.k < self.n:
            raise ValueError(
                f"shift step must satisfy 0 <= k < n, got k={self.k} for n={self.n}"
            )


@dataclass(frozen=True)
class CombinedShiftOperator:
    """Sum of the first k cyclic shifts: a circulant 0-1 matrix, k ones per row.

    Row i carries ones at columns j with (j - i) mod n in {0, ..., k-1}, so
    k = 1 is the identity and k = n the all-ones matrix. The operator doubles
    as the adjacency matrix of the graph that indexes a signal frame.
    """

    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got n={self.n}")
        if not 1 <= self.k <= self.n:
            raise ValueError(
                f"combination order must satisfy 1 <= k <= n, got k={self.k} for n={self.n}"
            )


@dataclass(frozen=True)
class GraphSignalFrame:
    """One frame of real samples indexed by the cycle graph of a combined shift."""

    values: np.ndarray
    graph: CombinedShiftOperator

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("frame values must be one-dimensional")
        if values.shape[0] != self.graph.n:
            raise ValueError(
                f"frame length {values.shape[0]} does not match graph size {self.graph.n}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def cyclic_shift_matrix(n: int, k: int) -> CyclicShiftOperator:
    """Validated constructor for the k-step rotation on n vertices."""
    return CyclicShiftOperator(n, k)


def combined_shift_matrix(n: int, k: int) -> CombinedShiftOperator:
    """Validated constructor for the order-k combined shift on n vertices."""
    return CombinedShiftOperator(n, k)


def materialize(op: CyclicShiftOperator | CombinedShiftOperator) -> np.ndarray:
    """Dense 0-1 matrix for an operator kept in (n, k) form."""
    offsets = (np.arange(op.n)[None, :] - np.arange(op.n)[:, None]) % op.n
    if isinstance(op, CyclicShiftOperator):
        return (offsets == op.k).astype(np.float64)
    if isinstance(op, CombinedShiftOperator):
        return (offsets < op.k).astype(np.float64)
    raise TypeError(f"not a shift operator: {type(op).__name__}")


def apply_shift(
    op: CyclicShiftOperator | CombinedShiftOperator, frame: GraphSignalFrame
) -> GraphSignalFrame:
    """Apply an operator to a frame without building the matrix.

    A single k-shift maps sample i to sample (i + k) mod n, i.e. rotates the
    frame left by k. A combined shift is the sum of rotations 0 .. k-1.
    """
    if frame.values.shape[0] != op.n:
        raise ValueError(
            f"frame length {frame.values.shape[0]} does not match operator size {op.n}"
        )
    if isinstance(op, CyclicShiftOperator):
        out = np.roll(frame.values, -op.k)
    elif isinstance(op, CombinedShiftOperator):
        out = np.zeros(op.n)
        for step in range(op.k):
            out += np.roll(frame.values, -step)
    else:
        raise TypeError(f"not a shift operator: {type(op).__name__}")
    return GraphSignalFrame(out, frame.graph)
