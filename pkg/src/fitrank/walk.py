"""Damped random walk with a jump vector, solved by power iteration.

Both the word graph behind SingleRank and the term preference graph of the
ensemble ranker use the same update::

    S <- (1 - d) * p + d * P_w^T S

where ``P_w[j, i] = w_ji / sum_k w_jk``. A vertex without out-edges hands its
mass back through ``p``, so the scores always sum to one.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np
from scipy import sparse


class MassSinkError(ValueError):
    pass


class WalkGraph:
    """Weighted digraph over vertices ``0..n-1`` plus a jump distribution."""

    def __init__(self, n: int, out_edges: Sequence[Sequence[tuple[int, float]]], jump):
        jump = np.asarray(jump, dtype=float)
        if len(out_edges) != n or jump.shape != (n,):
            raise ValueError("out_edges and jump must have one entry per vertex")
        edges = tuple(tuple((int(t), float(w)) for t, w in row) for row in out_edges)
        for row in edges:
            for t, w in row:
                if not 0 <= t < n:
                    raise ValueError(f"edge target {t} out of range")
                if not w > 0:
                    raise ValueError(f"edge weight must be positive, got {w}")
        if np.any(jump < 0):
            raise ValueError("jump vector has negative entries")
        total = jump.sum()
        if total != 0 and abs(total - 1.0) > 1e-9:
            raise ValueError(f"jump vector sums to {total}, not 1")
        self.n = n
        self.out_edges = edges
        self.jump = jump

    @classmethod
    def uniform(cls, n, out_edges):
        return cls(n, out_edges, np.full(n, 1.0 / n) if n else np.zeros(0))

    @property
    def dangling(self) -> np.ndarray:
        return np.array([not row for row in self.out_edges], dtype=bool)

    def transition_matrix(self) -> sparse.csr_matrix:
        """Row-stochastic ``P_w`` (dangling rows left empty)."""
        rows, cols, vals = [], [], []
        for j, row in enumerate(self.out_edges):
            total = sum(w for _, w in row)
            for i, w in row:
                rows.append(j)
                cols.append(i)
                vals.append(w / total)
        return sparse.csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))

    def to_edge_list(self) -> str:
        """Text dump, one ``source<TAB>target<TAB>weight`` line per edge."""
        lines = [f"# n={self.n}"]
        lines += [f"# jump {i} {p:.17g}" for i, p in enumerate(self.jump)]
        for j, row in enumerate(self.out_edges):
            lines += [f"{j}\t{i}\t{w:.17g}" for i, w in row]
        return "\n".join(lines) + "\n"


def iterate_scores(g: WalkGraph, d: float) -> Iterator[np.ndarray]:
    """Yield successive power-iteration vectors, starting from ``S = p``."""
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"d must lie in [0, 1], got {d}")
    p = g.jump
    dangling = g.dangling
    if p.sum() == 0:
        if dangling.any():
            raise MassSinkError("all-zero jump vector with dangling vertices: mass would leak")
        raise ValueError("jump vector is all zero")
    PT = g.transition_matrix().T.tocsr()
    s = p.copy()
    yield s
    while True:
        leaked = s[dangling].sum()
        s = (1.0 - d) * p + d * (PT @ s + leaked * p)
        yield s


def stationary_scores(g: WalkGraph, d: float, tol: float = 1e-9, max_iter: int = 1000) -> np.ndarray:
    """Fixed point of the damped walk on ``g`` with mixing weight ``d``.

    Iteration stops once the L1 change falls below ``tol`` or after
    ``max_iter`` updates. ``d = 0`` returns the jump vector unchanged.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if g.n == 0:
        return np.zeros(0)
    steps = iterate_scores(g, d)
    prev = next(steps)
    if d == 0.0:
        return prev
    for _ in range(max_iter):
        cur = next(steps)
        if np.abs(cur - prev).sum() < tol:
            return cur
        prev = cur
    return prev
