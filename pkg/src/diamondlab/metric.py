"""Finite metric spaces with exact rational distances.

Points are indexed 0..n-1 and carry string labels (canonical addresses for
diamond constructions, arbitrary names otherwise).  Distances live in a
dense symmetric matrix of ``Fraction`` values; no floating point is used
anywhere.  The heavy validation passes run on an integer-scaled copy of
the matrix so they can be vectorized without losing exactness.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .sampling import Sampler

__all__ = ["MetricSpace", "MetricAxiomError"]

_INT64_SAFE = 1 << 60


class MetricAxiomError(ValueError):
    """The distance table violates a metric axiom; details in args."""


class MetricSpace:
    """Immutable finite metric space with a distinguished base point."""

    def __init__(self, labels: Sequence[str],
                 dist: Sequence[Sequence[Fraction]], base_point: int):
        self._labels = tuple(str(x) for x in labels)
        n = len(self._labels)
        if len(set(self._labels)) != n:
            raise ValueError("point labels must be distinct")
        if len(dist) != n or any(len(row) != n for row in dist):
            raise ValueError("distance matrix shape does not match points")
        self._dist = tuple(
            tuple(Fraction(v) for v in row) for row in dist)
        if not 0 <= base_point < n:
            raise ValueError("base point index out of range")
        self._base = base_point
        self._index = {lab: i for i, lab in enumerate(self._labels)}
        self._scaled: Optional[tuple[np.ndarray, int]] = None

    # -- basic access ----------------------------------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def base_point(self) -> int:
        return self._base

    @property
    def dist_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._dist

    def __len__(self) -> int:
        return len(self._labels)

    def distance(self, x: int, y: int) -> Fraction:
        if not (0 <= x < len(self._labels) and 0 <= y < len(self._labels)):
            raise IndexError("point index out of range")
        return self._dist[x][y]

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"no point labeled {label!r}") from None

    def label(self, x: int) -> str:
        return self._labels[x]

    def set_distance(self, x: int, subset: Iterable[int]) -> Optional[Fraction]:
        """min distance from x to a point set; None when the set is empty."""
        best: Optional[Fraction] = None
        for y in subset:
            d = self.distance(x, y)
            if best is None or d < best:
                best = d
        return best

    # -- derived structures ------------------------------------------------

    def restrict(self, indices: Sequence[int], base: int
                 ) -> tuple["MetricSpace", tuple[int, ...]]:
        """Subspace on ``indices`` (kept in the given order).

        ``base`` must be one of the indices and becomes the subspace base.
        Returns the subspace and the index map (new index -> old index).
        """
        idx = tuple(indices)
        if len(set(idx)) != len(idx):
            raise ValueError("restriction indices must be distinct")
        if base not in idx:
            raise ValueError("base must belong to the restriction")
        labels = [self._labels[i] for i in idx]
        dist = [[self._dist[i][j] for j in idx] for i in idx]
        sub = MetricSpace(labels, dist, idx.index(base))
        return sub, idx

    def integer_scaled(self) -> tuple[np.ndarray, int]:
        """Distance matrix as int64 numerators over a common denominator.

        Cached; raises if the scaled entries would not fit in 60 bits.
        """
        if self._scaled is None:
            denoms = {v.denominator for row in self._dist for v in row}
            scale = math.lcm(*denoms) if denoms else 1
            peak = max((v for row in self._dist for v in row), default=Fraction(0))
            if peak * scale >= _INT64_SAFE:
                raise OverflowError("scaled distances exceed the int64 range")
            mat = np.array(
                [[int(v * scale) for v in row] for row in self._dist],
                dtype=np.int64)
            self._scaled = (mat, scale)
        return self._scaled

    # -- validation --------------------------------------------------------

    def validate_metric(self, exhaustive_limit: int = 400,
                        sampler: Optional[Sampler] = None,
                        samples: int = 20000) -> None:
        """Check the metric axioms exactly.

        All pairs are always checked for symmetry, zero diagonal and
        positivity.  The triangle inequality is checked over all triples
        up to ``exhaustive_limit`` points and over ``samples`` sampled
        triples beyond that.
        """
        n = len(self)
        mat, _ = self.integer_scaled()
        if np.diagonal(mat).any():
            i = int(np.flatnonzero(np.diagonal(mat))[0])
            raise MetricAxiomError(f"d({i},{i}) != 0")
        if not np.array_equal(mat, mat.T):
            i, j = map(int, np.argwhere(mat != mat.T)[0])
            raise MetricAxiomError(
                f"asymmetry at ({i},{j}): {self._dist[i][j]} vs {self._dist[j][i]}")
        off = mat + np.eye(n, dtype=np.int64)
        if (off <= 0).any():
            i, j = map(int, np.argwhere(off <= 0)[0])
            raise MetricAxiomError(f"d({i},{j}) is not positive")
        if n <= exhaustive_limit:
            for k in range(n):
                bad = mat > mat[:, k, None] + mat[None, k, :]
                if bad.any():
                    i, j = map(int, np.argwhere(bad)[0])
                    raise MetricAxiomError(
                        f"triangle violation: d({i},{j}) = {self._dist[i][j]}"
                        f" > d({i},{k}) + d({k},{j}) = "
                        f"{self._dist[i][k] + self._dist[k][j]}")
        else:
            rng = sampler or Sampler(0)
            for _ in range(samples):
                i, j, k = (rng.below(n) for _ in range(3))
                if self._dist[i][j] > self._dist[i][k] + self._dist[k][j]:
                    raise MetricAxiomError(
                        f"triangle violation at sampled triple ({i},{j},{k})")

    def __repr__(self) -> str:
        return (f"MetricSpace({len(self)} points, "
                f"base={self._labels[self._base]!r})")
