"""Summing metrics, pole covers and exact sum-decomposition identities.

A limit-stage diamond splits, away from its poles, into summand slices.
Replacing cross-slice distances by detours through a chosen base point
gives the summing metric; the free space over it is the exact l1-sum of
the per-slice free spaces.  This module builds that metric, measures how
far it sits from the original one, constructs the two-sided pole cover
with its separation function, and checks the sum identities exactly on
concrete vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .diamond import DiamondLandmarks
from .freespace import FreeVector, norm_value
from .metric import MetricAxiomError, MetricSpace

__all__ = [
    "SummandPartition",
    "check_partition",
    "summing_metric",
    "EquivalenceReport",
    "equivalence_constants",
    "Cover",
    "build_cover",
    "cover_partition",
    "AdditivityReport",
    "ell1_additivity_check",
    "ProjectionReport",
    "projection_identity_check",
]

_THREE_HALVES = Fraction(3, 2)


@dataclass(frozen=True)
class SummandPartition:
    """Disjoint summand index sets covering everything but the base."""

    base: int
    summands: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "summands",
                           tuple(tuple(s) for s in self.summands))

    def summand_of(self, idx: int) -> Optional[int]:
        for m, members in enumerate(self.summands):
            if idx in members:
                return m
        return None


def check_partition(space: MetricSpace, partition: SummandPartition) -> None:
    """Raise unless the partition is disjoint and covers all non-base points."""
    if not 0 <= partition.base < len(space):
        raise ValueError("partition base out of range")
    seen: set[int] = set()
    for members in partition.summands:
        for idx in members:
            if not 0 <= idx < len(space):
                raise ValueError(f"point index {idx} out of range")
            if idx == partition.base:
                raise ValueError("the base point belongs to no summand")
            if idx in seen:
                raise ValueError(f"point {idx} appears in two summands")
            seen.add(idx)
    if len(seen) != len(space) - 1:
        missing = sorted(set(range(len(space))) - seen - {partition.base})
        raise ValueError(f"points {missing} are not covered by any summand")


def summing_metric(space: MetricSpace,
                   partition: SummandPartition) -> MetricSpace:
    """Same points, with cross-summand travel rerouted through the base.

    Distances within a summand, and to the base point, are kept; a pair
    in distinct summands gets d(x, base) + d(base, y).  The result is
    checked against the metric axioms before being returned.
    """
    check_partition(space, partition)
    n = len(space)
    owner = [None] * n
    for m, members in enumerate(partition.summands):
        for idx in members:
            owner[idx] = m
    base = partition.base
    dist = [list(row) for row in space.dist_matrix]
    for i in range(n):
        for j in range(i + 1, n):
            if i == base or j == base or owner[i] == owner[j]:
                continue
            d1 = space.distance(i, base) + space.distance(base, j)
            dist[i][j] = d1
            dist[j][i] = d1
    result = MetricSpace(space.labels, dist, base)
    try:
        result.validate_metric()
    except MetricAxiomError as exc:
        raise MetricAxiomError(
            f"summing metric is not a metric ({exc}); this signals a "
            f"partition whose summands are not separated through the "
            f"base point") from exc
    return result


@dataclass(frozen=True)
class EquivalenceReport:
    """Extreme ratios original/summing over all point pairs."""

    c_low: Fraction
    c_high: Fraction
    low_pair: Optional[tuple[int, int]]
    high_pair: Optional[tuple[int, int]]


def equivalence_constants(original: MetricSpace,
                          summing: MetricSpace) -> EquivalenceReport:
    """Exact Lipschitz-equivalence constants between the two metrics.

    c_low and c_high bound d/d1 from below and above, each with a
    witnessing pair.  A space with fewer than two points compares as
    (1, 1) with no witnesses.
    """
    if original.labels != summing.labels:
        raise ValueError("the two metrics must carry the same point set")
    c_low = c_high = None
    low_pair = high_pair = None
    for i in range(len(original)):
        for j in range(i + 1, len(original)):
            ratio = original.distance(i, j) / summing.distance(i, j)
            if c_low is None or ratio < c_low:
                c_low, low_pair = ratio, (i, j)
            if c_high is None or ratio > c_high:
                c_high, high_pair = ratio, (i, j)
    if c_low is None:
        return EquivalenceReport(Fraction(1), Fraction(1), None, None)
    return EquivalenceReport(c_low, c_high, low_pair, high_pair)


# ---------------------------------------------------------------------------
# the two-sided pole cover


@dataclass(frozen=True)
class Cover:
    """Pole-centred halves with the per-point separation margin.

    ``separation`` maps each point to dist(z, complement of bottom half)
    plus dist(z, complement of top half); a ``None`` value stands for an
    infinite term caused by an empty complement at tiny truncations and
    is reported as such rather than clamped.
    """

    bottom_half: tuple[int, ...]
    top_half: tuple[int, ...]
    separation: dict[int, Optional[Fraction]]

    @property
    def minimum(self) -> Optional[Fraction]:
        finite = [v for v in self.separation.values() if v is not None]
        return min(finite) if finite else None


def _dist_to_set(space: MetricSpace, z: int,
                 targets: Sequence[int]) -> Optional[Fraction]:
    if not targets:
        return None
    return min(space.distance(z, t) for t in targets)


def build_cover(space: MetricSpace, landmarks: DiamondLandmarks) -> Cover:
    """Open 3/2-balls around the poles, with exact separation margins.

    Only limit stages carry the summand structure the cover feeds into,
    so anything else is rejected.  Every point lands in at least one
    half because the poles sit at distance 2.
    """
    if not landmarks.summands:
        raise ValueError("the pole cover is defined for limit stages only")
    bottom, top = landmarks.bottom, landmarks.top
    a_half = tuple(z for z in range(len(space))
                   if space.distance(z, bottom) < _THREE_HALVES)
    b_half = tuple(z for z in range(len(space))
                   if space.distance(z, top) < _THREE_HALVES)
    a_comp = [z for z in range(len(space)) if z not in set(a_half)]
    b_comp = [z for z in range(len(space)) if z not in set(b_half)]
    separation: dict[int, Optional[Fraction]] = {}
    for z in range(len(space)):
        da = _dist_to_set(space, z, a_comp)
        db = _dist_to_set(space, z, b_comp)
        separation[z] = None if da is None or db is None else da + db
    return Cover(a_half, b_half, separation)


def cover_partition(space: MetricSpace, landmarks: DiamondLandmarks,
                    half: Sequence[int], pole: int
                    ) -> tuple[MetricSpace, tuple[int, ...], SummandPartition]:
    """Restrict to one cover half and partition it by summand slice.

    Returns the restricted space based at the pole, the new-to-old index
    map, and the partition whose m-th summand collects the points coming
    from the m-th summand of the limit construction.  Empty slices are
    kept so slice numbering matches the construction.
    """
    members = set(half)
    if pole not in members:
        raise ValueError("the pole must belong to the chosen half")
    order = sorted(members)
    sub, kept = space.restrict(order, pole)
    slices: list[list[int]] = [[] for _ in landmarks.summands]
    for new_idx, old_idx in enumerate(kept):
        if old_idx == pole:
            continue
        placed = False
        for m, info in enumerate(landmarks.summands):
            interior = set(info.injection) - {landmarks.top, landmarks.bottom}
            if old_idx in interior:
                slices[m].append(new_idx)
                placed = True
                break
        if not placed:
            raise ValueError(f"point {space.label(old_idx)} belongs to no "
                             f"summand slice")
    partition = SummandPartition(sub.base_point,
                                 tuple(tuple(s) for s in slices))
    check_partition(sub, partition)
    return sub, kept, partition


# ---------------------------------------------------------------------------
# exact sum identities


@dataclass(frozen=True)
class AdditivityReport:
    """One l1-additivity instance: whole norm vs sum of slice norms."""

    total: Fraction
    parts: tuple[Fraction, ...]
    passed: bool


def ell1_additivity_check(summing: MetricSpace, partition: SummandPartition,
                          vec: FreeVector) -> AdditivityReport:
    """Check that the summing norm splits exactly across summands.

    Each slice part is the vector's restriction to one summand, measured
    inside that summand plus the base (imbalances settle at the base).
    Equality is exact or the report fails; nothing is raised.
    """
    if vec.space is not summing:
        raise ValueError("vector must live over the summing-metric space")
    check_partition(summing, partition)
    total = norm_value(vec)
    parts = []
    for members in partition.summands:
        chunk = [(i, c) for i, c in vec.entries if i in set(members)]
        if not chunk:
            parts.append(Fraction(0))
            continue
        order = sorted(set(members) | {partition.base})
        sub, kept = summing.restrict(order, partition.base)
        back = {old: new for new, old in enumerate(kept)}
        part = FreeVector(sub, [(back[i], c) for i, c in chunk])
        parts.append(norm_value(part))
    return AdditivityReport(total, tuple(parts),
                            total == sum(parts, Fraction(0)))


@dataclass(frozen=True)
class ProjectionReport:
    """Norm splits under truncation to the first n summands, all n."""

    rows: tuple[tuple[int, Fraction, Fraction, Fraction], ...]
    passed: bool


def projection_identity_check(partition: SummandPartition,
                              vec: FreeVector) -> ProjectionReport:
    """Check norm(v) = norm(P_n v) + norm(v - P_n v) for every cut n.

    P_n keeps the entries in the first n summands; both sides balance at
    the base implicitly.  Exact over the summing metric, where the free
    space really is an l1-sum of the slices.
    """
    space = vec.space
    check_partition(space, partition)
    total = norm_value(vec)
    rows = []
    ok = True
    for n in range(len(partition.summands) + 1):
        head = set()
        for members in partition.summands[:n]:
            head.update(members)
        front = FreeVector(space, [(i, c) for i, c in vec.entries
                                   if i in head])
        lhs = norm_value(front)
        rhs = norm_value(vec - front)
        rows.append((n, total, lhs, rhs))
        if total != lhs + rhs:
            ok = False
    return ProjectionReport(tuple(rows), ok)
