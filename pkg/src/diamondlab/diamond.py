"""Recursive diamond metric spaces with exact dyadic distances.

The base stage ``alpha = 1`` is a two-pole graph: ``top`` and ``bottom`` at
distance 2 and ``branches`` midpoints at distance 1 from each pole.  A
successor stage replaces each of the ``2n`` pole-to-midpoint edges with a
half-scaled copy of the previous stage, identifying the copy poles with the
edge endpoints.  A limit stage materializes ``limit_width`` entries of the
fundamental sequence and glues them along shared poles, with cross-summand
distances given by the shorter pole detour.

Every point carries a canonical address.  Identified poles resolve to the
outermost name, so addresses are unique; the point order (poles, midpoints,
then copies in ``(side, branch)`` order) is part of the format contract.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceededError
from .metric import MetricSpace
from .ordinal import (OrdinalNotation, ZERO, ONE, format_ordinal,
                      fundamental_sequence, parse_ordinal)

__all__ = [
    "DiamondSpec",
    "PointAddress",
    "DiamondLandmarks",
    "SummandInfo",
    "DEFAULT_BUDGET",
    "estimate_points",
    "build",
    "subcopy_map",
    "finest_edges",
    "build_cached",
    "shortest_path_closure",
    "parse_address",
]

DEFAULT_BUDGET = 100_000

_TWO = Fraction(2)
_ONE_F = Fraction(1)
_HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# specs and addresses


@dataclass(frozen=True)
class DiamondSpec:
    """Construction parameters for one truncation."""

    alpha: OrdinalNotation
    branches: int
    limit_width: int = 3

    def __post_init__(self):
        if isinstance(self.alpha, int):
            object.__setattr__(self, "alpha",
                               OrdinalNotation.from_int(self.alpha))
        if self.alpha.is_zero:
            raise ValueError("alpha must be positive")
        if self.branches < 2:
            raise ValueError("at least two branches are required")
        if self.limit_width < 1:
            raise ValueError("limit width must be >= 1")


@dataclass(frozen=True)
class PointAddress:
    """Canonical location of a point: copy path plus a terminal name.

    Path segments are ``("+", j)`` and ``("-", i)`` for successor-stage
    copies and ``("sum", beta)`` for limit-stage summands.  Terminals are
    ``("top",)``, ``("bottom",)`` or ``("mid", i)``.
    """

    path: tuple[tuple, ...] = ()
    terminal: tuple = ("top",)

    def prefixed(self, segment: tuple) -> "PointAddress":
        return PointAddress((segment,) + self.path, self.terminal)

    def __str__(self) -> str:
        parts = []
        for seg in self.path:
            if seg[0] == "+":
                parts.append(f"+({seg[1]})")
            elif seg[0] == "-":
                parts.append(f"-({seg[1]})")
            else:
                parts.append(f"sum({format_ordinal(seg[1])})")
        t = self.terminal
        parts.append(t[0] if t[0] in ("top", "bottom") else f"mid({t[1]})")
        return "/".join(parts)


_SEG_RE = re.compile(r"^([+-])\((\d+)\)$")
_SUM_RE = re.compile(r"^sum\((.+)\)$")
_MID_RE = re.compile(r"^mid\((\d+)\)$")


def parse_address(text: str) -> PointAddress:
    parts = text.split("/")
    path = []
    for part in parts[:-1]:
        m = _SEG_RE.match(part)
        if m:
            path.append((m.group(1), int(m.group(2))))
            continue
        m = _SUM_RE.match(part)
        if m:
            path.append(("sum", parse_ordinal(m.group(1))))
            continue
        raise ValueError(f"bad address segment {part!r}")
    last = parts[-1]
    if last in ("top", "bottom"):
        terminal: tuple = (last,)
    else:
        m = _MID_RE.match(last)
        if not m:
            raise ValueError(f"bad address terminal {last!r}")
        terminal = ("mid", int(m.group(1)))
    return PointAddress(tuple(path), terminal)


@dataclass(frozen=True)
class SummandInfo:
    """One materialized limit-stage summand and its embedding."""

    ordinal: OrdinalNotation
    injection: tuple[int, ...]
    space: MetricSpace
    landmarks: "DiamondLandmarks"


@dataclass(frozen=True, eq=False)
class DiamondLandmarks:
    """Named points and substructure embeddings of one built stage.

    ``subcopies`` maps ``(side, branch)`` to the index injection of the
    half-scaled predecessor copy (successor stages only).  ``summands``
    lists the glued summand embeddings (limit stages only).  ``ell`` is
    always ``mids[0]``, the base point of the stage.
    """

    top: int
    bottom: int
    ell: int
    mids: tuple[int, ...]
    subcopies: dict = field(default_factory=dict)
    summands: tuple[SummandInfo, ...] = ()
    predecessor: Optional[tuple[MetricSpace, "DiamondLandmarks"]] = None


# ---------------------------------------------------------------------------
# size estimation


def estimate_points(spec: DiamondSpec) -> int:
    """Exact point count of ``build(spec)`` without building it."""
    memo: dict[OrdinalNotation, int] = {}

    def count(alpha: OrdinalNotation) -> int:
        got = memo.get(alpha)
        if got is not None:
            return got
        if alpha == ONE:
            val = spec.branches + 2
        elif alpha.is_successor:
            val = 2 + spec.branches + 2 * spec.branches * (
                count(alpha.predecessor()) - 2)
        else:
            val = 2 + sum(
                count(fundamental_sequence(alpha, m)) - 2
                for m in range(1, spec.limit_width + 1))
        memo[alpha] = val
        return val

    return count(spec.alpha)


# ---------------------------------------------------------------------------
# construction


def build(spec: DiamondSpec, budget: int = DEFAULT_BUDGET
          ) -> tuple[MetricSpace, DiamondLandmarks]:
    """Build the truncation described by ``spec``.

    Raises :class:`BudgetExceededError` before allocating anything when the
    exact point count would exceed ``budget``.
    """
    estimate = estimate_points(spec)
    if estimate > budget:
        raise BudgetExceededError(
            f"spec needs {estimate} points, budget is {budget}",
            estimate=estimate, budget=budget)
    return _build(spec)


_build_cache: dict[DiamondSpec, tuple[MetricSpace, DiamondLandmarks]] = {}


def build_cached(spec: DiamondSpec, budget: int = DEFAULT_BUDGET
                 ) -> tuple[MetricSpace, DiamondLandmarks]:
    """Like :func:`build`, but reuse one space object per spec.

    Sharing the object lets norm caches keyed on space identity carry
    over between commands and checks.  The budget guard applies even on
    a cache hit, so behaviour does not depend on cache warmth.
    """
    estimate = estimate_points(spec)
    if estimate > budget:
        raise BudgetExceededError(
            f"spec needs {estimate} points, budget is {budget}",
            estimate=estimate, budget=budget)
    hit = _build_cache.get(spec)
    if hit is None:
        hit = _build(spec)
        _build_cache[spec] = hit
    return hit


def _outer_dist(u: int, v: int) -> Fraction:
    # Outer vertices: 0 = top, 1 = bottom, >= 2 midpoints.
    if u == v:
        return Fraction(0)
    if (u, v) in ((0, 1), (1, 0)):
        return _TWO
    if u < 2 or v < 2:
        return _ONE_F
    return _TWO


def _build(spec: DiamondSpec) -> tuple[MetricSpace, DiamondLandmarks]:
    if spec.alpha == ONE:
        return _build_base(spec.branches)
    if spec.alpha.is_successor:
        return _build_successor(spec)
    return _build_limit(spec)


def _build_base(n: int) -> tuple[MetricSpace, DiamondLandmarks]:
    labels = [str(PointAddress((), ("top",))),
              str(PointAddress((), ("bottom",)))]
    labels += [str(PointAddress((), ("mid", i))) for i in range(1, n + 1)]
    size = n + 2
    dist = [[Fraction(0)] * size for _ in range(size)]
    for u in range(size):
        for v in range(u + 1, size):
            dist[u][v] = dist[v][u] = _outer_dist(u, v)
    landmarks = DiamondLandmarks(
        top=0, bottom=1, ell=2, mids=tuple(range(2, n + 2)))
    return MetricSpace(labels, dist, base_point=2), landmarks


def _build_successor(spec: DiamondSpec) -> tuple[MetricSpace, DiamondLandmarks]:
    n = spec.branches
    pred_spec = DiamondSpec(spec.alpha.predecessor(), n, spec.limit_width)
    pred_space, pred_lm = _build(pred_spec)
    p_top, p_bot = pred_lm.top, pred_lm.bottom
    interior = [p for p in range(len(pred_space)) if p not in (p_top, p_bot)]

    copies = [("+", j) for j in range(1, n + 1)]
    copies += [("-", i) for i in range(1, n + 1)]

    def ends(copy: tuple) -> tuple[int, int]:
        side, br = copy
        return (0, 1 + br) if side == "+" else (1 + br, 1)

    labels = [str(PointAddress((), ("top",))),
              str(PointAddress((), ("bottom",)))]
    labels += [str(PointAddress((), ("mid", i))) for i in range(1, n + 1)]

    injections: dict[tuple, list[int]] = {}
    owner: list[tuple] = []          # copy owning each interior ambient point
    inner: list[int] = []            # its predecessor index
    next_idx = n + 2
    pred_addr = [pred_space.label(p) for p in range(len(pred_space))]
    for copy in copies:
        te, be = ends(copy)
        inj = [0] * len(pred_space)
        inj[p_top], inj[p_bot] = te, be
        for p in interior:
            inj[p] = next_idx
            labels.append(str(parse_address(pred_addr[p]).prefixed(copy)))
            owner.append(copy)
            inner.append(p)
            next_idx += 1
        injections[copy] = inj

    size = next_idx
    # Distances from each predecessor interior point to the copy poles, at
    # the half scale of the embedded copies.  Shared across all 2n copies.
    dt = {p: pred_space.distance(p, p_top) * _HALF for p in interior}
    db = {p: pred_space.distance(p, p_bot) * _HALF for p in interior}

    dist = [[Fraction(0)] * size for _ in range(size)]

    def put(u: int, v: int, value: Fraction) -> None:
        dist[u][v] = value
        dist[v][u] = value

    n_outer = n + 2
    for u in range(n_outer):
        for v in range(u + 1, n_outer):
            put(u, v, _outer_dist(u, v))

    copy_of = {c: k for k, c in enumerate(copies)}
    end_pairs = {c: ends(c) for c in copies}

    for a in range(n_outer, size):
        ca, pa = owner[a - n_outer], inner[a - n_outer]
        ta, ba = end_pairs[ca]
        da_t, da_b = dt[pa], db[pa]
        for w in range(n_outer):
            put(a, w, min(da_t + _outer_dist(ta, w), da_b + _outer_dist(ba, w)))
        for b in range(n_outer, a):
            cb, pb = owner[b - n_outer], inner[b - n_outer]
            if ca is cb or copy_of[ca] == copy_of[cb]:
                put(a, b, pred_space.distance(pa, pb) * _HALF)
                continue
            tb, bb = end_pairs[cb]
            db_t, db_b = dt[pb], db[pb]
            best = da_t + _outer_dist(ta, tb) + db_t
            for left, e1 in ((da_t, ta), (da_b, ba)):
                for right, e2 in ((db_t, tb), (db_b, bb)):
                    cand = left + _outer_dist(e1, e2) + right
                    if cand < best:
                        best = cand
            put(a, b, best)

    landmarks = DiamondLandmarks(
        top=0, bottom=1, ell=2, mids=tuple(range(2, n + 2)),
        subcopies={c: tuple(injections[c]) for c in copies},
        predecessor=(pred_space, pred_lm))
    return MetricSpace(labels, dist, base_point=2), landmarks


def _build_limit(spec: DiamondSpec) -> tuple[MetricSpace, DiamondLandmarks]:
    betas = [fundamental_sequence(spec.alpha, m)
             for m in range(1, spec.limit_width + 1)]
    builds = [_build(DiamondSpec(beta, spec.branches, spec.limit_width))
              for beta in betas]

    labels = [str(PointAddress((), ("top",))),
              str(PointAddress((), ("bottom",)))]
    injections: list[list[int]] = []
    owner: list[int] = []
    dtop: list[Fraction] = []
    dbot: list[Fraction] = []
    inner: list[int] = []
    next_idx = 2
    for m, ((bspace, blm), beta) in enumerate(zip(builds, betas)):
        seg = ("sum", beta)
        inj = [0] * len(bspace)
        inj[blm.top], inj[blm.bottom] = 0, 1
        for p in range(len(bspace)):
            if p in (blm.top, blm.bottom):
                continue
            inj[p] = next_idx
            labels.append(str(parse_address(bspace.label(p)).prefixed(seg)))
            owner.append(m)
            inner.append(p)
            dtop.append(bspace.distance(p, blm.top))
            dbot.append(bspace.distance(p, blm.bottom))
            next_idx += 1
        injections.append(inj)

    size = next_idx
    dist = [[Fraction(0)] * size for _ in range(size)]

    def put(u: int, v: int, value: Fraction) -> None:
        dist[u][v] = value
        dist[v][u] = value

    put(0, 1, _TWO)
    for a in range(2, size):
        ma, pa = owner[a - 2], inner[a - 2]
        put(a, 0, dtop[a - 2])
        put(a, 1, dbot[a - 2])
        for b in range(2, a):
            mb, pb = owner[b - 2], inner[b - 2]
            if ma == mb:
                put(a, b, builds[ma][0].distance(pa, pb))
            else:
                put(a, b, min(dtop[a - 2] + dtop[b - 2],
                              dbot[a - 2] + dbot[b - 2]))

    first_space, first_lm = builds[0]
    inj0 = injections[0]
    landmarks = DiamondLandmarks(
        top=0, bottom=1,
        ell=inj0[first_lm.ell],
        mids=tuple(inj0[p] for p in first_lm.mids),
        summands=tuple(
            SummandInfo(beta, tuple(inj), bspace, blm)
            for beta, inj, (bspace, blm) in zip(betas, injections, builds)))
    return MetricSpace(labels, dist, base_point=landmarks.ell), landmarks


# ---------------------------------------------------------------------------
# derived structure


def subcopy_map(landmarks: DiamondLandmarks, side: str, branch: int
                ) -> tuple[int, ...]:
    """Index injection of the half-scaled copy ``(side, branch)``."""
    if not landmarks.subcopies:
        raise ValueError("this stage has no half-scaled subcopies")
    key = (side, branch)
    if key not in landmarks.subcopies:
        raise ValueError(f"no subcopy {side}({branch})")
    return landmarks.subcopies[key]


def finest_edges(space: MetricSpace) -> tuple[tuple[int, int], ...]:
    """Pairs with no third point lying strictly between them.

    A point z is strictly between x and y when d(x,z) + d(z,y) = d(x,y)
    with both summands positive.  Runs on the integer-scaled matrix.
    """
    mat, _ = space.integer_scaled()
    n = len(space)
    big = int(mat.max()) * 4 + 1
    out = []
    diag = np.arange(n)
    for i in range(n):
        through = mat[i][:, None] + mat
        through[i, :] = big
        through[diag, diag] = big
        slack = through.min(axis=0)
        for j in range(i + 1, n):
            if slack[j] > mat[i, j]:
                out.append((i, j))
    return tuple(out)


def shortest_path_closure(space: MetricSpace,
                          edges: Sequence[tuple[int, int]]
                          ) -> list[list[Fraction]]:
    """All-pairs shortest paths over ``edges`` with exact results.

    Weights are the space distances of the edge pairs.  Runs min-plus
    iterations on integer-scaled values; raises when the edges do not
    connect the space.
    """
    mat, scale = space.integer_scaled()
    n = len(space)
    inf = (int(mat.max()) + 1) * (n + 1)
    if inf >= 1 << 60:
        raise OverflowError("scaled path lengths exceed the int64 range")
    d = np.full((n, n), inf, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for i, j in edges:
        w = mat[i, j]
        if w < d[i, j]:
            d[i, j] = w
            d[j, i] = w
    for k in range(n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    if (d >= inf).any():
        raise ValueError("edge set does not connect the space")
    return [[Fraction(int(d[i, j]), scale) for j in range(n)]
            for i in range(n)]
