"""Finitely supported vectors over a pointed metric space and their norms.

A vector assigns rational coefficients to points; the base point carries
no information and is dropped from every vector.  The norm is the cost of
the cheapest transport plan moving the positive part onto the negative
part, with any imbalance routed through the base point.  Every norm
computation also builds a feasible dual potential and checks that the
primal and dual values agree exactly; a failed check raises instead of
returning a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional
from weakref import WeakKeyDictionary

from .errors import CertificateError
from .lipschitz import (LipschitzFunction, is_lipschitz_at_most,
                        mcshane_extend)
from .metric import MetricSpace

__all__ = [
    "FreeVector",
    "TransportCertificate",
    "molecule",
    "point_mass",
    "free_norm",
    "norm_value",
    "verify_certificate",
    "norm_statistics",
    "reset_norm_statistics",
]

_ZERO = Fraction(0)

_stats = {"norms": 0, "gap_checks": 0, "gap_failures": 0}


def norm_statistics() -> dict:
    """Counters for norm computations and primal-dual agreement checks."""
    return dict(_stats)


def reset_norm_statistics() -> None:
    for key in _stats:
        _stats[key] = 0


class FreeVector:
    """Immutable rational combination of point evaluations.

    Entries are kept sorted by point index with zero coefficients and any
    base-point coefficient removed, so equal vectors have equal entries.
    """

    __slots__ = ("_space", "_entries", "__weakref__")

    def __init__(self, space: MetricSpace,
                 entries: Iterable[tuple[int, Fraction]] = ()):
        acc: dict[int, Fraction] = {}
        base = space.base_point
        for idx, coeff in entries:
            if not 0 <= idx < len(space):
                raise IndexError(f"point index {idx} out of range")
            acc[idx] = acc.get(idx, _ZERO) + Fraction(coeff)
        cleaned = sorted((i, c) for i, c in acc.items()
                         if c != 0 and i != base)
        self._space = space
        self._entries = tuple(cleaned)

    @property
    def space(self) -> MetricSpace:
        return self._space

    @property
    def entries(self) -> tuple[tuple[int, Fraction], ...]:
        return self._entries

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._entries)

    @property
    def is_zero(self) -> bool:
        return not self._entries

    @property
    def total_mass(self) -> Fraction:
        return sum((c for _, c in self._entries), _ZERO)

    def coefficient(self, idx: int) -> Fraction:
        for i, c in self._entries:
            if i == idx:
                return c
        return _ZERO

    def _require_same_space(self, other: "FreeVector") -> None:
        if self._space is not other._space:
            raise ValueError("vectors live over different spaces")

    def __add__(self, other: "FreeVector") -> "FreeVector":
        if not isinstance(other, FreeVector):
            return NotImplemented
        self._require_same_space(other)
        return FreeVector(self._space, self._entries + other._entries)

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __sub__(self, other: "FreeVector") -> "FreeVector":
        if not isinstance(other, FreeVector):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "FreeVector":
        return FreeVector(self._space,
                          [(i, -c) for i, c in self._entries])

    def __mul__(self, scalar) -> "FreeVector":
        fac = Fraction(scalar)
        return FreeVector(self._space,
                          [(i, c * fac) for i, c in self._entries])

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "FreeVector":
        return self * (Fraction(1) / Fraction(scalar))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeVector):
            return NotImplemented
        return self._space is other._space and self._entries == other._entries

    def __hash__(self):
        return hash((id(self._space), self._entries))

    def pair(self, func: LipschitzFunction) -> Fraction:
        """Evaluate sum of coeff * func(point) over the entries."""
        if func.space is not self._space:
            raise ValueError("function lives over a different space")
        return sum((c * func.value(i) for i, c in self._entries), _ZERO)

    def mapped(self, target: MetricSpace,
               index_map: Mapping[int, int]) -> "FreeVector":
        """Reindex the entries into another space.

        ``index_map`` sends point indices of this space to indices of
        ``target``; it must cover the support.  Distances and the base
        point are the caller's responsibility, as with restrictions.
        """
        try:
            moved = [(index_map[i], c) for i, c in self._entries]
        except KeyError as exc:
            raise ValueError(f"index map misses point {exc.args[0]}")
        return FreeVector(target, moved)

    def __repr__(self) -> str:
        parts = [f"{c}*[{self._space.label(i)}]" for i, c in self._entries]
        return "FreeVector(" + (" + ".join(parts) if parts else "0") + ")"


def molecule(space: MetricSpace, x: int, y: int) -> FreeVector:
    """The normalized two-point vector (delta_x - delta_y) / d(x, y)."""
    if x == y:
        raise ValueError("a molecule needs two distinct points")
    inv = Fraction(1) / space.distance(x, y)
    return FreeVector(space, [(x, inv), (y, -inv)])


def point_mass(space: MetricSpace, x: int, coeff=1) -> FreeVector:
    return FreeVector(space, [(x, Fraction(coeff))])


# ---------------------------------------------------------------------------
# exact minimum-cost transport


class _Edge:
    __slots__ = ("to", "cap", "cost", "rev")

    def __init__(self, to: int, cap: Fraction, cost: Fraction, rev: int):
        self.to = to
        self.cap = cap
        self.cost = cost
        self.rev = rev


def _min_cost_transport(space: MetricSpace,
                        pos: list[tuple[int, Fraction]],
                        neg: list[tuple[int, Fraction]]
                        ) -> tuple[Fraction, list[tuple[int, int, Fraction]]]:
    """Cheapest coupling of two equal-mass distributions.

    Successive shortest augmenting paths on the bipartite flow network;
    exact rational arithmetic throughout.
    """
    np_, nn = len(pos), len(neg)
    count = np_ + nn + 2
    src, dst = count - 2, count - 1
    graph: list[list[_Edge]] = [[] for _ in range(count)]

    def link(u: int, v: int, cap: Fraction, cost: Fraction) -> None:
        graph[u].append(_Edge(v, cap, cost, len(graph[v])))
        graph[v].append(_Edge(u, _ZERO, -cost, len(graph[u]) - 1))

    supply = sum((m for _, m in pos), _ZERO)
    for a, (_, m) in enumerate(pos):
        link(src, a, m, _ZERO)
    for b, (_, m) in enumerate(neg):
        link(np_ + b, dst, m, _ZERO)
    cross = []
    for a, (i, _) in enumerate(pos):
        row = space.dist_matrix[i]
        for b, (j, _) in enumerate(neg):
            link(a, np_ + b, supply, row[j])
            cross.append((i, j, graph[np_ + b][-1]))

    total_cost = _ZERO
    pushed = _ZERO
    while True:
        dist: list[Optional[Fraction]] = [None] * count
        dist[src] = _ZERO
        prev: list[Optional[tuple[int, _Edge]]] = [None] * count
        for _ in range(count):
            changed = False
            for u in range(count):
                du = dist[u]
                if du is None:
                    continue
                for edge in graph[u]:
                    if edge.cap <= 0:
                        continue
                    cand = du + edge.cost
                    v = edge.to
                    if dist[v] is None or cand < dist[v]:
                        dist[v] = cand
                        prev[v] = (u, edge)
                        changed = True
            if not changed:
                break
        if dist[dst] is None:
            break
        bottleneck = None
        node = dst
        while node != src:
            u, edge = prev[node]
            if bottleneck is None or edge.cap < bottleneck:
                bottleneck = edge.cap
            node = u
        node = dst
        while node != src:
            u, edge = prev[node]
            edge.cap -= bottleneck
            graph[edge.to][edge.rev].cap += bottleneck
            node = u
        total_cost += bottleneck * dist[dst]
        pushed += bottleneck

    if pushed != supply:
        raise CertificateError("transport network failed to route all mass")
    plan = sorted((i, j, back.cap) for i, j, back in cross if back.cap > 0)
    return total_cost, plan


def _dual_potential(space: MetricSpace, vec: FreeVector,
                    plan: list[tuple[int, int, Fraction]]
                    ) -> dict[int, Fraction]:
    """Feasible potential tight on every plan pair, zero at the base.

    Shortest paths in the difference-constraint graph: distance edges both
    ways between the relevant points, and a negative-weight edge per plan
    pair forcing tightness.  A relaxation surviving all rounds would mean
    the plan was not optimal, so it raises.
    """
    base = space.base_point
    nodes = sorted({base, *vec.support,
                    *(x for x, _, _ in plan), *(y for _, y, _ in plan)})
    pos_of = {v: k for k, v in enumerate(nodes)}
    arcs: list[tuple[int, int, Fraction]] = []
    for u in nodes:
        row = space.dist_matrix[u]
        for v in nodes:
            if u != v:
                arcs.append((pos_of[u], pos_of[v], row[v]))
    for x, y, _ in plan:
        arcs.append((pos_of[x], pos_of[y], -space.distance(x, y)))

    size = len(nodes)
    dist: list[Optional[Fraction]] = [None] * size
    dist[pos_of[base]] = _ZERO
    for round_no in range(size):
        changed = False
        for u, v, w in arcs:
            du = dist[u]
            if du is None:
                continue
            cand = du + w
            if dist[v] is None or cand < dist[v]:
                if round_no == size - 1:
                    raise CertificateError(
                        "transport plan failed the optimality re-check")
                dist[v] = cand
                changed = True
        if not changed:
            break
    return {node: dist[pos_of[node]] for node in nodes}


@dataclass
class TransportCertificate:
    """Matched primal plan and dual potential for one norm value.

    ``plan`` lists (source index, target index, mass) triples; the
    potential is a total function on the space, vanishes at the base
    point, has Lipschitz constant at most 1, and pairs with the vector to
    exactly the plan cost.
    """

    vector: FreeVector
    value: Fraction
    plan: tuple[tuple[int, int, Fraction], ...]
    potential: LipschitzFunction


def _split_parts(vec: FreeVector) -> tuple[list, list]:
    pos = [(i, c) for i, c in vec.entries if c > 0]
    neg = [(i, -c) for i, c in vec.entries if c < 0]
    imbalance = vec.total_mass
    base = vec.space.base_point
    if imbalance > 0:
        neg.append((base, imbalance))
    elif imbalance < 0:
        pos.append((base, -imbalance))
    return pos, neg


def _gap_check(vec: FreeVector, value: Fraction,
               fvals: dict[int, Fraction]) -> None:
    pairing = sum((c * fvals[i] for i, c in vec.entries), _ZERO)
    _stats["gap_checks"] += 1
    if pairing != value:
        _stats["gap_failures"] += 1
        raise CertificateError(
            f"duality gap: transport cost {value} but dual pairing {pairing}")


_value_cache: "WeakKeyDictionary[MetricSpace, dict]" = WeakKeyDictionary()
_cert_cache: "WeakKeyDictionary[MetricSpace, dict]" = WeakKeyDictionary()


def norm_value(vec: FreeVector) -> Fraction:
    """The norm alone, skipping the total-potential certificate.

    Still solves the dual on the support and confirms the exact
    primal-dual match before returning.
    """
    cache = _value_cache.setdefault(vec.space, {})
    hit = cache.get(vec.entries)
    if hit is not None:
        return hit
    pos, neg = _split_parts(vec)
    value, plan = _min_cost_transport(vec.space, pos, neg)
    fvals = _dual_potential(vec.space, vec, plan)
    _gap_check(vec, value, fvals)
    _stats["norms"] += 1
    cache[vec.entries] = value
    return value


def free_norm(vec: FreeVector) -> tuple[Fraction, TransportCertificate]:
    """The norm together with a verifiable optimality certificate."""
    cache = _cert_cache.setdefault(vec.space, {})
    hit = cache.get(vec.entries)
    if hit is not None:
        return hit.value, hit
    pos, neg = _split_parts(vec)
    value, plan = _min_cost_transport(vec.space, pos, neg)
    fvals = _dual_potential(vec.space, vec, plan)
    _gap_check(vec, value, fvals)
    _stats["norms"] += 1
    partial = LipschitzFunction(vec.space, fvals)
    potential = mcshane_extend(partial)
    cert = TransportCertificate(vec, value, tuple(plan), potential)
    cache[vec.entries] = cert
    _value_cache.setdefault(vec.space, {})[vec.entries] = value
    return value, cert


def verify_certificate(cert: TransportCertificate) -> bool:
    """Recheck a certificate from scratch, without the solver.

    Confirms plan feasibility (marginals match the vector with imbalance
    routed through the base), the cost, that the potential is total,
    1-Lipschitz, vanishes at the base, pairs to the claimed value, and is
    tight on every plan pair.  Raises :class:`CertificateError` with the
    first violated condition.
    """
    vec, value = cert.vector, cert.value
    space = vec.space
    base = space.base_point

    out: dict[int, Fraction] = {}
    into: dict[int, Fraction] = {}
    cost = _ZERO
    for x, y, mass in cert.plan:
        if mass <= 0:
            raise CertificateError("plan contains a non-positive mass")
        out[x] = out.get(x, _ZERO) + mass
        into[y] = into.get(y, _ZERO) + mass
        cost += mass * space.distance(x, y)
    pos, neg = _split_parts(vec)
    if out != {i: m for i, m in pos} or into != {j: m for j, m in neg}:
        raise CertificateError("plan marginals do not match the vector")
    if cost != value:
        raise CertificateError(
            f"plan cost {cost} differs from claimed value {value}")

    f = cert.potential
    if f.space is not space:
        raise CertificateError("potential lives over a different space")
    if not f.is_total:
        raise CertificateError("potential is not a total function")
    if f.value(base) != 0:
        raise CertificateError("potential does not vanish at the base point")
    if not is_lipschitz_at_most(f, Fraction(1)):
        raise CertificateError("potential is not 1-Lipschitz")
    if vec.pair(f) != value:
        raise CertificateError(
            f"potential pairs to {vec.pair(f)}, not to {value}")
    for x, y, _ in cert.plan:
        if f.value(x) - f.value(y) != space.distance(x, y):
            raise CertificateError("potential is slack on a plan pair")
    return True
