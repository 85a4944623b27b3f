"""Exact-rational Lipschitz functions on finite metric spaces.

Functions may be partial; :func:`mcshane_extend` produces the smallest
total extension with the same Lipschitz constant.  All values and
constants are :class:`~fractions.Fraction`, so constants like "exactly 1"
are meaningful statements, not tolerance checks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .metric import MetricSpace

__all__ = [
    "LipschitzFunction",
    "lip_constant",
    "is_lipschitz_at_most",
    "mcshane_extend",
    "glue_poles",
    "pull_to_copy",
    "distance_functional",
]

_HALF = Fraction(1, 2)


class LipschitzFunction:
    """A rational-valued function on a subset of a metric space."""

    def __init__(self, space: MetricSpace,
                 values: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]]):
        items = values.items() if isinstance(values, Mapping) else values
        entries = []
        seen = set()
        for idx, val in items:
            if not 0 <= idx < len(space):
                raise IndexError(f"point index {idx} out of range")
            if idx in seen:
                raise ValueError(f"duplicate value for point {idx}")
            seen.add(idx)
            entries.append((idx, Fraction(val)))
        entries.sort()
        self._space = space
        self._entries = tuple(entries)
        self._by_index = dict(entries)
        self._lip: Optional[Fraction] = None

    @property
    def space(self) -> MetricSpace:
        return self._space

    @property
    def entries(self) -> tuple[tuple[int, Fraction], ...]:
        return self._entries

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(idx for idx, _ in self._entries)

    @property
    def is_total(self) -> bool:
        return len(self._entries) == len(self._space)

    def value(self, idx: int) -> Fraction:
        return self._by_index[idx]

    def defined_at(self, idx: int) -> bool:
        return idx in self._by_index

    def shift(self, offset: Fraction) -> "LipschitzFunction":
        off = Fraction(offset)
        return LipschitzFunction(
            self._space, [(i, v + off) for i, v in self._entries])

    def shifted_to_vanish(self, idx: int) -> "LipschitzFunction":
        """Subtract the value at ``idx`` so the result vanishes there."""
        return self.shift(-self.value(idx))

    def scale(self, factor: Fraction) -> "LipschitzFunction":
        fac = Fraction(factor)
        return LipschitzFunction(
            self._space, [(i, v * fac) for i, v in self._entries])

    def __eq__(self, other) -> bool:
        if not isinstance(other, LipschitzFunction):
            return NotImplemented
        return self._space is other._space and self._entries == other._entries

    def __hash__(self):
        return hash((id(self._space), self._entries))

    def __repr__(self) -> str:
        return (f"LipschitzFunction({len(self._entries)} of "
                f"{len(self._space)} points)")


def lip_constant(func: LipschitzFunction) -> Fraction:
    """Exact Lipschitz constant over the function's domain."""
    if func._lip is not None:
        return func._lip
    best = Fraction(0)
    entries = func.entries
    space = func.space
    for a in range(len(entries)):
        ia, va = entries[a]
        row = space.dist_matrix[ia]
        for b in range(a + 1, len(entries)):
            ib, vb = entries[b]
            ratio = abs(va - vb) / row[ib]
            if ratio > best:
                best = ratio
    func._lip = best
    return best


def is_lipschitz_at_most(func: LipschitzFunction, bound: Fraction) -> bool:
    """Check lip(func) <= bound without forming quotients."""
    entries = func.entries
    space = func.space
    for a in range(len(entries)):
        ia, va = entries[a]
        row = space.dist_matrix[ia]
        for b in range(a + 1, len(entries)):
            ib, vb = entries[b]
            if abs(va - vb) > bound * row[ib]:
                return False
    return True


def mcshane_extend(func: LipschitzFunction,
                   constant: Optional[Fraction] = None) -> LipschitzFunction:
    """Extend to the whole space keeping the Lipschitz constant.

    Uses the inf-convolution formula f(x) = min over the domain of
    f(s) + L * d(x, s).  With ``constant`` given, that value is used as L
    after checking it dominates the actual constant.
    """
    space = func.space
    if not func.entries:
        return LipschitzFunction(space, [(i, Fraction(0))
                                         for i in range(len(space))])
    lip = lip_constant(func)
    if constant is not None:
        constant = Fraction(constant)
        if constant < lip:
            raise ValueError("requested constant is below the actual one")
        lip = constant
    values = []
    dom = func.entries
    for x in range(len(space)):
        if func.defined_at(x):
            values.append((x, func.value(x)))
            continue
        row = space.dist_matrix[x]
        values.append((x, min(v + lip * row[s] for s, v in dom)))
    return LipschitzFunction(space, values)


def distance_functional(space: MetricSpace, anchor: int,
                        vanish_at: Optional[int] = None) -> LipschitzFunction:
    """The function d(., anchor), shifted to vanish at ``vanish_at``.

    Its Lipschitz constant is exactly 1 whenever the space has a second
    point, and the constant is attained at every pair containing the
    anchor.
    """
    if vanish_at is None:
        vanish_at = space.base_point
    row = space.dist_matrix[anchor]
    off = row[vanish_at]
    return LipschitzFunction(
        space, [(i, row[i] - off) for i in range(len(space))])


def pull_to_copy(space: MetricSpace, landmarks, side: str, branch: int,
                 func: LipschitzFunction) -> LipschitzFunction:
    """Transport a predecessor-stage function onto one half-scaled copy.

    ``func`` must be total on the predecessor space.  The result is a
    partial function on ``space`` whose domain is the copy image, with
    values halved to match the copy's halved distances: a 1-Lipschitz
    input stays 1-Lipschitz on its copy, exactly.
    """
    if not landmarks.subcopies:
        raise ValueError("landmarks do not describe a successor stage")
    pred_space, _ = landmarks.predecessor
    if func.space is not pred_space:
        raise ValueError("function does not live on the predecessor space")
    if not func.is_total:
        raise ValueError("function must be total on the predecessor")
    injection = landmarks.subcopies.get((side, branch))
    if injection is None:
        raise ValueError(f"no copy {side}({branch})")
    return LipschitzFunction(
        space, [(injection[p], func.value(p) * _HALF)
                for p in range(len(pred_space))])


def glue_poles(space: MetricSpace, landmarks, plus_branch: int,
               f_plus: LipschitzFunction, minus_branch: int,
               f_minus: LipschitzFunction) -> LipschitzFunction:
    """Join two one-copy functions across the stage base point.

    ``f_plus`` lives on the copy hanging from the top pole at
    ``plus_branch``; ``f_minus`` on the copy reaching the bottom pole at
    ``minus_branch``.  Both must be partial functions whose domain is
    exactly their copy, 1-Lipschitz there, and zero at the copy's image
    of the predecessor base.  Branch 1 is excluded on both sides so the
    copies avoid the stage base, which the glued function pins to zero.
    The combined partial function is checked to be 1-Lipschitz across
    the copies, then extended to the whole stage.
    """
    if not landmarks.subcopies:
        raise ValueError("landmarks do not describe a successor stage")
    _, pred_lm = landmarks.predecessor
    if plus_branch == 1 or minus_branch == 1:
        raise ValueError("branch 1 carries the base point and cannot be used")
    if plus_branch == minus_branch:
        raise ValueError("the two copies must hang from distinct branches")

    values: list[tuple[int, Fraction]] = [(landmarks.ell, Fraction(0))]
    for side, branch, piece in (("+", plus_branch, f_plus),
                                ("-", minus_branch, f_minus)):
        injection = landmarks.subcopies.get((side, branch))
        if injection is None:
            raise ValueError(f"no copy {side}({branch})")
        if piece.space is not space:
            raise ValueError("pieces must be partial functions on the stage")
        if piece.domain != tuple(sorted(injection)):
            raise ValueError(
                f"piece domain is not exactly the copy {side}({branch})")
        if not is_lipschitz_at_most(piece, Fraction(1)):
            raise ValueError(f"piece on copy {side}({branch}) exceeds "
                             "Lipschitz constant 1")
        origin = injection[pred_lm.ell]
        if piece.value(origin) != 0:
            raise ValueError(
                f"piece on copy {side}({branch}) must vanish at the "
                "copy image of the predecessor base")
        values.extend(piece.entries)

    joined = LipschitzFunction(space, values)
    if not is_lipschitz_at_most(joined, Fraction(1)):
        raise ValueError("joined partial function exceeds constant 1 "
                         "across the copies")
    return mcshane_extend(joined, Fraction(1))
