"""A finite two-player game certifying slow weak-topology derivation.

The adversary presents weak neighborhoods of a target vector: finitely
many Lipschitz functionals with a tolerance ``eta``.  The prover answers
each neighborhood with a unit-ball vector inside it that sits at norm
distance at least ``epsilon`` from the target, and certifies recursively
that both the response and the target keep surviving one level down.  A
verified depth-k transcript is a machine-checkable witness that, against
the presented functional families, the target cannot be separated from
far company in fewer than k rounds of the box-derivation procedure in
:func:`relative_derivation_oracle`.

Transcripts are finite and relative: they quantify over the posed
families only, never over the full weak topology, so they give sound
lower bounds and make no completeness claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InsufficientBranchingError
from .diamond import DiamondLandmarks
from .freespace import FreeVector, free_norm, molecule, norm_value
from .lipschitz import (LipschitzFunction, distance_functional, lip_constant,
                        mcshane_extend)
from .metric import MetricSpace
from .sampling import Sampler

__all__ = [
    "WeakNeighborhood",
    "Move",
    "GameNode",
    "GameTranscript",
    "AdversaryConfig",
    "ADVERSARY_KINDS",
    "adversary_family",
    "spine_points",
    "in_neighborhood",
    "prover_escape",
    "prover_certify",
    "average_lift",
    "midpoint_lift",
    "verify_transcript",
    "VerificationReport",
    "NodeCheck",
    "relative_derivation_oracle",
    "collect_vectors",
    "mutate_transcript",
    "MUTATION_KINDS",
]

_HALF = Fraction(1, 2)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# neighborhoods


class WeakNeighborhood:
    """Vectors whose pairings with a functional family stay near a center.

    Membership is the closed condition |pair(f, v - center)| <= eta for
    every functional f of the family.  Functionals must be total and
    vanish at the base point so the pairings are well defined on the
    whole free space.
    """

    __slots__ = ("_functionals", "_center", "_eta")

    def __init__(self, functionals: Sequence[LipschitzFunction],
                 center: FreeVector, eta: Fraction):
        functionals = tuple(functionals)
        if not functionals:
            raise ValueError("a weak neighborhood needs at least one "
                             "functional")
        space = center.space
        base = space.base_point
        for f in functionals:
            if f.space is not space:
                raise ValueError("functional lives over a different space")
            if not f.is_total:
                raise ValueError("functionals must be total")
            if f.value(base) != 0:
                raise ValueError("functionals must vanish at the base point")
        eta = Fraction(eta)
        if eta <= 0:
            raise ValueError("eta must be positive")
        self._functionals = functionals
        self._center = center
        self._eta = eta

    @property
    def functionals(self) -> tuple[LipschitzFunction, ...]:
        return self._functionals

    @property
    def center(self) -> FreeVector:
        return self._center

    @property
    def eta(self) -> Fraction:
        return self._eta

    @property
    def space(self) -> MetricSpace:
        return self._center.space

    def contains(self, vec: FreeVector) -> bool:
        if vec.space is not self.space:
            raise ValueError("vector lives over a different space")
        diff = vec - self._center
        return all(abs(diff.pair(f)) <= self._eta for f in self._functionals)

    def recentered(self, center: FreeVector) -> "WeakNeighborhood":
        return WeakNeighborhood(self._functionals, center, self._eta)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeakNeighborhood):
            return NotImplemented
        return (self._functionals == other._functionals
                and self._center == other._center
                and self._eta == other._eta)

    def __repr__(self) -> str:
        return (f"WeakNeighborhood({len(self._functionals)} functionals, "
                f"eta={self._eta})")


def in_neighborhood(neighborhood: WeakNeighborhood, vec: FreeVector) -> bool:
    """Exact membership test; closed conditions, so boundaries count."""
    return neighborhood.contains(vec)


# ---------------------------------------------------------------------------
# transcripts


@dataclass(frozen=True)
class Move:
    """One posed neighborhood with the prover's answer and follow-ups."""

    neighborhood: WeakNeighborhood
    response: FreeVector
    response_subtree: "GameNode"
    target_subtree: "GameNode"


@dataclass(frozen=True)
class GameNode:
    """Claim that ``target`` survives ``depth`` rounds at gap ``epsilon``."""

    target: FreeVector
    depth: int
    epsilon: Fraction
    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.depth == 0 and self.moves:
            raise ValueError("depth-0 nodes take no moves")


@dataclass(frozen=True)
class GameTranscript:
    space: MetricSpace
    root: GameNode
    adversary: Optional["AdversaryConfig"] = None


def collect_vectors(tree) -> tuple[FreeVector, ...]:
    """All targets and responses in first-visit order, deduplicated."""
    root = tree.root if isinstance(tree, GameTranscript) else tree
    seen: dict[tuple, FreeVector] = {}

    def walk(node: GameNode) -> None:
        if node.target.entries not in seen:
            seen[node.target.entries] = node.target
        for move in node.moves:
            if move.response.entries not in seen:
                seen[move.response.entries] = move.response
            walk(move.response_subtree)
            walk(move.target_subtree)

    walk(root)
    return tuple(seen.values())


# ---------------------------------------------------------------------------
# adversaries

ADVERSARY_KINDS = ("distance_functions", "random_lipschitz", "adaptive_dual")


@dataclass(frozen=True)
class AdversaryConfig:
    """Seeded recipe for the functional family a game is played against."""

    kind: str
    count: int
    eta: Fraction
    seed: int

    def __post_init__(self):
        if self.kind not in ADVERSARY_KINDS:
            raise ValueError(f"unknown adversary kind {self.kind!r}")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.eta <= 0:
            raise ValueError("eta must be positive")


def spine_points(space: MetricSpace,
                 landmarks: DiamondLandmarks) -> tuple[int, ...]:
    """Points whose distances are blind to swapping branches >= 2.

    The poles plus the entire branch-1 substructure (first copy pair at
    successor stages, first summand at limit stages).  Functionals built
    from these points evaluate identically on all higher branch
    midpoints, at every recursion level, which keeps every escape pair
    available to the prover.
    """
    pts = {landmarks.top, landmarks.bottom}
    if landmarks.summands:
        pts.update(landmarks.summands[0].injection)
    elif landmarks.subcopies:
        pts.update(landmarks.subcopies[("+", 1)])
        pts.update(landmarks.subcopies[("-", 1)])
    else:
        pts.add(landmarks.ell)
    return tuple(sorted(pts))


def adversary_family(space: MetricSpace, landmarks: DiamondLandmarks,
                     config: AdversaryConfig) -> tuple[LipschitzFunction, ...]:
    """Build the fixed functional family for one game.

    The family is drawn once, before play, and every node of the
    transcript is challenged with it; this uniformity is what makes the
    box-derivation soundness argument go through.  The adaptive kind
    harvests dual potentials from norm computations of probe molecules.
    """
    sampler = Sampler(config.seed)
    spine = spine_points(space, landmarks)
    family: list[LipschitzFunction] = []
    if config.kind == "distance_functions":
        for _ in range(config.count):
            family.append(distance_functional(space, sampler.choice(spine)))
    elif config.kind == "random_lipschitz":
        for _ in range(config.count):
            width = 2 + sampler.below(3)
            anchors = sampler.sample(spine, min(width, len(spine)))
            partial = LipschitzFunction(
                space, [(p, sampler.fraction()) for p in anchors])
            constant = lip_constant(partial)
            if constant > 1:
                partial = partial.scale(_ONE / constant)
            total = mcshane_extend(partial)
            family.append(total.shifted_to_vanish(space.base_point))
    else:
        probe = molecule(space, landmarks.top, landmarks.bottom)
        family.append(free_norm(probe)[1].potential)
        while len(family) < config.count:
            x, y = sampler.sample(spine, 2)
            family.append(free_norm(molecule(space, x, y))[1].potential)
    return tuple(family)


# ---------------------------------------------------------------------------
# prover


def _pole_molecule(space: MetricSpace,
                   landmarks: DiamondLandmarks) -> FreeVector:
    return molecule(space, landmarks.top, landmarks.bottom)


def _escape_pair(space: MetricSpace, landmarks: DiamondLandmarks,
                 neighborhood: WeakNeighborhood
                 ) -> tuple[int, int, FreeVector]:
    mids = landmarks.mids
    n = len(mids)
    for i in range(2, n + 1):
        for j in range(i + 1, n + 1):
            gamma = (molecule(space, landmarks.top, mids[j - 1])
                     + molecule(space, mids[i - 1], landmarks.bottom)) * _HALF
            if neighborhood.contains(gamma):
                return i, j, gamma
    raise InsufficientBranchingError(
        f"no branch pair 2 <= i < j <= {n} lands in the posed "
        f"neighborhood; rebuild with more branches",
        branches=n, retry_hint=n + 1)


def prover_escape(space: MetricSpace, landmarks: DiamondLandmarks,
                  neighborhood: WeakNeighborhood) -> FreeVector:
    """Half-sum of two single-branch molecules lying in the neighborhood.

    The neighborhood must be centered at the pole molecule.  Candidates
    exclude branch 1, which carries the base point; the lexicographically
    first qualifying pair (i, j) wins, for determinism.  The returned
    vector differs from the center by half a midpoint-to-midpoint jump,
    so its separation is exactly 1 at every stage.
    """
    if neighborhood.center != _pole_molecule(space, landmarks):
        raise ValueError("neighborhood is not centered at the pole molecule")
    return _escape_pair(space, landmarks, neighborhood)[2]


def _pullback(pred_space: MetricSpace, injection: tuple[int, ...],
              func: LipschitzFunction) -> LipschitzFunction:
    # Copy distances are halved, so doubled values keep the constant and
    # pairings with coefficient-doubled vectors match exactly.
    vals = [2 * func.value(injection[p]) for p in range(len(pred_space))]
    off = vals[pred_space.base_point]
    return LipschitzFunction(
        pred_space, [(p, v - off) for p, v in enumerate(vals)])


def _push_vector(vec: FreeVector, ambient: MetricSpace,
                 injection: tuple[int, ...]) -> FreeVector:
    if vec.total_mass != 0:
        raise ValueError("only balanced vectors transfer isometrically "
                         "into a copy")
    return FreeVector(ambient,
                      [(injection[i], 2 * c) for i, c in vec.entries])


def _push_node(node: GameNode, ambient: MetricSpace,
               injection: tuple[int, ...],
               family: tuple[LipschitzFunction, ...],
               eta: Fraction) -> GameNode:
    target = _push_vector(node.target, ambient, injection)
    moves = []
    for move in node.moves:
        response = _push_vector(move.response, ambient, injection)
        moves.append(Move(
            WeakNeighborhood(family, target, eta),
            response,
            _push_node(move.response_subtree, ambient, injection, family, eta),
            _push_node(move.target_subtree, ambient, injection, family, eta)))
    return GameNode(target, node.depth, node.epsilon, tuple(moves))


def _combine(a: GameNode, b: GameNode) -> GameNode:
    if a.depth != b.depth:
        raise ValueError("mismatched depths")
    if a.epsilon != b.epsilon:
        raise ValueError("mismatched epsilons")
    if len(a.moves) != len(b.moves):
        raise ValueError("mismatched move counts")
    target = (a.target + b.target) * _HALF
    moves = []
    for ma, mb in zip(a.moves, b.moves):
        if (ma.neighborhood.functionals != mb.neighborhood.functionals
                or ma.neighborhood.eta != mb.neighborhood.eta):
            raise ValueError("paired moves answer different challenges")
        response = (ma.response + mb.response) * _HALF
        moves.append(Move(
            ma.neighborhood.recentered(target),
            response,
            _combine(ma.response_subtree, mb.response_subtree),
            _combine(ma.target_subtree, mb.target_subtree)))
    return GameNode(target, a.depth, a.epsilon, tuple(moves))


def _supported_within(node: GameNode, allowed: frozenset[int]) -> bool:
    return all(set(v.support) <= allowed for v in collect_vectors(node))


def average_lift(space: MetricSpace, landmarks: DiamondLandmarks,
                 plus_branch: int, node_plus: GameNode,
                 minus_branch: int, node_minus: GameNode) -> GameNode:
    """Average two one-copy certificates into one for the half-sum.

    The inputs must live in the copies hanging at ``plus_branch`` (from
    the top pole) and ``minus_branch`` (to the bottom pole), with
    distinct branches >= 2, equal depths, epsilons, and challenge
    families.  Each combined response averages the sub-responses; its
    pairings then deviate by at most the same eta, and the separation of
    the average is the average of the separations because the two halves
    live in copies joined only through poles.
    """
    if plus_branch < 2 or minus_branch < 2:
        raise ValueError("branch 1 carries the base point and cannot be used")
    if plus_branch == minus_branch:
        raise ValueError("the two copies must hang from distinct branches")
    plus_inj = landmarks.subcopies.get(("+", plus_branch))
    minus_inj = landmarks.subcopies.get(("-", minus_branch))
    if plus_inj is None or minus_inj is None:
        raise ValueError("branch out of range for this stage")
    if not _supported_within(node_plus, frozenset(plus_inj)):
        raise ValueError("support leaks outside the designated top copy")
    if not _supported_within(node_minus, frozenset(minus_inj)):
        raise ValueError("support leaks outside the designated bottom copy")
    return _combine(node_plus, node_minus)


def midpoint_lift(node: GameNode, shift: FreeVector) -> GameNode:
    """Certificate for the midpoint of the target with a unit-ball vector.

    Every vector v in the tree becomes (v + shift) / 2 and every epsilon
    is halved; neighborhoods are recentered at the moved targets.
    Pairings of moved differences are exactly half the originals, so
    membership survives with the original eta, and separations halve.
    """
    if norm_value(shift) > 1:
        raise ValueError("the shift vector must lie in the unit ball")

    def lift(n: GameNode) -> GameNode:
        target = (n.target + shift) * _HALF
        moves = []
        for move in n.moves:
            moves.append(Move(
                move.neighborhood.recentered(target),
                (move.response + shift) * _HALF,
                lift(move.response_subtree),
                lift(move.target_subtree)))
        return GameNode(target, n.depth, n.epsilon * _HALF, tuple(moves))

    return lift(node)


def _stage_height(landmarks: DiamondLandmarks) -> Optional[int]:
    height = 0
    current = landmarks
    while True:
        if current.summands:
            return None
        if not current.subcopies:
            return height + 1
        height += 1
        current = current.predecessor[1]


def _certify_pole(space: MetricSpace, landmarks: DiamondLandmarks,
                  depth: int, family: tuple[LipschitzFunction, ...],
                  eta: Fraction, epsilon: Fraction) -> GameNode:
    target = _pole_molecule(space, landmarks)
    if depth == 0:
        return GameNode(target, 0, epsilon, ())
    hood = WeakNeighborhood(family, target, eta)
    i, j, gamma = _escape_pair(space, landmarks, hood)
    if depth == 1:
        response_node = GameNode(gamma, 0, epsilon, ())
    else:
        pred_space, pred_lm = landmarks.predecessor
        plus_inj = landmarks.subcopies[("+", j)]
        minus_inj = landmarks.subcopies[("-", i)]
        fam_plus = tuple(_pullback(pred_space, plus_inj, f) for f in family)
        fam_minus = tuple(_pullback(pred_space, minus_inj, f) for f in family)
        sub_plus = _certify_pole(pred_space, pred_lm, depth - 1,
                                 fam_plus, eta, epsilon)
        sub_minus = _certify_pole(pred_space, pred_lm, depth - 1,
                                  fam_minus, eta, epsilon)
        node_plus = _push_node(sub_plus, space, plus_inj, family, eta)
        node_minus = _push_node(sub_minus, space, minus_inj, family, eta)
        response_node = average_lift(space, landmarks, j, node_plus,
                                     i, node_minus)
        if response_node.target != gamma:
            raise AssertionError("combined certificate misses the escape "
                                 "vector")
    target_node = _certify_pole(space, landmarks, depth - 1,
                                family, eta, epsilon)
    move = Move(hood, gamma, response_node, target_node)
    return GameNode(target, depth, epsilon, (move,))


def prover_certify(space: MetricSpace, landmarks: DiamondLandmarks,
                   depth: int, adversary: AdversaryConfig,
                   epsilon: Fraction = _ONE) -> GameTranscript:
    """Play the pole-molecule game to the requested depth.

    The stage must be a finite successor tower tall enough for the
    depth; limit stages are not playable directly (certify a summand
    instead).  Each level escapes into two fresh branch copies, the
    half-molecules there restate the pole molecule one stage down, and
    the recursive certificates are pushed into the copies and averaged.
    Deterministic given the adversary seed.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    epsilon = Fraction(epsilon)
    height = _stage_height(landmarks)
    if depth > 0:
        if height is None:
            raise ValueError("limit stages are not playable; certify a "
                             "summand stage instead")
        if depth > height:
            raise ValueError(f"stage supports depth at most {height}, "
                             f"requested {depth}")
    if depth == 0:
        root = GameNode(_pole_molecule(space, landmarks), 0, epsilon, ())
        return GameTranscript(space, root, adversary)
    family = adversary_family(space, landmarks, adversary)
    root = _certify_pole(space, landmarks, depth, family,
                         Fraction(adversary.eta), epsilon)
    return GameTranscript(space, root, adversary)


# ---------------------------------------------------------------------------
# verifier


@dataclass(frozen=True)
class NodeCheck:
    path: str
    ok: bool
    condition: str
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple[NodeCheck, ...]

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> tuple[NodeCheck, ...]:
        return tuple(e for e in self.entries if not e.ok)


def verify_transcript(space: MetricSpace, tree) -> VerificationReport:
    """Recheck every invariant of a transcript, node by node.

    Independent of how the transcript was produced: only norms and
    pairings are consulted.  Each node contributes one entry; a failing
    entry names the first violated condition on that node.
    """
    root = tree.root if isinstance(tree, GameTranscript) else tree
    if isinstance(tree, GameTranscript) and tree.space is not space:
        raise ValueError("transcript lives over a different space")
    entries: list[NodeCheck] = []

    def fail(path: str, condition: str, detail: str) -> None:
        entries.append(NodeCheck(path, False, condition, detail))

    def walk(node: GameNode, path: str) -> None:
        if node.target.space is not space:
            fail(path, "space", "target lives over a different space")
            return
        tnorm = norm_value(node.target)
        if tnorm > 1:
            fail(path, "unit-ball", f"target norm {tnorm} exceeds 1")
            return
        if node.depth == 0:
            if node.moves:
                fail(path, "leaf-moves", "depth-0 node carries moves")
                return
            entries.append(NodeCheck(path, True, "", ""))
            return
        for k, move in enumerate(node.moves):
            hood = move.neighborhood
            if hood.center != node.target:
                fail(path, "neighborhood-center",
                     f"move {k} is not centered at the node target")
                return
            if not hood.contains(move.response):
                fail(path, "neighborhood-membership",
                     f"move {k} response escapes the posed neighborhood")
                return
            rnorm = norm_value(move.response)
            if rnorm > 1:
                fail(path, "unit-ball",
                     f"move {k} response norm {rnorm} exceeds 1")
                return
            sep = norm_value(move.response - node.target)
            if sep < node.epsilon:
                fail(path, "separation",
                     f"move {k} separation {sep} below {node.epsilon}")
                return
            for sub, name in ((move.response_subtree, "response"),
                              (move.target_subtree, "target")):
                if sub.depth != node.depth - 1:
                    fail(path, "subtree-depth",
                         f"move {k} {name} subtree depth {sub.depth}, "
                         f"expected {node.depth - 1}")
                    return
                if sub.epsilon != node.epsilon:
                    fail(path, "subtree-epsilon",
                         f"move {k} {name} subtree changes epsilon")
                    return
            if move.response_subtree.target != move.response:
                fail(path, "subtree-response-target",
                     f"move {k} follow-up does not certify the response")
                return
            if move.target_subtree.target != node.target:
                fail(path, "subtree-target-target",
                     f"move {k} follow-up does not certify the target")
                return
        entries.append(NodeCheck(path, True, "", ""))
        for k, move in enumerate(node.moves):
            walk(move.response_subtree, f"{path}.m{k}.r")
            walk(move.target_subtree, f"{path}.m{k}.t")

    walk(root, "root")
    return VerificationReport(tuple(entries))


# ---------------------------------------------------------------------------
# box-derivation oracle


def relative_derivation_oracle(space: MetricSpace,
                               candidates: Iterable[FreeVector],
                               functionals: Sequence[LipschitzFunction],
                               eta: Fraction, epsilon: Fraction,
                               rounds: int) -> tuple[FreeVector, ...]:
    """Iterate the single-box derivation over a finite candidate set.

    A candidate survives a round when its eta-box (with respect to the
    given functionals) inside the current survivor set has norm diameter
    at least epsilon.  With an empty functional list every box is the
    whole survivor set.  Exact arithmetic; survivors shrink monotonically
    with the round count.
    """
    pool: dict[tuple, FreeVector] = {}
    for v in candidates:
        if v.space is not space:
            raise ValueError("candidate lives over a different space")
        if norm_value(v) > 1:
            raise ValueError("candidates must lie in the unit ball")
        pool.setdefault(v.entries, v)
    for f in functionals:
        if f.space is not space or not f.is_total:
            raise ValueError("functionals must be total on the space")
    survivors = list(pool.values())
    for _ in range(rounds):
        if not survivors:
            break
        kept = []
        for v in survivors:
            box = [w for w in survivors
                   if all(abs((w - v).pair(f)) <= eta for f in functionals)]
            diameter = Fraction(0)
            for a in range(len(box)):
                for b in range(a + 1, len(box)):
                    d = norm_value(box[a] - box[b])
                    if d > diameter:
                        diameter = d
            if diameter >= epsilon:
                kept.append(v)
        survivors = kept
    return tuple(survivors)


# ---------------------------------------------------------------------------
# mutation fuzzing

MUTATION_KINDS = ("inflate-response", "shift-functional", "double-epsilon",
                  "tamper-subtree-target", "drop-response-entry")


def _move_sites(node: GameNode, path: str = "root") -> list[tuple[str, int]]:
    sites = []
    for k, move in enumerate(node.moves):
        sites.append((path, k))
        sites += _move_sites(move.response_subtree, f"{path}.m{k}.r")
        sites += _move_sites(move.target_subtree, f"{path}.m{k}.t")
    return sites


def _rebuild(node: GameNode, path: str, site: tuple[str, int],
             editor) -> GameNode:
    moves = []
    for k, move in enumerate(node.moves):
        if (path, k) == site:
            move = editor(move)
        else:
            move = Move(move.neighborhood, move.response,
                        _rebuild(move.response_subtree, f"{path}.m{k}.r",
                                 site, editor),
                        _rebuild(move.target_subtree, f"{path}.m{k}.t",
                                 site, editor))
        moves.append(move)
    return GameNode(node.target, node.depth, node.epsilon, tuple(moves))


def mutate_transcript(transcript: GameTranscript, kind: str,
                      sampler: Sampler) -> GameTranscript:
    """Plant one defect of the requested kind; the result must not verify.

    Used by the fuzzing checks: every mutation breaks a specific
    transcript invariant (ball, membership, separation or linkage), so a
    verifier accepting a mutant is a verifier bug.
    """
    if kind not in MUTATION_KINDS:
        raise ValueError(f"unknown mutation kind {kind!r}")
    space = transcript.space
    root = transcript.root

    if kind == "double-epsilon":
        mutated = GameNode(root.target, root.depth, root.epsilon * 2,
                           root.moves)
        return GameTranscript(space, mutated, transcript.adversary)

    sites = _move_sites(root)
    if not sites:
        raise ValueError("transcript has no moves to mutate")
    site = sites[sampler.below(len(sites))]

    def edit(move: Move) -> Move:
        if kind == "inflate-response":
            return Move(move.neighborhood, move.response * 3,
                        move.response_subtree, move.target_subtree)
        if kind == "drop-response-entry":
            entries = move.response.entries
            if not entries:
                raise ValueError("response has no entries to drop")
            slim = FreeVector(space, entries[1:])
            return Move(move.neighborhood, slim,
                        move.response_subtree, move.target_subtree)
        if kind == "tamper-subtree-target":
            base = space.base_point
            a, b = [p for p in range(len(space)) if p != base][:2]
            sub = move.target_subtree
            bumped = GameNode(sub.target + molecule(space, a, b),
                              sub.depth, sub.epsilon, sub.moves)
            return Move(move.neighborhood, move.response,
                        move.response_subtree, bumped)
        # shift-functional: push one functional away from the response
        # by more than eta can absorb.
        hood = move.neighborhood
        diff = move.response - hood.center
        if diff.is_zero:
            raise ValueError("response coincides with the center")
        point, coeff = diff.entries[0]
        delta = (2 * hood.eta + 1) / abs(coeff)
        r = sampler.below(len(hood.functionals))
        bumped_fn = LipschitzFunction(
            space, [(i, v + delta if i == point else v)
                    for i, v in hood.functionals[r].entries])
        family = tuple(bumped_fn if s == r else f
                       for s, f in enumerate(hood.functionals))
        return Move(WeakNeighborhood(family, hood.center, hood.eta),
                    move.response, move.response_subtree, move.target_subtree)

    mutated_root = _rebuild(root, "root", site, edit)
    return GameTranscript(space, mutated_root, transcript.adversary)
