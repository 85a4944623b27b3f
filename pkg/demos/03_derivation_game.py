"""Certify a derivation game and attack the transcript.

The prover claims the molecule of the two poles survives a fixed number
of derivation rounds with gap 1 no matter which weak neighborhoods the
adversary picks from its seeded family.  The verifier replays every
node of the transcript independently, and a mutation pass confirms it
rejects planted defects.
"""

from fractions import Fraction

from diamondlab import (
    MUTATION_KINDS,
    AdversaryConfig,
    DiamondSpec,
    InsufficientBranchingError,
    Sampler,
    WeakNeighborhood,
    adversary_family,
    build_cached,
    collect_vectors,
    free_norm,
    molecule,
    mutate_transcript,
    prover_certify,
    prover_escape,
    relative_derivation_oracle,
    spine_points,
    verify_transcript,
)

space, lm = build_cached(DiamondSpec(2, 3))
config = AdversaryConfig("distance_functions", count=3,
                         eta=Fraction(1, 10), seed=7)


def banner(text):
    print()
    print(text)
    print("-" * len(text))


# The adversary only sees the spine: poles plus the branch-1 structure.
# Spine distances cannot tell the higher branches apart, which is what
# guarantees the prover an escape move at every stage.
banner("spine and escape")
spine = spine_points(space, lm)
print(f"spine: {len(spine)} of {len(space)} points: "
      f"{[space.label(p) for p in spine]}")
family = adversary_family(space, lm, config)
center = molecule(space, lm.top, lm.bottom)
hood = WeakNeighborhood(family, center, config.eta)
escape = prover_escape(space, lm, hood)
sep, _ = free_norm(escape - center)
print(f"escape vector support: "
      f"{[space.label(i) for i, _ in escape.entries]}")
print(f"inside the neighborhood: {hood.contains(escape)}, "
      f"separation from the center: {sep}")

# A full certified game.  Each node answers every functional family
# challenge with a response that stays in the neighborhood yet sits at
# norm distance epsilon from the target, and both vectors recurse.
banner("depth-2 game")
transcript = prover_certify(space, lm, depth=2, adversary=config)
report = verify_transcript(space, transcript)
print(f"nodes checked: {len(report.entries)}, verdict: "
      f"{'pass' if report.passed else 'fail'}")
print(f"distinct vectors wagered: {len(collect_vectors(transcript))}")

# Soundness spot check: the transcript's own vectors survive two rounds
# of the box-derivation oracle at the claimed gap.
banner("box-derivation oracle")
survivors = relative_derivation_oracle(
    space, collect_vectors(transcript), family, config.eta,
    epsilon=Fraction(1), rounds=2)
print(f"{len(survivors)} of {len(collect_vectors(transcript))} vectors "
      f"survive 2 rounds at gap 1")

# Every mutation kind plants a defect the verifier must catch.
banner("mutation pass")
sampler = Sampler(99)
for kind in MUTATION_KINDS:
    mutant = mutate_transcript(transcript, kind, sampler.spawn())
    bad = verify_transcript(space, mutant)
    first = bad.failures()[0] if bad.failures() else None
    print(f"  {kind}: caught at {first.path} ({first.condition})"
          if first else f"  {kind}: NOT CAUGHT")

# Two branches are not enough: every midpoint pair touches the spine,
# so no swap-blind escape exists and the prover says so.
banner("insufficient branching")
thin_space, thin_lm = build_cached(DiamondSpec(1, 2))
try:
    prover_certify(thin_space, thin_lm, depth=1, adversary=config)
except InsufficientBranchingError as exc:
    print(f"refused: {exc}")
    print(f"suggested branch count: {exc.retry_hint}")
