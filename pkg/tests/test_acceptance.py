"""Acceptance suite: one test per registered check, seed pinned to 0.

Each check is exact (Fraction arithmetic throughout, no tolerances).
The two timed checks enforce their own wall clock limits internally:
the metric oracle must finish under 60 seconds and the depth game
under 120 seconds.  A failing check reports the offending detail in
the assertion message; nothing here retries or weakens a criterion.
"""

from diamondlab import CHECKS, SuiteConfig, run_check

CONFIG = SuiteConfig(seed=0)

EXPECTED_IDS = (
    "metric-oracle",
    "molecule-norms",
    "embedding-isometry",
    "duality-gap",
    "escape-neighborhood",
    "depth-game",
    "midpoint-combinator",
    "pole-gluing",
    "summing-constants",
    "determinism-roundtrip",
)


# -- Helpers ----------------------------------------------------------------

def _run(check_id):
    result = run_check(check_id, CONFIG)
    print(f"{result.status} {check_id}: {result.details}")
    assert result.status == "pass", f"{check_id}: {result.details}"


# -- The registry itself -----------------------------------------------------

def test_registry_lists_all_criteria():
    assert tuple(cid for cid, _, _ in CHECKS) == EXPECTED_IDS


# -- One criterion per test ---------------------------------------------------

def test_criterion_01_metric_oracle():
    _run("metric-oracle")


def test_criterion_02_molecule_norms():
    _run("molecule-norms")


def test_criterion_03_embedding_isometry():
    _run("embedding-isometry")


def test_criterion_04_duality_gap():
    _run("duality-gap")


def test_criterion_05_escape_neighborhood():
    _run("escape-neighborhood")


def test_criterion_06_depth_game():
    _run("depth-game")


def test_criterion_07_midpoint_combinator():
    _run("midpoint-combinator")


def test_criterion_08_pole_gluing():
    _run("pole-gluing")


def test_criterion_09_summing_constants():
    _run("summing-constants")


def test_criterion_10_determinism_roundtrip():
    _run("determinism-roundtrip")
