"""Metric space container tests.

Core claims checked here:
  * axiom validation accepts true metrics and pinpoints each violation,
  * restriction preserves distances, labels and the chosen base,
  * integer scaling is exact and random closure matrices validate.
"""

from fractions import Fraction

import pytest

from diamondlab import MetricAxiomError, MetricSpace, Sampler

from oracles import dijkstra_closure


# -- Helpers ----------------------------------------------------------------

def _space(rows, base=0, labels=None):
    n = len(rows)
    labels = labels or [f"p{i}" for i in range(n)]
    return MetricSpace(labels, [[Fraction(v) for v in row] for row in rows],
                       base)


PATH3 = _space([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def _random_metric(sampler, n):
    # Random positive symmetric matrix pushed through single-hop closure;
    # entries in {1/4 .. 2} keep one relaxation round sufficient.
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = Fraction(sampler.integer(1, 8), 4)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if i != j:
                    rows[i][j] = min(rows[i][j], rows[i][k] + rows[k][j])
    return rows


# -- Construction and access ---------------------------------------------------

def test_basic_access():
    assert len(PATH3) == 3
    assert PATH3.base_point == 0
    assert PATH3.distance(0, 2) == 2
    assert PATH3.label(1) == "p1"
    assert PATH3.index_of("p2") == 2
    with pytest.raises(KeyError):
        PATH3.index_of("nowhere")
    with pytest.raises(IndexError):
        PATH3.distance(0, 3)


def test_constructor_rejections():
    with pytest.raises(ValueError):
        _space([[0, 1], [1, 0]], labels=["a", "a"])
    with pytest.raises(ValueError):
        MetricSpace(["a", "b"], [[Fraction(0)]], 0)
    with pytest.raises(ValueError):
        _space([[0, 1], [1, 0]], base=2)


def test_set_distance():
    assert PATH3.set_distance(0, [1, 2]) == 1
    assert PATH3.set_distance(0, [2]) == 2
    assert PATH3.set_distance(0, []) is None


# -- Validation -----------------------------------------------------------------

def test_validate_accepts_true_metric():
    PATH3.validate_metric()


def test_validate_detects_asymmetry():
    bad = _space([[0, 1, 2], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(MetricAxiomError, match="asymmetry"):
        bad.validate_metric()


def test_validate_detects_zero_off_diagonal():
    bad = _space([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
    with pytest.raises(MetricAxiomError, match="not positive"):
        bad.validate_metric()


def test_validate_detects_nonzero_diagonal():
    bad = _space([[1, 1], [1, 0]])
    with pytest.raises(MetricAxiomError):
        bad.validate_metric()


def test_validate_detects_triangle_violation():
    bad = _space([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    with pytest.raises(MetricAxiomError, match="triangle"):
        bad.validate_metric()


def test_validate_sampled_branch():
    # Force the sampled path with a tiny exhaustive limit; the violating
    # triple is eventually hit.
    bad = _space([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    with pytest.raises(MetricAxiomError, match="triangle"):
        bad.validate_metric(exhaustive_limit=2, sampler=Sampler(5),
                            samples=5000)
    PATH3.validate_metric(exhaustive_limit=2, sampler=Sampler(5), samples=200)


def test_random_closures_validate():
    sampler = Sampler(11)
    for trial in range(25):
        rows = _random_metric(sampler, 3 + sampler.below(4))
        _space(rows).validate_metric()


# -- Restriction ------------------------------------------------------------------

def test_restrict_preserves_structure():
    sub, kept = PATH3.restrict([2, 0], base=2)
    assert kept == (2, 0)
    assert sub.labels == ("p2", "p0")
    assert sub.base_point == 0
    assert sub.distance(0, 1) == PATH3.distance(2, 0)
    sub.validate_metric()


def test_restrict_rejections():
    with pytest.raises(ValueError):
        PATH3.restrict([0, 0, 1], base=0)
    with pytest.raises(ValueError):
        PATH3.restrict([0, 1], base=2)


# -- Integer scaling ----------------------------------------------------------------

def test_integer_scaled_exact():
    space = _space([[0, Fraction(1, 6), Fraction(3, 4)],
                    [Fraction(1, 6), 0, Fraction(2, 3)],
                    [Fraction(3, 4), Fraction(2, 3), 0]])
    mat, scale = space.integer_scaled()
    assert scale == 12
    for i in range(3):
        for j in range(3):
            assert Fraction(int(mat[i, j]), scale) == space.distance(i, j)
    assert space.integer_scaled() is space.integer_scaled()


def test_dijkstra_oracle_on_random_metrics():
    sampler = Sampler(17)
    for trial in range(10):
        rows = _random_metric(sampler, 5)
        space = _space(rows)
        edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
        closure = dijkstra_closure(space, edges)
        for i in range(5):
            for j in range(5):
                assert closure[i][j] == space.distance(i, j)
