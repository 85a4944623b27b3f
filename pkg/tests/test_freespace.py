"""Free-vector norm tests.

Core claims checked here:
  * molecule norms are exactly 1, in both orientations, on whole stages,
  * the transport solver agrees with a spanning-tree enumeration oracle
    on random vectors,
  * every certificate passes independent re-verification and tampered
    certificates are rejected,
  * norm axioms (homogeneity, symmetry, subadditivity, nondegeneracy)
    hold exactly, and restriction onto the support is isometric.
"""

from fractions import Fraction

import pytest

from diamondlab import (
    CertificateError,
    FreeVector,
    Sampler,
    TransportCertificate,
    free_norm,
    molecule,
    norm_statistics,
    norm_value,
    point_mass,
    verify_certificate,
)

from oracles import free_norm_oracle


# -- Helpers ----------------------------------------------------------------

def _random_vector(sampler, space, max_support=4):
    k = sampler.integer(1, max_support)
    points = sampler.sample(range(len(space)), k)
    entries = [(p, sampler.nonzero_fraction()) for p in points]
    return FreeVector(space, entries)


# -- Vector algebra -----------------------------------------------------------

def test_entries_normalize(d13):
    space, lm = d13
    vec = FreeVector(space, [(0, Fraction(1)), (0, Fraction(2)),
                             (1, Fraction(0)), (lm.ell, Fraction(5))])
    assert vec.entries == ((0, Fraction(3)),)
    assert vec.coefficient(0) == 3
    assert vec.coefficient(1) == 0
    assert vec.support == (0,)
    assert not vec.is_zero
    assert FreeVector(space).is_zero


def test_vector_arithmetic(d13):
    space, _ = d13
    a = point_mass(space, 0, 2)
    b = point_mass(space, 1, 3)
    assert (a + b).entries == ((0, Fraction(2)), (1, Fraction(3)))
    assert (a - b).coefficient(1) == -3
    assert (-a).coefficient(0) == -2
    assert (a * Fraction(1, 2)).coefficient(0) == 1
    assert (a / 2).coefficient(0) == 1
    assert sum([a, b]) == a + b
    assert a.total_mass == 2


def test_cross_space_operations_rejected(d13, d14):
    a = point_mass(d13[0], 0)
    b = point_mass(d14[0], 0)
    with pytest.raises(ValueError):
        a + b


def test_molecule_requires_distinct_points(d13):
    with pytest.raises(ValueError):
        molecule(d13[0], 2, 2)


# -- Norm values ----------------------------------------------------------------

def test_molecule_norms_exhaustive(d13, d23):
    for space, _ in (d13, d23):
        n = len(space)
        for x in range(n):
            for y in range(n):
                if x != y:
                    assert norm_value(molecule(space, x, y)) == 1


def test_frozen_norm_values(d23):
    space, lm = d23
    top, bottom = lm.top, lm.bottom
    assert norm_value(point_mass(space, top) - point_mass(space, bottom)) == 2
    assert norm_value(point_mass(space, top) + point_mass(space, bottom)) == 2
    assert norm_value(
        point_mass(space, top) - point_mass(space, bottom, 2)) == 3
    assert norm_value(point_mass(space, space.index_of("+(1)/mid(1)"))) \
        == Fraction(1, 2)
    assert norm_value(FreeVector(space)) == 0


def test_point_mass_norm_is_base_distance(d23):
    space, _ = d23
    sampler = Sampler(23)
    for trial in range(20):
        x = sampler.below(len(space))
        if x == space.base_point:
            continue
        c = sampler.nonzero_fraction()
        assert norm_value(point_mass(space, x, c)) \
            == abs(c) * space.distance(x, space.base_point)


def test_solver_matches_tree_oracle(d23):
    space, _ = d23
    sampler = Sampler(41)
    for trial in range(60):
        vec = _random_vector(sampler, space)
        assert norm_value(vec) == free_norm_oracle(space, vec)


def test_norm_axioms(d23):
    space, _ = d23
    sampler = Sampler(42)
    for trial in range(30):
        a = _random_vector(sampler, space)
        b = _random_vector(sampler, space)
        c = sampler.nonzero_fraction()
        na, nb = norm_value(a), norm_value(b)
        assert na > 0
        assert norm_value(-a) == na
        assert norm_value(a * c) == abs(c) * na
        assert norm_value(a + b) <= na + nb


# -- Certificates -----------------------------------------------------------------

def test_certificates_verify(d23):
    space, _ = d23
    sampler = Sampler(43)
    for trial in range(25):
        vec = _random_vector(sampler, space)
        value, cert = free_norm(vec)
        assert cert.value == value
        assert verify_certificate(cert)
        assert cert.potential.is_total
        assert vec.pair(cert.potential) == value


def test_tampered_value_rejected(d23):
    space, _ = d23
    _, cert = free_norm(molecule(space, 0, 1))
    bad = TransportCertificate(cert.vector, cert.value + 1, cert.plan,
                               cert.potential)
    with pytest.raises(CertificateError):
        verify_certificate(bad)


def test_tampered_plan_rejected(d23):
    space, _ = d23
    _, cert = free_norm(molecule(space, 0, 1))
    x, y, mass = cert.plan[0]
    bad_plan = ((x, y, mass * 2),) + cert.plan[1:]
    bad = TransportCertificate(cert.vector, cert.value, bad_plan,
                               cert.potential)
    with pytest.raises(CertificateError):
        verify_certificate(bad)


def test_tampered_potential_rejected(d23):
    space, _ = d23
    _, cert = free_norm(molecule(space, 0, 1))
    shifted = TransportCertificate(cert.vector, cert.value, cert.plan,
                                   cert.potential.shift(Fraction(1, 7)))
    with pytest.raises(CertificateError, match="vanish"):
        verify_certificate(shifted)
    scaled = TransportCertificate(cert.vector, cert.value, cert.plan,
                                  cert.potential.scale(2))
    with pytest.raises(CertificateError):
        verify_certificate(scaled)


def test_certificate_error_is_value_error():
    assert issubclass(CertificateError, ValueError)


# -- Caching and statistics ---------------------------------------------------------

def test_norm_cache_hits(d13):
    space, _ = d13
    vec = FreeVector(space, [(0, Fraction(5, 3)), (3, Fraction(-1, 2))])
    before = norm_statistics()["norms"]
    first = norm_value(vec)
    mid = norm_statistics()["norms"]
    again = norm_value(FreeVector(space, vec.entries))
    after = norm_statistics()["norms"]
    assert first == again
    assert mid == before + 1
    assert after == mid


def test_gap_counters_advance(d13):
    space, _ = d13
    sampler = Sampler(44)
    before = norm_statistics()
    vec = _random_vector(sampler, space)
    norm_value(vec)
    after = norm_statistics()
    assert after["gap_checks"] >= before["gap_checks"]
    assert after["gap_failures"] == before["gap_failures"]


# -- Restriction and reindexing ------------------------------------------------------

def test_support_restriction_is_isometric(d33):
    space, _ = d33
    sampler = Sampler(45)
    for trial in range(15):
        vec = _random_vector(sampler, space, max_support=5)
        keep = sorted(set(vec.support) | {space.base_point})
        sub, kept = space.restrict(keep, base=space.base_point)
        back = {old: new for new, old in enumerate(kept)}
        moved = vec.mapped(sub, back)
        assert norm_value(moved) == norm_value(vec)


def test_mapped_requires_covering_map(d13):
    space, _ = d13
    vec = point_mass(space, 0)
    with pytest.raises(ValueError, match="misses"):
        vec.mapped(space, {1: 1})


def test_pair_requires_same_space(d13, d14):
    from diamondlab import distance_functional

    vec = point_mass(d13[0], 0)
    func = distance_functional(d14[0], 0)
    with pytest.raises(ValueError):
        vec.pair(func)
