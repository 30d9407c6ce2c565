import math

import numpy as np
import pytest
from scipy.integrate import quad

from hml.grids import QuadratureScheme
from hml.measure import (AtomList, DiskDensityMeasure, Lebesgue, MomentSequence, PowerWeight,
                         carleson_constant, carleson_profile, conjugate_moment,
                         conjugate_moment_quadrature, conjugate_moments, moment,
                         moment_sequence, tail_mass)


def test_lebesgue_moment():
    assert moment(Lebesgue(), 3) == 0.25


def test_unit_atom_total_mass():
    assert moment(AtomList(((0.5, 1.0),)), 0) == 1.0


def test_power_weight_direct_integration():
    assert moment(PowerWeight(1.0), 1) == pytest.approx(1 / 6, rel=1e-14)


@pytest.mark.parametrize("s", [-0.75, -0.5, 0.5, 1.0, 3.25])
@pytest.mark.parametrize("n", [0, 1, 7, 50])
def test_power_weight_matches_adaptive_quadrature(s, n):
    # 1 - t = v^k with k = 1/(s+1) turns (1-t)^s dt into k dv
    k = 1.0 / (s + 1)
    ref = quad(lambda v: k * (1 - v ** k) ** n, 0, 1, epsabs=1e-16, epsrel=1e-13, limit=200)[0]
    assert moment(PowerWeight(s), n) == pytest.approx(ref, rel=1e-12)


def test_power_weight_large_order_uses_log_gamma():
    n, s = 10 ** 6, 0.5
    ref = math.exp(math.lgamma(n + 1) + math.lgamma(s + 1) - math.lgamma(n + s + 2))
    assert moment(PowerWeight(s), n) == pytest.approx(ref, rel=1e-8)
    # leading asymptotics Gamma(s+1) n^-(s+1)
    assert moment(PowerWeight(s), n) * n ** (s + 1) == pytest.approx(math.gamma(s + 1), rel=1e-5)


def test_moment_sequence_examples():
    np.testing.assert_allclose(moment_sequence(Lebesgue(), 2).values, [1, 1 / 2, 1 / 3],
                               rtol=0, atol=0)
    np.testing.assert_array_equal(moment_sequence(AtomList(((0.0, 1.0),)), 3).values,
                                  [1, 0, 0, 0])
    np.testing.assert_allclose(moment_sequence(PowerWeight(0.5), 1).values, [2 / 3, 4 / 15],
                               rtol=1e-14)


def test_moment_sequence_requires_positive_N():
    with pytest.raises(ValueError):
        moment_sequence(Lebesgue(), 0)


@pytest.mark.parametrize("s", [-1.0, -2.0, float("nan")])
def test_power_weight_rejects_divergent_exponent(s):
    with pytest.raises(ValueError):
        PowerWeight(s)


@pytest.mark.parametrize("atoms", [((1.0, 1.0),), ((-0.1, 1.0),), ((0.5, 0.0),), ((0.5, -1.0),)])
def test_atom_list_validation(atoms):
    with pytest.raises(ValueError):
        AtomList(atoms)


def test_negative_moment_order():
    with pytest.raises(ValueError):
        moment(Lebesgue(), -1)


def test_counterexample_conjugate_moments():
    mb = DiskDensityMeasure.counterexample(5)
    for n in range(41):
        expected = 1.0 if n in (0, 2, 4, 8, 16, 32) else 0.0
        assert conjugate_moment(mb, n) == expected
    assert conjugate_moment(mb, 3) == 0


def test_unit_density_mass():
    assert conjugate_moment(DiskDensityMeasure((1.0,)), 0) == 1


def test_conjugate_moments_sequence_is_real_when_possible():
    m = conjugate_moments(DiskDensityMeasure.counterexample(3), 10)
    assert m.is_real
    np.testing.assert_array_equal(m.values, [1, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0])
    assert m.tail_is_zero


def test_quadrature_unit_density_orthogonality():
    val, err = conjugate_moment_quadrature(DiskDensityMeasure((1.0,)), 1)
    assert abs(val) <= 1e-12
    assert err >= 0


@pytest.mark.parametrize("n,expected", [(4, 1.0), (5, 0.0)])
def test_quadrature_counterexample(n, expected):
    val, _ = conjugate_moment_quadrature(DiskDensityMeasure.counterexample(5), n)
    assert abs(val - expected) <= 1e-8


def test_quadrature_within_reported_error():
    rng = np.random.Generator(np.random.PCG64(3))
    c = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    mb = DiskDensityMeasure(tuple(c))
    for n in range(65):
        val, err = conjugate_moment_quadrature(mb, n)
        assert abs(val - conjugate_moment(mb, n)) <= err


def test_quadrature_independent_of_fft_path():
    # brute-force polar sum on a small rule
    mb = DiskDensityMeasure((1.0, 0.5j, 0.0, 2.0))
    qs = QuadratureScheme(radial=24, angular=32)
    r, theta, w = qs.disk_nodes()
    z = r[:, None] * np.exp(1j * theta)[None, :]
    for n in range(5):
        brute = np.sum(w * np.conj(z) ** n * mb.density(z))
        val, _ = conjugate_moment_quadrature(mb, n, qs)
        assert abs(val - brute) < 1e-13


def test_tail_mass_examples():
    assert tail_mass(Lebesgue(), 0.25) == 0.25
    assert tail_mass(AtomList(((0.5, 1.0),)), 0.4) == 0
    assert tail_mass(PowerWeight(0.5), 1.0) == pytest.approx(2 / 3, rel=1e-15)


@pytest.mark.parametrize("h", [0.0, -0.5, 1.5])
def test_tail_mass_rejects_bad_h(h):
    with pytest.raises(ValueError):
        tail_mass(Lebesgue(), h)


def test_tail_mass_against_integration():
    mu = PowerWeight(-0.5)
    for h in (1.0, 0.3, 1e-3):
        ref, _ = quad(lambda t: (1 - t) ** -0.5, 1 - h, 1)
        assert mu.tail_mass(h) == pytest.approx(ref, rel=1e-9)


def test_carleson_constant_examples():
    assert carleson_constant(Lebesgue(), 20) == 1.0
    assert carleson_constant(AtomList(((0.5, 1.0),)), 20) == 2.0
    assert carleson_constant(PowerWeight(-0.5), 20) == pytest.approx(2 * 2 ** 10, rel=1e-13)
    h, ratios = carleson_profile(Lebesgue(), 4)
    np.testing.assert_array_equal(h, [1, 0.5, 0.25, 0.125, 0.0625])
    with pytest.raises(ValueError):
        carleson_constant(Lebesgue(), 0)


def test_rules_integrate_moments():
    for mu in (Lebesgue(), PowerWeight(-0.75), PowerWeight(2.5), AtomList(((0.2, 1.0), (0.9, 3.0)))):
        t, u, w = mu.rule()
        np.testing.assert_allclose(1.0 - t, u, atol=1e-15)
        for n in (0, 1, 5, 40):
            assert np.sum(w * t ** n) == pytest.approx(mu.moment(n), rel=1e-11)


def test_moment_sequence_extension_and_head():
    m = moment_sequence(Lebesgue(), 4)
    assert m.extended(10).N == 10
    np.testing.assert_array_equal(m.head(2), [1, 0.5, 1 / 3])
    assert m.head(8).size == 9
    bare = MomentSequence(np.ones(3))
    with pytest.raises(ValueError):
        bare.extended(5)
    assert bare.spec == "explicit"


def test_moment_sequence_readonly():
    m = moment_sequence(Lebesgue(), 4)
    with pytest.raises(ValueError):
        m.values[0] = 2.0


def test_specs_are_canonical():
    assert Lebesgue().spec == "lebesgue"
    assert PowerWeight(0.5).spec == "powerweight:s=0.5"
    assert AtomList(((0.5, 1.0),)).spec == "atoms:[(0.5,1.0)]"
    assert DiskDensityMeasure.counterexample(4).spec == "counterexample:K=4"


def test_atom_sum_and_scaling():
    a = AtomList(((0.5, 1.0),))
    b = AtomList(((0.25, 2.0),))
    np.testing.assert_allclose((a + b.scaled(3.0)).moments(6), a.moments(6) + 3 * b.moments(6),
                               rtol=1e-15)
    assert math.isclose((a + b).tail_mass(0.6), 1.0)
