import math

import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad

from triwalk import (EndpointSingularity, NormalizationError, OutsideSupport,
                     ParameterOutOfRange, QuadratureSpec, RhoAsymptotics,
                     integrate)
from triwalk.rho_family import delta1, delta2

from conftest import random_amplitudes

INV_SQRT3 = 1.0 / math.sqrt(3.0)


def ctx(rho, g):
    return RhoAsymptotics(rho, np.asarray(g, dtype=complex))


def test_context_validation():
    with pytest.raises(ParameterOutOfRange):
        ctx(1.0, [1, 0, 0])
    with pytest.raises(NormalizationError):
        ctx(0.5, [1, 1, 0])


def test_nu_range_and_value():
    for rho in np.linspace(0.02, 0.98, 40):
        nu = ctx(float(rho), [1, 0, 0]).nu
        assert -1.0 < nu < 0.0
    assert abs(ctx(INV_SQRT3, [1, 0, 0]).nu + (5.0 - 2.0 * math.sqrt(6.0))) < 1e-14


def test_density_rejects_support_edge():
    a = ctx(0.6, [1, 0, 0])
    for v in (0.6, -0.6, 0.61, -2.0):
        with pytest.raises(OutsideSupport):
            a.density(v)


def test_density_of_plus_state_stays_finite_at_edges():
    rho = 0.7
    a = ctx(rho, [1, 0, 0])
    vs = np.linspace(-rho * (1 - 1e-8), rho * (1 - 1e-8), 1001)
    expected = (math.sqrt(1 - rho ** 2) * np.sqrt(rho ** 2 - vs ** 2)
                / (math.pi * rho ** 2 * (1 - vs ** 2)))
    assert np.max(np.abs(a.density_grid(vs) - expected)) <= 1e-11
    assert a.density(rho * (1 - 1e-12)) < 1.0  # bounded at the front


def test_density_of_minus2_state_vanishes_at_origin():
    rho = 0.5
    a = ctx(rho, [0, 0, 1])
    assert abs(a.density(0.0)) <= 1e-14
    vs = np.linspace(-0.49, 0.49, 99)
    expected = (math.sqrt(1 - rho ** 2) * vs ** 2
                / (math.pi * rho ** 2 * (1 - vs ** 2) * np.sqrt(rho ** 2 - vs ** 2)))
    assert np.max(np.abs(a.density_grid(vs) - expected)) <= 1e-12


def test_density_of_left_mover_one_sided():
    # equal minus1/minus2 mix kills the right-hand front only
    rho = 0.6
    a = ctx(rho, [0, 1 / math.sqrt(2), 1 / math.sqrt(2)])
    vs = np.linspace(-0.59, 0.59, 199)
    expected = (math.sqrt(1 - rho ** 2) * np.sqrt((rho - vs) ** 3)
                / (2 * math.pi * rho ** 2 * (1 - vs ** 2) * np.sqrt(rho + vs)))
    assert np.max(np.abs(a.density_grid(vs) - expected)) <= 1e-11
    assert a.density(0.599999) < 1e-3
    assert a.density(-0.599999) > 10.0


def test_density_nonnegative_for_random_states():
    rng = np.random.default_rng(21)
    for _ in range(25):
        rho = float(rng.uniform(0.1, 0.9))
        a = ctx(rho, random_amplitudes(rng))
        vs = np.linspace(-rho, rho, 10_002)[1:-1]
        assert float(np.min(a.density_grid(vs))) >= -1e-14


def test_continuous_weight_examples():
    assert abs(ctx(0.9, [0, 1, 0]).continuous_weight() - 1.0) <= 1e-15
    value = ctx(INV_SQRT3, [1, 0, 0]).continuous_weight()
    assert abs(value - (1.0 + 3.0 * (math.sqrt(2.0 / 3.0) - 1.0))) <= 1e-14
    assert abs(value - 0.4494897427831779) <= 1e-12


def test_continuous_weight_matches_quadrature():
    rng = np.random.default_rng(33)
    for _ in range(40):
        a = ctx(float(rng.uniform(0.08, 0.95)), random_amplitudes(rng))
        assert abs(a.continuous_weight()
                   - a.continuous_weight_quadrature()) <= 1e-8


def test_continuous_weight_against_scipy():
    rho = 0.63
    a = ctx(rho, [0.5, 0.5j, math.sqrt(0.5)])
    gp, g1, g2 = a.g
    c0 = 1.0 - abs(g2) ** 2
    c1 = 2.0 * (g1 * np.conj(g2)).real
    c2 = abs(g1) ** 2 + 2.0 * abs(g2) ** 2 - 1.0

    def smooth(v):
        # density with the inverse-sqrt factor stripped; QAWS multiplies
        # by (v+rho)^-1/2 (rho-v)^-1/2 itself
        return (math.sqrt(1.0 - rho * rho) / (math.pi * (1.0 - v * v))
                * (c0 - c1 * v / rho + c2 * (v / rho) ** 2))

    ref, _ = scipy_quad(smooth, -rho, rho,
                        weight="alg", wvar=(-0.5, -0.5), epsabs=1e-11)
    assert abs(a.continuous_weight() - ref) <= 1e-8


def test_one_sided_localization_profile():
    a = ctx(INV_SQRT3, [1 / math.sqrt(2), 0, 1 / math.sqrt(2)])
    assert abs(a.localization(0) - 2.5 * (5.0 - 2.0 * math.sqrt(6.0))) <= 1e-14
    assert abs(a.localization(0) - 0.2525512860841106) <= 1e-12
    for m in range(-12, 0):
        assert a.localization(m) == 0.0
    for m in range(1, 12):
        assert a.localization(m) > 0.0


def test_localization_vanishes_for_minus1():
    a = ctx(0.8, [0, 1, 0])
    assert all(a.localization(m) == 0.0 for m in range(-10, 11))
    assert a.localization_total() == 0.0


def test_localization_site_one_value():
    a = ctx(INV_SQRT3, [1, 0, 0])
    expected = 12.0 * (5.0 - 2.0 * math.sqrt(6.0)) ** 2
    assert abs(a.localization(1) - expected) <= 1e-14
    assert abs(expected - 0.12246173203725748) <= 1e-12


def test_localization_geometric_ratio():
    rng = np.random.default_rng(55)
    for _ in range(20):
        a = ctx(float(rng.uniform(0.15, 0.9)), random_amplitudes(rng))
        gp, g1, g2 = a.g
        if abs(gp + g2) < 1e-3:
            continue
        for m in range(1, 8):
            ratio = a.localization(m + 1) / a.localization(m)
            assert abs(ratio - a.nu ** 2) <= 1e-12


def test_localization_total_closed_form_vs_series():
    rng = np.random.default_rng(8)
    for _ in range(30):
        a = ctx(float(rng.uniform(0.1, 0.92)), random_amplitudes(rng))
        series = sum(a.localization(m) for m in range(-200, 201))
        assert abs(a.localization_total() - series) <= 1e-12
    assert abs(ctx(INV_SQRT3, [1, 0, 0]).localization_total()
               - 3.0 * (1.0 - math.sqrt(2.0 / 3.0))) <= 1e-14


def test_normalization_identity():
    rng = np.random.default_rng(99)
    for _ in range(60):
        a = ctx(float(rng.uniform(0.05, 0.95)), random_amplitudes(rng))
        assert abs(a.continuous_weight() + a.localization_total() - 1.0) <= 1e-12


def test_second_moment_closed_form_values():
    assert abs(delta1(0.5) - 0.10288568297002611) <= 1e-12
    assert abs(delta2(0.5) - 0.07179676972449085) <= 1e-12
    a = ctx(0.5, [1, 0, 0])
    assert abs(a.second_moment() - 0.03109) <= 1e-5
    b = ctx(0.5, [0, 1, 0])
    assert abs(b.second_moment() - 0.13398) <= 2e-5
    # minus1 input maximizes the spread, plus input minimizes it
    rng = np.random.default_rng(3)
    for _ in range(25):
        c = ctx(0.5, random_amplitudes(rng))
        assert a.second_moment() - 1e-15 <= c.second_moment() <= b.second_moment() + 1e-15


def test_second_moment_matches_density_quadrature():
    rng = np.random.default_rng(44)
    for _ in range(10):
        a = ctx(float(rng.uniform(0.2, 0.9)), random_amplitudes(rng))
        direct = a.second_moment()
        spec = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-14,
                              endpoint_singularity=EndpointSingularity.INVERSE_SQRT_BOTH)
        by_density, _ = integrate(lambda v: v * v * a._density_unchecked(v),
                                  -a.rho, a.rho, spec)
        assert abs(direct - by_density) <= 1e-8


def test_even_moments_phase_invariant():
    rng = np.random.default_rng(17)
    g = random_amplitudes(rng)
    phases = np.exp(1j * rng.uniform(0, 2 * math.pi, size=3))
    a = ctx(0.66, g)
    b = ctx(0.66, g * phases)
    assert a.second_moment() == b.second_moment()
    assert abs(a.moment(4) - b.moment(4)) <= 1e-10


def test_odd_moments_follow_coherence_factor():
    rho = 0.58
    a = ctx(rho, [0, 1 / math.sqrt(2), 1 / math.sqrt(2)])
    for n in range(3):
        prefactor = a.odd_moment_prefactor(n)
        assert prefactor < 0.0
        coherence = 2.0 * (a.g[1] * np.conj(a.g[2])).real
        spec = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-14,
                              endpoint_singularity=EndpointSingularity.INVERSE_SQRT_BOTH)
        by_density, _ = integrate(
            lambda v: v ** (2 * n + 1) * a._density_unchecked(v),
            -rho, rho, spec)
        assert abs(a.odd_moment(n) - by_density) <= 1e-8
        assert abs(a.odd_moment(n) - prefactor * coherence) <= 1e-15


def test_odd_moments_zero_without_minus2_component():
    a = ctx(0.4, [0.6, 0.8, 0.0])
    for n in range(4):
        assert a.odd_moment(n) == 0.0
    assert a.moment(3) == 0.0


def test_moment_order_validation():
    a = ctx(0.5, [1, 0, 0])
    with pytest.raises(ValueError):
        a.moment(0)
    with pytest.raises(ValueError):
        a.odd_moment(-1)
