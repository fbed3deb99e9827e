import json
import math

import numpy as np
import pytest

from oracles import brute_merge, fd_interval_richardson, fd_periodic, lattice_levels
from scalecalc import growth as ga
from scalecalc.errors import DomainError, FitError
from scalecalc.spectra import (
    ManifoldModel,
    Spectrum,
    circle,
    counting_function,
    enumerate_spectrum,
    flat_torus,
    interval,
    merge_spectra,
    round_sphere,
    shifted_growth,
    sphere_multiplicity,
    sum_of_squares_counts,
    synthetic_order_d,
    weyl_fit,
)


def test_circle_first_seven():
    assert enumerate_spectrum(circle(), 7).expanded().tolist() == [0, 1, 1, 4, 4, 9, 9]


def test_circle_matches_finite_differences():
    fd = fd_periodic(2048, count=7)
    np.testing.assert_allclose(enumerate_spectrum(circle(), 7).expanded(), fd, atol=1e-3)


def test_circle_is_floor_half_squared():
    mu = np.arange(1, 10_001)
    expected = (mu // 2) ** 2
    assert np.array_equal(enumerate_spectrum(circle(), 10_000).expanded(), expected)


def test_interval_dirichlet_first_three():
    ev = enumerate_spectrum(interval("dirichlet"), 3).expanded()
    np.testing.assert_allclose(ev, [math.pi**2, 4 * math.pi**2, 9 * math.pi**2], rtol=1e-15)
    np.testing.assert_allclose(ev, fd_interval_richardson(4096, "dirichlet", 3), rtol=1e-4)


@pytest.mark.parametrize("bc", ["neumann", "mixed"])
def test_interval_other_conditions_match_finite_differences(bc):
    ev = enumerate_spectrum(interval(bc), 10).expanded()
    fd = fd_interval_richardson(2048, bc, 10)
    assert np.all(np.abs(ev - fd) <= 1e-4 * np.maximum(ev, 1))


@pytest.mark.parametrize("n", [2, 3])
def test_torus_levels_match_lattice_enumeration(n):
    s = enumerate_spectrum(flat_torus(n), 400)
    radius_sq = int(s.eigenvalues[-1])
    brute = lattice_levels(n, radius_sq)
    assert s.eigenvalues.tolist() == list(brute.keys())
    assert s.multiplicities.tolist() == list(brute.values())


def test_sum_of_squares_counts_small():
    # r_2(m) for m = 0..10
    assert sum_of_squares_counts(2, 10).tolist() == [1, 4, 4, 0, 4, 8, 0, 0, 4, 4, 8]


def test_torus_gauss_circle_counting():
    s = enumerate_spectrum(flat_torus(2), 80_000)
    for R in (50, 100, 150):
        ratio = counting_function(s, R * R) / (math.pi * R * R)
        assert abs(ratio - 1) < 0.05


def test_sphere2_multiplicities_are_odd():
    s = enumerate_spectrum(round_sphere(2), 400)
    ell = np.arange(s.eigenvalues.size)
    assert np.array_equal(s.eigenvalues, ell * (ell + 1))
    assert np.array_equal(s.multiplicities, 2 * ell + 1)


def test_sphere1_agrees_with_circle():
    assert np.array_equal(enumerate_spectrum(round_sphere(1), 501).expanded(), enumerate_spectrum(circle(), 501).expanded())


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_sphere_multiplicity_sums_to_polynomial_dimension(n):
    # harmonics of degree <= L span restrictions of polynomials of degree <= L in n+1 variables
    for L in range(0, 8):
        total = sum(sphere_multiplicity(n, ell) for ell in range(L + 1))
        restricted = math.comb(n + 1 + L, L) - math.comb(n + 1 + L - 2, L - 2) if L >= 2 else math.comb(n + 1 + L, L)
        assert total == restricted


def test_orderd_is_torus_to_power():
    base = enumerate_spectrum(flat_torus(2), 500).expanded()
    np.testing.assert_allclose(enumerate_spectrum(synthetic_order_d(2, 4), 500).expanded(), base**2)


@pytest.mark.parametrize("model", [circle(), flat_torus(2), flat_torus(3), round_sphere(2), round_sphere(3),
                                   interval("dirichlet"), interval("neumann"), interval("mixed"),
                                   synthetic_order_d(2, 4)])
@pytest.mark.parametrize("count", [1, 17, 1000])
def test_enumeration_deterministic_and_sorted(model, count):
    a = enumerate_spectrum.__wrapped__(model, count).expanded()
    b = enumerate_spectrum.__wrapped__(model, count).expanded()
    assert a.size == count
    assert np.array_equal(a, b)
    assert np.all(np.diff(a) >= 0)


def test_finitely_many_nonpositive():
    assert enumerate_spectrum(circle(), 1000).nonpositive_count() == 1
    assert enumerate_spectrum(interval("dirichlet"), 1000).nonpositive_count() == 0


def test_invalid_models():
    with pytest.raises(DomainError):
        flat_torus(0)
    with pytest.raises(DomainError):
        ManifoldModel("interval", bc="robin")
    with pytest.raises(DomainError):
        enumerate_spectrum(circle(), 0)


# merge -------------------------------------------------------------------

def test_merge_circle_with_itself():
    m = merge_spectra(enumerate_spectrum(circle(), 7), enumerate_spectrum(circle(), 7))
    assert m.expanded()[:6].tolist() == [0, 0, 1, 1, 1, 1]


def test_merge_with_empty_is_identity():
    s = enumerate_spectrum(flat_torus(2), 50)
    m = merge_spectra(s, Spectrum.empty())
    assert np.array_equal(m.expanded(), s.expanded())


def test_merge_circle_torus_fits_torus_exponent():
    m = merge_spectra(enumerate_spectrum(circle(), 10_000), enumerate_spectrum(flat_torus(2), 10_000))
    assert abs(weyl_fit(m).q - 1) <= 0.05


@pytest.mark.parametrize("pair", [(circle(), flat_torus(2)), (round_sphere(2), interval("mixed")),
                                  (flat_torus(3), synthetic_order_d(1, 4))])
def test_merge_equals_sorted_union(pair):
    s1, s2 = (enumerate_spectrum(m, 300) for m in pair)
    m = merge_spectra(s1, s2)
    assert m.count >= 300
    assert m.expanded().tolist() == brute_merge(s1.expanded().tolist(), s2.expanded().tolist(), 600)[: m.count]


# fit ---------------------------------------------------------------------

def test_weyl_fit_circle():
    fit = weyl_fit(enumerate_spectrum(circle(), 10_000), 0.5)
    assert abs(fit.q - 2) <= 0.02
    assert fit.residual >= 0 and fit.count == 10_000


def test_weyl_fit_torus2():
    assert abs(weyl_fit(enumerate_spectrum(flat_torus(2), 10_000)).q - 1) <= 0.05


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", [2, 4])
def test_weyl_fit_order_d(n, d):
    fit = weyl_fit(enumerate_spectrum(synthetic_order_d(n, d), 10_000))
    assert abs(fit.q - d / n) <= 0.05


def test_weyl_fit_pure_power_law_exact():
    mu = np.arange(1, 1001.0)
    s = Spectrum(3 * mu**1.5, np.ones(1000, dtype=int), 1000)
    fit = weyl_fit(s)
    assert fit.q == pytest.approx(1.5, abs=1e-10)
    assert fit.C == pytest.approx(3, rel=1e-9)
    assert fit.residual < 1e-10


def test_weyl_fit_errors():
    with pytest.raises(FitError):
        weyl_fit(enumerate_spectrum(circle(), 50))
    with pytest.raises(FitError, match="shift"):
        weyl_fit(enumerate_spectrum(circle(), 200), tail_fraction=1.0)


def test_weyl_fit_json():
    obj = json.loads(weyl_fit(enumerate_spectrum(circle(), 1000)).to_json())
    assert set(obj) == {"q", "C", "residual", "tail_fraction", "count"}


# shifted growth ----------------------------------------------------------

def test_shifted_circle_values():
    f = shifted_growth(enumerate_spectrum(circle(), 7))
    assert f.values(7).tolist() == [1, 2, 2, 5, 5, 10, 10]


def test_shifted_dirichlet_has_no_shift():
    f = shifted_growth(enumerate_spectrum(interval("dirichlet"), 10))
    assert f.shift == 0 and ga.evaluate(f, 1) == pytest.approx(math.pi**2)


def test_shifted_circle_class_is_mu_squared():
    f = shifted_growth(enumerate_spectrum(circle(), 10_000))
    assert ga.fit_class(f).close_to(ga.power_class(2), 0.02)
    assert ga.equivalent(f, ga.PowerLaw(1, 2), 10_000).related


def test_shifted_growth_degenerate():
    s = Spectrum(np.array([3.0]), np.array([5]), 5)
    with pytest.raises(DomainError):
        shifted_growth(s)


def test_spectrum_csv():
    lines = enumerate_spectrum(circle(), 3).to_csv().splitlines()
    assert lines == ["rank,eigenvalue,multiplicity", "1,0,1", "2,1,2", "3,1,2"]
