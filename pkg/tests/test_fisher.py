"""Unit tests for per-order, total, bucket and baseline Fisher informations.

Oracles: the closed-form small- and large-separation limits, agreement
between the deterministic Gauss-Hermite and Monte Carlo integration paths,
the additive two-photon hierarchy decomposition, and adaptive quadrature of
the unpixelated direct-imaging information.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from homsr.fisher import (
    QuadratureSpec,
    asymptotic_fisher_2p,
    bucket_fisher,
    default_l_max,
    di_baseline_fisher,
    fisher_L,
    fisher_total,
    optimal_brightness,
    sampling_hierarchy_fi,
    subrayleigh_fisher_order,
    subrayleigh_fisher_total,
)
from homsr.optics import PsfModel, SourceScene

PSF = PsfModel()


class TestClosedForms:
    def test_subrayleigh_order_anchors(self):
        # a = N_s/(1+2N_s); F^(2P) = C(2P,P)/(2(2P-1)) a^(2P-1).
        assert subrayleigh_fisher_order(1, 1.5) == pytest.approx(0.375, rel=1e-12)
        a = 1.0 / 3.0
        assert subrayleigh_fisher_order(2, 1.0) == pytest.approx(1.0 * a ** 3, rel=1e-12)

    def test_subrayleigh_total_anchors(self):
        assert subrayleigh_fisher_total(1.5) == pytest.approx(0.4514162296, rel=1e-8)
        assert subrayleigh_fisher_total(1.0) == pytest.approx(0.3819660113, rel=1e-8)

    def test_total_dominates_partial_sums(self):
        for ns in (0.1, 1.0, 3.0):
            partial = sum(subrayleigh_fisher_order(p, ns) for p in range(1, 80))
            assert partial == pytest.approx(subrayleigh_fisher_total(ns), rel=1e-6)

    def test_asymptotic_two_photon(self):
        assert asymptotic_fisher_2p(0.5) == pytest.approx(4.0 / 27.0, rel=1e-12)

    def test_optimal_brightness(self):
        assert optimal_brightness(2) == 0.5
        assert optimal_brightness(3) == 1.0
        ns_grid = np.linspace(0.05, 3.0, 60)
        values = ns_grid / (1.0 + ns_grid) ** 3
        assert abs(ns_grid[np.argmax(values)] - 0.5) < 0.06

    def test_validation(self):
        with pytest.raises(ValueError):
            subrayleigh_fisher_order(0, 1.0)
        with pytest.raises(ValueError):
            optimal_brightness(1)


class TestFisherL:
    def test_two_photon_small_separation(self):
        for ns in (0.1, 1.5):
            scene = SourceScene(separation=0.01, brightness=ns)
            est = fisher_L(scene, PSF, 2)
            assert est.converged
            assert est.value == pytest.approx(subrayleigh_fisher_order(1, ns), rel=0.02)

    def test_two_photon_large_separation(self):
        for ns in (0.5, 1.5):
            scene = SourceScene(separation=20.0, brightness=ns)
            est = fisher_L(scene, PSF, 2)
            assert est.value == pytest.approx(asymptotic_fisher_2p(ns), rel=0.02)

    def test_gh_and_mc_agree(self):
        scene = SourceScene(separation=1.0, brightness=1.5)
        gh = fisher_L(scene, PSF, 3, QuadratureSpec(scheme="gauss_hermite_tensor"))
        mc = fisher_L(scene, PSF, 3, QuadratureSpec(scheme="monte_carlo_importance"))
        assert mc.value == pytest.approx(gh.value, rel=0.05)
        assert mc.stderr > 0

    def test_reference_photon_order_is_negligible(self):
        # The lone reference photon carries information only through the
        # frame-size weight; by s = 6 sigma_x that channel is ~1e-8.
        est = fisher_L(SourceScene(separation=6.0, brightness=1.5), PSF, 1)
        assert est.value < 1e-6

    def test_validation(self):
        with pytest.raises(ValueError):
            fisher_L(SourceScene(separation=0.0, brightness=1.0), PSF, 2)
        with pytest.raises(ValueError):
            fisher_L(SourceScene(separation=1.0, brightness=1.0), PSF, 0)
        with pytest.raises(ValueError):
            QuadratureSpec(nodes_per_dim=4)
        with pytest.raises(ValueError):
            QuadratureSpec(sample_count=100)
        with pytest.raises(ValueError):
            QuadratureSpec(batch_count=1)
        with pytest.raises(ValueError):
            fisher_L(SourceScene(1.0, 1.0), PSF, 2, QuadratureSpec(scheme="simpson"))


class TestFisherTotal:
    def test_default_l_max(self):
        assert default_l_max(SourceScene(1.0, 1.5)) == 7
        assert default_l_max(SourceScene(1.0, 0.1)) == 3

    def test_breakdown_consistency(self):
        scene = SourceScene(separation=0.5, brightness=0.5)
        breakdown = fisher_total(scene, PSF)
        assert breakdown.total == pytest.approx(sum(e.value for e in breakdown.per_L.values()), rel=1e-12)
        assert set(breakdown.per_L) == set(range(1, breakdown.l_max + 1))
        assert breakdown.closed_form_refs["subrayleigh_total"] == pytest.approx(
            subrayleigh_fisher_total(0.5), rel=1e-12
        )

    def test_small_separation_total_matches_closed_form(self):
        scene = SourceScene(separation=0.01, brightness=1.0)
        breakdown = fisher_total(scene, PSF, l_max=6)
        assert breakdown.total == pytest.approx(subrayleigh_fisher_total(1.0), rel=0.03)

    def test_validation(self):
        with pytest.raises(ValueError):
            fisher_total(SourceScene(1.0, 1.0), PSF, l_max=1)


class TestHierarchy:
    @pytest.mark.parametrize("s,ns", [(0.3, 0.5), (1.0, 1.5), (3.0, 1.0)])
    def test_ordering_and_cross_check(self, s, ns):
        scene = SourceScene(separation=s, brightness=ns)
        h = sampling_hierarchy_fi(scene, PSF)
        assert h.f_full >= h.f_dk_x >= h.f_x >= 0
        assert h.f_full >= h.f_kbar_x >= h.f_x
        est = fisher_L(scene, PSF, 2)
        assert h.f_full == pytest.approx(est.value, rel=1e-3)

    def test_class_term_matches_bucket(self):
        scene = SourceScene(separation=1.0, brightness=1.5)
        h = sampling_hierarchy_fi(scene, PSF)
        assert bucket_fisher(scene, PSF, 2) == pytest.approx(h.f_x, rel=1e-4)


class TestBucketFisher:
    def test_small_separation_retains_information(self):
        scene = SourceScene(separation=0.02, brightness=1.5)
        for L in (2, 4):
            resolved = fisher_L(scene, PSF, L).value
            assert bucket_fisher(scene, PSF, L) >= 0.95 * resolved

    def test_large_separation_loses_information(self):
        scene = SourceScene(separation=10.0, brightness=1.5)
        resolved = fisher_L(scene, PSF, 2).value
        assert bucket_fisher(scene, PSF, 2) < 0.05 * resolved


class TestDiBaseline:
    @staticmethod
    def _unpixelated_oracle(scene, psf):
        s, sx = scene.separation, psf.sigma_x

        def intensity(x, sep):
            return 0.5 * (
                np.exp(-((x - sep / 2.0) ** 2) / (2 * sx ** 2))
                + np.exp(-((x + sep / 2.0) ** 2) / (2 * sx ** 2))
            ) / (sx * math.sqrt(2 * math.pi))

        h = 1e-6

        def integrand(x):
            d = (intensity(x, s + h) - intensity(x, s - h)) / (2 * h)
            return d ** 2 / intensity(x, s)

        lim = s / 2.0 + 10.0 * sx
        value, _ = integrate.quad(integrand, -lim, lim, limit=200)
        return scene.brightness * value / psf.sigma_k ** 2

    def test_fine_pixels_converge_to_continuum(self):
        scene = SourceScene(separation=1.0, brightness=1.5)
        fine = di_baseline_fisher(scene, PSF, pixel_pitch=0.01, n_pixels=2800)
        assert fine == pytest.approx(self._unpixelated_oracle(scene, PSF), rel=1e-3)

    def test_coarse_pixels_lose_information(self):
        scene = SourceScene(separation=1.0, brightness=1.5)
        fine = di_baseline_fisher(scene, PSF, pixel_pitch=0.01, n_pixels=2800)
        coarse = di_baseline_fisher(scene, PSF, pixel_pitch=2.0, n_pixels=14)
        assert coarse < fine

    def test_rayleigh_curse(self):
        # Direct imaging loses all information as s -> 0, while the
        # interferometric total stays finite.
        ns = 1.5
        di_small = di_baseline_fisher(SourceScene(0.05, ns), PSF, pixel_pitch=0.05, n_pixels=260)
        assert di_small < 0.05 * subrayleigh_fisher_total(ns)

    def test_coverage_validation(self):
        with pytest.raises(ValueError):
            di_baseline_fisher(SourceScene(1.0, 1.0), PSF, pixel_pitch=0.1, n_pixels=20)
        with pytest.raises(ValueError):
            di_baseline_fisher(SourceScene(1.0, 1.0), PSF, pixel_pitch=0.0, n_pixels=100)
