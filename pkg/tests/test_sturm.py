"""Tests for Sturm counting, shooting vectors and Pruefer phase tracking."""

import math

import numpy as np
import pytest

from skewbeta.ensembles import AntisymTridiagonal, build_antisym_tridiagonal
from skewbeta.spectral import positive_spectrum
from skewbeta.streams import RandomStream
from skewbeta.sturm import (count_positive_leq, prufer_phases, shooting_vector,
                            sturm_ratios)


class TestSturmCounting:
    @pytest.mark.parametrize("n,beta,seed", [
        (2, 2.0, 0), (3, 2.0, 1), (5, 1.0, 2), (8, 4.0, 3), (12, 0.5, 4),
    ])
    def test_count_matches_eigensolver(self, n, beta, seed):
        t = build_antisym_tridiagonal(n, beta, RandomStream(seed))
        sd = positive_spectrum(t)
        rng = np.random.default_rng(seed)
        for _ in range(50):
            mu = float(rng.uniform(0.0, 1.3 * sd.lam[0]))
            assert count_positive_leq(t, mu) == int(np.sum(sd.lam <= mu))

    def test_count_above_spectrum(self):
        t = build_antisym_tridiagonal(6, 2.0, RandomStream(5))
        sd = positive_spectrum(t)
        assert count_positive_leq(t, 2.0 * sd.lam[0]) == 3

    def test_count_at_zero(self):
        t = build_antisym_tridiagonal(6, 2.0, RandomStream(6))
        assert count_positive_leq(t, 0.0) == 0

    def test_ratios_survive_submatrix_eigenvalue(self):
        # mu = b_1 is an eigenvalue of the trailing 2x2 block; the jitter
        # fallback must still produce a finite sequence
        t = AntisymTridiagonal([1.0, 1.5, 0.5])
        st = sturm_ratios(t, 1.0)
        assert np.all(np.isfinite(st.r)) and np.all(st.r != 0.0)


class TestShootingVector:
    def test_components_match_charpoly_product(self):
        # x_i = x_1 * P_{i-1}(mu) / (b_1 ... b_{i-1})
        b = np.array([0.9, 1.4, 0.6])
        t = AntisymTridiagonal(b)
        mu = 0.8
        p = [1.0, mu]
        for m in range(1, 3):
            p.append(mu * p[-1] - b[m - 1] ** 2 * p[-2])
        x = shooting_vector(t, mu)
        prod = 1.0
        for i in range(1, 4):
            prod *= b[i - 1]
            assert x[i] == pytest.approx(p[i] / prod, rel=1e-13)

    def test_residual_vanishes_at_eigenvalue(self):
        t = build_antisym_tridiagonal(5, 2.0, RandomStream(7))
        lam = positive_spectrum(t).lam[0]
        x = shooting_vector(t, lam)
        assert abs(x[-1]) < 1e-9 * np.max(np.abs(x[:-1]))

    def test_residual_nonzero_off_spectrum(self):
        t = build_antisym_tridiagonal(5, 2.0, RandomStream(8))
        lam = positive_spectrum(t).lam
        mu = 0.5 * (lam[0] + lam[1])
        assert abs(shooting_vector(t, mu)[-1]) > 1e-6

    def test_scales_linearly_in_x1(self):
        t = build_antisym_tridiagonal(4, 2.0, RandomStream(9))
        assert np.allclose(shooting_vector(t, 0.7, x1=3.0),
                           3.0 * shooting_vector(t, 0.7))

    def test_zero_x1_rejected(self):
        t = build_antisym_tridiagonal(4, 2.0, RandomStream(9))
        with pytest.raises(ValueError):
            shooting_vector(t, 0.7, x1=0.0)


class TestPruferPhases:
    def test_anchor_values(self):
        t = build_antisym_tridiagonal(6, 2.0, RandomStream(10))
        start = prufer_phases(t, np.array([1e-300]))[0].theta
        expect = np.where(np.arange(2, 7) % 2 == 0, math.pi / 2.0, 0.0)
        assert np.allclose(start, expect, atol=1e-9)

    @pytest.mark.parametrize("n", [4, 6, 9])
    def test_strictly_decreasing(self, n):
        t = build_antisym_tridiagonal(n, 2.0, RandomStream(11 + n))
        lam_max = positive_spectrum(t).lam[0]
        grid = np.linspace(0.0, 1.4 * lam_max, 150)[1:]
        stacked = np.stack([p.theta for p in prufer_phases(t, grid)])
        assert np.all(np.diff(stacked, axis=0) < 0)

    def test_last_phase_counts_submatrix_eigenvalues(self):
        # theta_n crosses pi/2 (mod pi) exactly at the positive zeros of the
        # order-(n-1) trailing-submatrix characteristic polynomial
        t = build_antisym_tridiagonal(7, 2.0, RandomStream(12))
        sub = AntisymTridiagonal(t.b[:-1])
        sub_lam = positive_spectrum(sub).lam
        mu_hi = 1.5 * positive_spectrum(t).lam[0]
        start = prufer_phases(t, np.array([1e-300]))[0].theta[-1]
        end = prufer_phases(t, np.linspace(1e-3, mu_hi, 400))[-1].theta[-1]
        levels = math.pi / 2.0 - math.pi * np.arange(50)
        crossings = int(np.sum((levels <= start) & (levels > end)))
        assert crossings == sub_lam.size

    @pytest.mark.parametrize("grid", [
        np.zeros(0), np.array([1.0, 0.5]), np.array([-1.0, 1.0]),
    ])
    def test_grid_validation(self, grid):
        t = build_antisym_tridiagonal(4, 2.0, RandomStream(13))
        with pytest.raises(ValueError):
            prufer_phases(t, grid)
