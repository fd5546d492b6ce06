"""Tests for the spectrum/first-component decomposition and its inverse."""

import numpy as np
import pytest

from skewbeta.ensembles import AntisymTridiagonal, build_antisym_tridiagonal
from skewbeta.spectral import (DegeneracyError, SpectralData, charpoly_sequence,
                               moment_equations_check, positive_spectrum,
                               reconstruct_tridiagonal, resolvent_check,
                               secular_check)
from skewbeta.streams import RandomStream


class TestSpectralData:
    def test_normalization_defect(self):
        sd = SpectralData(2, [1.0], [np.sqrt(0.5)])
        assert sd.normalization_defect() < 1e-15

    def test_odd_requires_z(self):
        with pytest.raises(ValueError):
            SpectralData(3, [1.0], [0.5])

    def test_even_forbids_z(self):
        with pytest.raises(ValueError):
            SpectralData(2, [1.0], [0.5], z=0.5)

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            SpectralData(4, [1.0, 2.0], [0.5, 0.5])

    def test_json_round_trip(self):
        sd = SpectralData(3, [1.5], [0.4], z=np.sqrt(1.0 - 2 * 0.16))
        again = SpectralData.from_json(sd.to_json())
        assert again.n == 3 and np.allclose(again.lam, sd.lam)
        assert again.z == pytest.approx(sd.z)

    def test_full_spectrum_odd(self):
        sd = SpectralData(3, [1.5], [0.4], z=np.sqrt(1.0 - 2 * 0.16))
        assert np.array_equal(sd.full_spectrum(), [1.5, -1.5, 0.0])


class TestCharpolySequence:
    def test_matches_direct_recurrence(self):
        # P_0 = 1, P_1 = x, P_{m+1} = x P_m - b_m^2 P_{m-1} (bottom-up b)
        b = np.array([0.8, 1.3, 0.6])
        t = AntisymTridiagonal(b)
        x = 1.7
        p = [1.0, x]
        for m in range(1, 4):
            p.append(x * p[-1] - b[m - 1] ** 2 * p[-2])
        cp = charpoly_sequence(t, x)
        assert np.allclose(cp.values(), p, rtol=1e-13)

    def test_top_value_is_char_poly(self):
        t = AntisymTridiagonal([1.0, 2.0, 0.5, 1.5])
        x = 0.9
        d, e = t.symmetric_counterpart()
        sym = np.diag(e, 1) + np.diag(e, -1)
        expected = np.linalg.det(x * np.eye(t.n) - sym)
        assert charpoly_sequence(t, x).value(t.n) == pytest.approx(expected, rel=1e-10)

    def test_large_order_no_overflow(self):
        b = np.full(400, 3.0)
        cp = charpoly_sequence(AntisymTridiagonal(b), 7.0)
        assert np.isfinite(cp.logmags[-1])


class TestPositiveSpectrum:
    def test_n2_closed_form(self):
        # lambda = b_1 and q_1^2 = 1/2
        t = AntisymTridiagonal([1.3])
        sd = positive_spectrum(t)
        assert sd.lam[0] == pytest.approx(1.3, rel=1e-14)
        assert sd.q[0] == pytest.approx(np.sqrt(0.5), rel=1e-12)

    def test_n3_closed_form(self):
        # lambda = sqrt(b_1^2 + b_2^2), q_1^2 = b_2^2/(2 lambda^2), z^2 = b_1^2/lambda^2
        b1, b2 = 0.9, 1.7
        sd = positive_spectrum(AntisymTridiagonal([b1, b2]))
        lam = np.hypot(b1, b2)
        assert sd.lam[0] == pytest.approx(lam, rel=1e-13)
        assert sd.q[0] ** 2 == pytest.approx(b2 ** 2 / (2 * lam ** 2), rel=1e-11)
        assert sd.z ** 2 == pytest.approx(b1 ** 2 / lam ** 2, rel=1e-11)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 8, 11])
    def test_round_trip(self, n):
        t = build_antisym_tridiagonal(n, 2.0, RandomStream(n))
        sd = positive_spectrum(t)
        again = reconstruct_tridiagonal(sd)
        assert np.allclose(again.b, t.b, rtol=1e-9)

    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_normalization_invariant(self, n):
        sd = positive_spectrum(build_antisym_tridiagonal(n, 1.0, RandomStream(20 + n)))
        assert sd.normalization_defect() < 1e-10

    def test_degenerate_spectrum_raises(self):
        # a near-vanishing middle coupling decouples two 2x2 blocks with the
        # same positive eigenvalue, violating the separation tolerance
        with pytest.raises(DegeneracyError):
            positive_spectrum(AntisymTridiagonal([1.0, 1e-16, 1.0]))

    def test_reconstruct_rejects_bad_normalization(self):
        sd = SpectralData(2, [1.0], [0.9])
        with pytest.raises(ValueError):
            reconstruct_tridiagonal(sd)


class TestResidualChecks:
    @pytest.mark.parametrize("n,beta", [(2, 2.0), (3, 2.0), (6, 1.0), (9, 4.0)])
    def test_secular(self, n, beta):
        t = build_antisym_tridiagonal(n, beta, RandomStream(30 + n))
        assert secular_check(t) < 1e-9

    @pytest.mark.parametrize("n", [3, 4, 7])
    def test_resolvent(self, n):
        t = build_antisym_tridiagonal(n, 2.0, RandomStream(40 + n))
        assert resolvent_check(t) < 1e-10

    @pytest.mark.parametrize("n", [2, 3, 5, 10])
    def test_moment_equations(self, n):
        t = build_antisym_tridiagonal(n, 2.0, RandomStream(50 + n))
        sd = positive_spectrum(t)
        res = moment_equations_check(t, sd)
        scale = max(1.0, float(np.max(t.b)) ** 4)
        assert np.all(res < 1e-10 * scale)
