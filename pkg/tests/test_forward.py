import warnings

import numpy as np
import pytest

from bcrecon.charode import ProblemCoefficients, check_uniqueness_conditions
from bcrecon.errors import RepeatedRoots
from bcrecon.forward import (
    SearchRegion,
    char_det,
    find_eigenvalues,
    hadamard_residuals,
    scaled_minor_rows,
)
from bcrecon.forward import _delta_scaled, _newton_polish  # noqa: F401
from bcrecon.pluecker import minors_of

from conftest import random_rank3_matrix
from oracles import bisection_refine, direct_char_det
from reference_data import BOUNDARY, COEFFS, EIGENVALUES_2DP

LEFT_IDENTITY = np.hstack([np.eye(3), np.zeros((3, 3))])


def _random_valid_problem(rng, box=1.5):
    while True:
        w = rng.uniform(-box, box, size=(3, 2))
        p = ProblemCoefficients.from_roots(*(w[:, 0] + 1j * w[:, 1]))
        try:
            if check_uniqueness_conditions(p, tol=1e-3).all_ok:
                return p
        except RepeatedRoots:
            continue


class TestCharDet:
    def test_left_identity_gives_constant_one(self):
        for lam in (1.0, -3.0 + 2.0j, 17.0 - 4.0j, 0.01):
            assert char_det(COEFFS, LEFT_IDENTITY, lam) == pytest.approx(1.0)

    def test_expansion_equals_direct_determinant(self):
        # draws kept inside the well-conditioned range of the direct
        # determinant, which loses digits once the exponentials spread
        rng = np.random.default_rng(41)
        for _ in range(100):
            p = _random_valid_problem(rng, box=1.2)
            a = random_rank3_matrix(rng)
            lam = complex(rng.uniform(-5, 5), rng.uniform(-2, 2))
            if abs(lam) < 0.1:
                continue
            ours = char_det(p, a, lam)
            oracle = direct_char_det(p, a, lam)
            assert abs(ours - oracle) <= 1e-10 * max(abs(ours), abs(oracle))

    def test_reference_eigenvalue_has_small_residual(self):
        # two-decimal rounding keeps the normalized residual below 1e-2
        res = hadamard_residuals(COEFFS, BOUNDARY, np.array([0.46 - 0.12j]))
        assert res[0] <= 1e-2

    def test_rows_match_minor_pairing(self):
        # sum_T Z_T M_T must reproduce char_det for any boundary matrix
        rng = np.random.default_rng(42)
        a = random_rank3_matrix(rng)
        lam = 1.3 - 0.4j
        rows, e_star = scaled_minor_rows(COEFFS, np.array([lam]))
        total = complex((rows[0] * minors_of(a)).sum() * np.exp(e_star[0]))
        assert total == pytest.approx(char_det(COEFFS, a, lam), rel=1e-12)


class TestFindEigenvalues:
    def test_reference_problem_subregion(self):
        region = SearchRegion(-15.0, 8.0, -5.0, 5.0)
        spectrum = find_eigenvalues(COEFFS, BOUNDARY, region)
        reference = [v for v in EIGENVALUES_2DP
                     if -15 <= v.real <= 8 and -5 <= v.imag <= 5]
        assert len(reference) == 7
        for target in reference:
            err = np.min(np.abs(spectrum.eigenvalues - target))
            assert err < 0.05, f"no eigenvalue within 0.05 of {target}"
        # residual invariant at the stated tolerance
        res = hadamard_residuals(COEFFS, BOUNDARY, spectrum.eigenvalues)
        assert np.all(res <= spectrum.tolerance)

    def test_constant_determinant_empty_spectrum(self):
        spectrum = find_eigenvalues(COEFFS, LEFT_IDENTITY, SearchRegion(-5, 5, -2, 2))
        assert len(spectrum) == 0

    def test_sorted_and_distinct(self):
        spectrum = find_eigenvalues(COEFFS, BOUNDARY, SearchRegion(-15, 8, -5, 5))
        eigs = spectrum.eigenvalues
        keys = [(v.real, v.imag) for v in eigs]
        assert keys == sorted(keys)
        for i in range(len(eigs)):
            for j in range(i + 1, len(eigs)):
                assert abs(eigs[i] - eigs[j]) > 1e-6

    def test_max_count_truncates(self):
        region = SearchRegion(-15.0, 8.0, -5.0, 5.0)
        spectrum = find_eigenvalues(COEFFS, BOUNDARY, region, max_count=3)
        assert len(spectrum) == 3

    def test_bisection_oracle_agrees(self):
        region = SearchRegion(-8.0, 8.0, -5.0, 5.0)
        spectrum = find_eigenvalues(COEFFS, BOUNDARY, region)
        minors = minors_of(BOUNDARY)

        def residual(points):
            delta, scale, _ = _delta_scaled(COEFFS, minors, points)
            return np.abs(delta) / scale

        assert len(spectrum) >= 3
        for lam in spectrum.eigenvalues:
            refined = bisection_refine(residual, lam + 0.01 - 0.007j)
            assert abs(refined - lam) <= 1e-8

    def test_local_attraction_from_perturbed_start(self):
        region = SearchRegion(-15.0, 8.0, -5.0, 5.0)
        spectrum = find_eigenvalues(COEFFS, BOUNDARY, region)
        minors = minors_of(BOUNDARY)
        seeds = spectrum.eigenvalues + 1e-4
        polished, converged = _newton_polish(COEFFS, minors, seeds)
        assert converged.all()
        assert np.max(np.abs(polished - spectrum.eigenvalues)) <= 1e-6

    def test_row_operations_leave_zeros_unchanged(self):
        rng = np.random.default_rng(43)
        r = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert abs(np.linalg.det(r)) > 0.1
        region = SearchRegion(-15.0, 8.0, -5.0, 5.0)
        s1 = find_eigenvalues(COEFFS, BOUNDARY, region)
        s2 = find_eigenvalues(COEFFS, r @ BOUNDARY, region)
        assert len(s1) == len(s2)
        assert np.max(np.abs(s1.eigenvalues - s2.eigenvalues)) <= 1e-8

    def test_deterministic_output(self):
        region = SearchRegion(-10.0, 5.0, -3.0, 3.0)
        s1 = find_eigenvalues(COEFFS, BOUNDARY, region)
        s2 = find_eigenvalues(COEFFS, BOUNDARY, region)
        assert np.array_equal(s1.eigenvalues, s2.eigenvalues)
        assert s1.diagnostics == s2.diagnostics

    def test_origin_disc_excluded(self):
        spectrum = find_eigenvalues(COEFFS, BOUNDARY, SearchRegion(-2, 2, -2, 2))
        assert np.all(np.abs(spectrum.eigenvalues) > 1e-6)

    def test_warns_when_uniqueness_conditions_fail(self):
        p = ProblemCoefficients.from_roots(1.0, -1.0, 2.0)  # w1 + w2 = 0
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            find_eigenvalues(p, BOUNDARY, SearchRegion(-3, 3, -1, 1))
        assert any("uniqueness" in str(w.message) for w in caught)


class TestSearchRegion:
    def test_bounds_validated(self):
        with pytest.raises(Exception):
            SearchRegion(2.0, -2.0, 0.0, 1.0)

    def test_contains_excludes_origin(self):
        region = SearchRegion(-1, 1, -1, 1)
        assert region.contains(0.5 + 0.5j)
        assert not region.contains(1e-9 + 0j)
        assert not region.contains(2.0 + 0j)
