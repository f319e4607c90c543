import numpy as np
import pytest

from bcrecon.errors import InconsistentMinors, LambdaTooSmall, TooFewEigenvalues
from bcrecon.forward import SearchRegion, find_eigenvalues
from bcrecon.inverse import (
    InversionSettings,
    assemble_system,
    invert_spectrum,
    perturbation_study,
)
from bcrecon.pluecker import span_distance, triple_position

from conftest import random_rank3_matrix
from reference_data import BOUNDARY, COEFFS, EIGENVALUES_2DP, MINORS_NONZERO, REGION


class TestAssembleSystem:
    def test_shape_and_unit_rows(self, reference_spectrum):
        eigs = reference_spectrum.eigenvalues[:19]
        system = assemble_system(COEFFS, eigs)
        assert system.shape == (19, 20)
        assert np.allclose(np.linalg.norm(system, axis=1), 1.0)

    def test_too_few_eigenvalues(self, reference_spectrum):
        with pytest.raises(TooFewEigenvalues):
            assemble_system(COEFFS, reference_spectrum.eigenvalues[:18])

    def test_offending_eigenvalue_identified(self, reference_spectrum):
        eigs = reference_spectrum.eigenvalues.copy()
        eigs[7] = 1e-14
        with pytest.raises(LambdaTooSmall) as err:
            assemble_system(COEFFS, eigs)
        assert "#7" in str(err.value)

    def test_true_minors_annihilated(self, reference_spectrum):
        system = assemble_system(COEFFS, reference_spectrum)
        from bcrecon.pluecker import minors_of

        m = minors_of(BOUNDARY)
        m /= np.linalg.norm(m)
        assert np.linalg.norm(system @ m) <= 1e-9


class TestInvertSpectrum:
    def test_reference_round_trip(self, reference_spectrum):
        report = invert_spectrum(COEFFS, reference_spectrum)
        assert span_distance(report.matrix, BOUNDARY) <= 1e-6
        assert not report.rank_warning
        assert report.rank_gap >= 1.0
        assert report.singular_values.shape == (20,)
        assert np.all(np.diff(report.singular_values) <= 0)
        assert report.uniqueness.all_ok
        assert np.all(report.per_eigenvalue_residuals >= 0)

    def test_recovered_minors_match_reference_table(self, reference_spectrum):
        from bcrecon.pluecker import TRIPLES

        report = invert_spectrum(COEFFS, reference_spectrum)
        minors = report.minors / report.minors[triple_position(1, 3, 5)]
        for t, expected in MINORS_NONZERO.items():
            assert abs(minors[triple_position(*t)] - expected) < 1e-6
        for t in TRIPLES:
            if t not in MINORS_NONZERO:
                assert abs(minors[triple_position(*t)]) < 1e-6

    def test_random_matrix_round_trip(self):
        rng = np.random.default_rng(61)
        for _ in range(3):
            a = random_rank3_matrix(rng)
            spectrum = find_eigenvalues(COEFFS, a, REGION)
            assert len(spectrum) >= 19
            report = invert_spectrum(COEFFS, spectrum)
            assert span_distance(report.matrix, a) <= 1e-6

    def test_reordering_changes_nothing(self, reference_spectrum):
        rng = np.random.default_rng(62)
        eigs = reference_spectrum.eigenvalues
        shuffled = eigs[rng.permutation(len(eigs))]
        r1 = invert_spectrum(COEFFS, eigs)
        r2 = invert_spectrum(COEFFS, shuffled)
        assert span_distance(r1.matrix, r2.matrix) <= 1e-10
        assert r1.rank_gap == pytest.approx(r2.rank_gap, rel=1e-10)

    def test_overdetermined_never_worse(self, reference_spectrum):
        eigs = reference_spectrum.eigenvalues
        d19 = _safe_distance(COEFFS, eigs[:19])
        d25 = _safe_distance(COEFFS, eigs[:25])
        assert d25 <= d19 + 1e-9

    def test_residual_coherence(self, reference_spectrum):
        # every system row is orthogonal to the recovered minor vector up to
        # the system's smallest singular value
        system = assemble_system(COEFFS, reference_spectrum)
        report = invert_spectrum(COEFFS, reference_spectrum)
        sigma_min = report.singular_values[report.singular_values > 0][-1]
        row_residuals = np.abs(system @ report.minors)
        assert np.max(row_residuals) <= 10 * sigma_min
        # and the reported determinant residuals are coherently tiny on clean data
        assert np.max(report.per_eigenvalue_residuals) <= 1e-9

    def test_rank_warning_flag(self, reference_spectrum):
        settings = InversionSettings(rank_gap_threshold=1e15)
        report = invert_spectrum(COEFFS, reference_spectrum, settings)
        assert report.rank_warning  # gap is large but below this threshold

    def test_too_few_eigenvalues(self):
        with pytest.raises(TooFewEigenvalues):
            invert_spectrum(COEFFS, EIGENVALUES_2DP[:18])

    def test_two_decimal_inputs_are_inconsistent(self):
        # the rounded table perturbs the system far off the minor variety;
        # the inversion reports incompatibility instead of inventing an answer
        with pytest.raises(InconsistentMinors):
            invert_spectrum(COEFFS, EIGENVALUES_2DP)


def _safe_distance(p, eigs):
    try:
        return span_distance(invert_spectrum(p, eigs).matrix, BOUNDARY)
    except InconsistentMinors:
        return 1.0


class TestPerturbationStudy:
    REGION = SearchRegion(-40.0, 25.0, -5.0, 5.0)

    def test_zero_noise_reduces_to_round_trip(self):
        records = perturbation_study(
            COEFFS, BOUNDARY, noise_level=0.0, trials=3, seed=9, region=self.REGION
        )
        assert len(records) == 3
        for rec in records:
            assert rec.status == "ok"
            assert rec.span_distance <= 1e-6

    def test_same_seed_identical_records(self):
        kwargs = dict(noise_level=1e-6, trials=4, seed=123, region=self.REGION)
        r1 = perturbation_study(COEFFS, BOUNDARY, **kwargs)
        r2 = perturbation_study(COEFFS, BOUNDARY, **kwargs)
        assert [repr(r) for r in r1] == [repr(r) for r in r2]

    def test_worker_count_does_not_change_records(self):
        kwargs = dict(noise_level=1e-6, trials=4, seed=7, region=self.REGION)
        serial = perturbation_study(COEFFS, BOUNDARY, workers=1, **kwargs)
        threaded = perturbation_study(COEFFS, BOUNDARY, workers=4, **kwargs)
        assert [repr(r) for r in serial] == [repr(r) for r in threaded]

    def test_small_noise_produces_finite_distances(self):
        records = perturbation_study(
            COEFFS, BOUNDARY, noise_level=1e-6, trials=5, seed=3, region=self.REGION
        )
        ok = [r for r in records if r.status == "ok"]
        assert ok, "at least some trials should succeed at 1e-6 noise"
        for rec in ok:
            assert np.isfinite(rec.span_distance)

    def test_failures_become_records(self):
        # noise large enough to push eigenvalues into the overflow guard
        records = perturbation_study(
            COEFFS, BOUNDARY, noise_level=1e3, trials=3, seed=4, region=self.REGION
        )
        assert len(records) == 3
        assert any(r.status != "ok" for r in records)
        for rec in records:
            if rec.status != "ok":
                assert np.isnan(rec.span_distance)

    def test_too_small_region_raises(self):
        with pytest.raises(TooFewEigenvalues):
            perturbation_study(
                COEFFS, BOUNDARY, noise_level=0.0, trials=1, seed=0,
                region=SearchRegion(-3.0, 3.0, -2.0, 2.0),
            )
