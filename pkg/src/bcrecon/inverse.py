"""Boundary-condition reconstruction from a spectrum.

Each known eigenvalue lam_m turns the minor expansion of the characteristic
determinant into one homogeneous linear equation in the 20 unknown minors.
With at least 19 eigenvalues the stacked system generically has a
one-dimensional nullspace; its null vector is the minor vector (up to one
complex scale) and a boundary matrix is rebuilt from it.  The singular-value
profile of the system is the well-posedness diagnostic: a weak gap between
the two smallest values means the data do not pin the minors down.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .charode import ConditionReport, ProblemCoefficients, check_uniqueness_conditions
from .complexalg import nullspace_vector
from .errors import ContractViolation, NoEigenvaluesFound, TooFewEigenvalues
from .forward import (
    SearchRegion,
    Spectrum,
    eigenvalue_array,
    find_eigenvalues,
    hadamard_residuals,
    scaled_minor_rows,
)
from .pluecker import TRIPLES, minors_of, proportionality_defect, reconstruct, span_distance

#: the reconstruction system needs at least this many eigenvalues
MINIMUM_EIGENVALUES = 19

#: consistency tolerance the perturbation study defaults to: the study's job
#: is to record degradation, so only essentially-unreconstructable candidates
#: are rejected (clean data sits near 1e-10, destroyed data near 1)
STUDY_CONSISTENCY_TOLERANCE = 0.5


@dataclass(frozen=True)
class InversionSettings:
    rank_gap_threshold: float = 1e3
    consistency_tolerance: float = 1e-6
    minimum_eigenvalues: int = MINIMUM_EIGENVALUES

    def __post_init__(self):
        if not self.rank_gap_threshold > 1:
            raise ContractViolation("rank_gap_threshold must exceed 1")
        if not 0 < self.consistency_tolerance < 1:
            raise ContractViolation("consistency_tolerance must lie in (0, 1)")


@dataclass(frozen=True)
class ReconstructionReport:
    """Everything the inversion learned, plus its own diagnostics.

    ``minors`` is phase-normalized (largest entry real positive, unit norm);
    ``singular_values`` lists the 20-entry (zero-padded) spectrum of the
    assembled system; ``rank_gap`` is the ratio of its two smallest entries,
    floored at machine precision; ``rank_warning`` is set when that gap falls
    below the configured threshold, meaning the recovered candidate is not
    uniquely determined by the data.
    """

    minors: np.ndarray
    matrix: np.ndarray
    singular_values: np.ndarray
    rank_gap: float
    per_eigenvalue_residuals: np.ndarray
    uniqueness: ConditionReport
    pivot_used: tuple[int, int, int]
    rank_warning: bool
    settings: InversionSettings = field(default_factory=InversionSettings)

    def __post_init__(self):
        if np.any(self.per_eigenvalue_residuals < 0):
            raise ContractViolation("residuals must be non-negative")
        if self.rank_gap < 1:
            raise ContractViolation("rank gap is a ratio of sorted values, >= 1")


def assemble_system(p: ProblemCoefficients, spectrum) -> np.ndarray:
    """The N x 20 homogeneous system for the unknown minors.

    Row m holds the triple determinants Z_T(lam_m) in canonical order,
    rescaled to unit norm (each row's overall exponential scale cancels in
    the normalization).
    """
    eigs = eigenvalue_array(spectrum)
    if eigs.size < MINIMUM_EIGENVALUES:
        raise TooFewEigenvalues(
            f"{eigs.size} eigenvalues supplied, {MINIMUM_EIGENVALUES} required"
        )
    rows = np.empty((eigs.size, len(TRIPLES)), dtype=complex)
    for i, lam in enumerate(eigs):
        try:
            row, _ = scaled_minor_rows(p, np.array([lam]))
        except Exception as exc:
            raise type(exc)(f"eigenvalue #{i} ({lam}): {exc}") from exc
        rows[i] = row[0]
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise ContractViolation("an assembled row vanished identically")
    return rows / norms


def invert_spectrum(
    p: ProblemCoefficients,
    spectrum,
    settings: InversionSettings | None = None,
) -> ReconstructionReport:
    """Recover the boundary conditions (up to row span) from eigenvalues."""
    settings = settings or InversionSettings()
    eigs = eigenvalue_array(spectrum)
    if eigs.size < settings.minimum_eigenvalues:
        raise TooFewEigenvalues(
            f"{eigs.size} eigenvalues supplied, {settings.minimum_eigenvalues} required"
        )
    system = assemble_system(p, eigs)
    minors, gap = nullspace_vector(system)
    matrix = reconstruct(minors, consistency_tol=settings.consistency_tolerance)
    pivot = TRIPLES[int(np.argmax(np.abs(minors)))]

    singular = np.linalg.svd(system, compute_uv=False)
    padded = np.zeros(len(TRIPLES))
    padded[: singular.shape[0]] = singular

    residuals = hadamard_residuals(p, matrix, eigs)
    return ReconstructionReport(
        minors=minors,
        matrix=matrix,
        singular_values=padded,
        rank_gap=gap,
        per_eigenvalue_residuals=residuals,
        uniqueness=check_uniqueness_conditions(p),
        pivot_used=pivot,
        rank_warning=bool(gap < settings.rank_gap_threshold),
        settings=settings,
    )


@dataclass(frozen=True)
class PerturbationRecord:
    trial: int
    noise_level: float
    span_distance: float  # NaN when the trial failed
    status: str  # "ok" or the failure class name


def _run_trial(p, truth, eigs, noise_level, seed, trial, settings):
    rng = np.random.default_rng([seed, trial])
    noise = rng.standard_normal(eigs.size) + 1j * rng.standard_normal(eigs.size)
    perturbed = eigs + noise * (noise_level / np.sqrt(2.0))
    try:
        report = invert_spectrum(p, perturbed, settings)
        return PerturbationRecord(
            trial=trial,
            noise_level=noise_level,
            span_distance=span_distance(report.matrix, truth),
            status="ok",
        )
    except Exception as exc:
        return PerturbationRecord(
            trial=trial,
            noise_level=noise_level,
            span_distance=float("nan"),
            status=type(exc).__name__,
        )


def perturbation_study(
    p: ProblemCoefficients,
    a,
    noise_level: float,
    trials: int,
    seed: int,
    region: SearchRegion,
    settings: InversionSettings | None = None,
    workers: int = 1,
) -> list[PerturbationRecord]:
    """Sensitivity of the reconstruction to eigenvalue noise.

    The clean spectrum is computed once; each trial adds an isotropic complex
    Gaussian of standard deviation ``noise_level`` to every eigenvalue (the
    per-trial random stream is derived from (seed, trial), so records are
    identical for identical seeds regardless of scheduling), reruns the
    inversion, and records the span distance to the true matrix.  Individual
    trial failures become records with status != "ok", never exceptions.

    When no settings are given the consistency tolerance is loosened to
    ``STUDY_CONSISTENCY_TOLERANCE``: even badly degraded candidates are
    measured and recorded rather than rejected, which is the point of the
    study.
    """
    settings = settings or InversionSettings(
        consistency_tolerance=STUDY_CONSISTENCY_TOLERANCE
    )
    spectrum = find_eigenvalues(p, a, region)
    if len(spectrum) < settings.minimum_eigenvalues:
        kind = NoEigenvaluesFound if len(spectrum) == 0 else TooFewEigenvalues
        raise kind(
            f"forward stage found {len(spectrum)} eigenvalues in {region}, "
            f"{settings.minimum_eigenvalues} required"
        )
    eigs = spectrum.eigenvalues
    noise_level = float(noise_level)
    args = [(p, a, eigs, noise_level, int(seed), t, settings) for t in range(int(trials))]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda ar: _run_trial(*ar), args))
    else:
        records = [_run_trial(*ar) for ar in args]
    return records
