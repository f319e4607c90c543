"""Characteristic determinant and eigenvalue search.

The eigenvalues of the boundary problem are the zeros of

    Delta(lam) = det[ U_i(y_k) ] = sum_T  Z_T(lam) * M_T

where the sum runs over the 20 canonical column triples, M_T are the minors
of the boundary matrix and Z_T(lam) the matching triple determinants of the
fundamental-system endpoint matrix [I | R(lam)].

Every quantity here is an exponential polynomial in the root-subset sums
E_S = sum_{j in S} omega_j * lam.  Evaluating Z_T naively from the endpoint
matrix cancels catastrophically once Re(E_S * lam) spreads over many orders
of magnitude, so all internal evaluation expands Z_T over which root each
right-end column draws on, and divides out the dominant exponential.  Zeros
are unchanged and every term keeps modulus O(coefficients), which makes the
relative residual |Delta~| / max-term a meaningful zero test everywhere.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import charode
from .charode import (
    EXP_ARG_LIMIT,
    LAMBDA_FLOOR,
    ProblemCoefficients,
    characteristic_roots,
    check_uniqueness_conditions,
    lagrange_coefficients,
    subset_exponentials,
)
from .complexalg import det3_batch
from .errors import ContractViolation, LambdaTooSmall, RangeOverflow
from .pluecker import TRIPLES, as_boundary_matrix, minors_of

#: radius of the excluded disc around lambda = 0
ORIGIN_EXCLUSION = 1e-6

#: default normalized-residual tolerance for accepting a zero
ZERO_TOLERANCE = 1e-10

#: polished zeros closer than this merge into one reported eigenvalue
DEDUP_DISTANCE = 1e-6

_NEWTON_MAX_ITER = 80
_NEWTON_STEP_RTOL = 1e-13


def _assignment_plan():
    """For each triple: which columns are identity, and the root assignments.

    A right-end column (power m = 0, 1, 2) expands as
    sum_j e^{r_j} r_j^m c_j, and a triple determinant keeps only assignments
    of pairwise distinct roots to its right-end columns.
    """
    plan = []
    for t in TRIPLES:
        left = tuple(c - 1 for c in t if c <= 3)
        right = tuple(c - 4 for c in t if c >= 4)
        assigns = [
            (js, charode.SUBSET_INDEX[tuple(sorted(js))])
            for js in itertools.permutations(range(3), len(right))
        ]
        plan.append((left, right, assigns))
    return tuple(plan)


_PLAN = _assignment_plan()
_EYE = np.eye(3, dtype=complex)


def scaled_minor_rows(p: ProblemCoefficients, lam):
    """Z~_T(lam) = Z_T(lam) * exp(-e_star) for all 20 triples.

    lam may be any array shape; returns (rows, e_star) with rows of shape
    lam.shape + (20,).  e_star is the dominant root-subset exponent, so the
    true Z_T = rows * exp(e_star) while rows itself stays O(coefficients).
    """
    lam = np.asarray(lam, dtype=complex)
    bad = np.abs(lam) <= LAMBDA_FLOOR
    if np.any(bad):
        offender = lam[bad].ravel()[0]
        raise LambdaTooSmall(f"|lambda| <= {LAMBDA_FLOOR:.0e} at lambda = {offender}")
    omega = characteristic_roots(p).as_array()
    r, c = lagrange_coefficients(omega, lam)
    expfac, e_star = subset_exponentials(r)
    rp = np.stack([np.ones_like(r), r, r * r], axis=-1)  # [..., j, m] = r_j^m
    rows = np.zeros(lam.shape + (20,), dtype=complex)
    cols = np.empty(lam.shape + (3, 3), dtype=complex)
    for ti, (left, right, assigns) in enumerate(_PLAN):
        acc = np.zeros(lam.shape, dtype=complex)
        for q, col in enumerate(left):
            cols[..., :, q] = _EYE[col]
        nl = len(left)
        for js, subset_idx in assigns:
            for q, m in enumerate(right):
                j = js[q]
                cols[..., :, nl + q] = c[..., j, :] * rp[..., j, m][..., None]
            acc += expfac[..., subset_idx] * det3_batch(cols)
        rows[..., ti] = acc
    return rows, e_star


def _delta_scaled(p: ProblemCoefficients, minors: np.ndarray, lam):
    """(delta~, scale, e_star): delta~ = Delta * exp(-e_star); scale is the
    largest term magnitude, the natural yardstick for residuals."""
    rows, e_star = scaled_minor_rows(p, lam)
    terms = rows * minors
    scale = np.abs(terms).max(axis=-1)
    return terms.sum(axis=-1), scale, e_star


def char_det(p: ProblemCoefficients, a, lam: complex) -> complex:
    """Characteristic determinant via the minor expansion sum_T Z_T M_T.

    Equals the direct 3x3 determinant det[U_i(y_k)] of the boundary forms
    applied to the fundamental system.
    """
    m = minors_of(as_boundary_matrix(a))
    delta, _, e_star = _delta_scaled(p, m, np.array([complex(lam)]))
    if e_star[0].real > EXP_ARG_LIMIT:
        raise RangeOverflow(
            f"Delta({lam}) ~ exp({e_star[0].real:.1f}) overflows double precision"
        )
    return complex(delta[0] * np.exp(e_star[0]))


def hadamard_residuals(p: ProblemCoefficients, a, lam) -> np.ndarray:
    """|Delta(lam)| divided by the product of row norms of [U_i(y_k)].

    The Hadamard bound makes this a dimensionless zero indicator in [0, ~1];
    it is the residual quoted in spectra and reconstruction reports.  Computed
    in log space so the exponential growth of the entries never overflows.
    """
    a = as_boundary_matrix(a)
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    m = minors_of(a)
    delta, _, e_star = _delta_scaled(p, m, lam)
    omega = characteristic_roots(p).as_array()
    right = charode.endpoint_blocks(omega, lam)  # (..., k, m) values at x=1
    z = np.zeros(lam.shape + (3, 6), dtype=complex)
    z[..., :, :3] = _EYE
    z[..., :, 3:] = right
    g = np.einsum("ij,...kj->...ik", a, z)
    log_norms = np.log(np.linalg.norm(g, axis=-1)).sum(axis=-1)
    with np.errstate(divide="ignore"):
        log_delta = np.where(delta == 0, -np.inf, np.log(np.abs(delta))) + e_star.real
    return np.exp(log_delta - log_norms)


@dataclass(frozen=True)
class SearchRegion:
    """Rectangle of the complex plane to scan, minus a small disc at 0."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    grid_density: float = 4.0

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ContractViolation("search region bounds must be ordered")
        if not self.grid_density > 0:
            raise ContractViolation("grid density must be positive")

    def contains(self, lam: complex) -> bool:
        return (
            self.re_min <= lam.real <= self.re_max
            and self.im_min <= lam.imag <= self.im_max
            and abs(lam) > ORIGIN_EXCLUSION
        )

    def grid(self) -> np.ndarray:
        nx = int(np.ceil((self.re_max - self.re_min) * self.grid_density)) + 1
        ny = int(np.ceil((self.im_max - self.im_min) * self.grid_density)) + 1
        xs = np.linspace(self.re_min, self.re_max, max(nx, 2))
        ys = np.linspace(self.im_min, self.im_max, max(ny, 2))
        return xs[None, :] + 1j * ys[:, None]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues found in a region, sorted by (re, im)."""

    eigenvalues: np.ndarray
    region: SearchRegion | None
    tolerance: float = ZERO_TOLERANCE
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)


def eigenvalue_array(spectrum) -> np.ndarray:
    """Accept a Spectrum or any sequence of complex numbers."""
    values = getattr(spectrum, "eigenvalues", spectrum)
    return np.asarray(values, dtype=complex).ravel()


def _newton_polish(p, minors, seeds, step_limit=np.inf):
    """Vectorized Newton iteration on the rescaled determinant.

    The step f/f' is invariant under the exponential rescaling, and the
    iteration stops on step size, not residual: near dominant-exponential
    crossovers the residual alone cannot distinguish a zero from noise.
    Seeds that take a step beyond ``step_limit`` are divergent (plateau
    noise, no nearby zero) and are dropped.  Returns (points, converged).
    """
    lam = np.asarray(seeds, dtype=complex).copy()
    converged = np.zeros(lam.shape, dtype=bool)
    active = np.ones(lam.shape, dtype=bool)
    for _ in range(_NEWTON_MAX_ITER):
        if not active.any():
            break
        cur = lam[active]
        h = 1e-7 * np.maximum(1.0, np.abs(cur))
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            f, _, e0 = _delta_scaled(p, minors, cur)
            fp, _, ep = _delta_scaled(p, minors, cur + h)
            fm, _, em = _delta_scaled(p, minors, cur - h)
            # bring the three evaluations onto the center's scaling branch
            deriv = (fp * np.exp(ep - e0) - fm * np.exp(em - e0)) / (2.0 * h)
            step = f / deriv
        dead = (
            (deriv == 0)
            | ~np.isfinite(deriv)
            | ~np.isfinite(f)
            | ~np.isfinite(step)
            | (np.abs(step) > step_limit)
        )
        step = np.where(dead, 0.0, step)
        cur = cur - step
        # keep iterates away from the excluded origin disc
        tiny = np.abs(cur) <= ORIGIN_EXCLUSION
        cur[tiny] = ORIGIN_EXCLUSION * 2.0
        done = np.abs(step) <= _NEWTON_STEP_RTOL * np.maximum(1.0, np.abs(cur))
        idx = np.where(active)[0]
        lam[idx] = cur
        converged[idx[done & ~dead]] = True
        active[idx[done | dead]] = False
    return lam, converged


def find_eigenvalues(
    p: ProblemCoefficients,
    a,
    region: SearchRegion,
    max_count: int | None = None,
    tolerance: float = ZERO_TOLERANCE,
) -> Spectrum:
    """All zeros of the characteristic determinant inside the region.

    Grid-samples the normalized determinant, runs Newton from every local
    minimum, keeps step-converged points whose relative residual is below
    ``tolerance``, deduplicates, sorts by (re, im) and truncates to
    ``max_count``.  Deterministic for identical inputs.  An empty spectrum is
    a legal outcome (constant determinants have no zeros).
    """
    a = as_boundary_matrix(a)
    report = check_uniqueness_conditions(p)
    if not report.all_ok:
        warnings.warn(
            "uniqueness conditions fail for these coefficients; "
            "the spectrum may not determine the boundary conditions",
            stacklevel=2,
        )
    minors = minors_of(a)

    grid = region.grid()
    flat = grid.ravel()
    safe = np.abs(flat) > ORIGIN_EXCLUSION
    residual = np.full(flat.shape, np.inf)
    delta, scale, _ = _delta_scaled(p, minors, flat[safe])
    with np.errstate(invalid="ignore", divide="ignore"):
        residual[safe] = np.abs(delta) / np.where(scale == 0, 1.0, scale)
    residual = residual.reshape(grid.shape)

    padded = np.pad(residual, 1, constant_values=np.inf)
    shifts = [
        padded[1 + di : 1 + di + residual.shape[0], 1 + dj : 1 + dj + residual.shape[1]]
        for di in (-1, 0, 1)
        for dj in (-1, 0, 1)
        if (di, dj) != (0, 0)
    ]
    is_min = residual <= np.minimum.reduce(shifts)
    seeds = grid[is_min & np.isfinite(residual)]

    diagnostics = {
        "seeds": int(seeds.size),
        "step_converged": 0,
        "accepted": 0,
        "merged": 0,
        "discarded_outside": 0,
        "nonconverged_seeds": 0,
    }
    if seeds.size == 0:
        return Spectrum(np.array([], dtype=complex), region, tolerance, diagnostics)

    diagonal = np.hypot(region.re_max - region.re_min, region.im_max - region.im_min)
    points, converged = _newton_polish(p, minors, seeds, step_limit=2.0 * diagonal)
    diagnostics["step_converged"] = int(converged.sum())
    diagnostics["nonconverged_seeds"] = int((~converged).sum())

    delta, scale, _ = _delta_scaled(p, minors, points)
    with np.errstate(invalid="ignore", divide="ignore"):
        final_res = np.abs(delta) / np.where(scale == 0, 1.0, scale)
    good = converged & (final_res <= tolerance)
    inside = np.array([region.contains(complex(v)) for v in points])
    diagnostics["discarded_outside"] = int((good & ~inside).sum())
    candidates = points[good & inside]

    order = np.lexsort((candidates.imag, candidates.real))
    candidates = candidates[order]
    kept: list[complex] = []
    for value in candidates:
        value = complex(value)
        if all(abs(value - other) > DEDUP_DISTANCE for other in kept):
            kept.append(value)
        else:
            diagnostics["merged"] += 1
    diagnostics["accepted"] = len(kept)

    eigs = np.array(kept, dtype=complex)
    if max_count is not None:
        eigs = eigs[: int(max_count)]
    return Spectrum(eigs, region, tolerance, diagnostics)
