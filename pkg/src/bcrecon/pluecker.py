"""Minor coordinates of 3x6 boundary matrices.

A rank-3 boundary matrix is determined, up to row operations, by its 20
third-order minors taken in canonical triple order.  This module computes
those minors, rebuilds a representative matrix from a minor vector, and
measures the projective distance between row spans.
"""

from __future__ import annotations

import itertools

import numpy as np

from .complexalg import det3_batch
from .errors import ContractViolation, InconsistentMinors, RankDeficient, ZeroMinorVector

#: canonical lexicographic order of the 20 column triples (1-based columns)
TRIPLES: tuple[tuple[int, int, int], ...] = tuple(itertools.combinations(range(1, 7), 3))
TRIPLE_POSITION = {t: i for i, t in enumerate(TRIPLES)}

#: rank-3 threshold: smallest singular value relative to the largest
RANK_RTOL = 1e-10


def triple_position(i: int, j: int, k: int) -> int:
    """Index of the triple (i, j, k), 1 <= i < j < k <= 6, in canonical order."""
    try:
        return TRIPLE_POSITION[(i, j, k)]
    except KeyError:
        raise ContractViolation(f"({i},{j},{k}) is not an ascending column triple") from None


def as_boundary_matrix(a) -> np.ndarray:
    """Validate a 3x6 complex matrix of full row rank."""
    m = np.asarray(a, dtype=complex)
    if m.shape != (3, 6):
        raise ContractViolation(f"boundary matrix must be 3x6, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("boundary matrix entries must be finite")
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= RANK_RTOL * s[0]:
        raise RankDeficient(
            f"boundary matrix is numerically rank-deficient: sigma = {s}"
        )
    return m


def minors_of(a) -> np.ndarray:
    """All 20 third-order minors of a rank-3 boundary matrix, canonical order."""
    m = as_boundary_matrix(a)
    cols = np.array(TRIPLES) - 1  # (20, 3)
    stacked = m[:, cols].transpose(1, 0, 2)  # (20, 3, 3)
    return det3_batch(stacked)


def _minors_unchecked(m: np.ndarray) -> np.ndarray:
    cols = np.array(TRIPLES) - 1
    return det3_batch(m[:, cols].transpose(1, 0, 2))


def _permutation_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def proportionality_defect(u, v) -> float:
    """How far two nonzero vectors are from being complex multiples of each
    other: sin of the angle between them, in [0, 1].

    Computed as the norm of v's component orthogonal to u, which stays
    accurate down to machine precision; sqrt(1 - cos^2) would bottom out
    near sqrt(eps).
    """
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ContractViolation("proportionality defect of a zero vector")
    u = u / nu
    v = v / nv
    if np.array_equal(u, v):
        return 0.0
    residual = v - u * np.vdot(u, v)
    return float(min(1.0, np.linalg.norm(residual)))


def reconstruct(minors, pivot: tuple[int, int, int] | None = None,
                consistency_tol: float = 1e-6) -> np.ndarray:
    """Boundary matrix whose minors are proportional to the given vector.

    The pivot triple's columns carry the 3x3 identity, with the first row then
    scaled by the pivot minor; every other entry is a signed ratio of a
    one-column-swap minor to the pivot minor.  For pivot (1,3,5) this is
    exactly the layout

        [  M_135   M_235  0  -M_345  0   M_356       ]
        [  0   M_125/M_135  1   M_145/M_135  0  -M_156/M_135 ]
        [  0  -M_123/M_135  0   M_134/M_135  1   M_136/M_135 ]

    and the general sign is the parity of the permutation that sorts the
    swapped triple.  Raises InconsistentMinors when the round trip
    minors_of(result) is not proportional to the input within
    ``consistency_tol`` (the input then lies off the variety of genuine minor
    vectors, so no rank-3 matrix reproduces it).
    """
    m = np.asarray(minors, dtype=complex).ravel()
    if m.shape != (20,):
        raise ContractViolation(f"a minor vector has 20 entries, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("minor entries must be finite")
    if np.max(np.abs(m)) == 0.0:
        raise ZeroMinorVector("all 20 minors vanish")

    if pivot is None:
        pivot = TRIPLES[int(np.argmax(np.abs(m)))]
    else:
        pivot = tuple(int(v) for v in pivot)
    m_pivot = m[triple_position(*pivot)]
    if m_pivot == 0:
        raise ZeroMinorVector(f"pivot minor {pivot} is zero")

    a = np.zeros((3, 6), dtype=complex)
    for row, col in enumerate(pivot):
        a[row, col - 1] = 1.0
    for row in range(3):
        removed = pivot[row]
        kept = [c for c in pivot if c != removed]
        for col in range(1, 7):
            if col in pivot:
                continue
            swapped = tuple(sorted(kept + [col]))
            perm = [row + 1 if c == col else pivot.index(c) + 1 for c in swapped]
            sign = _permutation_sign(perm)
            a[row, col - 1] = sign * m[triple_position(*swapped)] / m_pivot
    a[0] *= m_pivot

    defect = proportionality_defect(_minors_unchecked(a), m)
    if defect > consistency_tol:
        raise InconsistentMinors(
            f"minor vector is {defect:.3e} away from any rank-3 matrix "
            f"(tolerance {consistency_tol:.0e})",
            deviation=defect,
        )
    return a


def span_distance(a, b) -> float:
    """Chordal distance between the row spans of two boundary matrices.

    Zero iff the two matrices define the same boundary conditions; one when
    the minor supports are disjoint (e.g. [I|0] versus [0|I]).
    """
    return proportionality_defect(minors_of(a), minors_of(b))
