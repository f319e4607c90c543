"""Dense complex linear-algebra kernels.

Small self-contained pieces used throughout the package: a closed-form cubic
solver, 3x3 determinants, and SVD-based nullspace extraction for matrices up
to roughly 200x20.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, SvdConvergenceError

_ZETA = np.exp(2j * np.pi / 3)  # primitive cube root of unity


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ContractViolation(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractViolation("matrix entries must be finite")
    return a


def solve_cubic(c2: complex, c1: complex, c0: complex) -> tuple[complex, complex, complex]:
    """Roots of the monic cubic w^3 + c2*w^2 + c1*w + c0, with multiplicity.

    Cardano's closed form, picking the larger-magnitude cube-root branch to
    avoid cancellation, followed by one round of Newton polish per root.
    Roots come back sorted by (real, imag).
    """
    c2, c1, c0 = complex(c2), complex(c1), complex(c0)
    if not all(np.isfinite([c2.real, c2.imag, c1.real, c1.imag, c0.real, c0.imag])):
        raise ContractViolation("cubic coefficients must be finite")

    # depressed cubic t^3 + p t + q via w = t - c2/3
    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2 ** 3 / 27.0 - c2 * c1 / 3.0 + c0

    if p == 0 and q == 0:
        roots = [-shift] * 3
    else:
        d = np.sqrt(0.25 * q * q + p ** 3 / 27.0 + 0j)
        # choose the branch with less cancellation
        s1, s2 = -0.5 * q + d, -0.5 * q - d
        s = s1 if abs(s1) >= abs(s2) else s2
        u = s ** (1.0 / 3.0)
        v = -p / (3.0 * u)
        roots = [u * _ZETA ** k + v * _ZETA ** (-k) - shift for k in range(3)]

    def poly(w):
        return ((w + c2) * w + c1) * w + c0

    def dpoly(w):
        return (3.0 * w + 2.0 * c2) * w + c1

    polished = []
    for w in roots:
        for _ in range(2):
            dp = dpoly(w)
            if abs(dp) < 1e-30:
                break  # near a multiple root; Newton would stall
            w = w - poly(w) / dp
        polished.append(complex(w))

    polished.sort(key=lambda w: (w.real, w.imag))
    return tuple(polished)


def det3(m) -> complex:
    """Cofactor-expansion determinant of a 3x3 complex matrix."""
    a = _as_matrix(m)
    if a.shape != (3, 3):
        raise ContractViolation(f"det3 needs a 3x3 matrix, got {a.shape}")
    return complex(det3_batch(a))


def det3_batch(m: np.ndarray) -> np.ndarray:
    """Determinants of a (..., 3, 3) stack, no validation."""
    return (
        m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
        - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
        + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0])
    )


@dataclass(frozen=True)
class SvdResult:
    """Full SVD: a = left @ diag(s) @ right.conj().T restricted to min(m, n).

    singular_values: non-increasing, length min(m, n)
    left_vectors:    m x m unitary, columns are left singular vectors
    right_vectors:   n x n unitary, columns are right singular vectors
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        k = self.singular_values.shape[0]
        return (self.left_vectors[:, :k] * self.singular_values) @ self.right_vectors[:, :k].conj().T


def svd(m) -> SvdResult:
    """Full SVD of a dense complex matrix (LAPACK behind the contract)."""
    a = _as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise SvdConvergenceError(str(exc)) from exc
    return SvdResult(singular_values=s, left_vectors=u, right_vectors=vh.conj().T)


def nullspace_vector(m) -> tuple[np.ndarray, float]:
    """Right singular vector of the smallest singular value, plus a rank gap.

    The vector has unit norm and a deterministic phase: its largest-magnitude
    entry is made real and positive.  The gap is the ratio of the two smallest
    singular values (the list padded with zeros up to the column count), each
    clamped from below at a machine floor, so a gap near 1 signals a nullspace
    of dimension two or more while a large gap signals rank deficiency of
    exactly one.
    """
    a = _as_matrix(m)
    rows, cols = a.shape
    if cols < 2:
        raise ContractViolation("nullspace extraction needs at least 2 columns")
    res = svd(a)
    s_full = np.zeros(cols)
    s_full[: res.singular_values.shape[0]] = res.singular_values
    smax = s_full[0] if s_full[0] > 0 else 1.0
    floor = max(rows, cols) * np.finfo(float).eps * smax
    gap = max(s_full[-2], floor) / max(s_full[-1], floor)
    v = res.right_vectors[:, -1].copy()
    k = int(np.argmax(np.abs(v)))
    v *= v[k].conjugate() / abs(v[k])
    return v, float(gap)
