"""The differential-equation side of the problem.

The equation is ``y''' + lam*p1*y'' + lam^2*p2*y' + lam^3*p3*y = 0`` on
[0, 1].  Substituting ``y = exp(w*lam*x)`` gives the characteristic cubic
``w^3 + p1*w^2 + p2*w + p3 = 0`` whose roots ``w_j`` drive everything here:
the normalized fundamental system, its endpoint values, and the uniqueness
conditions on signed subset sums of the roots.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .complexalg import det3_batch, solve_cubic
from .errors import ContractViolation, LambdaTooSmall, RangeOverflow, RepeatedRoots

#: relative tolerance below which characteristic roots count as coincident
SEPARATION_RTOL = 1e-8

#: smallest |lambda| the fundamental system accepts
LAMBDA_FLOOR = 1e-12

#: largest Re(w*lam) before exp() overflows double precision
EXP_ARG_LIMIT = 700.0

#: the 8 subsets of root indices, the exponential "frequencies" of the problem
ROOT_SUBSETS: tuple[tuple[int, ...], ...] = tuple(
    s for n in range(4) for s in itertools.combinations(range(3), n)
)
SUBSET_INDEX = {s: i for i, s in enumerate(ROOT_SUBSETS)}


def _require_finite_complex(name: str, value: complex) -> complex:
    value = complex(value)
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise ContractViolation(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ProblemCoefficients:
    """The three complex ODE coefficients."""

    p1: complex
    p2: complex
    p3: complex

    def __post_init__(self):
        for name in ("p1", "p2", "p3"):
            object.__setattr__(self, name, _require_finite_complex(name, getattr(self, name)))

    @classmethod
    def from_roots(cls, w1: complex, w2: complex, w3: complex) -> "ProblemCoefficients":
        """Coefficients whose characteristic cubic has the given roots."""
        return cls(
            p1=-(w1 + w2 + w3),
            p2=w1 * w2 + w1 * w3 + w2 * w3,
            p3=-w1 * w2 * w3,
        )


@dataclass(frozen=True)
class CharacteristicRoots:
    """Roots of the characteristic cubic, pairwise distinct by construction."""

    omega: tuple[complex, complex, complex]

    def __post_init__(self):
        w = tuple(complex(v) for v in self.omega)
        if len(w) != 3:
            raise ContractViolation("exactly three roots required")
        scale = max(abs(v) for v in w)
        min_dist = min(abs(w[i] - w[j]) for i in range(3) for j in range(i + 1, 3))
        if min_dist <= SEPARATION_RTOL * scale:
            raise RepeatedRoots(
                f"roots {w} are separated by {min_dist:.3e} <= "
                f"{SEPARATION_RTOL:.0e} * {scale:.3e}"
            )
        object.__setattr__(self, "omega", w)

    def as_array(self) -> np.ndarray:
        return np.array(self.omega, dtype=complex)


def characteristic_roots(p: ProblemCoefficients) -> CharacteristicRoots:
    """Distinct roots of w^3 + p1*w^2 + p2*w + p3 = 0, sorted by (re, im)."""
    return CharacteristicRoots(omega=solve_cubic(p.p1, p.p2, p.p3))


# ---------------------------------------------------------------------------
# uniqueness conditions
# ---------------------------------------------------------------------------

def _signed_subset_combinations():
    """All (subset, signs) pairs up to a global sign: 13 of the 26 total."""
    combos = []
    for size in (1, 2, 3):
        for subset in itertools.combinations((1, 2, 3), size):
            for tail in itertools.product((1, -1), repeat=size - 1):
                combos.append((subset, (1,) + tail))
    return combos


_COMBINATIONS = _signed_subset_combinations()


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the uniqueness checks on roots and coefficients.

    ``condition1_ok`` covers the signed subset sums of the roots; when it is
    False, ``violating_combination`` holds (subset, signs, value) for the
    first combination (in deterministic order) whose sum fell inside the
    tolerance.  The three flags record |p_i| > tol.
    """

    condition1_ok: bool
    violating_combination: tuple[tuple[int, ...], tuple[int, ...], complex] | None
    p1_nonzero: bool
    p2_nonzero: bool
    p3_nonzero: bool
    tolerance_used: float

    def __post_init__(self):
        if not self.condition1_ok and self.violating_combination is None:
            raise ContractViolation("a failed subset check must carry its witness")

    @property
    def all_ok(self) -> bool:
        return self.condition1_ok and self.p1_nonzero and self.p2_nonzero and self.p3_nonzero


def check_uniqueness_conditions(p: ProblemCoefficients, tol: float = 1e-9) -> ConditionReport:
    """Check that every signed subset sum of the roots stays away from zero
    and that none of the ODE coefficients vanishes."""
    roots = characteristic_roots(p)
    w = roots.omega
    violation = None
    for subset, signs in _COMBINATIONS:
        value = sum(s * w[i - 1] for i, s in zip(subset, signs))
        if abs(value) <= tol:
            violation = (subset, signs, value)
            break
    return ConditionReport(
        condition1_ok=violation is None,
        violating_combination=violation,
        p1_nonzero=abs(p.p1) > tol,
        p2_nonzero=abs(p.p2) > tol,
        p3_nonzero=abs(p.p3) > tol,
        tolerance_used=float(tol),
    )


# ---------------------------------------------------------------------------
# fundamental system
# ---------------------------------------------------------------------------

def lagrange_coefficients(omega: np.ndarray, lam: np.ndarray):
    """Exponents and expansion coefficients of the normalized fundamental system.

    For r_j = omega_j * lam the solution y_{k+1}(x) = sum_j c[..., j, k] e^{r_j x}
    satisfies y_{k+1}^{(m)}(0) = delta_{km}.  The coefficients are the Lagrange
    basis coefficients of the interpolation nodes r_j:

        c[..., j, 0] = r_a r_b / D_j,   c[..., j, 1] = -(r_a + r_b) / D_j,
        c[..., j, 2] = 1 / D_j,         D_j = (r_j - r_a)(r_j - r_b).

    Returns (r, c) with shapes lam.shape + (3,) and lam.shape + (3, 3).
    """
    lam = np.asarray(lam, dtype=complex)
    r = lam[..., None] * omega
    c = np.empty(lam.shape + (3, 3), dtype=complex)
    for j in range(3):
        a, b = (q for q in range(3) if q != j)
        d = (r[..., j] - r[..., a]) * (r[..., j] - r[..., b])
        c[..., j, 0] = r[..., a] * r[..., b] / d
        c[..., j, 1] = -(r[..., a] + r[..., b]) / d
        c[..., j, 2] = 1.0 / d
    return r, c


def subset_exponentials(r: np.ndarray):
    """Rescaled exponentials of all root-subset sums.

    For each subset S of {0,1,2} let E_S = sum_{j in S} r_j.  Returns
    (expfac, e_star) where e_star is the E_S with the largest real part and
    expfac[..., i] = exp(E_i - e_star), so every factor has modulus <= 1.
    Factoring e_star out of any expression that is linear in these
    exponentials keeps its evaluation free of overflow and of cancellation
    between wildly different scales.
    """
    shape = r.shape[:-1]
    e_sum = np.zeros(shape + (len(ROOT_SUBSETS),), dtype=complex)
    for i, s in enumerate(ROOT_SUBSETS):
        for j in s:
            e_sum[..., i] += r[..., j]
    istar = np.argmax(e_sum.real, axis=-1)
    e_star = np.take_along_axis(e_sum, istar[..., None], axis=-1)[..., 0]
    expfac = np.exp(e_sum - e_star[..., None])
    return expfac, e_star


@dataclass(frozen=True)
class BoundaryValues:
    """Endpoint data of the normalized fundamental system at one lambda.

    ``z`` is 3x6 with row k = (y_k(0), y_k'(0), y_k''(0), y_k(1), y_k'(1),
    y_k''(1)); the left 3x3 block is the identity by construction.
    ``coefficients[k, j]`` is the coefficient of e^{omega_j lam x} in y_{k+1}.
    """

    z: np.ndarray
    lam: complex
    coefficients: np.ndarray


def endpoint_blocks(omega: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Values and first two derivatives at x=1 of the fundamental system.

    Returns shape lam.shape + (3, 3): entry [..., k, m] = y_{k+1}^{(m)}(1).
    """
    r, c = lagrange_coefficients(omega, lam)
    e = np.exp(r)
    w = np.stack([e, r * e, r * r * e], axis=-1)  # [..., j, m] = r_j^m e^{r_j}
    return np.einsum("...jk,...jm->...km", c, w)


def boundary_values(p: ProblemCoefficients, lam: complex) -> BoundaryValues:
    """The 3x6 endpoint matrix of the normalized fundamental system."""
    lam = complex(lam)
    if abs(lam) <= LAMBDA_FLOOR:
        raise LambdaTooSmall(f"|lambda| = {abs(lam):.3e} <= {LAMBDA_FLOOR:.0e}")
    roots = characteristic_roots(p)
    omega = roots.as_array()
    r = omega * lam
    if np.max(r.real) > EXP_ARG_LIMIT:
        raise RangeOverflow(
            f"Re(omega*lambda) up to {np.max(r.real):.1f} would overflow exp()"
        )
    lam_arr = np.array([lam])
    _, c = lagrange_coefficients(omega, lam_arr)
    right = endpoint_blocks(omega, lam_arr)[0]
    z = np.hstack([np.eye(3, dtype=complex), right])
    return BoundaryValues(z=z, lam=lam, coefficients=c[0].T.copy())
