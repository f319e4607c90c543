"""Command-line interface.

Subcommands: roots, forward, invert, verify, perturb.  Exit codes are stable:

    0  success (all checks passed)
    1  file parse/validation errors
    2  missing prerequisite (condition check failed, boundary matrix absent,
       fewer than 19 eigenvalues)
    3  numerical failure (degenerate roots, overflow, non-convergence)
    4  recovered minors are inconsistent with every rank-3 boundary matrix
    5  verify: round-trip span distance above threshold

Output files never contain timing, so identical inputs give byte-identical
files; timing goes to stdout.  BCRECON_THREADS caps internal parallelism
(0 or unset = automatic); results do not depend on it.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import fileio
from .charode import characteristic_roots, check_uniqueness_conditions
from .errors import (
    BcreconError,
    InconsistentMinors,
    ProblemFormatError,
    RepeatedRoots,
    TooFewEigenvalues,
)
from .forward import SearchRegion, find_eigenvalues
from .inverse import (
    STUDY_CONSISTENCY_TOLERANCE,
    InversionSettings,
    invert_spectrum,
    perturbation_study,
)
from .pluecker import span_distance

#: round-trip acceptance threshold for `verify`
VERIFY_THRESHOLD = 1e-6

_DERIVATIVE_NAMES = ("y(0)", "y'(0)", "y''(0)", "y(1)", "y'(1)", "y''(1)")


def _workers_from_env() -> int:
    raw = os.environ.get("BCRECON_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value <= 0:
        value = min(4, os.cpu_count() or 1)
    return value


def _fmt_c(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.6g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"({z.real:.6g} {sign} {abs(z.imag):.6g}i)"


def _coeff_term(coeff: complex, term: str) -> str:
    text = _fmt_c(coeff)
    if text == "1":
        return term
    if text == "-1":
        return f"-{term}"
    return f"{text} {term}"


def boundary_condition_lines(matrix) -> list[str]:
    """Human display of the boundary forms, one line per row.

    Each row is scaled so its largest-magnitude coefficient is 1 (row scaling
    does not change the condition), and coefficients below 1e-6 of the row
    maximum are treated as zero.
    """
    matrix = np.asarray(matrix, dtype=complex)
    lines = []
    for i, row in enumerate(matrix, start=1):
        row = row / row[int(np.argmax(np.abs(row)))]
        cutoff = 1e-6 * np.max(np.abs(row))
        parts = []
        for coeff, name in zip(row, _DERIVATIVE_NAMES):
            if abs(coeff) <= cutoff:
                continue
            # snap display-only values that are within the print threshold
            # of a real number
            if abs(coeff.imag) <= cutoff:
                coeff = complex(coeff.real, 0.0)
            parts.append(_coeff_term(coeff, name))
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        lines.append(f"U_{i}(y) = {body} = 0")
    return lines


def _region_from(args, problem) -> SearchRegion | None:
    if getattr(args, "region", None) is not None:
        re_min, re_max, im_min, im_max = args.region
        density = getattr(args, "grid", None)
        return SearchRegion(
            re_min, re_max, im_min, im_max,
            grid_density=density if density else 4.0,
        )
    if problem.region is not None:
        if getattr(args, "grid", None):
            r = problem.region
            return SearchRegion(r.re_min, r.re_max, r.im_min, r.im_max, args.grid)
        return problem.region
    return None


def _region_dict(region: SearchRegion) -> dict:
    return {
        "re_min": region.re_min,
        "re_max": region.re_max,
        "im_min": region.im_min,
        "im_max": region.im_max,
        "grid_density": region.grid_density,
    }


def _cmd_roots(args) -> int:
    problem = fileio.load_problem(args.problem)
    try:
        roots = characteristic_roots(problem.p)
    except RepeatedRoots as exc:
        print(f"characteristic roots are degenerate: {exc}")
        print("uniqueness conditions: FAIL (coincident roots)")
        return 2
    print("characteristic roots:")
    for i, w in enumerate(roots.omega, start=1):
        print(f"  w_{i} = {_fmt_c(w)}")
    report = check_uniqueness_conditions(problem.p)
    print(f"tolerance: {report.tolerance_used:g}")
    status = lambda ok: "ok" if ok else "FAIL"  # noqa: E731
    print(f"signed subset sums nonzero : {status(report.condition1_ok)}")
    if report.violating_combination is not None:
        subset, signs, value = report.violating_combination
        terms = " ".join(
            f"{'+' if s > 0 else '-'}w_{i}" for i, s in zip(subset, signs)
        )
        print(f"  violation: {terms} = {_fmt_c(value)}")
    print(f"p1 nonzero                 : {status(report.p1_nonzero)}")
    print(f"p2 nonzero                 : {status(report.p2_nonzero)}")
    print(f"p3 nonzero                 : {status(report.p3_nonzero)}")
    return 0 if report.all_ok else 2


def _cmd_forward(args) -> int:
    problem = fileio.load_problem(args.problem)
    if problem.boundary is None:
        print("error: the problem file has no boundary matrix", file=sys.stderr)
        return 2
    region = _region_from(args, problem)
    if region is None:
        print("error: no search region (give --region or add one to the file)",
              file=sys.stderr)
        return 1
    t0 = time.perf_counter()
    spectrum = find_eigenvalues(problem.p, problem.boundary, region,
                                max_count=args.count)
    elapsed = time.perf_counter() - t0
    fileio.save_spectrum(spectrum.eigenvalues, args.out)
    print(f"region: [{region.re_min}, {region.re_max}] x "
          f"[{region.im_min}, {region.im_max}], density {region.grid_density}")
    print(f"eigenvalues found: {len(spectrum)}")
    if len(spectrum) == 0:
        print("warning: no eigenvalues in the region "
              "(the determinant may have no zeros there)")
    print(f"wrote {args.out}")
    print(f"completed in {elapsed:.2f} s")
    return 0


def _cmd_invert(args) -> int:
    problem = fileio.load_problem(args.problem)
    eigenvalues = fileio.load_spectrum(args.spectrum)
    settings = InversionSettings(rank_gap_threshold=args.rank_gap_threshold)
    t0 = time.perf_counter()
    report = invert_spectrum(problem.p, eigenvalues, settings)
    elapsed = time.perf_counter() - t0

    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    echo = eigenvalues[order]
    fileio.save_run_report(
        args.out,
        command="invert",
        settings={
            "problem": fileio.problem_to_dict(fileio.ProblemSpec(p=problem.p)),
            "spectrum": [[lam.real, lam.imag] for lam in echo],
            "rank_gap_threshold": settings.rank_gap_threshold,
            "consistency_tolerance": settings.consistency_tolerance,
            "minimum_eigenvalues": settings.minimum_eigenvalues,
        },
        results=fileio.reconstruction_to_dict(report),
        warnings_list=(
            ["rank gap below threshold: the data may not determine "
             "the boundary conditions uniquely"]
            if report.rank_warning
            else []
        ),
    )
    print("reconstructed boundary conditions:")
    for line in boundary_condition_lines(report.matrix):
        print(f"  {line}")
    print(f"rank gap: {report.rank_gap:.3e}"
          + ("  (WARNING: below threshold, solution may be non-unique)"
             if report.rank_warning else ""))
    print(f"max normalized residual: {np.max(report.per_eigenvalue_residuals):.3e}")
    print(f"wrote {args.out}")
    print(f"completed in {elapsed:.2f} s")
    return 0


def _cmd_verify(args) -> int:
    problem = fileio.load_problem(args.problem)
    if problem.boundary is None:
        print("error: the problem file has no boundary matrix", file=sys.stderr)
        return 2
    region = _region_from(args, problem)
    if region is None:
        print("error: no search region (give --region or add one to the file)",
              file=sys.stderr)
        return 1
    t0 = time.perf_counter()
    spectrum = find_eigenvalues(problem.p, problem.boundary, region,
                                max_count=args.count)
    print(f"forward: {len(spectrum)} eigenvalues")
    if len(spectrum) < InversionSettings().minimum_eigenvalues:
        print(f"error: need at least {InversionSettings().minimum_eigenvalues} "
              "eigenvalues for the inversion", file=sys.stderr)
        return 2
    report = invert_spectrum(problem.p, spectrum)
    distance = span_distance(report.matrix, problem.boundary)
    elapsed = time.perf_counter() - t0
    verdict = "PASS" if distance <= VERIFY_THRESHOLD else "FAIL"
    print(f"span distance (recovered vs original): {distance:.3e}")
    print(f"round trip at {VERIFY_THRESHOLD:g}: {verdict}")
    print(f"completed in {elapsed:.2f} s")
    return 0 if distance <= VERIFY_THRESHOLD else 5


def _cmd_perturb(args) -> int:
    problem = fileio.load_problem(args.problem)
    if problem.boundary is None:
        print("error: the problem file has no boundary matrix", file=sys.stderr)
        return 2
    region = _region_from(args, problem)
    if region is None:
        print("error: no search region (give --region or add one to the file)",
              file=sys.stderr)
        return 1
    settings = InversionSettings(
        rank_gap_threshold=args.rank_gap_threshold,
        consistency_tolerance=STUDY_CONSISTENCY_TOLERANCE,
    )
    t0 = time.perf_counter()
    try:
        records = perturbation_study(
            problem.p,
            problem.boundary,
            noise_level=args.noise,
            trials=args.trials,
            seed=args.seed,
            region=region,
            settings=settings,
            workers=_workers_from_env(),
        )
    except TooFewEigenvalues as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    elapsed = time.perf_counter() - t0
    fileio.save_study(records, args.out)
    ok = [r.span_distance for r in records if r.status == "ok"]
    print(f"trials: {len(records)}, succeeded: {len(ok)}")
    if ok:
        print(f"span distance: median {np.median(ok):.3e}, max {np.max(ok):.3e}")
    print(f"wrote {args.out}")
    print(f"completed in {elapsed:.2f} s")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcrecon",
        description="Forward and inverse solver for third-order spectral "
                    "problems with non-separated boundary conditions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, spectrum=False, out=False, region=False, perturb=False):
        sp.add_argument("--problem", required=True, help="problem JSON file")
        if spectrum:
            sp.add_argument("--spectrum", required=True, help="spectrum CSV file")
        if out:
            sp.add_argument("--out", required=True, help="output file path")
        if region:
            sp.add_argument("--region", nargs=4, type=float, default=None,
                            metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"),
                            help="search rectangle (overrides the file)")
            sp.add_argument("--count", type=int, default=None,
                            help="keep at most this many eigenvalues")
            sp.add_argument("--grid", type=float, default=None,
                            help="grid density per unit length (default 4)")
        if perturb:
            sp.add_argument("--noise", type=float, required=True,
                            help="eigenvalue noise standard deviation")
            sp.add_argument("--trials", type=int, default=20)
            sp.add_argument("--seed", type=int, default=0)
        if spectrum or perturb:
            sp.add_argument("--rank-gap-threshold", type=float, default=1e3,
                            help="rank gap below this flags non-uniqueness")

    add_common(sub.add_parser("roots", help="characteristic roots and "
                                            "uniqueness condition checks"))
    add_common(sub.add_parser("forward", help="find eigenvalues in a region"),
               out=True, region=True)
    add_common(sub.add_parser("invert", help="reconstruct boundary conditions "
                                             "from a spectrum"),
               spectrum=True, out=True)
    add_common(sub.add_parser("verify", help="forward then invert, compare "
                                             "with the original"),
               region=True)
    add_common(sub.add_parser("perturb", help="noise sensitivity study"),
               out=True, region=True, perturb=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "roots": _cmd_roots,
        "forward": _cmd_forward,
        "invert": _cmd_invert,
        "verify": _cmd_verify,
        "perturb": _cmd_perturb,
    }[args.command]
    try:
        return handler(args)
    except ProblemFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TooFewEigenvalues as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InconsistentMinors as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except BcreconError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
