"""Regenerate the shipped fixture files.

Writes the reference problem (third-order equation with characteristic roots
i, 2i, 3 and a known boundary matrix), the reference 19-eigenvalue table, the
full high-precision spectrum the forward solver finds in the reference
region, and the reconstruction report obtained by inverting that spectrum.
Deterministic: rerunning reproduces the files byte for byte.
"""

from __future__ import annotations

import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from bcrecon import fileio  # noqa: E402
from bcrecon.charode import ProblemCoefficients  # noqa: E402
from bcrecon.forward import SearchRegion, find_eigenvalues  # noqa: E402
from bcrecon.inverse import InversionSettings, invert_spectrum  # noqa: E402

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"

PROBLEM = fileio.ProblemSpec(
    p=ProblemCoefficients(p1=-3 - 3j, p2=-2 + 9j, p3=6),
    boundary=np.array(
        [
            [1, 1, 0, 0.5, 0, 1],
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0.5, 1, 0],
        ],
        dtype=complex,
    ),
    region=SearchRegion(-55.0, 25.0, -5.0, 5.0),
)

# the reference two-decimal eigenvalue table for this problem
REFERENCE_EIGENVALUES = np.array(
    [
        0.46 - 0.12j, 5.88 + 3.86j, 6.51 - 0.55j, 12.81 - 0.56j, 19.1 - 0.56j,
        -4.27 + 0.51j, -7.16 + 1.06j, -10.54 + 1.0j, -13.50 + 1.32j,
        -19.81 + 1.49j, -23.1 + 1.41j, -26.11 + 1.61j, -29.38 + 1.54j,
        -32.41 + 1.71j, -35.67 + 1.64j, -38.7 + 1.8j, -44.99 + 1.87j,
        -48.23 + 1.80j, -51.28 + 1.93j,
    ]
)


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)

    fileio.save_problem(PROBLEM, FIXTURES / "sample_problem.json")

    order = np.lexsort((REFERENCE_EIGENVALUES.imag, REFERENCE_EIGENVALUES.real))
    fileio.save_spectrum(REFERENCE_EIGENVALUES[order], FIXTURES / "sample_spectrum.csv")

    spectrum = find_eigenvalues(PROBLEM.p, PROBLEM.boundary, PROBLEM.region)
    fileio.save_spectrum(spectrum.eigenvalues, FIXTURES / "sample_full_spectrum.csv")

    settings = InversionSettings()
    report = invert_spectrum(PROBLEM.p, spectrum, settings)
    fileio.save_run_report(
        FIXTURES / "sample_report.json",
        command="invert",
        settings={
            "problem": fileio.problem_to_dict(fileio.ProblemSpec(p=PROBLEM.p)),
            "spectrum": [[v.real, v.imag] for v in spectrum.eigenvalues],
            "rank_gap_threshold": settings.rank_gap_threshold,
            "consistency_tolerance": settings.consistency_tolerance,
            "minimum_eigenvalues": settings.minimum_eigenvalues,
        },
        results=fileio.reconstruction_to_dict(report),
        warnings_list=[],
    )
    print(f"wrote fixtures to {FIXTURES}: {len(spectrum)} eigenvalues in the "
          f"full spectrum")


if __name__ == "__main__":
    main()
