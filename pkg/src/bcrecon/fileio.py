"""File formats: problem documents, spectrum CSVs, reports, study tables.

Complex numbers are serialized as two-element [re, im] arrays in decimal;
floating-point values are written with 17 significant digits so every file
round-trips to the exact in-memory double.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .charode import ConditionReport, ProblemCoefficients
from .errors import ProblemFormatError
from .forward import SearchRegion, Spectrum
from .inverse import InversionSettings, PerturbationRecord, ReconstructionReport
from .pluecker import TRIPLES, as_boundary_matrix


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _from_pair(value, where: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ProblemFormatError(f"{where}: expected a [re, im] pair, got {value!r}")
    return complex(float(value[0]), float(value[1]))


@dataclass(frozen=True)
class ProblemSpec:
    """One problem document: coefficients, optional boundary matrix, region."""

    p: ProblemCoefficients
    boundary: np.ndarray | None = None
    region: SearchRegion | None = None


def load_problem(path) -> ProblemSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ProblemFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{path}: top level must be an object")

    try:
        raw_p = doc["p"]
    except KeyError:
        raise ProblemFormatError(f"{path}: missing required field 'p'") from None
    if not isinstance(raw_p, list) or len(raw_p) != 3:
        raise ProblemFormatError(f"{path}: field 'p' must list three complex numbers")
    p = ProblemCoefficients(*(_from_pair(v, f"{path}: p[{i}]") for i, v in enumerate(raw_p)))

    boundary = None
    if doc.get("boundary") is not None:
        raw_b = doc["boundary"]
        if not isinstance(raw_b, list) or len(raw_b) != 3 or any(
            not isinstance(row, list) or len(row) != 6 for row in raw_b
        ):
            raise ProblemFormatError(f"{path}: field 'boundary' must be 3 rows of 6 entries")
        entries = [
            [_from_pair(v, f"{path}: boundary[{r}][{c}]") for c, v in enumerate(row)]
            for r, row in enumerate(raw_b)
        ]
        try:
            boundary = as_boundary_matrix(np.array(entries, dtype=complex))
        except Exception as exc:
            raise ProblemFormatError(f"{path}: boundary matrix rejected: {exc}") from exc

    region = None
    if doc.get("region") is not None:
        raw_r = doc["region"]
        if not isinstance(raw_r, dict):
            raise ProblemFormatError(f"{path}: field 'region' must be an object")
        try:
            region = SearchRegion(
                re_min=float(raw_r["re_min"]),
                re_max=float(raw_r["re_max"]),
                im_min=float(raw_r["im_min"]),
                im_max=float(raw_r["im_max"]),
                grid_density=float(raw_r.get("grid_density", 4.0)),
            )
        except KeyError as exc:
            raise ProblemFormatError(f"{path}: region is missing field {exc}") from None
        except Exception as exc:
            raise ProblemFormatError(f"{path}: region rejected: {exc}") from exc

    return ProblemSpec(p=p, boundary=boundary, region=region)


def problem_to_dict(spec: ProblemSpec) -> dict:
    doc: dict = {"p": [_pair(spec.p.p1), _pair(spec.p.p2), _pair(spec.p.p3)]}
    if spec.boundary is not None:
        doc["boundary"] = [[_pair(v) for v in row] for row in np.asarray(spec.boundary)]
    if spec.region is not None:
        r = spec.region
        doc["region"] = {
            "re_min": r.re_min,
            "re_max": r.re_max,
            "im_min": r.im_min,
            "im_max": r.im_max,
            "grid_density": r.grid_density,
        }
    return doc


def save_problem(spec: ProblemSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(spec), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# spectrum CSV
# ---------------------------------------------------------------------------

def spectrum_to_csv(eigenvalues) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["re", "im"])
    for lam in np.asarray(eigenvalues, dtype=complex).ravel():
        writer.writerow([_fmt(lam.real), _fmt(lam.imag)])
    return out.getvalue()


def save_spectrum(eigenvalues, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(spectrum_to_csv(eigenvalues))


def load_spectrum(path) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise ProblemFormatError(f"cannot read {path}: {exc}") from exc
    if not rows or [c.strip() for c in rows[0]] != ["re", "im"]:
        raise ProblemFormatError(f"{path}: first line must be the header 're,im'")
    values = []
    for n, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ProblemFormatError(f"{path}: line {n}: expected two columns")
        try:
            values.append(complex(float(row[0]), float(row[1])))
        except ValueError as exc:
            raise ProblemFormatError(f"{path}: line {n}: {exc}") from exc
    return np.array(values, dtype=complex)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _condition_report_to_dict(report: ConditionReport) -> dict:
    violation = None
    if report.violating_combination is not None:
        subset, signs, value = report.violating_combination
        violation = {"subset": list(subset), "signs": list(signs), "value": _pair(value)}
    return {
        "condition1_ok": report.condition1_ok,
        "violating_combination": violation,
        "p1_nonzero": report.p1_nonzero,
        "p2_nonzero": report.p2_nonzero,
        "p3_nonzero": report.p3_nonzero,
        "tolerance_used": report.tolerance_used,
    }


def reconstruction_to_dict(report: ReconstructionReport) -> dict:
    return {
        "minors": {
            "".join(str(c) for c in t): _pair(v)
            for t, v in zip(TRIPLES, report.minors)
        },
        "matrix": [[_pair(v) for v in row] for row in report.matrix],
        "singular_values": [float(s) for s in report.singular_values],
        "rank_gap": float(report.rank_gap),
        "per_eigenvalue_residuals": [float(r) for r in report.per_eigenvalue_residuals],
        "uniqueness": _condition_report_to_dict(report.uniqueness),
        "pivot_used": list(report.pivot_used),
        "rank_warning": report.rank_warning,
        "settings": {
            "rank_gap_threshold": report.settings.rank_gap_threshold,
            "consistency_tolerance": report.settings.consistency_tolerance,
            "minimum_eigenvalues": report.settings.minimum_eigenvalues,
        },
    }


def run_report_to_json(command: str, settings: dict, results: dict, warnings_list) -> str:
    """Serialize a command's output document.

    Timing is deliberately not part of the file: identical inputs must produce
    byte-identical files.
    """
    doc = {
        "command": command,
        "settings": settings,
        "results": results,
        "warnings": list(warnings_list),
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def save_run_report(path, command, settings, results, warnings_list) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(run_report_to_json(command, settings, results, warnings_list))


def load_run_report(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# perturbation study CSV
# ---------------------------------------------------------------------------

def study_to_csv(records: list[PerturbationRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["trial", "noise_level", "span_distance", "status"])
    for rec in records:
        writer.writerow([rec.trial, _fmt(rec.noise_level), _fmt(rec.span_distance), rec.status])
    return out.getvalue()


def save_study(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(study_to_csv(records))
