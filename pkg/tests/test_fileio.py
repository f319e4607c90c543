import json

import numpy as np
import pytest

from bcrecon import fileio
from bcrecon.charode import ProblemCoefficients
from bcrecon.errors import ProblemFormatError
from bcrecon.forward import SearchRegion
from bcrecon.inverse import PerturbationRecord, invert_spectrum

from reference_data import BOUNDARY, COEFFS, REGION


class TestProblemFiles:
    def test_round_trip(self, tmp_path):
        spec = fileio.ProblemSpec(p=COEFFS, boundary=BOUNDARY, region=REGION)
        path = tmp_path / "problem.json"
        fileio.save_problem(spec, path)
        loaded = fileio.load_problem(path)
        assert loaded.p == COEFFS
        assert np.array_equal(loaded.boundary, BOUNDARY)
        assert loaded.region == REGION

    def test_optional_fields_absent(self, tmp_path):
        path = tmp_path / "bare.json"
        fileio.save_problem(fileio.ProblemSpec(p=COEFFS), path)
        loaded = fileio.load_problem(path)
        assert loaded.boundary is None and loaded.region is None

    def test_missing_p(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{}")
        with pytest.raises(ProblemFormatError, match="'p'"):
            fileio.load_problem(path)

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"p": [[1, 0],\n [oops]]}')
        with pytest.raises(ProblemFormatError, match="line 2"):
            fileio.load_problem(path)

    def test_bad_pair(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"p": [[1, 0], [2], [3, 0]]}')
        with pytest.raises(ProblemFormatError, match=r"p\[1\]"):
            fileio.load_problem(path)

    def test_bad_boundary_shape(self, tmp_path):
        path = tmp_path / "bad.json"
        doc = {"p": [[1, 0], [1, 0], [1, 0]], "boundary": [[[1, 0]] * 5] * 3}
        path.write_text(json.dumps(doc))
        with pytest.raises(ProblemFormatError, match="boundary"):
            fileio.load_problem(path)

    def test_rank_deficient_boundary_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        row = [[1, 0]] * 6
        doc = {"p": [[1, 0], [1, 0], [1, 0]], "boundary": [row, row, row]}
        path.write_text(json.dumps(doc))
        with pytest.raises(ProblemFormatError, match="rank"):
            fileio.load_problem(path)


class TestSpectrumFiles:
    def test_exact_round_trip(self, tmp_path):
        values = np.array([0.1 + 0.2j, -1.0 / 3.0 + 1e-17j, 1e300 - 1e-300j])
        path = tmp_path / "spec.csv"
        fileio.save_spectrum(values, path)
        loaded = fileio.load_spectrum(path)
        assert np.array_equal(loaded, values)

    def test_header_required(self, tmp_path):
        path = tmp_path / "spec.csv"
        path.write_text("0.5,0.25\n")
        with pytest.raises(ProblemFormatError, match="header"):
            fileio.load_spectrum(path)

    def test_bad_row(self, tmp_path):
        path = tmp_path / "spec.csv"
        path.write_text("re,im\n1.0,zebra\n")
        with pytest.raises(ProblemFormatError, match="line 2"):
            fileio.load_spectrum(path)

    def test_empty_spectrum(self, tmp_path):
        path = tmp_path / "spec.csv"
        fileio.save_spectrum(np.array([]), path)
        assert len(fileio.load_spectrum(path)) == 0


class TestReports:
    def test_report_serializes_and_reparses(self, tmp_path, reference_spectrum):
        report = invert_spectrum(COEFFS, reference_spectrum)
        path = tmp_path / "report.json"
        fileio.save_run_report(
            path,
            command="invert",
            settings={"rank_gap_threshold": 1e3},
            results=fileio.reconstruction_to_dict(report),
            warnings_list=[],
        )
        loaded = fileio.load_run_report(path)
        assert loaded["command"] == "invert"
        assert loaded["results"]["pivot_used"] == list(report.pivot_used)
        assert loaded["results"]["rank_gap"] == report.rank_gap
        m135 = loaded["results"]["minors"]["135"]
        idx = [i for i, t in enumerate(fileio.TRIPLES) if t == (1, 3, 5)][0]
        assert complex(m135[0], m135[1]) == report.minors[idx]

    def test_condition_report_with_violation(self):
        p = ProblemCoefficients.from_roots(1.0, -1.0, 2.0)
        from bcrecon.charode import check_uniqueness_conditions

        doc = fileio._condition_report_to_dict(check_uniqueness_conditions(p))
        assert doc["condition1_ok"] is False
        assert doc["violating_combination"]["subset"] == [1, 2]


class TestStudyFiles:
    def test_csv_layout(self, tmp_path):
        records = [
            PerturbationRecord(trial=0, noise_level=1e-6, span_distance=3.5e-9, status="ok"),
            PerturbationRecord(trial=1, noise_level=1e-6, span_distance=float("nan"),
                               status="InconsistentMinors"),
        ]
        path = tmp_path / "study.csv"
        fileio.save_study(records, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "trial,noise_level,span_distance,status"
        assert lines[1].startswith("0,") and lines[1].endswith(",ok")
        assert "nan" in lines[2]
