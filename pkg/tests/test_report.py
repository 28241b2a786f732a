import json
import math

import pytest

from mobnuc.cli import RunConfig
from mobnuc.errors import MobnucError
from mobnuc.report import VerificationReport, csv_lines, json_dumps


class TestVerdict:
    def test_pass_needs_tolerance_and_convergence(self):
        r = VerificationReport.from_sweep("x", [50, 100, 200], 10,
                                          [1e-3, 1e-4, 1e-5], 1e-4)
        assert r.passed

    def test_fail_on_final_residual(self):
        r = VerificationReport.from_sweep("x", [50, 100], 10, [1e-5, 1e-3], 1e-4)
        assert not r.passed

    def test_fail_on_increasing_residuals(self):
        r = VerificationReport.from_sweep("x", [50, 100, 200], 10,
                                          [1e-6, 1e-9, 1e-5], 1e-4)
        assert not r.passed

    def test_floor_noise_counts_as_tie(self):
        r = VerificationReport.from_sweep("x", [50, 100, 200], 10,
                                          [3e-16, 4e-16, 6e-16], 1e-12)
        assert r.passed

    def test_only_last_three_dims_matter(self):
        r = VerificationReport.from_sweep("x", [25, 50, 100, 200], 10,
                                          [1e-9, 1e-3, 1e-4, 1e-5], 1e-4)
        assert r.passed


class TestJsonEmitter:
    def test_seventeen_digit_floats(self):
        text = json_dumps({"x": 1.0 / 3.0})
        assert "0.33333333333333331" in text
        assert json.loads(text)["x"] == 1.0 / 3.0

    def test_infinity_token(self):
        assert json.loads(json_dumps({"v": math.inf}))["v"] == math.inf

    def test_preserves_insertion_order(self):
        text = json_dumps({"b": 1, "a": 2})
        assert text.index('"b"') < text.index('"a"')

    def test_nested_containers(self):
        obj = {"rows": [[1, 2.5], [3, None]], "flag": True, "name": "x"}
        assert json.loads(json_dumps(obj)) == obj


class TestCsv:
    def test_header_and_rows(self):
        text = csv_lines(["a", "b"], [(1, 0.5), (2, 0.25)])
        assert text == "a,b\n1,0.5\n2,0.25\n"


class TestRunConfig:
    def test_defaults_validate(self):
        RunConfig().validate()

    def test_unsorted_dims_rejected(self):
        with pytest.raises(MobnucError):
            RunConfig(truncation_dims=[200, 100]).validate()

    def test_block_bound(self):
        with pytest.raises(MobnucError):
            RunConfig(truncation_dims=[40, 80], block=11).validate()
