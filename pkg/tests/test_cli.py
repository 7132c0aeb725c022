"""Command-line interface tests: parsing, exit codes, document output."""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from toruswrt import cli
from toruswrt.service import CrossCheck, WrtMethodResult, WrtResponse


@pytest.fixture()
def runner():
    return CliRunner()


def test_wrt_identity_example(runner):
    result = runner.invoke(cli.main, ["wrt", "--level", "5", "--insertions", ""])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["z_re"] == pytest.approx(25.0)


def test_wrt_method_all_agreement(runner):
    result = runner.invoke(
        cli.main, ["wrt", "--level", "5", "--monodromy", "0,-1,1,0", "--method", "all"]
    )
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["cross_check"]["ok"]


def test_wrt_sample_within_interval(runner):
    result = runner.invoke(
        cli.main,
        [
            "wrt", "--level", "5", "--monodromy", "1,1,0,1", "--insertions", "1,0",
            "--method", "all", "--epsilon", "0.05", "--delta", "0.01", "--seed", "7",
        ],
    )
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    sample = doc["methods"]["sim-sample"]
    exact = doc["methods"]["sim-exact"]
    radius = sample["interval_radius_normalized"]
    assert abs(sample["z_normalized_re"] - exact["z_normalized_re"]) <= radius


def test_insertions_grammar(runner):
    result = runner.invoke(
        cli.main, ["wrt", "--level", "5", "--insertions", "1,0;0,1;2,3"]
    )
    assert result.exit_code == 0
    assert json.loads(result.stdout)["insertion_count"] == 3
    # empty string means m = 0
    result = runner.invoke(cli.main, ["wrt", "--level", "5", "--insertions", ""])
    assert json.loads(result.stdout)["insertion_count"] == 0


def test_parse_errors_exit_2_with_position(runner):
    result = runner.invoke(cli.main, ["wrt", "--level", "5", "--monodromy", "1,x,0,1"])
    assert result.exit_code == 2
    assert "position 2" in result.stderr
    result = runner.invoke(cli.main, ["wrt", "--level", "5", "--insertions", "1,0;9"])
    assert result.exit_code == 2
    assert "pair 2" in result.stderr
    result = runner.invoke(cli.main, ["wrt", "--level", "4"])
    assert result.exit_code == 2


def test_decompose_examples(runner):
    result = runner.invoke(cli.main, ["decompose", "--matrix", "1,0,0,1"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["word"] == [] and doc["word_length"] == 0
    result = runner.invoke(cli.main, ["decompose", "--matrix", "1,1,0,1"])
    doc = json.loads(result.stdout)
    assert doc["word"] == ["T"] and doc["word_length"] == 1
    result = runner.invoke(cli.main, ["decompose", "--matrix", "2,1,1,1"])
    assert json.loads(result.stdout)["round_trip_ok"]
    result = runner.invoke(cli.main, ["decompose", "--matrix", "1,1,1,1"])
    assert result.exit_code == 2


def test_coeff_examples(runner):
    result = runner.invoke(cli.main, ["coeff", "--a", "1,1", "--z", "0", "--method", "all"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["count_exact"] == 2
    assert doc["estimate"]["alpha"] == pytest.approx(0.5, abs=1e-9)

    result = runner.invoke(cli.main, ["coeff", "--a", "5", "--z", "0", "--modulus", "5"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["count_mod"] == 2 and doc["count_exact"] == 0
    assert not doc["aliasing_free"]

    result = runner.invoke(cli.main, ["coeff", "--a", "1", "--z", "2"])
    doc = json.loads(result.stdout)
    assert doc["count_exact"] == 0


def test_verify_subset_passes(runner):
    result = runner.invoke(
        cli.main, ["verify", "--check", "clock-shift-rank", "--check", "shot-count"]
    )
    assert result.exit_code == 0
    assert "PASS" in result.stderr
    doc = json.loads(result.stdout)
    assert doc["all_passed"]


def test_verify_unknown_check_exit_2(runner):
    result = runner.invoke(cli.main, ["verify", "--check", "nope"])
    assert result.exit_code == 2


def test_bench_csv_output(runner):
    result = runner.invoke(cli.main, ["bench", "--repeats", "1", "--no-sim"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0].startswith("row,kernel,sweep")
    assert any(line.startswith("fit,scalar,n") for line in lines)


def test_cross_check_failure_exits_3(runner, monkeypatch):
    """A document with a failing cross-check maps to exit code 3."""
    failing = WrtResponse(
        level=5,
        monodromy=(1, 0, 0, 1),
        insertions=[],
        insertion_count=0,
        word=[],
        word_length=0,
        method="all",
        z_re=25.0,
        z_im=0.0,
        z_abs=25.0,
        z_normalized_re=1.0,
        z_normalized_im=0.0,
        methods={
            "dp": WrtMethodResult(
                z_re=25.0, z_im=0.0, z_normalized_re=1.0, z_normalized_im=0.0, shots=0, op_count=0
            )
        },
        cross_check=CrossCheck(compared=("dp", "sim-exact"), max_delta=1.0, tolerance=1e-6, ok=False),
        epsilon=0.05,
        delta=0.01,
        seed=None,
        logical_qubits=7,
        timings={},
    )
    monkeypatch.setitem(cli._HANDLERS, "/wrt", (cli._HANDLERS["/wrt"][0], lambda req: failing))
    result = runner.invoke(cli.main, ["wrt", "--level", "5", "--method", "all"])
    assert result.exit_code == 3
    assert "cross-check failed" in result.stderr


def test_determinism_byte_identical_modulo_timings(runner):
    args = [
        "wrt", "--level", "7", "--monodromy", "1,1,0,1", "--insertions", "1,2;2,0",
        "--method", "all", "--seed", "42",
    ]
    out1 = json.loads(runner.invoke(cli.main, args).stdout)
    out2 = json.loads(runner.invoke(cli.main, args).stdout)
    out1.pop("timings")
    out2.pop("timings")
    assert json.dumps(out1, sort_keys=True) == json.dumps(out2, sort_keys=True)


class _StubResponse:
    def __init__(self, status_code: int, body):
        self.status_code = status_code
        self._body = body
        self.text = json.dumps(body)

    def json(self):
        return self._body


def test_server_mode_posts_to_service(runner, monkeypatch):
    captured = {}

    def fake_post(url, json=None, timeout=None):
        captured["url"] = url
        captured["payload"] = json
        return _StubResponse(200, {"word": ["T"], "word_length": 1, "round_trip_ok": True, "matrix": [1, 1, 0, 1], "max_entry": 1})

    monkeypatch.setattr(cli.httpx, "post", fake_post)
    result = runner.invoke(
        cli.main,
        ["decompose", "--matrix", "1,1,0,1", "--server", "http://example.test:9"],
    )
    assert result.exit_code == 0
    assert captured["url"] == "http://example.test:9/decompose"
    assert captured["payload"] == {"matrix": (1, 1, 0, 1)}
    assert json.loads(result.stdout)["word"] == ["T"]


def test_server_mode_422_maps_to_exit_2(runner, monkeypatch):
    monkeypatch.setattr(
        cli.httpx, "post", lambda url, json=None, timeout=None: _StubResponse(422, {"detail": "bad"})
    )
    result = runner.invoke(
        cli.main, ["decompose", "--matrix", "1,1,0,1", "--server", "http://x"]
    )
    assert result.exit_code == 2


def test_version_flag(runner):
    result = runner.invoke(cli.main, ["--version"])
    assert result.exit_code == 0
    assert "toruswrt" in result.stdout
