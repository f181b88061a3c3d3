import json

import numpy as np
import pytest

from cuspscope.cli import main
from cuspscope.config import ConfigError, RunConfig, load_config, scales_from_config
from cuspscope.engine import ScaleGrid, forward
from cuspscope.io import FormatError, read_field, read_signal, write_field, write_signal
from cuspscope.signals import band_limited_random
from cuspscope.wavelets import log_normal

SMALL_CLASSIFY = {"grid": {"n_points": 512}, "scales": {"count": 48},
                  "analysis": {"window": [1 / 256, 0.06]}}


def _run(tmp_path, command, cfg=None, *extra, name="out"):
    argv = [command, "--out", str(tmp_path / name)]
    if cfg is not None:
        path = tmp_path / f"{name}.json"
        path.write_text(cfg if isinstance(cfg, str) else json.dumps(cfg))
        argv += ["--config", str(path)]
    return main(argv + list(extra)), tmp_path / name


# -- binary dumps --------------------------------------------------------------------


@pytest.mark.parametrize("dim, n", [(1, 128), (2, 32)])
def test_field_round_trip(tmp_path, dim, n):
    s = band_limited_random((2, n // 4), n, 1.0, dim, seed=0)
    W = forward(log_normal(dim), s, ScaleGrid(2.0 / n, 0.25, 6))
    write_field(tmp_path / "f.bin", W, {"note": "x"})
    back = read_field(tmp_path / "f.bin")
    assert np.array_equal(back.values, W.values)
    assert back.wavelet == W.wavelet and back.shape == W.shape
    np.testing.assert_allclose(back.scales.scales, W.scales.scales, rtol=1e-15)


@pytest.mark.parametrize("complex_", [False, True])
def test_signal_round_trip(tmp_path, complex_):
    s = band_limited_random((2, 30), 256, seed=1)
    if complex_:
        s = s.with_samples(s.samples * (1 + 2j))
    write_signal(tmp_path / "s.bin", s)
    back = read_signal(tmp_path / "s.bin")
    assert np.array_equal(back.samples, s.samples)
    assert np.iscomplexobj(back.samples) == complex_


@pytest.mark.parametrize("payload", [b"", b"\x05\x00\x00\x00\x00\x00\x00\x00{bad}",
                                     b"\x02\x00\x00\x00\x00\x00\x00\x00{}",
                                     b"\x0d\x00\x00\x00\x00\x00\x00\x00{\"dims\":[4]}\x00"])
def test_malformed_dumps_raise_format_error(tmp_path, payload):
    (tmp_path / "x.bin").write_bytes(payload)
    with pytest.raises(FormatError):
        read_field(tmp_path / "x.bin")


def test_field_dump_is_not_a_signal(tmp_path):
    W = forward(log_normal(1), band_limited_random((2, 8), 64, seed=0), ScaleGrid(1 / 32, 0.25, 3))
    write_field(tmp_path / "f.bin", W)
    with pytest.raises(FormatError):
        read_signal(tmp_path / "f.bin")


# -- configuration ----------------------------------------------------------------------


def test_defaults_are_filled_in():
    cfg = RunConfig.from_dict({"grid": {"n_points": 256}})
    assert cfg["grid"] == {"n_points": 256, "length": 1.0, "dimension": 2}
    assert cfg["seed"] == 0 and len(cfg["wavelets"]) == 2


@pytest.mark.parametrize("bad", [{"seed": -1}, {"grid": {"dimension": 3}}, {"nope": 1},
                                 {"analysis": {"paths": [{"xi": [1.0], "gamma": 0.5}]}},
                                 {"scales": {"kind": "log"}}])
def test_schema_violations(bad):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(bad)


def test_load_config_errors(tmp_path):
    (tmp_path / "a.json").write_text("{not json")
    (tmp_path / "b.json").write_text("[1, 2]")
    for name in ("a.json", "b.json", "missing.json"):
        with pytest.raises(ConfigError):
            load_config(tmp_path / name)


def test_explicit_scales_need_bounds():
    with pytest.raises(ConfigError):
        scales_from_config({"kind": "explicit", "count": 4}, 64, 1.0, 1)
    sc = scales_from_config({"kind": "explicit", "a_min": 0.01, "a_max": 0.1, "count": 4}, 64, 1.0, 1)
    assert sc.count == 4 and sc.scales[0] == pytest.approx(0.01, rel=1e-14)


# -- command line ----------------------------------------------------------------------


def test_malformed_config_exits_with_two(tmp_path, capsys):
    code, _ = _run(tmp_path, "transform", "{oops")
    assert code == 2
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "config"


def test_schema_error_exits_with_two(tmp_path):
    assert _run(tmp_path, "transform", {"grid": {"dimension": 5}})[0] == 2


def test_unknown_command_exits_with_two():
    assert main(["frobnicate"]) == 2


def test_bad_signal_file_exits_with_two(tmp_path):
    (tmp_path / "junk.bin").write_bytes(b"xx")
    cfg = {"signal": {"generator": "file", "path": str(tmp_path / "junk.bin")}}
    assert _run(tmp_path, "transform", cfg)[0] == 2


def test_zero_signal_transforms_to_zero(tmp_path):
    cfg = {"grid": {"n_points": 64, "dimension": 1}, "signal": {"generator": "zero"},
           "scales": {"count": 6}}
    code, out = _run(tmp_path, "transform", cfg, "--format", "bin")
    assert code == 0
    assert not np.any(read_field(out / "field.bin").values)


def test_outputs_are_reproducible(tmp_path):
    cfg = {"grid": {"n_points": 128, "dimension": 1}, "signal": {"generator": "rough"},
           "scales": {"count": 8}}
    _, a = _run(tmp_path, "transform", cfg, "--format", "bin", "--seed", "7", name="a")
    _, b = _run(tmp_path, "transform", cfg, "--format", "bin", "--seed", "7", name="b")
    _, c = _run(tmp_path, "transform", cfg, "--format", "bin", "--seed", "8", name="c")
    assert (a / "field.bin").read_bytes() == (b / "field.bin").read_bytes()
    assert (a / "transform.json").read_text() == (b / "transform.json").read_text()
    assert (a / "field.bin").read_bytes() != (c / "field.bin").read_bytes()


def test_signals_command_round_trips_through_file(tmp_path):
    cfg = {"grid": {"n_points": 128, "dimension": 1}, "signal": {"generator": "band-limited"}}
    code, out = _run(tmp_path, "signals", cfg, "--format", "bin", name="s")
    assert code == 0
    s = read_signal(out / "signal.bin")
    cfg2 = {"signal": {"generator": "file", "path": str(out / "signal.bin")}, "scales": {"count": 6}}
    code, out2 = _run(tmp_path, "transform", cfg2, name="t")
    assert code == 0
    meta = json.loads((out2 / "transform.json").read_text())
    assert meta["field"]["grid"]["n_points"] == s.n_points == 128


def test_separation_verdicts(tmp_path, capsys):
    code, out = _run(tmp_path, "separation")
    assert code == 0
    verdicts = {v["name"]: v for v in json.loads((out / "separation.json").read_text())["verdicts"]}
    assert verdicts["strips (2, 1)"]["separated"]
    assert not verdicts["strips (1, 2)"]["separated"]


def test_classify_reports_requested_paths(tmp_path):
    code, out = _run(tmp_path, "classify", SMALL_CLASSIFY, "--format", "csv")
    assert code == 0
    reports = json.loads((out / "classify.json").read_text())["reports"]
    assert {r["gamma"] for r in reports} == {1.2, 3.0}
    axis = [r for r in reports if r["gamma"] == 3.0 and r["xi"] == [1.0, 0.0]]
    assert axis and all(r["rapid"] for r in axis)
    assert (out / "classify.csv").read_text().startswith("wavelet,xi,gamma,lambda")


def test_verify_passes_with_defaults(tmp_path, capsys):
    code, out = _run(tmp_path, "verify", None, "--threads", "1")
    assert code == 0
    assert json.loads((out / "verify.json").read_text())["passed"]
    assert "[PASS]" in capsys.readouterr().out


def test_verify_flags_violated_elliptic_hypothesis(tmp_path):
    cfg = {"elliptic": {"gamma": 1.5}, "verify": {"checks": ["geometry"]}}
    code, out = _run(tmp_path, "verify", cfg)
    assert code == 1
    assert not json.loads((out / "verify.json").read_text())["passed"]


def test_elliptic_command_rejects_gamma_below_degree(tmp_path, capsys):
    code, _ = _run(tmp_path, "elliptic", {"elliptic": {"gamma": 1.5}})
    assert code == 1
    assert "hypothesis violated" in capsys.readouterr().err
