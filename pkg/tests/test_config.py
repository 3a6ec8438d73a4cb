import json

import pytest

from spinlab.config import ENV_VAR, ConfigError, load


def test_defaults():
    cfg = load(env={})
    assert cfg.system.coupling == "strong"
    assert cfg.pulse.shape == "gaussian" and cfg.pulse.duration == 0.65
    assert cfg.dt == 50e-6


def test_yaml_file(tmp_path):
    path = tmp_path / "sys.yaml"
    path.write_text(
        "offsets_hz: {I: 300, S: 180}\n"
        "j_hz: {IS: -9.0}\n"
        "coupling_model: weak\n"
        "dt_s: 2.5e-5\n"
        "pulse:\n  shape: sine-bell\n  duration_s: 0.5\n  truncation: 0.05\n"
    )
    cfg = load(path, env={})
    assert cfg.system.offsets_hz == (300.0, 180.0, 0.0)
    assert cfg.system.j(1, 2) == -9.0 and cfg.system.j(1, 3) == 11.3
    assert cfg.system.coupling == "weak"
    assert (cfg.pulse.shape, cfg.pulse.duration, cfg.pulse.truncation) == ("sine-bell", 0.5, 0.05)
    assert cfg.dt == 2.5e-5


def test_json_matrix_and_flags_win(tmp_path):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps({"j_hz": [[0, 1, 2], [1, 0, 3], [2, 3, 0]], "coupling_model": "weak"}))
    cfg = load(path, dt=1e-5, coupling="strong", env={})
    assert cfg.system.j(2, 3) == 3.0
    assert cfg.system.coupling == "strong" and cfg.dt == 1e-5


def test_env_fallback(tmp_path):
    path = tmp_path / "sys.yaml"
    path.write_text("coupling_model: weak\n")
    assert load(env={ENV_VAR: str(path)}).system.coupling == "weak"


def test_acquisition_file(tmp_path):
    path = tmp_path / "acq.yaml"
    path.write_text("dwell_s: 0.002\npoints: 2048\nt2_star_s: 0.2\nrelaxation: false\n")
    acq = load(acq=path, env={}).acquisition
    assert (acq.dwell, acq.points, acq.t2_star, acq.relaxation) == (0.002, 2048, 0.2, False)


@pytest.mark.parametrize(
    "text,match",
    [
        ("offsets: [1, 2, 3]\n", "unknown system key"),
        ("pulse: {width: 3}\n", "unknown pulse key"),
        ("j_hz: {IX: 3}\n", "bad coupling key"),
        ("j_hz: [[0, 1], [1, 0]]\n", "3x3"),
        ("j_hz: [[0, 1, 0], [2, 0, 0], [0, 0, 0]]\n", "symmetric"),
        ("coupling_model: medium\n", "coupling"),
        ("- 1\n- 2\n", "mapping"),
        ("a: [\n", "cannot parse"),
        ("dt_s: -1\n", "positive"),
    ],
)
def test_bad_configs(tmp_path, text, match):
    path = tmp_path / "bad.yaml"
    path.write_text(text)
    with pytest.raises(ConfigError, match=match):
        load(path, env={})


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load(tmp_path / "nope.yaml", env={})


def test_bad_acquisition(tmp_path):
    path = tmp_path / "acq.yaml"
    path.write_text("points: 1000\n")
    with pytest.raises(ConfigError, match="power of two"):
        load(acq=path, env={})
