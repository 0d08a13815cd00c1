import json
import math

import pytest

import minlap


def test_version_and_defaults():
    assert minlap.__version__ == "0.3.0"
    cfg = minlap.default_config()
    assert cfg["surface"]["kind"] == "plane"
    assert cfg["volume"]["radii"] == [1, 2, 5, 10, 20, 40]


def test_extrinsic_calculus_on_the_catenoid():
    imm = minlap.make_immersion(minlap.SurfaceSpec.catenoid(1.0, 3.0))
    base = minlap.BasePoint.ambient_point([0.0, 0.0, 0.0])
    ec = minlap.extrinsic_calculus(imm, base, [0.7, 1.1])
    assert abs(ec.hess_h.trace() - 2.0) < 1e-10
    assert abs(1 - ec.grad_norm**2 - ec.normal_component**2) < 1e-12


def test_plane_ball_volume():
    imm = minlap.make_immersion(minlap.SurfaceSpec.plane(2, 3.0))
    base = minlap.BasePoint.ambient_point([0.0, 0.0, 0.0])
    assert minlap.extrinsic_ball_volume(imm, base, 2.0) == pytest.approx(4 * math.pi, rel=1e-10)


def test_bdgg_params():
    p = minlap.bdgg.params(4)
    assert (p.p, p.delta, p.alpha, p.lambda_lo) == (3, 1.0, 1.5, 1.3125)
    assert minlap.bdgg.P(-0.5, p) == -minlap.bdgg.P(0.5, p)


def test_run_volume(tmp_path):
    code, report, files = minlap.run(
        "volume", {"out": str(tmp_path), "volume": {"radii": "1:4:4"}}
    )
    assert code == 0
    assert report["subcommand"] == "volume"
    assert all(v["status"] != "fail" for v in report["verdicts"])
    assert (tmp_path / "report.json").exists()
    assert json.loads((tmp_path / "report.json").read_text())["payload"] == report["payload"]
    assert any(f.endswith("volume.csv") for f in files)


def test_errors_surface_as_exceptions(tmp_path):
    with pytest.raises(minlap.MinlapError, match="unknown key"):
        minlap.run("volume", {"out": str(tmp_path), "bogus": 1})
    with pytest.raises(minlap.MinlapError):
        minlap.make_immersion(minlap.SurfaceSpec.plane(2, -1.0))


def test_format_double():
    assert minlap.format_double(0.1) == "0.10000000000000001"
