import math
import os
from pathlib import Path

import pytest

import heatcontent as hc

DATA = Path(os.environ.get("HEATCONTENT_DATA_DIR", Path(__file__).resolve().parents[2] / "data" / "domains"))


def test_closed_interval_value():
    e = hc.heat_content(hc.Domain.interval(1.0), 0.1)
    assert e.method == "closed"
    assert e.kind == "certified"
    assert e.value == pytest.approx(0.6471178232158304, abs=1e-14)
    assert hc.heat_content(hc.Domain.interval(1.0), 0.0).value == 1.0


def test_domain_properties_and_json_round_trip():
    d = hc.Domain.box([1.0, 2.0])
    assert d.dimension == 2
    assert d.volume == 2.0
    assert d.diameter == pytest.approx(math.sqrt(5.0))
    assert d.contains([0.5, 1.0])
    assert not d.contains([1.5, 1.0])
    again = hc.Domain.from_json(d.to_json())
    assert again.volume == d.volume
    assert "box" in repr(d)


def test_engines_agree():
    d = hc.Domain.box([1.0, 2.0])
    closed = hc.heat_content(d, 0.2, "closed")
    grid = hc.heat_content(d, 0.2, "grid")
    assert abs(grid.value - closed.value) <= 1e-4 * closed.value
    mc = hc.heat_content(hc.Domain.interval(1.0), 0.1, "mc", n_samples=200000)
    assert abs(mc.value - 0.6471178232158304) <= mc.error_bound
    assert mc.meta["seed"] == 24301


def test_load_standard_domains():
    for name in ["interval1", "box12", "ball2", "box111", "union2"]:
        d = hc.Domain.load(DATA / f"{name}.json")
        assert d.volume > 0


def test_derivatives_and_semigroup():
    d = hc.Domain.interval(1.0)
    d1 = hc.derivative(d, 1.0, 1)
    assert d1.value == pytest.approx(math.expm1(-0.25) / math.sqrt(math.pi), rel=1e-8)
    d2 = hc.derivative(d, 1.0, 2)
    assert hc.d2_semigroup(d, 0.5) == pytest.approx(d2.value, rel=1e-3)
    with pytest.raises(hc.NoisyEngineError):
        hc.derivative(d, 1.0, 2, method="mc", n_samples=2000)


def test_verify_and_constants():
    report = hc.verify("I05", hc.Domain.interval(1.0))
    assert report["passed"]
    assert len(report["rows"]) == 20
    assert set(hc.case_ids()) >= {"I04", "I011", "BG24_CONV"}
    assert hc.improved_constants(2) == (0.75, 2.25)
    assert hc.bg24_constants(1)[1] == 0.0625
    assert not hc.integrated_sharper(1)
    assert hc.integrated_sharper(2)
    assert hc.kernel_dt_bound_margin(2, 1.0, 1.0) >= 0.0


def test_errors():
    with pytest.raises(ValueError):
        hc.Domain.interval(-1.0)
    with pytest.raises(hc.EngineError, match="oracle scale exceeded"):
        hc.heat_content(hc.Domain.ball([0.0, 0.0], 1.0), 0.5, "brute", h=0.005)


def test_cli_entry_point():
    code, out, err = hc.run_cli(["compare-constants", "--m-range", "1:2"])
    assert code == 0
    assert out.splitlines()[1].startswith("1,0.25,")
    code, _, err = hc.run_cli(["sweep", "--domain", str(DATA / "interval1.json"), "--t-grid", "list:"])
    assert code == 2
    assert "empty" in err
