import os
import pathlib

import pytest

import compkit

FIXTURES = pathlib.Path(
    os.environ.get("COMPKIT_FIXTURES_DIR", pathlib.Path(__file__).resolve().parents[1] / "fixtures")
)
HELLO = FIXTURES / "hello_bash" / "hello_bash.comp.yaml"


def test_version():
    assert compkit.__version__ == "0.1.0"
    code, out, _ = compkit.dispatch(["--version"])
    assert code == 0
    assert out == "compkit 0.1.0\n"


def test_load_and_view_round_trip():
    cfg = compkit.load_config(str(HELLO))
    assert cfg.name == "hello_bash"
    assert cfg.version == "0.1.0"
    assert "native" in cfg.engines
    view = compkit.view_config(cfg)
    again = compkit.parse_config(view, str(HELLO))
    assert compkit.view_config(again) == view


def test_parse_error_has_position():
    with pytest.raises(compkit.ParseError):
        compkit.parse_config("name: [oops\n")


def test_validate_reports_bad_name():
    cfg = compkit.parse_config("name: Bad-Name\nresources:\n  - {language: bash, text: x}\n")
    severities = [sev for sev, _ in compkit.validate_config(cfg)]
    assert "error" in severities


def test_coerce_and_parse_args():
    assert compkit.coerce("integer", "42") == 42
    with pytest.raises(compkit.CompkitError):
        compkit.coerce("integer", "abc")
    cfg = compkit.load_config(str(FIXTURES / "probe" / "probe.comp.yaml"))
    kind, params, warnings = compkit.parse_args(cfg, ["--input", "x.txt", "--ns", "1,2"])
    assert kind == "params"
    assert params["count"] == 3
    assert params["ns"] == [1, 2]
    assert warnings == []
    with pytest.raises(compkit.UsageError):
        compkit.parse_args(cfg, [])


def test_inject():
    script = "# COMPKIT START\nx\n# COMPKIT END\necho hi\n"
    block = "par_a='1'\n"
    out = compkit.inject(script, "bash", block)
    assert block in out
    assert out.endswith("echo hi\n")
    with pytest.raises(compkit.InjectError):
        compkit.inject("# COMPKIT END\n", "bash", block)


def test_generators():
    flow = compkit.load_config(str(FIXTURES / "flow" / "flow.comp.yaml"))
    assert compkit.image_ref(flow) == "flow:2.0.0"
    assert "FROM python:3.10-slim" in compkit.generate_containerfile(flow)
    assert compkit.generate_workflow_module(flow).startswith("// flow 2.0.0\n")
    assert compkit.generate_native_wrapper(flow).startswith("#!")


def test_build_and_run_tests(tmp_path):
    cfg = compkit.load_config(str(HELLO))
    artifact = compkit.build(cfg, "native", str(tmp_path / "out"))
    assert pathlib.Path(artifact["entry_path"]).exists()
    report = compkit.run_tests(compkit.load_config(str(FIXTURES / "suite" / "suite.comp.yaml")))
    assert report["passed"] == 1
    assert report["failed"] == 1
    assert "1 passed, 1 failed" in report["human"]
    assert [c["status"] for c in report["cases"]].count("fail") == 1


def test_scan_tree():
    entries = compkit.scan(str(FIXTURES / "tree" / "src"))
    assert [e["name"] for e in entries] == ["greet", "shout", "broken"]
    assert "greet" in compkit.ns_list(str(FIXTURES / "tree" / "src"), "human")
