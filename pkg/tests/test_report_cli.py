import io
import json
import re

import numpy as np
import pytest

from ringcluster import cli, report
from ringcluster import simulator as sim
from ringcluster.planner import ModelKind, network_plan, ring_sweep


@pytest.fixture(scope="module")
def plan():
    from ringcluster.radio import RadioParams
    from ringcluster.rings import NetworkConfig
    return network_plan(NetworkConfig(), RadioParams())


def by_figure(series_list):
    return {s.figure: s for s in series_list}


def test_format_value():
    assert report.format_value(20.0) == "20.0"
    assert report.format_value(0.5162425276497107) == "0.516242528"
    assert report.format_value(3) == "3"
    assert report.format_value(np.int64(7)) == "7"
    assert report.format_value(True) == "1"
    assert report.format_value(1.23456789012e-7) == "1.23456789e-07"
    assert report.format_value("epem") == "epem"
    assert float(report.format_value(1 / 3)) == float(f"{1 / 3:.9g}")


def test_fig14_csv(plan):
    text = report.series_to_csv(by_figure(report.analytic_series(plan))["fig14"])
    lines = text.split("\n")
    assert lines[0] == "ring,heads_uepem,heads_epem,ratio"
    assert lines[1] == "1,5.0,0.25,20.0"
    last = lines[10].split(",")
    assert last[0] == "10" and float(last[3]) == pytest.approx(0.217, abs=5e-4)
    assert text.endswith("\n") and "\r" not in text and len(lines) == 12


def test_fig10_csv(cfg, radio):
    text = report.series_to_csv(report.sweep_series(ring_sweep(cfg, radio, 20)))
    rows = list(csv_rows(text))
    assert rows[0] == ["rings", "uepem_total_j", "epem_total_j", "ratio"]
    assert [int(r[0]) for r in rows[1:]] == list(range(1, 21))
    assert {r[2] for r in rows[1:]} == {"0.516242528"}
    assert float(rows[1][3]) == pytest.approx(0.769, abs=5e-4)


def csv_rows(text):
    return (line.split(",") for line in text.strip("\n").split("\n"))


def test_empty_series_header_only(tmp_path):
    s = report.FigureSeries("fig4", ["ring", "a"])
    assert report.series_to_csv(s) == "ring,a\n"
    path = report.emit_series(s, "csv", tmp_path / "e.csv")
    assert path.read_bytes() == b"ring,a\n"
    doc = json.loads(report.series_to_json(s))
    assert doc == {"figure": "fig4", "columns": ["ring", "a"], "rows": []}


def test_json_shape(plan):
    doc = json.loads(report.series_to_json(by_figure(report.analytic_series(plan))["fig13"]))
    assert doc["figure"] == "fig13"
    assert doc["columns"] == ["ring", "heads_uepem", "heads_epem"]
    assert doc["rows"][0] == [1, 5.0, 0.25]


def test_every_figure_is_emitted(plan, cfg, radio):
    figs = {s.figure for s in report.analytic_series(plan)}
    figs.add(report.sweep_series(ring_sweep(cfg, radio, 2)).figure)
    assert {f"fig{n}" for n in range(4, 15)} <= figs
    for s in report.analytic_series(plan):
        labels = [row[0] for row in s.rows]
        assert labels == list(range(1, 11))


def test_emit_is_byte_deterministic(plan, tmp_path):
    for fmt in ("csv", "json"):
        for s in report.analytic_series(plan):
            a = report.emit_series(s, fmt, tmp_path / f"a_{s.figure}.{fmt}").read_bytes()
            b = report.emit_series(s, fmt, tmp_path / f"b_{s.figure}.{fmt}").read_bytes()
            assert a == b


def test_unwritable_path(tmp_path):
    target = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match=re.escape(str(target))):
        report.emit_series(report.FigureSeries("f", ["a"]), "csv", target)
    assert not list(tmp_path.iterdir())


def _tessellation(cfg, radio, seed=1, model=ModelKind.UEPEM):
    dep = sim.deploy(cfg, seed)
    heads = sim.elect_heads(dep, sim.ring_probabilities(cfg, radio, model), seed)
    return dep, sim.assign_members(dep, heads)


def test_svg_structure(cfg, radio, tmp_path):
    dep, a = _tessellation(cfg, radio)
    svg = report.render_svg(dep, a, tmp_path / "t.svg").read_text()
    assert svg.startswith('<?xml version="1.0"') and 'version="1.1"' in svg
    assert svg.count('class="node ') == cfg.node_count
    assert svg.count('class="node head"') == a.is_head.sum()
    assert svg.count('class="link"') == (~a.is_head).sum()
    assert svg.count('class="ring"') == cfg.ring_count - 1
    assert "href" not in svg
    again = report.render_svg(dep, a, tmp_path / "u.svg").read_text()
    assert svg == again


def test_svg_single_head(cfg, tmp_path):
    dep = sim.deploy(cfg, 2)
    heads = np.zeros(dep.size, bool)
    heads[0] = True
    svg = report.tessellation_svg(dep, sim.assign_members(dep, heads))
    ends = set(re.findall(r'<line class="link" x1="[^"]+" y1="[^"]+" x2="([^"]+)" y2="([^"]+)"', svg))
    assert len(ends) == 1
    (x2, y2), = ends
    rect = re.search(r'<rect class="node head" x="([^"]+)" y="([^"]+)"', svg)
    assert float(rect.group(1)) + 4 == pytest.approx(float(x2))
    assert float(rect.group(2)) + 4 == pytest.approx(float(y2))


# --- CLI ---------------------------------------------------------------------

def test_parse_defaults():
    run = cli.parse_args(["plan"])
    assert run == cli.RunConfig(command="plan")
    cfg = run.network()
    assert (cfg.node_count, cfg.area, cfg.ring_count, cfg.epem_probability) == (500, 25e4, 10, 0.05)
    assert run.seed == 1 and run.trials == 200
    assert run.policy == sim.NEAREST_GLOBAL and run.branch_mode == sim.PAPER_FAITHFUL


def test_parse_sweep_bounds():
    run = cli.parse_args(["sweep", "--rings-max", "20"])
    assert (run.rings_min, run.rings_max) == (1, 20)
    run = cli.parse_args(["simulate", "--policy", "nearest-in-ring", "--branch", "thresholded"])
    assert run.policy == sim.NEAREST_IN_RING and run.branch_mode == sim.THRESHOLDED


@pytest.mark.parametrize("argv, flag", [
    (["analytic", "--epem-p", "0"], "--epem-p"),
    (["analytic", "--epem-p", "1.5"], "--epem-p"),
    (["plan", "--rings", "0"], "--rings"),
    (["plan", "--nodes", "many"], "--nodes"),
    (["plan", "--bogus"], "--bogus"),
    (["sweep", "--rings-min", "5", "--rings-max", "2"], "--rings-min"),
    (["nonsense"], "command"),
])
def test_usage_errors(argv, flag, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.parse_args(argv)
    assert exc.value.code == 2
    assert flag in capsys.readouterr().err


def test_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.parse_args(["--help"])
    assert exc.value.code == 0
    assert "ringcluster" in capsys.readouterr().out


def run_cli(argv):
    buf = io.StringIO()
    code = cli.command_dispatch(cli.parse_args(argv), stdout=buf)
    return code, buf.getvalue()


def test_plan_command():
    code, out = run_cli(["plan"])
    assert code == 0
    rows = [line.split(",") for line in out.split("\n") if line and line[0].isdigit()]
    assert rows[0][4] == "1.0"
    assert float(rows[9][4]) == pytest.approx(0.01084, abs=5e-6)


def test_hetero_command():
    code, out = run_cli(["hetero"])
    assert code == 0
    assert out == "ring,category1_nodes\n" + "".join(
        f"{i},{n}\n" for i, n in enumerate([5, 6, 4, 3, 3, 2, 2, 2, 2, 2], 1))


def test_analytic_command_writes_all_figures(tmp_path):
    code, _ = run_cli(["analytic", "--out", str(tmp_path)])
    assert code == 0
    names = {p.stem for p in tmp_path.glob("*.csv")}
    assert {f"fig{n}" for n in range(4, 15)} - {"fig10"} <= names
    assert "fig5_excl_electronics" in names
    totals = (tmp_path / "totals.csv").read_text()
    assert "epem,0.516242528\n" in totals


def test_sweep_command_json():
    code, out = run_cli(["sweep", "--rings-max", "20", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["figure"] == "fig10" and len(doc["rows"]) == 20


def test_validate_moments_command():
    code, out = run_cli(["validate-moments", "--samples", "1000000", "--seed", "7"])
    assert code == 0
    rows = [line.split(",") for line in out.strip().split("\n")[1:]]
    assert all(r[5] == "1" and r[9] == "1" for r in rows)


def test_simulate_command_serial_vs_parallel(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli(["simulate", "--trials", "16", "--out", str(a)])[0] == 0
    assert run_cli(["simulate", "--trials", "16", "--workers", "3", "--out", str(b)])[0] == 0
    for name in ("simulate_uepem.csv", "simulate_epem.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_render_command(tmp_path):
    out = tmp_path / "t.svg"
    assert run_cli(["render", "--out", str(out)])[0] == 0
    first = out.read_bytes()
    run_cli(["render", "--out", str(out)])
    assert out.read_bytes() == first
    assert first.count(b'class="node ') == 500


def test_main_reports_errors(tmp_path, capsys):
    radio = tmp_path / "radio.txt"
    radio.write_text("warp_factor=9\n")
    assert cli.main(["plan", "--radio", str(radio)]) == 1
    assert "warp_factor" in capsys.readouterr().err
    assert cli.main(["plan", "--radio", str(tmp_path / "nope.txt")]) == 1


def test_radio_file_flag(tmp_path):
    radio = tmp_path / "radio.txt"
    radio.write_text("packet_bytes=250\n")
    _, full = run_cli(["plan"])
    _, half = run_cli(["plan", "--radio", str(radio)])
    t_full = float(full.split("\nuepem,")[1].split("\n")[0])
    t_half = float(half.split("\nuepem,")[1].split("\n")[0])
    assert t_half == pytest.approx(t_full / 2, rel=1e-8)
