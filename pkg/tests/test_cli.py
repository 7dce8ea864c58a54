import json

import pytest

from rotbeta.cli import EXIT_CAP, EXIT_OK, EXIT_PARAMS, EXIT_USAGE, heatmap_svg, main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == EXIT_OK and out else None)


def test_bounds_square_lattice(tmp_path, capsys):
    cfg = tmp_path / "square.json"
    cfg.write_text(json.dumps({"field": {"minpoly": [1, -3], "name": "t"}, "beta": "3", "q": 4,
                               "zeta_trace": "0", "eta1": "1", "eta2": "zeta", "xi": "0"}))
    code, out = _run(capsys, "bounds", "--params", str(cfg), "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out["nu1"] == pytest.approx(2)
    assert out["nu2"] == pytest.approx(1 + 2 ** 0.5)


def test_graph_threefold(tmp_path, capsys):
    code, out = _run(capsys, "graph", "--params", "threefold", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out["states"] == 12 and out["primitive"]
    rows = (tmp_path / "transitions.csv").read_text().splitlines()
    assert rows[0] == "from,label,to" and len(rows) == out["edges"] + 1


def test_partition_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["partition", "--params", "fivefold", "--out", str(a)]) == EXIT_OK
    assert main(["partition", "--params", "fivefold", "--out", str(b)]) == EXIT_OK
    capsys.readouterr()
    for name in ("partition.svg", "faces.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert (a / "partition.svg").read_text().count("<polygon") == 40


def test_nonsofic(tmp_path, capsys):
    code, out = _run(capsys, "nonsofic", "--beta", "3", "--out", str(tmp_path))
    assert code == EXIT_OK and out["status"] == "diverges"
    code, out = _run(capsys, "nonsofic", "--beta", "29/10", "--out", str(tmp_path))
    assert out["status"] == "inconclusive" and out["lhs"] < out["rhs"]


def test_nonergode(tmp_path, capsys):
    code, out = _run(capsys, "nonergode", "--out", str(tmp_path))
    assert code == EXIT_OK and out["set_equation"] and out["region"]


def test_exit_codes(tmp_path, capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["bounds", "--params", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == EXIT_PARAMS
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["bounds", "--params", str(bad), "--out", str(tmp_path)]) == EXIT_PARAMS
    assert main(["sofic", "--params", "fivefold", "--cap", "2", "--out", str(tmp_path)]) == EXIT_CAP
    assert main(["sofic", "--params", "fivefold", "--cap", "0", "--out", str(tmp_path)]) == EXIT_USAGE
    assert main(["simulate", "--params", "fivefold", "--grid", "5000", "--out", str(tmp_path)]) == EXIT_USAGE
    capsys.readouterr()


def test_heatmap_limits():
    import numpy as np

    svg = heatmap_svg(np.eye(4))
    assert svg.count("<rect") == 4 + 2
    with pytest.raises(ValueError):
        heatmap_svg(np.zeros((2000, 2000)))
