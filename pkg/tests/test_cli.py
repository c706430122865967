import json

import numpy as np
import pytest

from randdm import cli
from randdm.channels import ChannelError


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_moments_fuss_catalan(capsys):
    code, out, _ = run(["moments", "--law", "fc", "--s", "2", "--max-order", "3"], capsys)
    assert code == 0
    assert [row["value"] for row in json.loads(out)["moments"]] == [1, 1, 3, 12]


def test_moments_nu_k_exact(capsys):
    _, out, _ = run(["moments", "--law", "nu_k", "--k", "4", "--max-order", "2"], capsys)
    assert json.loads(out)["moments"][2]["exact"] == "7/4"


def test_sample_single_unitary(tmp_path):
    out = tmp_path / "s.csv"
    code = cli.main(["sample", "--kind", "generalized", "--k", "1", "--s", "0", "--n", "4",
                     "--samples", "1", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "sample_id,eig_index,lambda,x"
    lam = np.array([float(l.split(",")[2]) for l in lines[1:]])
    assert lam.shape == (4,) and np.allclose(lam, 0.25, atol=1e-14)
    meta = json.loads((tmp_path / "s.csv.meta.json").read_text())
    assert meta["seed"] == 0 and meta["config"]["kind"] == "generalized"


def test_sample_csv_round_trips(tmp_path):
    out = tmp_path / "s.csv"
    cli.main(["sample", "--kind", "bures", "--n", "5", "--samples", "2", "--seed", "3", "--out", str(out)])
    from randdm.stats import SpectrumBatch
    from randdm.ensembles import EnsembleSpec
    batch = SpectrumBatch.generate(EnsembleSpec("bures", 5), 2, 3)
    lam = np.array([float(l.split(",")[2]) for l in out.read_text().splitlines()[1:]])
    assert np.array_equal(lam, batch.lambdas.reshape(-1))


def test_sample_stdout_has_config_comment(capsys):
    _, out, _ = run(["sample", "--kind", "hilbert_schmidt", "--n", "3", "--samples", "1"], capsys)
    first = out.splitlines()[0]
    assert first.startswith("# ") and json.loads(first[2:])["seed"] == 0


def test_density_grid(tmp_path):
    out = tmp_path / "d.csv"
    assert cli.main(["density", "--law", "mp", "--c", "0.5", "--bins", "50", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "x,density" and len(rows) == 51
    xs = [float(r.split(",")[0]) for r in rows[1:]]
    meta = json.loads((tmp_path / "d.csv.meta.json").read_text())
    assert meta["atom_mass"] == 0.5
    lo, hi = meta["support"]
    assert lo < min(xs) and max(xs) < hi


def test_compare_report(capsys):
    code, out, _ = run(["compare", "--kind", "arcsine", "--n", "32", "--samples", "5", "--seed", "7"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["law"] == "arcsine" and rep["m2_predicted"] == 1.5 and rep["sample_count"] == 5


def test_compare_histogram(tmp_path):
    out = tmp_path / "c.json"
    cli.main(["compare", "--kind", "hilbert_schmidt", "--n", "16", "--samples", "3", "--bins", "8",
              "--out", str(out)])
    hist = (tmp_path / "c.json.hist.csv").read_text().splitlines()
    assert hist[0] == "bin_lo,bin_hi,mass" and len(hist) == 9


def test_compare_deterministic(tmp_path):
    args = ["compare", "--kind", "bures", "--n", "24", "--samples", "6", "--seed", "11"]
    paths = []
    for i, workers in enumerate(["1", "1", "2"]):
        p = tmp_path / f"r{i}.json"
        cli.main(args + ["--workers", workers, "--out", str(p)])
        paths.append(p)
    first = paths[0].read_bytes()
    assert paths[1].read_bytes() == first
    assert paths[2].read_bytes() == first


def test_table1_small(tmp_path):
    out = tmp_path / "t.json"
    assert cli.main(["table1", "--n", "12", "--samples", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [(r["k"], r["s"]) for r in data["rows"]] == list(cli.TABLE1_ROWS)
    row4 = next(r for r in data["rows"] if r["k"] == 4)
    assert row4["m2_predicted"] == 1.75
    assert "7/4" in data["note"]
    text = (tmp_path / "t.json.txt").read_text()
    assert "x^(-2/3)" in text and "note:" in text


def test_channel_csv(tmp_path):
    out = tmp_path / "ch.csv"
    assert cli.main(["channel", "--n", "2", "--seed", "5", "--out", str(out)]) == 0
    rows = [r.split(",") for r in out.read_text().splitlines()]
    assert len(rows) == 4 and all(len(r) == 8 for r in rows)
    sigma = np.array([[float(r[2 * j]) + 1j * float(r[2 * j + 1]) for j in range(4)] for r in rows])
    assert abs(np.trace(sigma) - 1) < 1e-12
    report = json.loads((tmp_path / "ch.csv.meta.json").read_text())["cptp"]
    assert report["completely_positive"] and report["trace_preserving"]


@pytest.mark.parametrize("argv", [
    ["sample", "--kind", "bogus", "--n", "3"],
    ["sample", "--kind", "k_entangled", "--n", "3", "--k", "2", "--weights", "0.5,0.6"],
    ["sample", "--kind", "hilbert_schmidt"],
    ["sample", "--n", "3", "--samples", "0"],
    ["moments", "--law", "gauss"],
    ["compare", "--kind", "unit_interpolation", "--a", "0.3", "--n", "4", "--samples", "1"],
    ["frobnicate"],
])
def test_config_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["exit_code"] == 2 and payload["message"]


def test_invariant_failure_exit_3(monkeypatch, capsys):
    def broken(*a, **k):
        raise ChannelError("environment-deficient state")
    monkeypatch.setattr(cli, "random_operation", broken)
    code, _, err = run(["channel", "--n", "2"], capsys)
    assert code == 3
    assert json.loads(err)["error"] == "ChannelError"


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, 2.0**-1074, 1e308, -7.25):
        assert float(cli.fmt(v)) == v
