import json
import math

import numpy as np
import pytest

from superpixel_transfer import (
    RasterImage,
    SuperpixelDecomposition,
    TransferConfig,
    load_image,
    run_transfer,
    save_image,
)
from superpixel_transfer import cli
from superpixel_transfer.pipeline import (
    STAGES,
    benchmark_images,
    diagnostic_paths,
    run_transfer_images,
    selection_count_map,
)

from conftest import grid_labels, real_image


@pytest.fixture(scope="module")
def pair_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("pair")
    t, s = d / "target.png", d / "source.png"
    save_image(real_image("coffee", (240, 180)), t)
    save_image(real_image("astronaut", (240, 180)), s)
    return t, s


def test_defaults_report(tmp_path):
    target = real_image("coffee", (480, 360))
    source = real_image("astronaut", (480, 360))
    _, report, _ = run_transfer_images(target, source, TransferConfig("t", "s", "o"))
    d = report.to_dict()
    assert d["epsilon"] == 3 and d["iterations"] == 20 and d["superpixel_size"] == 500
    assert list(d) == ["k_target", "k_source", "epsilon", "iterations", "superpixel_size",
                       "total_matching_cost", "selection_histogram", "stage_times_ms"]
    assert list(d["stage_times_ms"]) == list(STAGES)
    assert all(v >= 0 for v in d["stage_times_ms"].values())
    assert sum(d["selection_histogram"]) == d["k_source"]
    assert len(d["selection_histogram"]) <= 4
    # with ~345 superpixels the grid count N / 500 is an upper bound
    assert 300 <= d["k_target"] <= 480 * 360 // 500


def test_cli_writes_png_and_report(pair_files, tmp_path, capsys):
    t, s = pair_files
    out, rep = tmp_path / "out.png", tmp_path / "rep.json"
    code = cli.main(["--target", str(t), "--source", str(s), "--out", str(out), "--report", str(rep),
                     "--superpixel-size", "200"])
    assert code == 0
    assert load_image(out).shape == (180, 240)
    report = json.loads(rep.read_text())
    assert "stage_times_ms" not in report
    timings = json.loads(rep.with_suffix(".timings.json").read_text())["stage_times_ms"]
    assert set(timings) == set(STAGES)
    stdout = capsys.readouterr().out
    assert all(stage in stdout for stage in STAGES)


def test_cli_epsilon_inf(pair_files, tmp_path):
    t, s = pair_files
    rep = tmp_path / "rep.json"
    code = cli.main(["--target", str(t), "--source", str(s), "--out", str(tmp_path / "o.png"),
                     "--report", str(rep), "--superpixel-size", "200", "--epsilon", "inf"])
    assert code == 0
    report = json.loads(rep.read_text())
    assert report["epsilon"] == "inf"
    assert sum(report["selection_histogram"]) == report["k_source"]


def test_cli_infeasible_epsilon(tmp_path, capsys):
    t, s = tmp_path / "t.png", tmp_path / "s.png"
    save_image(real_image("coffee", (200, 100)), t)
    save_image(real_image("astronaut", (50, 40)), s)
    code = cli.main(["--target", str(t), "--source", str(s), "--out", str(tmp_path / "o.png"),
                     "--superpixel-size", "100", "--epsilon", "1"])
    assert code == 2
    err = capsys.readouterr().err.strip()
    assert "\n" not in err
    payload = json.loads(err)
    assert payload["error"] == "configuration"
    assert payload["min_epsilon"] >= 2
    assert str(payload["min_epsilon"]) in payload["message"]
    assert not (tmp_path / "o.png").exists()


def test_cli_missing_input(tmp_path, capsys):
    code = cli.main(["--target", str(tmp_path / "nope.png"), "--source", str(tmp_path / "nope.png"),
                     "--out", str(tmp_path / "o.png")])
    assert code == 1
    assert json.loads(capsys.readouterr().err)["error"] == "io"


def test_cli_bad_image(tmp_path, pair_files, capsys):
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"garbage")
    code = cli.main(["--target", str(bad), "--source", str(pair_files[1]), "--out", str(tmp_path / "o.png")])
    assert code == 1
    assert json.loads(capsys.readouterr().err)["error"] == "format"


def test_cli_missing_output_dir(pair_files, tmp_path, capsys):
    t, s = pair_files
    code = cli.main(["--target", str(t), "--source", str(s), "--out", str(tmp_path / "no" / "o.png")])
    assert code == 1
    assert json.loads(capsys.readouterr().err)["error"] == "io"


def test_cli_rejects_bad_epsilon(pair_files, tmp_path):
    t, s = pair_files
    with pytest.raises(SystemExit):
        cli.main(["--target", str(t), "--source", str(s), "--out", str(tmp_path / "o.png"), "--epsilon", "0"])


def test_diagnostics(pair_files, tmp_path):
    t, s = pair_files
    out = tmp_path / "res.png"
    report = run_transfer(TransferConfig(t, s, out, superpixel_size=200, emit_diagnostics=True))
    paths = diagnostic_paths(out)
    for name, p in paths.items():
        assert p.exists(), name
    assert json.loads(paths["report"].read_text())["k_target"] == report.k_target
    sel = load_image(paths["selection_map"]).pixels
    assert sel.max() == 255


def test_selection_count_map_ramp():
    labels = grid_labels(1, 3, 2, 2)
    db = SuperpixelDecomposition.from_labels(RasterImage(np.zeros((2, 6, 3), np.uint8)), labels)
    m = selection_count_map(db, [0, 2, 4]).pixels
    assert m[0, 0].tolist() == [0, 0, 0]
    assert m[0, 2].tolist() == [128, 128, 128]
    assert m[0, 4].tolist() == [255, 255, 255]


def test_benchmark_ordering(small_pair):
    records, images = benchmark_images(*small_pair, 100)
    by = {r["method"]: r for r in records}
    assert list(by) == ["random", "ann", "exact"]
    assert by["exact"]["total_cost"] <= by["ann"]["total_cost"] + 1e-12
    assert by["ann"]["total_cost"] <= by["random"]["total_cost"]
    assert all(r["wall_time_ms"] >= 0 and r["K"] == records[0]["K"] for r in records)
    assert set(images) == {"random", "ann", "exact"}


def test_benchmark_k2_toy_ann_equals_exact():
    # two superpixels per image: the two feasible permutations are enumerable by hand
    px_a = np.zeros((20, 40, 3), np.uint8)
    px_a[:, 20:] = 255
    px_b = np.zeros((20, 40, 3), np.uint8)
    px_b[:, :20] = 250
    px_b[:, 20:] = 10
    records, _ = benchmark_images(RasterImage(px_a), RasterImage(px_b), 2, compactness=1.0)
    by = {r["method"]: r for r in records}
    assert by["ann"]["K"] == 2
    assert by["ann"]["total_cost"] == by["exact"]["total_cost"]


def test_cli_benchmark(pair_files, tmp_path):
    t, s = pair_files
    out = tmp_path / "bench.jsonl"
    assert cli.main(["--target", str(t), "--source", str(s), "--out", str(out), "--benchmark",
                     "--scales", "50,100"]) == 0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(recs) == 6
    assert all(set(r) == {"K", "method", "total_cost", "wall_time_ms"} for r in recs)
    for k in {r["K"] for r in recs}:
        cost = {r["method"]: r["total_cost"] for r in recs if r["K"] == k}
        assert cost["exact"] <= cost["ann"] + 1e-12 <= cost["random"] + 1e-12
        for m in ("random", "ann", "exact"):
            assert (tmp_path / f"bench_K{k}_{m}.png").exists()


def test_report_to_dict_inf():
    from superpixel_transfer import TransferReport

    r = TransferReport(1, 1, math.inf, 20, 500, 0.0, [0, 1])
    assert r.to_dict(include_timings=False)["epsilon"] == "inf"
