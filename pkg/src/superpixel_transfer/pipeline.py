"""End-to-end color transfer runs, diagnostics and the exact-vs-ANN benchmark."""
from __future__ import annotations

import json
import logging
import math
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fusion import FusionParams, matched_color_render, transfer
from .image_core import RasterImage, load_image, save_image
from .matching import (
    MatchParams,
    ann_match,
    check_feasible,
    distance_matrix,
    exact_assign,
    init_random,
    total_cost,
)
from .superpixel import (
    DEFAULT_BINS,
    DEFAULT_COMPACTNESS,
    DEFAULT_SUPERPIXEL_SIZE,
    SuperpixelDecomposition,
    decompose,
    render_boundaries,
    render_mean_colors,
)

log = logging.getLogger(__name__)

STAGES = ("decompose_target", "decompose_source", "match", "fuse")


@dataclass
class TransferConfig:
    target: str | os.PathLike
    source: str | os.PathLike
    out: str | os.PathLike
    superpixel_size: int = DEFAULT_SUPERPIXEL_SIZE
    epsilon: float | int = 3
    iterations: int = 20
    delta_c: float = 0.1
    delta_s_ratio: float = 100.0
    bins: int = DEFAULT_BINS
    compactness: float = DEFAULT_COMPACTNESS
    seed: int = 0
    contributor_limit: int = 0
    emit_diagnostics: bool = False
    report: str | os.PathLike | None = None

    def match_params(self, epsilon=None) -> MatchParams:
        eps = self.epsilon if epsilon is None else epsilon
        return MatchParams(epsilon=eps, iterations=self.iterations, seed=self.seed)

    def fusion_params(self) -> FusionParams:
        return FusionParams(delta_s=self.delta_s_ratio * self.delta_c, delta_c=self.delta_c,
                            contributor_limit=self.contributor_limit or None)


@dataclass
class TransferReport:
    k_target: int
    k_source: int
    epsilon: float | int
    iterations: int
    superpixel_size: int
    total_matching_cost: float
    selection_histogram: list[int]
    stage_times_ms: dict[str, float] = field(default_factory=dict)

    def to_dict(self, include_timings: bool = True) -> dict:
        d = {
            "k_target": self.k_target,
            "k_source": self.k_source,
            "epsilon": "inf" if math.isinf(self.epsilon) else int(self.epsilon),
            "iterations": self.iterations,
            "superpixel_size": self.superpixel_size,
            "total_matching_cost": self.total_matching_cost,
            "selection_histogram": list(self.selection_histogram),
        }
        if include_timings:
            d["stage_times_ms"] = {s: self.stage_times_ms.get(s, 0.0) for s in STAGES}
        return d


def _dump(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _require_parent(path) -> None:
    parent = Path(path).parent
    if not parent.is_dir():
        raise FileNotFoundError(f"directory does not exist: {parent}")


@contextmanager
def _stopwatch(times: dict, stage: str):
    t0 = time.perf_counter()
    yield
    times[stage] = (time.perf_counter() - t0) * 1000.0


def selection_count_map(decomp_b: SuperpixelDecomposition, selection_count) -> RasterImage:
    """Gray render of the source: black = never selected, white = most selected."""
    counts = np.asarray(selection_count, dtype=np.float64)
    top = counts.max()
    level = counts / top if top > 0 else counts
    gray = level[decomp_b.labels]
    return RasterImage.from_float(np.repeat(gray[..., None], 3, axis=2))


def diagnostic_paths(out) -> dict[str, Path]:
    out = Path(out)
    stem = out.with_suffix("")
    names = ("matched", "target_superpixels", "source_superpixels", "target_mean", "source_mean",
             "selection_map")
    paths = {n: Path(f"{stem}_{n}.png") for n in names}
    paths["report"] = Path(f"{stem}_report.json")
    return paths


def run_transfer_images(target: RasterImage, source: RasterImage, config: TransferConfig):
    """In-memory pipeline; returns ``(result, report, artifacts)``.

    ``artifacts`` holds the decompositions and assignment for diagnostics.
    """
    times: dict[str, float] = {}
    with _stopwatch(times, "decompose_target"):
        da = decompose(target, config.superpixel_size, config.compactness, config.seed, config.bins)
    with _stopwatch(times, "decompose_source"):
        db = decompose(source, config.superpixel_size, config.compactness, config.seed, config.bins)
    params = config.match_params()
    check_feasible(len(da), len(db), params.epsilon)
    with _stopwatch(times, "match"):
        assignment, cost = ann_match(da, db, params)
    with _stopwatch(times, "fuse"):
        result = transfer(target, da, db, assignment, config.fusion_params())
    report = TransferReport(
        k_target=len(da),
        k_source=len(db),
        epsilon=params.epsilon,
        iterations=params.iterations,
        superpixel_size=config.superpixel_size,
        total_matching_cost=cost,
        selection_histogram=assignment.selection_histogram(),
        stage_times_ms=times,
    )
    return result, report, {"target": da, "source": db, "assignment": assignment}


def run_transfer(config: TransferConfig) -> TransferReport:
    """Load, transfer, and write the result PNG plus any requested diagnostics.

    The report file holds only run-deterministic fields; stage timings go to a
    ``*.timings.json`` file next to it.
    """
    _require_parent(config.out)
    if config.report is not None:
        _require_parent(config.report)
    target = load_image(config.target)
    source = load_image(config.source)
    result, report, art = run_transfer_images(target, source, config)
    save_image(result, config.out)
    for stage in STAGES:
        log.info("%s: %.1f ms", stage, report.stage_times_ms[stage])

    report_path = config.report
    if config.emit_diagnostics:
        paths = diagnostic_paths(config.out)
        da, db, assignment = art["target"], art["source"], art["assignment"]
        save_image(matched_color_render(da, db, assignment), paths["matched"])
        save_image(render_boundaries(target, da), paths["target_superpixels"])
        save_image(render_boundaries(source, db), paths["source_superpixels"])
        save_image(render_mean_colors(da), paths["target_mean"])
        save_image(render_mean_colors(db), paths["source_mean"])
        save_image(selection_count_map(db, assignment.selection_count), paths["selection_map"])
        report_path = report_path or paths["report"]
    if report_path is not None:
        _dump(report.to_dict(include_timings=False), report_path)
        _dump({"stage_times_ms": report.to_dict()["stage_times_ms"]},
              Path(report_path).with_suffix(".timings.json"))
    return report


# --- benchmark -----------------------------------------------------------------------

@dataclass
class BenchmarkConfig:
    target: str | os.PathLike
    source: str | os.PathLike
    out: str | os.PathLike  # JSON-lines records; reconstructions are written next to it
    scales: tuple[int, ...] = (500, 1000, 2000)  # target superpixel counts
    iterations: int = 20
    bins: int = DEFAULT_BINS
    compactness: float = DEFAULT_COMPACTNESS
    seed: int = 0
    write_images: bool = True


def benchmark_images(target: RasterImage, source: RasterImage, k: int, iterations: int = 20,
                     bins: int = DEFAULT_BINS, compactness: float = DEFAULT_COMPACTNESS, seed: int = 0):
    """Random / ANN / exact matching at one scale with capacity 1.

    The source is decomposed with a smaller superpixel size when needed so
    that ``|B| >= |A|``.  Returns ``(records, reconstructions)``; the distance
    matrix is built once and excluded from every timing.
    """
    size = max(16, (target.width * target.height) // k)
    da = decompose(target, size, compactness, seed, bins)
    db = decompose(source, size, compactness, seed, bins)
    # capacity 1 needs |B| >= |A|; shrink source superpixels until it holds
    src_size = size
    while len(db) < len(da) and src_size > 16:
        src_size = max(16, min(src_size - 1, src_size * len(db) // len(da)))
        db = decompose(source, src_size, compactness, seed, bins)
    check_feasible(len(da), len(db), 1)
    D = distance_matrix(da.features, db.features)
    params = MatchParams(epsilon=1, iterations=iterations, seed=seed)

    results = {}
    t0 = time.perf_counter()
    rand = init_random(len(da), len(db), params, np.random.default_rng(seed))
    results["random"] = (rand, total_cost(rand, D), time.perf_counter() - t0)
    t0 = time.perf_counter()
    ann, ann_cost = ann_match(da, db, params, distances=D)
    results["ann"] = (ann, ann_cost, time.perf_counter() - t0)
    t0 = time.perf_counter()
    exact, exact_cost = exact_assign(D, 1)
    results["exact"] = (exact, exact_cost, time.perf_counter() - t0)

    records, images = [], {}
    for method, (assignment, cost, secs) in results.items():
        records.append({"K": len(da), "method": method, "total_cost": cost, "wall_time_ms": secs * 1000.0})
        images[method] = matched_color_render(da, db, assignment)
    return records, images


def run_benchmark(config: BenchmarkConfig) -> list[dict]:
    _require_parent(config.out)
    target = load_image(config.target)
    source = load_image(config.source)
    out = Path(config.out)
    records = []
    with open(out, "w") as fh:
        for k in config.scales:
            recs, images = benchmark_images(target, source, k, config.iterations, config.bins,
                                            config.compactness, config.seed)
            for r in recs:
                fh.write(json.dumps(r) + "\n")
                log.info("K=%d %s cost=%.4f time=%.1f ms", r["K"], r["method"], r["total_cost"], r["wall_time_ms"])
            if config.write_images:
                for method, im in images.items():
                    save_image(im, out.with_name(f"{out.stem}_K{recs[0]['K']}_{method}.png"))
            records.extend(recs)
    return records

