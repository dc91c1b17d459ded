import dataclasses
import math

import numpy as np
import pytest
from PIL import Image

from superpixel_transfer import Assignment, RasterImage, SuperpixelDecomposition, pixel_feature, q_matrix


def grid_labels(rows, cols, cell_h=4, cell_w=4):
    ids = np.arange(rows * cols).reshape(rows, cols)
    return np.repeat(np.repeat(ids, cell_h, axis=0), cell_w, axis=1)


def grid_decomposition(rows, cols, features=None, image=None, cell=4):
    """Decomposition whose superpixels are the cells of a ``rows x cols`` grid."""
    labels = grid_labels(rows, cols, cell, cell)
    if image is None:
        image = RasterImage(np.zeros(labels.shape + (3,), dtype=np.uint8))
    d = SuperpixelDecomposition.from_labels(image, labels)
    if features is not None:
        d = dataclasses.replace(d, features=np.asarray(features, dtype=np.float64))
    return d


def grid_shape(n):
    """Most square ``rows x cols`` with ``rows * cols == n``."""
    rows = int(np.floor(np.sqrt(n)))
    while n % rows:
        rows -= 1
    return rows, n // rows


def histogram_features(mean_colors, rng, spread=0.05, n_pixels=60, bins=8):
    """Cumulative-histogram features of small pixel clouds around ``mean_colors``."""
    out = np.empty((len(mean_colors), 3 * bins))
    for s, m in enumerate(mean_colors):
        px = np.clip(m + spread * rng.standard_normal((n_pixels, 3)), 0, 1)
        v = np.round(px * 255).astype(np.int64)
        b = np.minimum(v * bins // 255, bins - 1)
        for c in range(3):
            out[s, c * bins:(c + 1) * bins] = np.bincount(b[:, c], minlength=bins).cumsum() / n_pixels
    return out


def close_feature_pair(n, rng):
    """Target features and a permuted, jittered copy (two similar images)."""
    means = rng.random((n, 3))
    src_means = np.clip(means[rng.permutation(n)] + 0.03 * rng.standard_normal((n, 3)), 0, 1)
    return histogram_features(means, rng), histogram_features(src_means, rng)


def real_image(name, size=None):
    from skimage import data

    arr = getattr(data, name)()
    if arr.ndim == 2:
        arr = np.repeat(arr[..., None], 3, axis=2)
    arr = arr[..., :3]
    if size is not None:
        arr = np.asarray(Image.fromarray(arr).resize(size, Image.BILINEAR))
    return RasterImage(arr)


def oracle_transfer(image, da, db, assignment, params):
    """Per-pixel weighted mean, with full 5x5 inverses and scalar arithmetic."""
    qinv = [np.linalg.inv(q_matrix(da[i], params)) for i in range(len(da))]
    centers = da.mean_features
    colors = db.mean_color[assignment.match]
    out = np.empty((image.height, image.width, 3))
    for y in range(image.height):
        for x in range(image.width):
            f = pixel_feature(image, x, y)
            p = np.array([*f.position, *f.color])
            q = qinv[da.labels[y, x]]
            d = [float((p - c) @ q @ (p - c)) for c in centers]
            sigma = min(d)
            w = [math.exp(-(dj - sigma)) for dj in d]
            out[y, x] = sum(wj * cj for wj, cj in zip(w, colors)) / sum(w)
    return out


def toy_instance(seed, rows=2, cols=3, cell=5):
    rng = np.random.default_rng(seed)
    labels = grid_labels(rows, cols, cell, cell)
    base = rng.integers(0, 256, (rows * cols, 3))
    px = np.clip(base[labels] + rng.integers(-40, 41, labels.shape + (3,)), 0, 255).astype(np.uint8)
    image = RasterImage(px)
    da = SuperpixelDecomposition.from_labels(image, labels)
    src = RasterImage(rng.integers(0, 256, (cell * 3, cell * 4, 3), dtype=np.uint8))
    db = SuperpixelDecomposition.from_labels(src, grid_labels(3, 4, cell, cell))
    match = rng.permutation(12)[:rows * cols]
    return image, da, db, Assignment.from_match(match, 12, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_pair():
    """Two real photographs at 120x90."""
    return real_image("coffee", (120, 90)), real_image("astronaut", (120, 90))


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    if acceptance is not None and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in acceptance.RESULTS:
            terminalreporter.write_line(line)
