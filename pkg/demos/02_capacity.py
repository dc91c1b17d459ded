"""
How the selection capacity shapes the palette
=============================================

Usage: ``python demos/02_capacity.py [target.png source.png]``

A target made of similar reds, and a source with one red patch among many
hues.  Unconstrained matching sends nearly everything to the red patch and
the transfer changes little; capacity 1 forces every target onto a different
source color.
"""
import colorsys
import math
from pathlib import Path

import numpy as np

from superpixel_transfer import (
    MatchParams,
    RasterImage,
    SuperpixelDecomposition,
    ann_match,
    decompose,
    save_image,
)
from superpixel_transfer.fusion import matched_color_render

from _images import pair

out = Path("demo_output")
out.mkdir(exist_ok=True)
rng = np.random.default_rng(0)

# 4 x 4 red target cells and a 4 x 5 palette, 12 pixels per cell side.
cell = 12
ids_a = np.arange(16).reshape(4, 4).repeat(cell, 0).repeat(cell, 1)
reds = np.stack([rng.integers(170, 240, 16), rng.integers(10, 50, 16), rng.integers(10, 50, 16)], 1)
target = RasterImage(np.clip(reds[ids_a] + rng.integers(-8, 9, ids_a.shape + (3,)), 0, 255).astype(np.uint8))

ids_b = np.arange(20).reshape(4, 5).repeat(cell, 0).repeat(cell, 1)
hues = np.array([colorsys.hsv_to_rgb(h / 20, 0.85, 0.85) for h in range(20)]) * 255
source = RasterImage(hues[rng.permutation(20)][ids_b].astype(np.uint8))

da = SuperpixelDecomposition.from_labels(target, ids_a)
db = SuperpixelDecomposition.from_labels(source, ids_b)
save_image(source, out / "palette.png")

for eps in (math.inf, 3, 1):
    a, cost = ann_match(da, db, MatchParams(epsilon=eps, iterations=40))
    used = int((a.selection_count > 0).sum())
    print(f"epsilon={eps}: {used:2d} distinct sources, cost {cost:.3f}, most picked {a.selection_count.max()}x")
    save_image(matched_color_render(da, db, a), out / f"palette_match_eps_{eps}.png")

# The same trade-off on photographs: the cost rises as the capacity shrinks,
# and the number of distinct source colors rises with it.
t, s = pair(size=(240, 180))
da, db = decompose(t, 300), decompose(s, 300)
for eps in (math.inf, 3, 2, 1):
    if not math.isinf(eps) and eps * len(db) < len(da):
        print(f"epsilon={eps}: infeasible for {len(da)} targets and {len(db)} sources")
        continue
    a, cost = ann_match(da, db, MatchParams(epsilon=eps))
    print(f"photo epsilon={eps}: cost {cost:.3f}, {int((a.selection_count > 0).sum())} of {len(db)} sources used")
