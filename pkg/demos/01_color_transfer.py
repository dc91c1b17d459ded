"""
Superpixel color transfer, step by step
=======================================

Usage: ``python demos/01_color_transfer.py [target.png source.png]``

The target keeps its geometry and takes its colors from the source.  Both
images are cut into superpixels, each target superpixel is paired with a
source superpixel, and the matched average colors are blended back per pixel.
"""
import math
from pathlib import Path

from _images import pair

from superpixel_transfer import FusionParams, MatchParams, ann_match, decompose, save_image, transfer
from superpixel_transfer.fusion import matched_color_render
from superpixel_transfer.superpixel import render_boundaries, render_mean_colors

out = Path("demo_output")
out.mkdir(exist_ok=True)
target, source = pair()

# 1. Superpixels of roughly 500 pixels.  Each one carries its barycenter,
#    mean color, covariances and an 8-bin cumulative histogram per channel.
da = decompose(target, 500)
db = decompose(source, 500)
print(f"target: {len(da)} superpixels, source: {len(db)} superpixels")
save_image(render_boundaries(target, da), out / "target_superpixels.png")
save_image(render_mean_colors(da), out / "target_mean.png")

# 2. Matching.  Each source superpixel may be picked at most 3 times, which
#    keeps the palette of the source from collapsing onto a few colors.
assignment, cost = ann_match(da, db, MatchParams(epsilon=3, iterations=20))
print(f"total matching cost {cost:.3f}, selection histogram {assignment.selection_histogram()}")

# The blocky render shows what the matching alone gives.
save_image(matched_color_render(da, db, assignment), out / "matched_colors.png")

# 3. Fusion.  Every pixel averages the matched colors of all target
#    superpixels, weighted by how close it is to each one in position and color.
result = transfer(target, da, db, assignment, FusionParams(delta_s=10.0, delta_c=0.1))
save_image(result, out / "result.png")

# Without the capacity constraint the matching is plain nearest neighbor search.
free, free_cost = ann_match(da, db, MatchParams(epsilon=math.inf))
print(f"unconstrained cost {free_cost:.3f}; sources used: "
      f"{int((free.selection_count > 0).sum())} vs {int((assignment.selection_count > 0).sum())} with epsilon=3")
print(f"images written to {out}/")
