"""Image loading shared by the demos: paths from the command line, or sample photos."""
import sys

import numpy as np
from PIL import Image

from superpixel_transfer import RasterImage, load_image


def sample(name, size):
    from skimage import data  # only needed when no paths are given

    arr = getattr(data, name)()
    return RasterImage(np.asarray(Image.fromarray(arr[..., :3]).resize(size, Image.BILINEAR)))


def pair(size=(480, 360), names=("coffee", "astronaut")):
    """``target, source`` from ``argv[1:3]`` if given, else two sample photos."""
    if len(sys.argv) >= 3:
        return load_image(sys.argv[1]), load_image(sys.argv[2])
    return sample(names[0], size), sample(names[1], size)
