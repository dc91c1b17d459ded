"""Raster images, PNG/JPEG I/O and the normalized pixel feature convention.

Every downstream computation works on 5-vectors ``[x/Nx, y/Ny, r/255, g/255, b/255]``
where ``Nx`` is the image width and ``Ny`` its height.  Integer pixel
coordinates are used as-is (top-left corner of the pixel, no half-pixel shift).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from PIL import Image, UnidentifiedImageError


class ImageFormatError(ValueError):
    """Raised when a file cannot be decoded as a supported image."""


class ConfigurationError(ValueError):
    """Invalid parameter combination (infeasible capacity, image too small, ...)."""


class PixelFeature(NamedTuple):
    position: tuple[float, float]
    color: tuple[float, float, float]


@dataclass(frozen=True, eq=False)
class RasterImage:
    """Immutable 8-bit RGB image.

    ``pixels`` is stored as a read-only ``(height, width, 3)`` uint8 array; its
    row-major flattening is the pixel order used throughout the package.
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected (height, width, 3) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must have positive width and height")
        if arr.dtype != np.uint8:
            if np.issubdtype(arr.dtype, np.floating) and not np.all(np.isfinite(arr)):
                raise ValueError("pixel values must be finite")
            if arr.min() < 0 or arr.max() > 255:
                raise ValueError("pixel values must lie in [0, 255]")
            if not np.all(arr == np.round(arr)):
                raise ValueError("pixel values must be integers")
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape[:2]

    def __eq__(self, other):
        if not isinstance(other, RasterImage):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.pixels, other.pixels)

    __hash__ = None

    @classmethod
    def from_float(cls, rgb: np.ndarray) -> RasterImage:
        """Quantize colors in [0, 1] to 8 bits (clamp, then round half up)."""
        rgb = np.clip(np.asarray(rgb, dtype=np.float64), 0.0, 1.0)
        return cls(np.floor(rgb * 255.0 + 0.5).astype(np.uint8))

    def to_float(self) -> np.ndarray:
        return self.pixels.astype(np.float64) / 255.0


def load_image(path) -> RasterImage:
    """Decode a PNG or JPEG file to 8-bit RGB.

    Grayscale is expanded to three equal channels and alpha is dropped.

    Raises
    ------
    OSError
        If the file cannot be opened.
    ImageFormatError
        If the content is not a decodable PNG/JPEG image.
    """
    with open(path, "rb") as fh:
        try:
            with Image.open(fh) as im:
                if im.format not in ("PNG", "JPEG", "MPO"):
                    raise ImageFormatError(f"{path}: unsupported format {im.format}")
                im.load()
                if im.mode in ("I;16", "I;16B", "I;16L", "I"):
                    raise ImageFormatError(f"{path}: 16-bit images are not supported")
                rgb = im.convert("RGB")
        except (UnidentifiedImageError, SyntaxError) as exc:
            raise ImageFormatError(f"{path}: {exc}") from exc
        except OSError as exc:
            # PIL reports truncated/corrupt streams as OSError
            raise ImageFormatError(f"{path}: {exc}") from exc
    return RasterImage(np.asarray(rgb))


def save_image(image: RasterImage, path) -> None:
    """Write ``image`` as a PNG.  Raises ``OSError`` if the path is not writable."""
    parent = os.path.dirname(os.fspath(path)) or "."
    if not os.path.isdir(parent):
        raise FileNotFoundError(f"directory does not exist: {parent}")
    Image.fromarray(np.ascontiguousarray(image.pixels)).save(path, format="PNG")


def pixel_feature(image: RasterImage, x: int, y: int) -> PixelFeature:
    if not (0 <= x < image.width and 0 <= y < image.height):
        raise IndexError(f"pixel ({x}, {y}) outside {image.width}x{image.height} image")
    r, g, b = (int(c) for c in image.pixels[y, x])
    return PixelFeature((x / image.width, y / image.height), (r / 255, g / 255, b / 255))


def feature_planes(image: RasterImage) -> np.ndarray:
    """All pixel features at once, shape ``(height, width, 5)``."""
    h, w = image.shape
    out = np.empty((h, w, 5), dtype=np.float64)
    out[..., 0] = np.arange(w)[None, :] / w
    out[..., 1] = np.arange(h)[:, None] / h
    out[..., 2:] = image.pixels / 255.0
    return out
