"""Raw planar YUV 4:2:0 (I420) loading, saving, and safe pixel access.

Files are headerless and frame-sequential: per frame a full Y plane,
then the quarter-size U and V planes. Dimensions always come from the
caller. The repo-wide coordinate convention is f(x, y) = column x,
row y, so ``plane[y, x]`` in array terms.
"""

from __future__ import annotations

import dataclasses
from typing import NamedTuple

import numpy as np

MB = 16

BORDER_STRICT = "strict"
BORDER_CLAMP = "clamp"


class FormatError(ValueError):
    """Raised for malformed input data (files, dimensions, text formats)."""


class PixelCoord(NamedTuple):
    x: int
    y: int


def _check_dims(width: int, height: int) -> None:
    if width <= 0 or height <= 0 or width % MB or height % MB:
        raise FormatError(
            f"dimensions must be positive multiples of {MB}, got {width}x{height}"
        )


@dataclasses.dataclass(eq=False)
class Frame:
    """One picture: full-size luma plane plus two half-size chroma planes."""

    width: int
    height: int
    y: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        _check_dims(self.width, self.height)
        expect = {
            "y": (self.height, self.width),
            "u": (self.height // 2, self.width // 2),
            "v": (self.height // 2, self.width // 2),
        }
        for name, shape in expect.items():
            plane = getattr(self, name)
            if plane.dtype != np.uint8:
                raise FormatError(f"plane {name} must be uint8, got {plane.dtype}")
            if plane.shape != shape:
                raise FormatError(
                    f"plane {name} has shape {plane.shape}, expected {shape}"
                )

    def copy(self) -> "Frame":
        return Frame(self.width, self.height,
                     self.y.copy(), self.u.copy(), self.v.copy())


@dataclasses.dataclass(eq=False)
class Sequence:
    """Ordered frames sharing one geometry."""

    width: int
    height: int
    frames: list[Frame]

    def __len__(self) -> int:
        return len(self.frames)

    def __getitem__(self, index: int) -> Frame:
        return self.frames[index]


def frame_from_planes(y: np.ndarray, u: np.ndarray, v: np.ndarray) -> Frame:
    """Build a Frame, inferring dimensions from the luma plane."""
    h, w = y.shape
    return Frame(w, h, y, u, v)


def gray_frame(width: int, height: int, luma: int = 128) -> Frame:
    """Uniform frame; chroma fixed at the neutral 128."""
    return Frame(
        width, height,
        np.full((height, width), luma, dtype=np.uint8),
        np.full((height // 2, width // 2), 128, dtype=np.uint8),
        np.full((height // 2, width // 2), 128, dtype=np.uint8),
    )


def load_yuv(path, width: int, height: int, max_frames: int | None = None) -> Sequence:
    """Read an I420 file into a Sequence.

    Args:
        path: raw .yuv file, headerless.
        width, height: luma dimensions, positive multiples of 16.
        max_frames: stop after this many frames (None = all).

    Raises:
        FormatError: bad dimensions, file size not a whole number of
            frames, or an empty file.
    """
    _check_dims(width, height)
    data = np.fromfile(path, dtype=np.uint8)
    frame_bytes = width * height * 3 // 2
    if data.size % frame_bytes:
        raise FormatError(
            f"file size {data.size} is not a multiple of the "
            f"{width}x{height} frame size {frame_bytes}"
        )
    count = data.size // frame_bytes
    if count == 0:
        raise FormatError("zero frames: file is empty")
    if max_frames is not None:
        count = min(count, max_frames)
    y_size = width * height
    c_size = y_size // 4
    frames = []
    for k in range(count):
        base = k * frame_bytes
        y = data[base:base + y_size].reshape(height, width).copy()
        u = data[base + y_size:base + y_size + c_size]
        v = data[base + y_size + c_size:base + frame_bytes]
        frames.append(Frame(
            width, height, y,
            u.reshape(height // 2, width // 2).copy(),
            v.reshape(height // 2, width // 2).copy(),
        ))
    return Sequence(width, height, frames)


def save_yuv(seq: Sequence, path) -> None:
    """Write a Sequence in I420 byte order; load_yuv inverts it exactly."""
    if not seq.frames:
        raise FormatError("empty sequence")
    with open(path, "wb") as fh:
        for frame in seq.frames:
            fh.write(frame.y.tobytes())
            fh.write(frame.u.tobytes())
            fh.write(frame.v.tobytes())


def luma_at(frame: Frame, p: PixelCoord, policy: str = BORDER_CLAMP) -> int:
    """Read one luma sample with an explicit border policy.

    Clamp projects out-of-range coordinates to the nearest valid
    pixel; Strict raises IndexError instead.
    """
    x, y = p
    if policy == BORDER_STRICT:
        if not (0 <= x < frame.width and 0 <= y < frame.height):
            raise IndexError(f"pixel ({x}, {y}) outside {frame.width}x{frame.height}")
    elif policy == BORDER_CLAMP:
        x = min(max(x, 0), frame.width - 1)
        y = min(max(y, 0), frame.height - 1)
    else:
        raise ValueError(f"unknown border policy {policy!r}")
    return int(frame.y[y, x])


def save_pgm(plane: np.ndarray, path) -> None:
    """Write one 8-bit plane as binary PGM (P5)."""
    h, w = plane.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(plane.tobytes())
