"""Deterministic synthetic test sequences with controlled motion.

No camera footage is bundled, so the test-suite and reproducible
benchmarks draw on generated content: band-limited texture with
oriented structure, moved by known global or per-object translations
at integer or sub-pixel velocities. All generators are pure functions
of their seeds.
"""

from __future__ import annotations

import math

import numpy as np

from .frame_io import Frame, Sequence


def _box_blur(img: np.ndarray, radius: int) -> np.ndarray:
    # Separable mean filter with wrap-around borders (tileable output).
    kernel = np.ones(2 * radius + 1) / (2 * radius + 1)
    for axis in (0, 1):
        padded = np.pad(img, [(radius, radius) if a == axis else (0, 0)
                              for a in (0, 1)], mode="wrap")
        img = np.apply_along_axis(
            lambda m: np.convolve(m, kernel, mode="valid"), axis, padded)
    return img


def texture(height: int, width: int, seed: int) -> np.ndarray:
    """Textured uint8 plane: smoothed noise plus diagonal structure."""
    rng = np.random.default_rng(seed)
    coarse = _box_blur(rng.uniform(0.0, 255.0, size=(height, width)), 4)
    fine = _box_blur(rng.uniform(-40.0, 40.0, size=(height, width)), 1)
    yy, xx = np.mgrid[0:height, 0:width]
    waves = (28.0 * np.sin((xx + yy) * 0.31)
             + 18.0 * np.sin((xx - 2 * yy) * 0.12)
             + 12.0 * np.sin(xx * 0.07))
    img = 0.55 * coarse + fine + waves + 56.0
    return np.clip(img, 0, 255).astype(np.uint8)


def frame_from_luma(y: np.ndarray) -> Frame:
    """Wrap a luma plane with neutral chroma."""
    h, w = y.shape
    chroma = np.full((h // 2, w // 2), 128, dtype=np.uint8)
    return Frame(w, h, y, chroma.copy(), chroma.copy())


def translating_sequence(width: int, height: int, frames: int = 2,
                         mv: tuple[int, int] = (3, -2), seed: int = 7) -> Sequence:
    """Global translation: every block of frame t matches frame t-1 at
    exactly ``mv`` (cropped from one master texture, so the identity
    holds out to the frame borders)."""
    vx, vy = mv
    margin = max(abs(vx), abs(vy)) * frames + 8
    master = texture(height + 2 * margin, width + 2 * margin, seed)
    out = []
    for t in range(frames):
        ox = margin + t * vx
        oy = margin + t * vy
        out.append(frame_from_luma(master[oy:oy + height, ox:ox + width].copy()))
    return Sequence(width, height, out)


def _bilinear_crop(master: np.ndarray, oy: float, ox: float,
                   h: int, w: int) -> np.ndarray:
    """Float crop of an ``h x w`` window at fractional origin (oy, ox)."""
    y0 = int(math.floor(oy))
    x0 = int(math.floor(ox))
    fy = oy - y0
    fx = ox - x0
    a = master[y0:y0 + h + 1, x0:x0 + w + 1].astype(np.float64)
    top = (1 - fx) * a[:-1, :-1] + fx * a[:-1, 1:]
    bot = (1 - fx) * a[1:, :-1] + fx * a[1:, 1:]
    return (1 - fy) * top + fy * bot


def moving_scene(width: int = 352, height: int = 288, frames: int = 20,
                 seed: int = 23, n_objects: int = 8,
                 bg_velocity: tuple[float, float] = (2.2, 0.7)) -> Sequence:
    """Camera pan over texture with independently drifting objects.

    The background and every object translate at constant sub-pixel
    velocities (bilinear resampling), so no integer displacement matches
    any region exactly, as in camera footage. Object borders add motion
    discontinuities at arbitrary, non-block-aligned positions.
    """
    bvx, bvy = bg_velocity
    margin = int(10 + frames * (abs(bvx) + abs(bvy)))
    master = texture(height + 2 * margin, width + 2 * margin, seed)
    rng = np.random.default_rng(seed + 1)
    objects = []
    for k in range(n_objects):
        vx = float(rng.uniform(-2.8, 2.8))
        vy = float(rng.uniform(-1.8, 1.8))
        w = int(rng.integers(48, 81))
        h = int(rng.integers(48, 81))
        max_dx = int(abs(vx) * frames) + 6
        max_dy = int(abs(vy) * frames) + 6
        if width - w - 2 * max_dx <= 0 or height - h - 2 * max_dy <= 0:
            continue
        x0 = int(rng.integers(max_dx, width - w - max_dx))
        y0 = int(rng.integers(max_dy, height - h - max_dy))
        objects.append((texture(h + 4, w + 4, seed + 100 + k), x0, y0, vx, vy))
    out = []
    for t in range(frames):
        y = _bilinear_crop(master, margin + bvy * t, margin + bvx * t,
                           height, width)
        for tex, x0, y0, vx, vy in objects:
            xt = x0 + t * vx
            yt = y0 + t * vy
            xi = int(math.floor(xt))
            yi = int(math.floor(yt))
            h = tex.shape[0] - 2
            w = tex.shape[1] - 2
            patch = _bilinear_crop(tex, 1 - (yt - yi), 1 - (xt - xi), h, w)
            y[yi:yi + h, xi:xi + w] = patch
        out.append(frame_from_luma(
            np.clip(np.rint(y), 0, 255).astype(np.uint8)))
    return Sequence(width, height, out)
