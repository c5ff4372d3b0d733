"""Pure NumPy implementation of the pixel kernels.

This backend defines the reference semantics; the compiled backend in
``_native.pyx`` must produce bit-identical results (integer side sums,
and float costs accumulated in the same fixed order).

Conventions shared by every kernel:

* Luma planes are C-contiguous uint8 arrays indexed ``plane[y, x]``
  (row y, column x); the public API writes coordinates as f(x, y).
* ``(i, j)`` is the top-left pixel of a 16x16 macroblock, ``(vx, vy)``
  the candidate displacement into the reference frame.
* All boundary reads clamp out-of-range coordinates to the nearest
  valid pixel.
* Sides are coded 0=top, 1=bottom, 2=left, 3=right, and weighted costs
  accumulate in exactly that order.
"""

from __future__ import annotations

import numpy as np

MB = 16

SIDE_TOP, SIDE_BOTTOM, SIDE_LEFT, SIDE_RIGHT = 0, 1, 2, 3
MODE_BMA, MODE_DBM, MODE_OBMA, MODE_DTBMA, MODE_ABMC = 0, 1, 2, 3, 4

_OFFSETS = np.arange(MB)


def _gather(plane: np.ndarray, xs, ys) -> np.ndarray:
    """Clamped pixel gather, returned as int64 for exact arithmetic."""
    h, w = plane.shape
    xs = np.clip(np.asarray(xs), 0, w - 1)
    ys = np.clip(np.asarray(ys), 0, h - 1)
    return plane[ys, xs].astype(np.int64)


def _cur_outer(cur, i, j, side, shift=None):
    """Outer-ring pixels of the damaged MB in the current frame.

    ``shift`` offsets the sample positions along the boundary axis
    (per-pixel comparison directions); None means the straight line.
    """
    n = _OFFSETS if shift is None else _OFFSETS + shift
    if side == SIDE_TOP:
        return _gather(cur, i + n, np.full(MB, j - 1))
    if side == SIDE_BOTTOM:
        return _gather(cur, i + n, np.full(MB, j + MB))
    if side == SIDE_LEFT:
        return _gather(cur, np.full(MB, i - 1), j + n)
    return _gather(cur, np.full(MB, i + MB), j + n)


def _ref_outer(ref, i, j, vx, vy, side, shift=None):
    """Outer-ring pixels of the displaced candidate MB in the reference."""
    return _cur_outer(ref, i + vx, j + vy, side, shift)


def _ref_inner(ref, i, j, vx, vy, side):
    """Inner boundary pixels of the displaced candidate MB in the reference."""
    if side == SIDE_TOP:
        return _gather(ref, i + vx + _OFFSETS, np.full(MB, j + vy))
    if side == SIDE_BOTTOM:
        return _gather(ref, i + vx + _OFFSETS, np.full(MB, j + vy + MB - 1))
    if side == SIDE_LEFT:
        return _gather(ref, np.full(MB, i + vx), j + vy + _OFFSETS)
    return _gather(ref, np.full(MB, i + vx + MB - 1), j + vy + _OFFSETS)


def obmc_side_sum(cur, ref, i, j, vx, vy, side) -> int:
    """Outer-boundary match: current outer ring vs displaced outer ring."""
    a = _cur_outer(cur, i, j, side)
    b = _ref_outer(ref, i, j, vx, vy, side)
    return int(np.abs(a - b).sum())


def bma_side_sum(cur, ref, i, j, vx, vy, side) -> int:
    """Classic side match: displaced inner ring vs current outer ring."""
    a = _ref_inner(ref, i, j, vx, vy, side)
    b = _cur_outer(cur, i, j, side)
    return int(np.abs(a - b).sum())


def _direction_errors(ref, i, j, vx, vy, side):
    """Per-pixel |inner - outer| for the three comparison directions.

    Directions run along the boundary axis: -1, straight, +1. All reads
    are in the reference frame (direction identification stage).
    """
    inner = _ref_inner(ref, i, j, vx, vy, side)
    e_minus = np.abs(inner - _ref_outer(ref, i, j, vx, vy, side, shift=-1))
    e_straight = np.abs(inner - _ref_outer(ref, i, j, vx, vy, side, shift=0))
    e_plus = np.abs(inner - _ref_outer(ref, i, j, vx, vy, side, shift=+1))
    return inner, e_minus, e_straight, e_plus


def _pick_directions(e_minus, e_straight, e_plus) -> np.ndarray:
    """Argmin of the three errors; ties prefer straight, then -1."""
    straight = (e_straight <= e_minus) & (e_straight <= e_plus)
    return np.where(straight, 0, np.where(e_minus <= e_plus, -1, 1))


def dtbmc_direction(ref, i, j, vx, vy, side, n) -> int:
    """Comparison direction (-1, 0, +1) for boundary pixel ``n`` of a side."""
    _, e_m, e_s, e_p = _direction_errors(ref, i, j, vx, vy, side)
    return int(_pick_directions(e_m, e_s, e_p)[n])


def dtbmc_side_sum(cur, ref, i, j, vx, vy, side) -> int:
    """Directional temporal match along one side.

    Stage 1 picks a per-pixel direction from the reference frame alone;
    stage 2 compares the displaced inner pixel against the current
    frame's outer pixel in that direction.
    """
    inner, e_m, e_s, e_p = _direction_errors(ref, i, j, vx, vy, side)
    dirs = _pick_directions(e_m, e_s, e_p)
    outer = _cur_outer(cur, i, j, side, shift=dirs)
    return int(np.abs(inner - outer).sum())


def dbm_side_sum(cur, ref, i, j, vx, vy, side) -> int:
    """Directional side match: per-pixel best of the three directions."""
    inner = _ref_inner(ref, i, j, vx, vy, side)
    d_minus = np.abs(inner - _cur_outer(cur, i, j, side, shift=-1))
    d_straight = np.abs(inner - _cur_outer(cur, i, j, side, shift=0))
    d_plus = np.abs(inner - _cur_outer(cur, i, j, side, shift=+1))
    return int(np.minimum(np.minimum(d_minus, d_straight), d_plus).sum())


_SIDE_SUM = {
    MODE_BMA: bma_side_sum,
    MODE_DBM: dbm_side_sum,
    MODE_OBMA: obmc_side_sum,
    MODE_DTBMA: dtbmc_side_sum,
}


def candidate_costs(mode, cur, ref, i, j, vxs, vys, weights) -> np.ndarray:
    """Weighted boundary distortion of each candidate MV.

    Sides with weight zero are skipped; the rest accumulate as
    ``w * side_sum`` in top, bottom, left, right order. The adaptive
    mode takes the smaller of the outer-boundary and directional sums
    per side before weighting.
    """
    costs = np.empty(len(vxs), dtype=np.float64)
    w = [float(weights[s]) for s in range(4)]
    for c in range(len(vxs)):
        vx, vy = int(vxs[c]), int(vys[c])
        cost = 0.0
        for side in range(4):
            if w[side] == 0.0:
                continue
            if mode == MODE_ABMC:
                o = obmc_side_sum(cur, ref, i, j, vx, vy, side)
                d = dtbmc_side_sum(cur, ref, i, j, vx, vy, side)
                s = o if o <= d else d
            else:
                s = _SIDE_SUM[mode](cur, ref, i, j, vx, vy, side)
            cost += w[side] * float(s)
        costs[c] = cost
    return costs


def sad16(cur, ref, i, j, vx, vy) -> int:
    """Luma SAD of the 16x16 block at (i, j) against its displaced match."""
    a = cur[j:j + MB, i:i + MB].astype(np.int64)
    b = ref[j + vy:j + vy + MB, i + vx:i + vx + MB].astype(np.int64)
    return int(np.abs(a - b).sum())


def full_search_mb(cur, ref, i, j, p):
    """Exhaustive SAD search over [-p, p]^2, excluding out-of-frame shifts.

    Ties break toward smaller |vx|+|vy|, then raster (vy, vx) order.
    """
    h, w = ref.shape
    target = cur[j:j + MB, i:i + MB].astype(np.int64)
    best_sad = -1
    best_mag = 0
    best = (0, 0)
    for vy in range(-p, p + 1):
        ry = j + vy
        if ry < 0 or ry + MB > h:
            continue
        for vx in range(-p, p + 1):
            rx = i + vx
            if rx < 0 or rx + MB > w:
                continue
            sad = int(np.abs(target - ref[ry:ry + MB, rx:rx + MB]).sum())
            mag = abs(vx) + abs(vy)
            if best_sad < 0 or sad < best_sad or (sad == best_sad and mag < best_mag):
                best_sad, best_mag, best = sad, mag, (vx, vy)
    return best


def estimate_all(cur, ref, p):
    """Full-search MV for every macroblock; returns (vx, vy) int16 grids."""
    h, w = cur.shape
    rows, cols = h // MB, w // MB
    vx_grid = np.empty((rows, cols), dtype=np.int16)
    vy_grid = np.empty((rows, cols), dtype=np.int16)
    for row in range(rows):
        for col in range(cols):
            vx, vy = full_search_mb(cur, ref, col * MB, row * MB, p)
            vx_grid[row, col] = vx
            vy_grid[row, col] = vy
    return vx_grid, vy_grid
