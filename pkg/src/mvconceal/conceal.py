"""Motion-vector recovery for lost macroblocks.

Implements the boundary-matching distortion criteria (outer-boundary,
directional temporal, and the adaptive per-side minimum of the two),
the per-side confidence weighting, candidate-MV construction, and the
baseline recovery algorithms, plus the frame-level concealment loop.

Distortion accumulation order is fixed (top, bottom, left, right; n
ascending within a side) so results are bit-reproducible.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import kernels
from .frame_io import Frame, FormatError
from .loss import LossMap
from .motion import (MB, MbCoord, MbStatus, MotionVector, MvField, ZERO_MV,
                     compensate, place_block)

TOP, BOTTOM, LEFT, RIGHT = kernels.SIDES
SIDES = kernels.SIDES

DIR_MINUS, DIR_STRAIGHT, DIR_PLUS = -1, 0, 1

# Confidence thresholds for previously concealed neighbors.
TH1, TH2, TH3 = 0.5, 0.7, 0.9

ALGORITHMS = ("tr", "collocated", "amv", "median",
              "bma", "dbm", "obma", "dtbma", "abmc")

_DISTORTION_MODES = {
    "bma": kernels.MODE_BMA,
    "dbm": kernels.MODE_DBM,
    "obma": kernels.MODE_OBMA,
    "dtbma": kernels.MODE_DTBMA,
    "abmc": kernels.MODE_ABMC,
}

# (dcol, drow) per side, in the fixed top, bottom, left, right order.
_SIDE_STEPS = ((0, -1), (0, 1), (-1, 0), (1, 0))


class BoundaryWeights(NamedTuple):
    top: float
    bottom: float
    left: float
    right: float


def boundary_weight(status: MbStatus | None, surround: int = 0) -> float:
    """Confidence weight of one neighboring MB.

    Args:
        status: the neighbor's status, or None when it lies outside
            the frame.
        surround: for concealed neighbors, the count of received MBs
            in their 8-neighborhood recorded at concealment time.
    """
    if status is None or status == MbStatus.LOST:
        return 0.0
    if status == MbStatus.RECEIVED:
        return 1.0
    if surround <= 3:
        return TH1
    if surround <= 6:
        return TH2
    return TH3


def _neighbor(field: MvField, mb: MbCoord, side: int) -> MbCoord | None:
    dc, dr = _SIDE_STEPS[side]
    col, row = mb.col + dc, mb.row + dr
    if 0 <= col < field.cols and 0 <= row < field.rows:
        return MbCoord(col, row)
    return None


def mb_boundary_weights(field: MvField, mb: MbCoord) -> BoundaryWeights:
    """Adaptive per-side weights from the four neighbors' statuses."""
    ws = []
    for side in SIDES:
        nb = _neighbor(field, mb, side)
        if nb is None:
            ws.append(0.0)
        else:
            ws.append(boundary_weight(field.status_at(nb),
                                      int(field.surround[nb.row, nb.col])))
    return BoundaryWeights(*ws)


def side_availability(field: MvField, mb: MbCoord) -> BoundaryWeights:
    """Baseline weighting: 1 where the neighbor is in-frame and not
    Lost, else 0."""
    ws = []
    for side in SIDES:
        nb = _neighbor(field, mb, side)
        ok = nb is not None and field.status_at(nb) != MbStatus.LOST
        ws.append(1.0 if ok else 0.0)
    return BoundaryWeights(*ws)


def obmc_boundary(cur: Frame, ref: Frame, mb: MbCoord, mv: MotionVector,
                  side: int, w: float) -> float:
    """Weighted outer-boundary match distortion for one side."""
    i, j = mb.col * MB, mb.row * MB
    return w * float(kernels.obmc_side_sum(cur.y, ref.y, i, j, mv.vx, mv.vy, side))


def dtbmc_direction(ref: Frame, mb: MbCoord, mv: MotionVector,
                    side: int, n: int) -> int:
    """Comparison direction (-1, 0, +1) for boundary pixel n of a side.

    Identified purely in the reference frame: the displaced inner
    boundary pixel against its three adjacent outer pixels; ties
    prefer straight, then -1.
    """
    i, j = mb.col * MB, mb.row * MB
    return int(kernels.dtbmc_direction(ref.y, i, j, mv.vx, mv.vy, side, n))


def dtbmc_boundary(cur: Frame, ref: Frame, mb: MbCoord, mv: MotionVector,
                   side: int, w: float) -> float:
    """Weighted directional temporal match distortion for one side."""
    i, j = mb.col * MB, mb.row * MB
    return w * float(kernels.dtbmc_side_sum(cur.y, ref.y, i, j, mv.vx, mv.vy, side))


def abmc_distortion(cur: Frame, ref: Frame, mb: MbCoord, mv: MotionVector,
                    weights: BoundaryWeights) -> float:
    """Adaptive distortion: per-side minimum of the two weighted criteria."""
    i, j = mb.col * MB, mb.row * MB
    costs = kernels.candidate_costs(
        kernels.MODE_ABMC, cur.y, ref.y, i, j,
        np.array([mv.vx], dtype=np.int32), np.array([mv.vy], dtype=np.int32),
        weights)
    return float(costs[0])


def _round_half_toward_zero(num: int, den: int) -> int:
    # num/den with exact halves rounded toward zero; den > 0.
    mag = (2 * abs(num) + den - 1) // (2 * den)
    return mag if num >= 0 else -mag


def _mean_mv(mvs: list[MotionVector]) -> MotionVector:
    n = len(mvs)
    return MotionVector(
        _round_half_toward_zero(sum(mv.vx for mv in mvs), n),
        _round_half_toward_zero(sum(mv.vy for mv in mvs), n),
    )


def _median_component(values: list[int]) -> int:
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[mid]
    return _round_half_toward_zero(ordered[mid - 1] + ordered[mid], 2)


def _median_mv(mvs: list[MotionVector]) -> MotionVector:
    return MotionVector(_median_component([mv.vx for mv in mvs]),
                        _median_component([mv.vy for mv in mvs]))


def available_neighbor_mvs(field: MvField, mb: MbCoord) -> list[MotionVector]:
    """MVs of the four side neighbors whose status is Received or
    Concealed, in top, bottom, left, right order."""
    mvs = []
    for side in SIDES:
        nb = _neighbor(field, mb, side)
        if nb is not None and field.status_at(nb) != MbStatus.LOST:
            mvs.append(field.mv(nb))
    return mvs


def build_candidates(field: MvField, prev_field: MvField,
                     mb: MbCoord) -> list[MotionVector]:
    """Candidate MVs for a lost MB, ordered and duplicate-free.

    Order: top, bottom, left, right neighbor MVs, their mean and
    median (when at least one neighbor is available), the zero MV,
    and the collocated previous-frame MV; duplicates keep the first
    occurrence.
    """
    cands = available_neighbor_mvs(field, mb)
    if cands:
        cands = cands + [_mean_mv(cands), _median_mv(cands)]
    cands += [ZERO_MV, prev_field.mv(mb)]
    out: list[MotionVector] = []
    seen = set()
    for mv in cands:
        if mv not in seen:
            seen.add(mv)
            out.append(mv)
    return out


def conceal_mb(algorithm: str, cur_damaged: Frame, ref: Frame, field: MvField,
               prev_field: MvField, mb: MbCoord) -> MotionVector:
    """Recover the MV of one lost MB with the chosen algorithm.

    Distortion-based algorithms take the argmin over the candidate
    set; ties keep the earlier candidate. The adaptive algorithm falls
    back to the collocated MV when all four boundary weights are zero
    (nothing to match against).
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(
            f"unknown algorithm {algorithm!r}; valid: {', '.join(ALGORITHMS)}"
        )
    if field.status_at(mb) != MbStatus.LOST:
        raise ValueError(f"MB {tuple(mb)} is not lost")
    if algorithm == "tr":
        return ZERO_MV
    if algorithm == "collocated":
        return prev_field.mv(mb)
    if algorithm in ("amv", "median"):
        mvs = available_neighbor_mvs(field, mb)
        if not mvs:
            return ZERO_MV
        return _mean_mv(mvs) if algorithm == "amv" else _median_mv(mvs)

    if algorithm == "abmc":
        weights = mb_boundary_weights(field, mb)
        if not any(weights):
            return prev_field.mv(mb)
    else:
        weights = side_availability(field, mb)
    cands = build_candidates(field, prev_field, mb)
    vxs = np.array([mv.vx for mv in cands], dtype=np.int32)
    vys = np.array([mv.vy for mv in cands], dtype=np.int32)
    costs = kernels.candidate_costs(
        _DISTORTION_MODES[algorithm], cur_damaged.y, ref.y,
        mb.col * MB, mb.row * MB, vxs, vys, weights)
    return cands[int(np.argmin(costs))]


def received_surround(field: MvField, mb: MbCoord) -> int:
    """Count of Received MBs among the 8-neighborhood, in-grid only."""
    count = 0
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            row, col = mb.row + dr, mb.col + dc
            if (0 <= row < field.rows and 0 <= col < field.cols
                    and field.status[row, col] == int(MbStatus.RECEIVED)):
                count += 1
    return count


def conceal_frame(algorithm: str, cur_damaged: Frame, ref: Frame,
                  field: MvField, prev_field: MvField,
                  lmap: LossMap) -> tuple[Frame, MvField]:
    """Conceal every lost MB of a frame in raster order.

    Later MBs see earlier concealments both as pixel content and as
    candidate MVs. Each concealed entry records the number of received
    MBs in its 8-neighborhood at the moment it was concealed.
    """
    if (field.cols, field.rows) != (lmap.cols, lmap.rows):
        raise FormatError(
            f"field grid {field.cols}x{field.rows} does not match "
            f"loss map {lmap.cols}x{lmap.rows}"
        )
    if (cur_damaged.width // MB, cur_damaged.height // MB) != (lmap.cols, lmap.rows):
        raise FormatError(
            f"frame {cur_damaged.width}x{cur_damaged.height} does not match "
            f"{lmap.cols}x{lmap.rows} MB grid"
        )
    work = cur_damaged.copy()
    out_field = field.copy()
    for row in range(lmap.rows):
        for col in range(lmap.cols):
            if not lmap.lost[row, col]:
                continue
            mb = MbCoord(col, row)
            surround = received_surround(out_field, mb)
            mv = conceal_mb(algorithm, work, ref, out_field, prev_field, mb)
            place_block(work, mb, compensate(ref, mb, mv))
            out_field.vx[row, col] = mv.vx
            out_field.vy[row, col] = mv.vy
            out_field.status[row, col] = int(MbStatus.CONCEALED)
            out_field.surround[row, col] = surround
    return work, out_field
