"""Block-matching motion estimation, per-MB vector fields, compensation.

The MV sign convention is fixed repo-wide: the block at luma position
(i, j) in the current frame matches the reference at (i+vx, j+vy).
"""

from __future__ import annotations

import dataclasses
import enum
from typing import NamedTuple

import numpy as np

from . import kernels
from .frame_io import Frame, FormatError

MB = 16


class MotionVector(NamedTuple):
    vx: int
    vy: int


ZERO_MV = MotionVector(0, 0)


class MbCoord(NamedTuple):
    col: int
    row: int


class MbStatus(enum.IntEnum):
    RECEIVED = 0
    LOST = 1
    CONCEALED = 2


_STATUS_NAMES = {
    MbStatus.RECEIVED: "received",
    MbStatus.LOST: "lost",
    MbStatus.CONCEALED: "concealed",
}
_STATUS_VALUES = {name: status for status, name in _STATUS_NAMES.items()}


class Block16(NamedTuple):
    """Motion-compensated content for one macroblock (luma + chroma)."""

    y: np.ndarray  # 16x16
    u: np.ndarray  # 8x8
    v: np.ndarray  # 8x8


@dataclasses.dataclass(eq=False)
class MvField:
    """Per-MB grid of motion vectors with status bookkeeping.

    ``surround`` holds, for concealed MBs, the number of correctly
    received MBs in the 8-neighborhood at concealment time.
    """

    cols: int
    rows: int
    vx: np.ndarray       # int16 (rows, cols)
    vy: np.ndarray       # int16 (rows, cols)
    status: np.ndarray   # uint8 (rows, cols), MbStatus values
    surround: np.ndarray  # uint8 (rows, cols)

    @classmethod
    def zeros(cls, cols: int, rows: int,
              status: MbStatus = MbStatus.RECEIVED) -> "MvField":
        return cls(
            cols, rows,
            np.zeros((rows, cols), dtype=np.int16),
            np.zeros((rows, cols), dtype=np.int16),
            np.full((rows, cols), int(status), dtype=np.uint8),
            np.zeros((rows, cols), dtype=np.uint8),
        )

    def copy(self) -> "MvField":
        return MvField(self.cols, self.rows, self.vx.copy(), self.vy.copy(),
                       self.status.copy(), self.surround.copy())

    def mv(self, mb: MbCoord) -> MotionVector:
        return MotionVector(int(self.vx[mb.row, mb.col]),
                            int(self.vy[mb.row, mb.col]))

    def status_at(self, mb: MbCoord) -> MbStatus:
        return MbStatus(int(self.status[mb.row, mb.col]))


def fields_equal(a: MvField, b: MvField) -> bool:
    return (a.cols == b.cols and a.rows == b.rows
            and np.array_equal(a.vx, b.vx) and np.array_equal(a.vy, b.vy)
            and np.array_equal(a.status, b.status)
            and np.array_equal(a.surround, b.surround))


def full_search(cur: Frame, ref: Frame, mb: MbCoord, p: int) -> MotionVector:
    """Exhaustive SAD search over [-p, p]^2 for one macroblock.

    Candidates whose displaced block leaves the reference frame are
    excluded. Ties break toward smaller |vx|+|vy|, then raster (vy, vx)
    order.
    """
    vx, vy = kernels.full_search_mb(cur.y, ref.y, mb.col * MB, mb.row * MB, p)
    return MotionVector(int(vx), int(vy))


def estimate_field(cur: Frame, ref: Frame, p: int) -> MvField:
    """Full-search MV for every MB; all statuses Received."""
    if (cur.width, cur.height) != (ref.width, ref.height):
        raise FormatError(
            f"frame dimensions differ: {cur.width}x{cur.height} "
            f"vs {ref.width}x{ref.height}"
        )
    vx_grid, vy_grid = kernels.estimate_all(cur.y, ref.y, p)
    rows, cols = vx_grid.shape
    field = MvField.zeros(cols, rows)
    field.vx[:] = vx_grid
    field.vy[:] = vy_grid
    return field


def compensate(ref: Frame, mb: MbCoord, mv: MotionVector) -> Block16:
    """Copy the displaced block from the reference frame.

    Luma reads the 16x16 block at (i+vx, j+vy); chroma reads 8x8 at
    ((i+vx)//2, (j+vy)//2) per plane (floor division). Out-of-frame
    reads clamp to the nearest valid pixel.
    """
    i, j = mb.col * MB, mb.row * MB

    def grab(plane, x0, y0, size):
        h, w = plane.shape
        xs = np.clip(x0 + np.arange(size), 0, w - 1)
        ys = np.clip(y0 + np.arange(size), 0, h - 1)
        return plane[ys[:, None], xs[None, :]].copy()

    return Block16(
        grab(ref.y, i + mv.vx, j + mv.vy, MB),
        grab(ref.u, (i + mv.vx) // 2, (j + mv.vy) // 2, MB // 2),
        grab(ref.v, (i + mv.vx) // 2, (j + mv.vy) // 2, MB // 2),
    )


def place_block(frame: Frame, mb: MbCoord, block: Block16) -> None:
    """Write compensated content into a frame's planes in place."""
    i, j = mb.col * MB, mb.row * MB
    frame.y[j:j + MB, i:i + MB] = block.y
    ci, cj = i // 2, j // 2
    half = MB // 2
    frame.u[cj:cj + half, ci:ci + half] = block.u
    frame.v[cj:cj + half, ci:ci + half] = block.v


def save_field(field: MvField, path) -> None:
    """Serialize as text: "cols rows" then one MB per line.

    Line format: "col row vx vy status" with a trailing surround count
    for concealed entries.
    """
    lines = [f"{field.cols} {field.rows}"]
    for row in range(field.rows):
        for col in range(field.cols):
            status = MbStatus(int(field.status[row, col]))
            parts = [str(col), str(row),
                     str(int(field.vx[row, col])), str(int(field.vy[row, col])),
                     _STATUS_NAMES[status]]
            if status == MbStatus.CONCEALED:
                parts.append(str(int(field.surround[row, col])))
            lines.append(" ".join(parts))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_field(path) -> MvField:
    """Parse the save_field text format."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise FormatError("empty MV field file")
    try:
        cols, rows = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise FormatError(f"bad MV field header {lines[0]!r}") from exc
    if len(lines) - 1 != cols * rows:
        raise FormatError(
            f"MV field has {len(lines) - 1} entries, expected {cols * rows}"
        )
    field = MvField.zeros(cols, rows)
    for line in lines[1:]:
        toks = line.split()
        if len(toks) not in (5, 6) or toks[4] not in _STATUS_VALUES:
            raise FormatError(f"bad MV field line {line!r}")
        try:
            col, row, vx, vy = (int(tok) for tok in toks[:4])
            surround = int(toks[5]) if len(toks) == 6 else 0
        except ValueError as exc:
            raise FormatError(f"bad MV field line {line!r}") from exc
        if not (0 <= col < cols and 0 <= row < rows):
            raise FormatError(f"MB ({col}, {row}) outside {cols}x{rows} grid")
        field.vx[row, col] = vx
        field.vy[row, col] = vy
        field.status[row, col] = int(_STATUS_VALUES[toks[4]])
        field.surround[row, col] = surround
    return field
