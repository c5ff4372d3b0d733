"""Seeded, exact-count macroblock loss injection.

The generator is self-contained and fully specified so loss patterns
reproduce bit-for-bit across platforms and languages:

* 64-bit SplitMix-style stream. The mixing finalizer is
  ``mix(z) = h(h(z, 30, 0xBF58476D1CE4E5B9), 27, 0x94D049BB133111EB)
  xor-shifted by 31``, where ``h(z, r, m) = ((z ^ (z >> r)) * m)``
  masked to 64 bits.
* The stream state starts from the seed and absorbs the trial and
  frame indices one at a time: ``s = mix(s ^ mix((word + GOLDEN)))``.
* Each draw advances the state by the golden-ratio increment
  0x9E3779B97F4A7C15 and outputs ``mix(state)``.
* MB indices 0..N-1 are shuffled by a backward Fisher-Yates using
  ``draw() % (i + 1)``, and the first ``floor(rate * N + 0.5)`` of the
  shuffled order are marked lost (round half up).
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .frame_io import Frame, FormatError
from .motion import MbStatus, MvField

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

FILL_BLACK = "black"
FILL_GRAY = "gray"


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class _Stream:
    """SplitMix-style 64-bit generator keyed by (seed, trial, frame)."""

    def __init__(self, seed: int, trial: int, frame: int):
        s = seed & _MASK64
        for word in (trial, frame):
            s = _mix64(s ^ _mix64((word + _GOLDEN) & _MASK64))
        self._state = s

    def draw(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)


@dataclasses.dataclass(frozen=True)
class TrialSpec:
    """One benchmark trial's loss parameters."""

    rate: float
    seed: int
    trial_index: int


@dataclasses.dataclass(eq=False)
class LossMap:
    """Boolean per-MB grid marking damaged macroblocks."""

    cols: int
    rows: int
    lost: np.ndarray  # bool (rows, cols)

    def count(self) -> int:
        return int(self.lost.sum())


def generate_loss_map(cols: int, rows: int, rate: float,
                      seed_material: tuple[int, int, int]) -> LossMap:
    """Mark exactly floor(rate*N + 0.5) distinct MBs as lost.

    Args:
        seed_material: (seed, trial, frame) triple keying the stream.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must be in [0, 1], got {rate}")
    n = cols * rows
    k = int(math.floor(rate * n + 0.5))
    stream = _Stream(*seed_material)
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = stream.draw() % (i + 1)
        order[i], order[j] = order[j], order[i]
    lost = np.zeros(n, dtype=bool)
    for idx in order[:k]:
        lost[idx] = True
    return LossMap(cols, rows, lost.reshape(rows, cols))


def apply_loss(field: MvField, lmap: LossMap) -> MvField:
    """Mark map-lost MBs as Lost and zero their MV content."""
    if (field.cols, field.rows) != (lmap.cols, lmap.rows):
        raise FormatError(
            f"field grid {field.cols}x{field.rows} does not match "
            f"loss map {lmap.cols}x{lmap.rows}"
        )
    out = field.copy()
    out.vx[lmap.lost] = 0
    out.vy[lmap.lost] = 0
    out.status[lmap.lost] = int(MbStatus.LOST)
    out.surround[lmap.lost] = 0
    return out


def damage_frame(frame: Frame, lmap: LossMap, fill: str = FILL_BLACK) -> Frame:
    """Overwrite lost MBs with a fill color (visualization/transport sim).

    Black fills luma 0, gray fills luma 128; chroma goes neutral 128
    either way.
    """
    if fill == FILL_BLACK:
        luma = 0
    elif fill == FILL_GRAY:
        luma = 128
    else:
        raise ValueError(f"unknown fill policy {fill!r}")
    out = frame.copy()
    mb = 16
    for row in range(lmap.rows):
        for col in range(lmap.cols):
            if not lmap.lost[row, col]:
                continue
            i, j = col * mb, row * mb
            out.y[j:j + mb, i:i + mb] = luma
            ci, cj = i // 2, j // 2
            out.u[cj:cj + mb // 2, ci:ci + mb // 2] = 128
            out.v[cj:cj + mb // 2, ci:ci + mb // 2] = 128
    return out


def save_loss_map(lmap: LossMap, path) -> None:
    """Serialize as text: "cols rows" then one '0'/'1' row per MB row."""
    lines = [f"{lmap.cols} {lmap.rows}"]
    for row in range(lmap.rows):
        lines.append("".join("1" if lmap.lost[row, col] else "0"
                             for col in range(lmap.cols)))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_loss_map(path) -> LossMap:
    """Parse the save_loss_map text format."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise FormatError("empty loss map file")
    try:
        cols, rows = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise FormatError(f"bad loss map header {lines[0]!r}") from exc
    if len(lines) - 1 != rows:
        raise FormatError(f"loss map has {len(lines) - 1} rows, expected {rows}")
    lost = np.zeros((rows, cols), dtype=bool)
    for row, line in enumerate(lines[1:]):
        if len(line) != cols or set(line) - {"0", "1"}:
            raise FormatError(f"bad loss map row {line!r}")
        lost[row] = [ch == "1" for ch in line]
    return LossMap(cols, rows, lost)
