# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled pixel kernels.

The pure NumPy backend in ``_python`` defines the semantics; this
module reimplements the same functions in C for speed and must stay
bit-identical, including the order of every float accumulation (the
build disables FP contraction for that reason).
"""

import numpy as np

MB = 16

SIDE_TOP, SIDE_BOTTOM, SIDE_LEFT, SIDE_RIGHT = 0, 1, 2, 3
MODE_BMA, MODE_DBM, MODE_OBMA, MODE_DTBMA, MODE_ABMC = 0, 1, 2, 3, 4


cdef inline int _clampi(int v, int hi) nogil:
    if v < 0:
        return 0
    if v > hi:
        return hi
    return v


cdef inline long _px(const unsigned char[:, ::1] p, int x, int y) nogil:
    return <long>p[_clampi(y, <int>p.shape[0] - 1), _clampi(x, <int>p.shape[1] - 1)]


cdef inline long _absl(long v) nogil:
    return v if v >= 0 else -v


cdef inline void _outer_xy(int i, int j, int side, int n, int d,
                           int* ox, int* oy) nogil:
    # Outer-ring coordinate of the MB at (i, j); d shifts along the
    # boundary axis (comparison direction).
    if side == 0:
        ox[0] = i + n + d
        oy[0] = j - 1
    elif side == 1:
        ox[0] = i + n + d
        oy[0] = j + 16
    elif side == 2:
        ox[0] = i - 1
        oy[0] = j + n + d
    else:
        ox[0] = i + 16
        oy[0] = j + n + d


cdef inline void _inner_xy(int i, int j, int vx, int vy, int side, int n,
                           int* ix, int* iy) nogil:
    # Inner boundary coordinate of the displaced MB in the reference.
    if side == 0:
        ix[0] = i + vx + n
        iy[0] = j + vy
    elif side == 1:
        ix[0] = i + vx + n
        iy[0] = j + vy + 15
    elif side == 2:
        ix[0] = i + vx
        iy[0] = j + vy + n
    else:
        ix[0] = i + vx + 15
        iy[0] = j + vy + n


cdef long _obmc_side(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                     int i, int j, int vx, int vy, int side) nogil:
    cdef long s = 0
    cdef int n, ox, oy
    for n in range(16):
        _outer_xy(i, j, side, n, 0, &ox, &oy)
        s += _absl(_px(cur, ox, oy) - _px(ref, ox + vx, oy + vy))
    return s


cdef long _bma_side(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                    int i, int j, int vx, int vy, int side) nogil:
    cdef long s = 0
    cdef int n, ix, iy, ox, oy
    for n in range(16):
        _inner_xy(i, j, vx, vy, side, n, &ix, &iy)
        _outer_xy(i, j, side, n, 0, &ox, &oy)
        s += _absl(_px(ref, ix, iy) - _px(cur, ox, oy))
    return s


cdef long _dbm_side(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                    int i, int j, int vx, int vy, int side) nogil:
    cdef long s, inner, best, v
    cdef int n, d, ix, iy, ox, oy
    s = 0
    for n in range(16):
        _inner_xy(i, j, vx, vy, side, n, &ix, &iy)
        inner = _px(ref, ix, iy)
        best = -1
        for d in range(-1, 2):
            _outer_xy(i, j, side, n, d, &ox, &oy)
            v = _absl(inner - _px(cur, ox, oy))
            if best < 0 or v < best:
                best = v
        s += best
    return s


cdef int _dir_at(const unsigned char[:, ::1] ref, int i, int j, int vx, int vy,
                 int side, int n) nogil:
    cdef long inner, e_m, e_s, e_p
    cdef int ix, iy, ox, oy
    _inner_xy(i, j, vx, vy, side, n, &ix, &iy)
    inner = _px(ref, ix, iy)
    _outer_xy(i, j, side, n, -1, &ox, &oy)
    e_m = _absl(inner - _px(ref, ox + vx, oy + vy))
    _outer_xy(i, j, side, n, 0, &ox, &oy)
    e_s = _absl(inner - _px(ref, ox + vx, oy + vy))
    _outer_xy(i, j, side, n, 1, &ox, &oy)
    e_p = _absl(inner - _px(ref, ox + vx, oy + vy))
    # Tie order: straight, then -1, then +1.
    if e_s <= e_m and e_s <= e_p:
        return 0
    if e_m <= e_p:
        return -1
    return 1


cdef long _dtbmc_side(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                      int i, int j, int vx, int vy, int side) nogil:
    cdef long s = 0
    cdef int n, d, ix, iy, ox, oy
    for n in range(16):
        d = _dir_at(ref, i, j, vx, vy, side, n)
        _inner_xy(i, j, vx, vy, side, n, &ix, &iy)
        _outer_xy(i, j, side, n, d, &ox, &oy)
        s += _absl(_px(ref, ix, iy) - _px(cur, ox, oy))
    return s


cdef long _side_sum(int mode, const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                    int i, int j, int vx, int vy, int side) nogil:
    if mode == 0:
        return _bma_side(cur, ref, i, j, vx, vy, side)
    if mode == 1:
        return _dbm_side(cur, ref, i, j, vx, vy, side)
    if mode == 2:
        return _obmc_side(cur, ref, i, j, vx, vy, side)
    return _dtbmc_side(cur, ref, i, j, vx, vy, side)


def obmc_side_sum(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                  int i, int j, int vx, int vy, int side):
    """Outer-boundary match: current outer ring vs displaced outer ring."""
    return _obmc_side(cur, ref, i, j, vx, vy, side)


def bma_side_sum(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                 int i, int j, int vx, int vy, int side):
    """Classic side match: displaced inner ring vs current outer ring."""
    return _bma_side(cur, ref, i, j, vx, vy, side)


def dbm_side_sum(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                 int i, int j, int vx, int vy, int side):
    """Directional side match: per-pixel best of the three directions."""
    return _dbm_side(cur, ref, i, j, vx, vy, side)


def dtbmc_side_sum(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                   int i, int j, int vx, int vy, int side):
    """Directional temporal match along one side (two-stage)."""
    return _dtbmc_side(cur, ref, i, j, vx, vy, side)


def dtbmc_direction(const unsigned char[:, ::1] ref, int i, int j, int vx, int vy,
                    int side, int n):
    """Comparison direction (-1, 0, +1) for boundary pixel ``n`` of a side."""
    return _dir_at(ref, i, j, vx, vy, side, n)


def candidate_costs(int mode, const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                    int i, int j, vxs, vys, weights):
    """Weighted boundary distortion of each candidate MV.

    Matches the reference backend bit for bit: zero-weight sides are
    skipped, the rest accumulate ``w * side_sum`` in top, bottom, left,
    right order; adaptive mode takes the per-side integer minimum of
    the outer-boundary and directional sums before weighting.
    """
    vx_arr = np.ascontiguousarray(np.asarray(vxs), dtype=np.int32)
    vy_arr = np.ascontiguousarray(np.asarray(vys), dtype=np.int32)
    cdef const int[::1] vxv = vx_arr
    cdef const int[::1] vyv = vy_arr
    cdef double[4] wv
    cdef int s
    for s in range(4):
        wv[s] = <double>float(weights[s])
    costs = np.empty(vx_arr.shape[0], dtype=np.float64)
    cdef double[::1] cv = costs
    cdef Py_ssize_t c
    cdef int vx, vy, side
    cdef long o, d, ss
    cdef double cost
    for c in range(vxv.shape[0]):
        vx = vxv[c]
        vy = vyv[c]
        cost = 0.0
        for side in range(4):
            if wv[side] == 0.0:
                continue
            if mode == 4:
                o = _obmc_side(cur, ref, i, j, vx, vy, side)
                d = _dtbmc_side(cur, ref, i, j, vx, vy, side)
                ss = o if o <= d else d
            else:
                ss = _side_sum(mode, cur, ref, i, j, vx, vy, side)
            cost += wv[side] * <double>ss
        cv[c] = cost
    return costs


def sad16(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
          int i, int j, int vx, int vy):
    """Luma SAD of an in-bounds 16x16 block against its displaced match."""
    cdef long s = 0
    cdef int x, y
    for y in range(16):
        for x in range(16):
            s += _absl(<long>cur[j + y, i + x] - <long>ref[j + vy + y, i + vx + x])
    return s


cdef void _full_search(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                       int i, int j, int p, int* out_vx, int* out_vy) nogil:
    cdef int h = <int>ref.shape[0]
    cdef int w = <int>ref.shape[1]
    cdef long best_sad = -1
    cdef long sad, diff
    cdef int best_mag = 0, bvx = 0, bvy = 0
    cdef int vx, vy, rx, ry, x, y, mag
    for vy in range(-p, p + 1):
        ry = j + vy
        if ry < 0 or ry + 16 > h:
            continue
        for vx in range(-p, p + 1):
            rx = i + vx
            if rx < 0 or rx + 16 > w:
                continue
            sad = 0
            for y in range(16):
                # Early abandon only when strictly worse: an equal SAD
                # must survive to the magnitude tie-break.
                if best_sad >= 0 and sad > best_sad:
                    break
                for x in range(16):
                    diff = <long>cur[j + y, i + x] - <long>ref[ry + y, rx + x]
                    sad += diff if diff >= 0 else -diff
            if best_sad >= 0 and sad > best_sad:
                continue
            mag = (vx if vx >= 0 else -vx) + (vy if vy >= 0 else -vy)
            if best_sad < 0 or sad < best_sad or (sad == best_sad and mag < best_mag):
                best_sad = sad
                best_mag = mag
                bvx = vx
                bvy = vy
    out_vx[0] = bvx
    out_vy[0] = bvy


def full_search_mb(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref,
                   int i, int j, int p):
    """Exhaustive SAD search over [-p, p]^2, excluding out-of-frame shifts."""
    cdef int vx = 0, vy = 0
    _full_search(cur, ref, i, j, p, &vx, &vy)
    return vx, vy


def estimate_all(const unsigned char[:, ::1] cur, const unsigned char[:, ::1] ref, int p):
    """Full-search MV for every macroblock; returns (vx, vy) int16 grids."""
    cdef int h = <int>cur.shape[0]
    cdef int w = <int>cur.shape[1]
    cdef int rows = h // 16
    cdef int cols = w // 16
    vx_grid = np.empty((rows, cols), dtype=np.int16)
    vy_grid = np.empty((rows, cols), dtype=np.int16)
    cdef short[:, ::1] vxv = vx_grid
    cdef short[:, ::1] vyv = vy_grid
    cdef int row, col, ovx, ovy
    for row in range(rows):
        for col in range(cols):
            _full_search(cur, ref, col * 16, row * 16, p, &ovx, &ovy)
            vxv[row, col] = <short>ovx
            vyv[row, col] = <short>ovy
    return vx_grid, vy_grid
