"""The compiled and pure NumPy kernel backends must agree bit-for-bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from mvconceal import kernels
from mvconceal.kernels import load_backend

py = load_backend("python")
try:
    native = load_backend("native")
except ImportError:
    native = None

needs_native = pytest.mark.skipif(native is None,
                                  reason="compiled backend not built")


def _pairs(count=6, size=48, seed=321):
    rng = np.random.default_rng(seed)
    return [(rng.integers(0, 256, (size, size), dtype=np.uint8),
             rng.integers(0, 256, (size, size), dtype=np.uint8))
            for _ in range(count)]


def test_selected_backend_is_sane():
    assert kernels.BACKEND_NAME in ("native", "python")
    if native is not None and "MVCONCEAL_BACKEND" not in os.environ:
        assert kernels.BACKEND_NAME == "native"


def test_load_backend_rejects_unknown():
    with pytest.raises(ValueError):
        load_backend("fortran")


@needs_native
def test_side_sums_match():
    positions = ((0, 0), (16, 16), (32, 16), (0, 32))
    mvs = ((0, 0), (3, -3), (-2, 1), (1, 2))
    names = ("obmc_side_sum", "bma_side_sum", "dbm_side_sum",
             "dtbmc_side_sum")
    for cur, ref in _pairs():
        for i, j in positions:
            for vx, vy in mvs:
                for side in kernels.SIDES:
                    for name in names:
                        a = getattr(py, name)(cur, ref, i, j, vx, vy, side)
                        b = getattr(native, name)(cur, ref, i, j, vx, vy, side)
                        assert a == b, (name, i, j, vx, vy, side)


@needs_native
def test_directions_match():
    for cur, ref in _pairs(count=3):
        for side in kernels.SIDES:
            for n in range(16):
                a = py.dtbmc_direction(ref, 16, 16, 2, -1, side, n)
                b = native.dtbmc_direction(ref, 16, 16, 2, -1, side, n)
                assert a == b


@needs_native
def test_candidate_costs_bitwise_identical():
    rng = np.random.default_rng(99)
    modes = (kernels.MODE_BMA, kernels.MODE_DBM, kernels.MODE_OBMA,
             kernels.MODE_DTBMA, kernels.MODE_ABMC)
    for cur, ref in _pairs(count=4):
        vxs = rng.integers(-4, 5, size=9).astype(np.int32)
        vys = rng.integers(-4, 5, size=9).astype(np.int32)
        weights = tuple(rng.choice([0.0, 0.5, 0.7, 0.9, 1.0], size=4))
        for mode in modes:
            a = py.candidate_costs(mode, cur, ref, 16, 16, vxs, vys, weights)
            b = native.candidate_costs(mode, cur, ref, 16, 16, vxs, vys, weights)
            assert a.tobytes() == b.tobytes(), mode


@needs_native
def test_search_kernels_match():
    for cur, ref in _pairs(count=3):
        # sad16 is only defined for displacements that stay in frame.
        for i, j, vx, vy in ((0, 0, 2, 3), (16, 16, 2, -3), (32, 32, -2, -3)):
            assert (py.sad16(cur, ref, i, j, vx, vy)
                    == native.sad16(cur, ref, i, j, vx, vy))
        for i, j in ((0, 0), (16, 16), (32, 32)):
            assert (py.full_search_mb(cur, ref, i, j, 3)
                    == native.full_search_mb(cur, ref, i, j, 3))
        pa = py.estimate_all(cur, ref, 3)
        na = native.estimate_all(cur, ref, 3)
        assert np.array_equal(pa[0], na[0]) and np.array_equal(pa[1], na[1])


def _backend_in_subprocess(value):
    env = os.environ.copy()
    if value is None:
        env.pop("MVCONCEAL_BACKEND", None)
    else:
        env["MVCONCEAL_BACKEND"] = value
    proc = subprocess.run(
        [sys.executable, "-c",
         "import mvconceal.kernels as k; print(k.BACKEND_NAME)"],
        capture_output=True, text=True, env=env)
    return proc


def test_environment_variable_selects_backend():
    proc = _backend_in_subprocess("python")
    assert proc.returncode == 0 and proc.stdout.strip() == "python"
    if native is not None:
        proc = _backend_in_subprocess("native")
        assert proc.returncode == 0 and proc.stdout.strip() == "native"
        proc = _backend_in_subprocess(None)
        assert proc.stdout.strip() == "native"
    proc = _backend_in_subprocess("fortran")
    assert proc.returncode != 0
