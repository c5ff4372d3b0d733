"""Kernel backend selection.

Two interchangeable backends implement the pixel-level hot loops: a
compiled Cython module and a pure NumPy module that defines the
reference semantics and is always importable. They are bit-identical;
the test-suite asserts it.

The environment variable MVCONCEAL_BACKEND picks one explicitly
("native" or "python"); the default "auto" uses the compiled module
when it imported cleanly and falls back to pure NumPy otherwise.
"""

import importlib
import os

MB = 16

SIDE_TOP, SIDE_BOTTOM, SIDE_LEFT, SIDE_RIGHT = 0, 1, 2, 3
SIDES = (SIDE_TOP, SIDE_BOTTOM, SIDE_LEFT, SIDE_RIGHT)
MODE_BMA, MODE_DBM, MODE_OBMA, MODE_DTBMA, MODE_ABMC = 0, 1, 2, 3, 4


def load_backend(name: str):
    """Import one kernel backend by name ("native" or "python")."""
    if name not in ("native", "python"):
        raise ValueError(f"unknown kernel backend {name!r}")
    return importlib.import_module(f"{__name__}._{name}")


def _select():
    choice = os.environ.get("MVCONCEAL_BACKEND", "auto").lower()
    if choice == "auto":
        try:
            return load_backend("native"), "native"
        except ImportError:
            return load_backend("python"), "python"
    return load_backend(choice), choice


_impl, BACKEND_NAME = _select()

obmc_side_sum = _impl.obmc_side_sum
bma_side_sum = _impl.bma_side_sum
dbm_side_sum = _impl.dbm_side_sum
dtbmc_side_sum = _impl.dtbmc_side_sum
dtbmc_direction = _impl.dtbmc_direction
candidate_costs = _impl.candidate_costs
sad16 = _impl.sad16
full_search_mb = _impl.full_search_mb
estimate_all = _impl.estimate_all
