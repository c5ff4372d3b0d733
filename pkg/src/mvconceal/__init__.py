"""Motion-vector recovery for damaged macroblocks in raw YUV video.

Boundary-matching concealment algorithms (adaptive per-side selection
plus classic baselines), seeded macroblock loss, full-search motion
estimation, and a PSNR/timing benchmark harness.
"""

from .frame_io import (BORDER_CLAMP, BORDER_STRICT, FormatError, Frame,
                       PixelCoord, Sequence, load_yuv, luma_at, save_pgm,
                       save_yuv)
from .motion import (Block16, MbCoord, MbStatus, MotionVector, MvField,
                     ZERO_MV, compensate, estimate_field, fields_equal,
                     full_search, load_field, place_block, save_field)
from .loss import (FILL_BLACK, FILL_GRAY, LossMap, TrialSpec, apply_loss,
                   damage_frame, generate_loss_map, load_loss_map,
                   save_loss_map)
from .conceal import (ALGORITHMS, BOTTOM, BoundaryWeights, LEFT, RIGHT, SIDES,
                      TH1, TH2, TH3, TOP, abmc_distortion,
                      available_neighbor_mvs, boundary_weight,
                      build_candidates, conceal_frame, conceal_mb,
                      dtbmc_boundary, dtbmc_direction, mb_boundary_weights,
                      obmc_boundary, received_surround, side_availability)
from .bench import (BenchConfig, BenchRecord, BenchReport, PSNR_CAP,
                    REF_CLEAN, REF_PROPAGATE, format_tables, psnr_luma,
                    report_to_csv, run_benchmark, run_trial)
from .kernels import BACKEND_NAME

__version__ = "0.1.0"
