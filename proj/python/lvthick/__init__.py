"""Laplace-equation LVM wall thickness measurement and segmentation metrics.

Volumes are numpy arrays indexed [z, y, x] (x fastest in memory); spacing
tuples are (sx, sy, sz) in millimeters. Labels: 0 background, 1 blood-pool,
2 LVM.
"""

from ._lvthick import (  # noqa: F401
    LvthickError,
    close,
    dice,
    dice_case,
    dilate,
    erode,
    fill_holes,
    inject_defect,
    largest_component,
    make_nested_cohorts,
    make_shell,
    make_slab,
    measure_thickness,
    pearson,
    read_volume,
    repair_and_measure,
    repair_labels,
    resample_isotropic,
    solve_laplace,
    write_volume,
    __version__,
)

__all__ = [
    "LvthickError",
    "close",
    "dice",
    "dice_case",
    "dilate",
    "erode",
    "fill_holes",
    "inject_defect",
    "largest_component",
    "make_nested_cohorts",
    "make_shell",
    "make_slab",
    "measure_thickness",
    "pearson",
    "read_volume",
    "repair_and_measure",
    "repair_labels",
    "resample_isotropic",
    "solve_laplace",
    "write_volume",
    "__version__",
]
