"""Fourier phase-substitution simulation of ultrasound images.

Arrays are 2D numpy arrays indexed ``[row, column]`` with values in [0, 1].
"""

from ._core import (
    ALPHA_DEFAULT,
    ALPHA_MAX,
    Error,
    build_lowfreq_mask,
    dsc,
    forward_transform,
    from_polar,
    inverse_transform,
    inverse_transform_with_residual,
    normalize_output,
    phase_source_from_mask,
    read_image,
    render_bmode,
    resample,
    simulate,
    simulate_raw,
    to_polar,
    write_image,
)

__all__ = [
    "ALPHA_DEFAULT",
    "ALPHA_MAX",
    "Error",
    "build_lowfreq_mask",
    "dsc",
    "forward_transform",
    "from_polar",
    "inverse_transform",
    "inverse_transform_with_residual",
    "normalize_output",
    "phase_source_from_mask",
    "read_image",
    "render_bmode",
    "resample",
    "simulate",
    "simulate_raw",
    "to_polar",
    "write_image",
]
