"""Spline-domain compressive sensing: operators, solver and metrics."""

from ._core import (
    DimensionError,
    SensingOp,
    SpcsError,
    SrmConfig,
    acquire,
    bspline,
    coefficients_for_samples,
    crosscorr_taps,
    dwt2,
    filter_bank_names,
    idwt2,
    psnr,
    reconstruct,
    render_box_samples,
    render_pointwise,
    solve_l1,
    srm_adjoint,
    srm_forward,
    ssim,
)

__all__ = [
    "DimensionError",
    "SensingOp",
    "SpcsError",
    "SrmConfig",
    "acquire",
    "bspline",
    "coefficients_for_samples",
    "crosscorr_taps",
    "dwt2",
    "filter_bank_names",
    "idwt2",
    "psnr",
    "reconstruct",
    "render_box_samples",
    "render_pointwise",
    "solve_l1",
    "srm_adjoint",
    "srm_forward",
    "ssim",
]
