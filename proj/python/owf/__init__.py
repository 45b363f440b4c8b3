"""Optimal Weights Filter denoising.

Images are 2-D float64 numpy arrays indexed [row, col]. Filter settings are
keyword arguments; patch and search sizes are side lengths (odd).
"""

from ._owf import (
    Error,
    add_noise,
    compute_metrics,
    denoise,
    export_weight_map,
    kkt_weights,
    nlm_denoise,
    optimal_weights,
    oracle_filter,
    owf_denoise,
    owf_split_denoise,
    psnr,
    read_image,
    solve_bandwidth,
    write_image,
)

__all__ = [
    "Error",
    "add_noise",
    "compute_metrics",
    "denoise",
    "export_weight_map",
    "kkt_weights",
    "nlm_denoise",
    "optimal_weights",
    "oracle_filter",
    "owf_denoise",
    "owf_split_denoise",
    "psnr",
    "read_image",
    "solve_bandwidth",
    "write_image",
]
