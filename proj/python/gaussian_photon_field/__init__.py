# SPDX-License-Identifier: Apache-2.0
"""Path tracing, SPPM and Gaussian photon field rendering."""

from ._core import (
    Camera,
    Field,
    GpfError,
    Scene,
    builtin_scene_names,
    init_field,
    load_checkpoint,
    load_scene,
    parse_scene,
    psnr,
    read_pfm,
    render_gpf,
    render_pt,
    render_sppm,
    set_threads,
    ssim,
    train_field,
    write_pfm,
)

__all__ = [
    "Camera",
    "Field",
    "GpfError",
    "Scene",
    "builtin_scene_names",
    "init_field",
    "load_checkpoint",
    "load_scene",
    "parse_scene",
    "psnr",
    "read_pfm",
    "render_gpf",
    "render_pt",
    "render_sppm",
    "set_threads",
    "ssim",
    "train_field",
    "write_pfm",
]
