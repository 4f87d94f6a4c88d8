"""1-D magnetic particle imaging: Langevin-kernel operators, singular
spectra, and regularized reconstruction.

Thin numpy-facing layer over the C++ core (``mpi1d._mpi1d``).  Matrices are
plain 2-D float64 arrays; operators act on the field-of-view grid returned
by :func:`fov_points`.
"""

from ._mpi1d import (
    PhysicalParams,
    add_noise,
    elliptic_k,
    fit_decay_rate,
    fov_points,
    fov_weights,
    kernel_fourier,
    kernel_mg_deriv,
    langevin,
    langevin_deriv,
    langevin_deriv_fourier,
    load_matrix,
    phantom,
    reconstruct_tikhonov,
    reconstruct_tsvd,
    rel_error,
    s_conv,
    s_freq,
    s_time,
    save_matrix,
    singular_values,
    widom_rate,
)

__all__ = [
    "PhysicalParams",
    "add_noise",
    "elliptic_k",
    "fit_decay_rate",
    "fov_points",
    "fov_weights",
    "kernel_fourier",
    "kernel_mg_deriv",
    "langevin",
    "langevin_deriv",
    "langevin_deriv_fourier",
    "load_matrix",
    "phantom",
    "reconstruct_tikhonov",
    "reconstruct_tsvd",
    "rel_error",
    "s_conv",
    "s_freq",
    "s_time",
    "save_matrix",
    "singular_values",
    "widom_rate",
]

__version__ = "0.1.0"
