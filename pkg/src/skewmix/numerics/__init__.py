"""Special functions and small symmetric linear algebra."""

from .linalg import (
    DEFAULT_PSD_TOL,
    PsdClass,
    PsdLabel,
    as_sym_matrix,
    null_space,
    psd_classify,
    require_positive_definite,
    sym_eig,
    sym_matrix_inv_sqrt,
    sym_matrix_sqrt,
)
from .mvn import mvn_cdf
from .special import (
    SQRT_2_OVER_PI,
    double_factorial,
    im_func,
    log_abs_im_func,
    log_one_plus_i_im,
    log_std_normal_cdf,
    r_n_expansion,
    scaled_im,
    std_normal_cdf,
)

__all__ = [
    "DEFAULT_PSD_TOL",
    "PsdClass",
    "PsdLabel",
    "SQRT_2_OVER_PI",
    "as_sym_matrix",
    "double_factorial",
    "im_func",
    "log_abs_im_func",
    "log_one_plus_i_im",
    "log_std_normal_cdf",
    "mvn_cdf",
    "null_space",
    "psd_classify",
    "r_n_expansion",
    "require_positive_definite",
    "scaled_im",
    "std_normal_cdf",
    "sym_eig",
    "sym_matrix_inv_sqrt",
    "sym_matrix_sqrt",
]
