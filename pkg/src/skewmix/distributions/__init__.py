"""SN, MSN and CFUSN families and their two-component mixtures."""

from .core import cdf, cf, half_normal, log_cf, log_cf_magnitude, log_mgf, log_pdf, mean, mgf, pdf, sample
from .io import (
    dump_mixture,
    dump_params,
    load_mixture,
    load_params,
    mixture_from_dict,
    mixture_to_dict,
    params_from_dict,
    params_to_dict,
)
from .mixture import MixtureModel, mixture_cf, mixture_log_pdf, mixture_pdf, mixture_sample
from .params import (
    FAMILIES,
    AlternateParams,
    CfusnParams,
    FamilyParams,
    MsnParams,
    SnParams,
    from_alternate,
    gamma_matrix,
    location_scale_skew,
    canonical_arrays,
    params_close,
    same_family,
    to_alternate,
)

__all__ = [
    "FAMILIES",
    "AlternateParams",
    "CfusnParams",
    "FamilyParams",
    "MixtureModel",
    "MsnParams",
    "SnParams",
    "cdf",
    "cf",
    "dump_mixture",
    "dump_params",
    "from_alternate",
    "gamma_matrix",
    "half_normal",
    "load_mixture",
    "load_params",
    "location_scale_skew",
    "log_cf",
    "log_cf_magnitude",
    "log_mgf",
    "log_pdf",
    "mean",
    "mgf",
    "mixture_cf",
    "mixture_from_dict",
    "mixture_log_pdf",
    "mixture_pdf",
    "mixture_sample",
    "mixture_to_dict",
    "canonical_arrays",
    "params_close",
    "params_from_dict",
    "params_to_dict",
    "pdf",
    "same_family",
    "sample",
    "to_alternate",
]
