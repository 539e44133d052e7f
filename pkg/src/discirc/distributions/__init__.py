"""Exact probability functions for discrete circular families."""

from .conditionalized import (
    cdkj_normalizer,
    cdvm_log_normalizer,
    cdwc_normalizer,
    check_katojones,
    conditionalize,
    pmf_cd_cardioid,
    pmf_cd_stable,
    pmf_cdkj,
    pmf_cdvm,
    pmf_cdwc,
    pmf_cdwc_mu,
    pmf_cdwn,
)
from .family import FAMILIES, FamilyInfo, FamilySpec, family_info, location_pmf
from .marginalized import (
    marginalize,
    md_cardioid_as_cd,
    pmf_md_cardioid,
    pmf_mdkj,
    pmf_mdvm,
    pmf_mdwc,
)
from .maxent import fit_max_entropy, max_entropy_coefficients, maxent_pmf
from .mixture import IrregularPmf, mixture_pmf
from .wrapped import Geometric, Poisson, SkewLaplace, pmf_centered_wrapped

__all__ = [
    "FAMILIES", "FamilyInfo", "FamilySpec", "Geometric", "IrregularPmf", "Poisson",
    "SkewLaplace", "cdkj_normalizer", "cdvm_log_normalizer", "cdwc_normalizer",
    "check_katojones", "conditionalize", "family_info", "fit_max_entropy",
    "location_pmf", "marginalize", "max_entropy_coefficients", "maxent_pmf",
    "md_cardioid_as_cd", "mixture_pmf", "pmf_cd_cardioid", "pmf_cd_stable",
    "pmf_cdkj", "pmf_cdvm", "pmf_cdwc", "pmf_cdwc_mu", "pmf_cdwn",
    "pmf_centered_wrapped", "pmf_md_cardioid", "pmf_mdkj", "pmf_mdvm", "pmf_mdwc",
]
