"""Computable scale structures: growth functions, model spectra, fractal scale spaces."""

from .growth import (
    ExplicitPrefix,
    GrowthClass,
    PowerLaw,
    SpectrumBacked,
    classify,
    equivalent,
    evaluate,
    fit_class,
    idempotency_check,
    leq_class,
    power,
    power_class,
    star,
    star_class,
)
from .scales import (
    FractalModel,
    invariant_table,
    locally_isomorphic,
    mapping_space_model,
    reindex,
    scale_product,
)
from .spectra import ManifoldModel, Spectrum, WeylFit, enumerate_spectrum, merge_spectra, shifted_growth, weyl_fit

__version__ = "0.1.0"

__all__ = [
    "ExplicitPrefix",
    "FractalModel",
    "GrowthClass",
    "ManifoldModel",
    "PowerLaw",
    "Spectrum",
    "SpectrumBacked",
    "WeylFit",
    "classify",
    "enumerate_spectrum",
    "equivalent",
    "evaluate",
    "fit_class",
    "idempotency_check",
    "invariant_table",
    "leq_class",
    "locally_isomorphic",
    "mapping_space_model",
    "merge_spectra",
    "power",
    "power_class",
    "reindex",
    "scale_product",
    "shifted_growth",
    "star",
    "star_class",
    "weyl_fit",
]
