"""Numerics for bivariate Jacobi-Konhauser polynomials, the JKML double
series, Riemann-Liouville images and the xi integral operator."""

from __future__ import annotations

__version__ = "0.1.0"

from .jkml import JkmlArgs, jkml, jkml_eval, jkml_grid, jkml_tail_bound
from .kdf import KdFSpec, SSeriesSpec, TruncationPolicy, kdf_f_eval, kdf_s_eval
from .polynomials import (
    InsufficientDegreeError,
    JKPolyForm,
    biorthogonality_matrix,
    biorthogonality_norm,
    generating_function_check,
    jk_poly,
    q_poly,
)
from .quadrature import QuadratureRule, gauss_jacobi_rule, gauss_laguerre_rule
from .special import ParamSet, SeriesResult, jacobi_poly, konhauser_y, konhauser_z

__all__ = [
    "InsufficientDegreeError", "JKPolyForm", "JkmlArgs", "KdFSpec", "ParamSet", "QuadratureRule",
    "SSeriesSpec", "SeriesResult", "TruncationPolicy", "__version__", "biorthogonality_matrix",
    "biorthogonality_norm", "gauss_jacobi_rule", "gauss_laguerre_rule", "generating_function_check",
    "jacobi_poly", "jk_poly", "jkml", "jkml_eval", "jkml_grid", "jkml_tail_bound", "kdf_f_eval",
    "kdf_s_eval", "konhauser_y", "konhauser_z", "q_poly",
]
