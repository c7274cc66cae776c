"""Numerical checks for gap theorems of Yang-Mills connections on four-manifolds."""

from .forms import TwoForm, hodge_star, project_pm, trilinear, trilinear_chain_report
from .gap import GapBoundSpec, evaluate_gap, lemma3_check, make_spec, threshold
from .gauge import InstantonParams, bpst_field, charge, curvature, kato_ratio, ym_residual
from .geometry import catalog, curvature_at
from .lie import AlgebraMetric, commutator_constant, gap_constant
from .weights import ak_weight, bgg_weight, carron_weight, chm_weight, cutoff, verify_poincare

__version__ = "0.1.0"

__all__ = [
    "AlgebraMetric",
    "GapBoundSpec",
    "InstantonParams",
    "TwoForm",
    "ak_weight",
    "bgg_weight",
    "bpst_field",
    "carron_weight",
    "catalog",
    "charge",
    "chm_weight",
    "commutator_constant",
    "curvature",
    "curvature_at",
    "cutoff",
    "evaluate_gap",
    "gap_constant",
    "hodge_star",
    "kato_ratio",
    "lemma3_check",
    "make_spec",
    "project_pm",
    "threshold",
    "trilinear",
    "trilinear_chain_report",
    "verify_poincare",
    "ym_residual",
]
