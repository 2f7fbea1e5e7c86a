"""Numerical verification of Chen-type inequalities for statistical
submanifolds of quaternionic Kaehler-like statistical manifolds."""

__version__ = "0.1.0"

from .jet import Jet2, JetDomainError, jet_arith, jet_const, jet_seed, jet_unary
from .exprlang import ExprMatrix, eval_float, eval_jet, parse, to_text
from .geomcore import (
    ConnectionAtPoint,
    CurvatureAtPoint,
    Frame,
    MetricAtPoint,
    Plane,
    curvature,
    dual_connection,
    gram_schmidt,
    levi_civita,
    scalar_tau,
    sectional_K,
)
from .ambient import (
    AmbientModel,
    builtin_model,
    check_constant_type_curvature,
    evaluate_ambient,
    validate_quaternionic,
    validate_statistical,
)
from .subman import ImmersedSubmanifold, InducedData, classify, gauss_ricci_residuals, induced_data
from .chen import (
    InequalityReport,
    chen_first_report,
    delta22_report,
    equality_case_check,
    lemma_chen_delta22,
    lemma_chen_first,
    minimality_check,
    nonminimality_criterion,
)
from .specfile import load_spec, parse_spec, write_spec
