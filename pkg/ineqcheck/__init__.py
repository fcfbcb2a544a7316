"""Numerical verification of weighted-product integral inequalities for convexity classes."""

from ineqcheck.bounds import (
    BetaTerm,
    BoundValue,
    EndpointData,
    bound_convex,
    bound_for_class,
    bound_p_class,
    bound_q_class,
    bound_quasi_convex,
    bound_s_convex,
)
from ineqcheck.config import ToleranceSpec
from ineqcheck.function_catalog import (
    CertificationResult,
    ClassKind,
    ConvexityClass,
    FunctionSpec,
    GeneratorShape,
    GridSpec,
    SignCheck,
    builtin_catalog,
    catalog_lookup,
    certify,
    check_nonnegative,
    generate,
)
from ineqcheck.quadrature import (
    IntegralProblem,
    QuadratureResult,
    integrate_t_form,
    integrate_weighted,
)
from ineqcheck.special_fn import beta, beta_exact, log_beta, log_gamma
from ineqcheck.verifier import (
    FalsificationSummary,
    ProblemTemplate,
    SweepConfig,
    VerificationReport,
    Verdict,
    check_identity,
    falsify,
    sweep,
    verify,
)

__version__ = "0.1.0"
