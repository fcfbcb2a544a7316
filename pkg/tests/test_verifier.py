"""Tests for identity checks, bound verification, sweeps and falsification runs."""

import math

import pytest

from ineqcheck.config import ToleranceSpec
from ineqcheck.exceptions import DomainError, FunctionNotFoundError, UsageError
from ineqcheck.function_catalog import (
    CONVEX,
    P_CLASS,
    Q_CLASS,
    QUASI_CONVEX,
    ClassKind,
    ConvexityClass,
    FunctionSpec,
    builtin_catalog,
    catalog_lookup,
)
from ineqcheck.quadrature import IntegralProblem
from ineqcheck.special_fn import beta
from ineqcheck.verifier import (
    ProblemTemplate,
    SweepConfig,
    Verdict,
    check_identity,
    falsify,
    sweep,
    symmetric_lhs_check,
    verify,
)
from tests.conftest import CONVEX_IDS, E, MONOTONE_IDS, SCALE_FREE_QUADRATURE


def unit_problem(spec, p=1.0, q=1.0):
    return IntegralProblem(0.0, 1.0, p, q, spec)


# ---------------------------------------------------------------------------
# check_identity
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("fn, c", [("const1", 1.0), ("const2", 2.0)])
@pytest.mark.parametrize("a, b, p, q", [(0.0, 1.0, 1.0, 1.0), (1.0, 3.0, 0.5, 2.0), (0.5, 2.5, 3.5, 0.5)])
def test_identity_for_constants(fn, c, a, b, p, q):
    report = check_identity(IntegralProblem(a, b, p, q, catalog_lookup(fn, a, b)))
    expected = c * c * (b - a) ** (p + q + 1) * beta(p + 1, q + 1)
    assert report.verdict is Verdict.HOLDS
    assert report.formula_id == "lem2.1"
    assert report.lhs == pytest.approx(expected, rel=1e-9)
    assert report.rhs == pytest.approx(expected, rel=1e-9)


def test_identity_exp_on_shifted_interval():
    report = check_identity(IntegralProblem(1.0, 3.0, 1.0, 2.0, catalog_lookup("exp", 1.0, 3.0)))
    assert report.verdict is Verdict.HOLDS


def test_identity_linear_function(catalog):
    report = check_identity(unit_problem(catalog["x"]))
    assert report.verdict is Verdict.HOLDS
    assert report.lhs == pytest.approx(1 / 30, abs=1e-12)
    assert report.rhs == pytest.approx(1 / 30, abs=1e-12)


def test_identity_non_convergence_is_inconclusive(catalog):
    tight = ToleranceSpec(atol=1e-15, rtol=1e-15, max_subdivisions=1)
    report = check_identity(unit_problem(catalog["pow-0.5"]), quad_tol=tight)
    assert report.verdict is Verdict.INCONCLUSIVE


@pytest.mark.parametrize("a, b", [(0.0, 1.0), (1.0, 3.0), (0.5, 2.5)])
def test_identity_suite(a, b):
    exponents = (0.5, 1.0, 2.0, 3.5)
    for spec in builtin_catalog(a, b):
        for p in exponents:
            for q in exponents:
                report = check_identity(IntegralProblem(a, b, p, q, spec))
                assert report.verdict is Verdict.HOLDS, (spec.id, a, b, p, q, report)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_exp_convex(catalog):
    report = verify(catalog["exp"], CONVEX, unit_problem(catalog["exp"]))
    assert report.verdict is Verdict.HOLDS
    assert report.formula_id == "cor2.3"
    assert report.lhs == pytest.approx(E / 6, abs=1e-9)
    assert report.rhs == pytest.approx((1 + E**2) / 20 + E / 15, abs=1e-9)
    assert report.ratio == pytest.approx(0.754235, abs=1e-6)
    assert report.slack == pytest.approx(report.rhs - report.lhs)
    assert report.certifications[0].certified
    assert len(report.beta_terms) == 3


def test_verify_square_root_half_convex(catalog):
    spec = catalog["pow-0.5"]
    report = verify(spec, ConvexityClass.s_convex(0.5), unit_problem(spec))
    assert report.verdict is Verdict.HOLDS
    assert report.formula_id == "cor2.1"
    assert report.lhs == pytest.approx(3 * math.pi / 128, abs=1e-9)
    assert report.rhs == pytest.approx(1 / 12, abs=1e-12)
    assert report.ratio == pytest.approx(0.88357, abs=1e-5)
    assert report.problem["s"] == 0.5


def test_verify_s_given_separately(catalog):
    spec = catalog["pow-0.5"]
    report = verify(spec, ConvexityClass(ClassKind.S_CONVEX), unit_problem(spec), s=0.5)
    assert report.class_label == "s-convex(s=0.5)"


def test_verify_constant_q_class(catalog):
    spec = catalog["const1"]
    report = verify(spec, Q_CLASS, unit_problem(spec, 2.0, 2.0))
    assert report.verdict is Verdict.HOLDS
    assert report.formula_id == "cor2.6"
    assert report.lhs == pytest.approx(1 / 30, abs=1e-12)
    assert report.rhs == pytest.approx(1.0, abs=1e-12)


def test_verify_refuted_certification_is_inconclusive(catalog):
    spec = catalog["sin-pi"]
    report = verify(spec, P_CLASS, unit_problem(spec))
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.certifications[0].witness == (0.0, 1.0, 0.5)
    assert "witness" in report.note
    # Both sides are still reported: f(a) = f(b) = 0 makes the bound zero.
    assert report.rhs == 0.0
    assert report.lhs > 0.0


def test_verify_names_a_refuted_declaration():
    spec = FunctionSpec("mislabelled", lambda x: x**0.5, (0.0, 1.0), frozenset({CONVEX}))
    report = verify(spec, CONVEX, unit_problem(spec))
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.note.startswith("mislabelled declares convex but the grid check refutes it")
    other = verify(spec, QUASI_CONVEX, unit_problem(spec))
    assert other.verdict is Verdict.HOLDS
    plain = verify(catalog_lookup("sin-pi"), P_CLASS, unit_problem(catalog_lookup("sin-pi")))
    assert plain.note.startswith("sin-pi is not certified p")


def test_verify_negative_convex_function_is_inconclusive():
    spec = FunctionSpec("neg-lin", lambda x: x - 0.5, (0.0, 1.0))
    report = verify(spec, CONVEX, unit_problem(spec))
    assert report.verdict is Verdict.INCONCLUSIVE
    # Convexity holds; only the sign hypothesis of the bound fails.
    assert report.certifications[0].certified
    assert not report.nonnegativity.nonnegative
    assert report.nonnegativity.argmin == 0.0
    assert "negative at x=0.0" in report.note
    assert math.isnan(report.rhs)


def test_verify_records_sign_check(catalog):
    report = verify(catalog["exp"], CONVEX, unit_problem(catalog["exp"]))
    assert report.nonnegativity.nonnegative
    assert report.nonnegativity.min_value == pytest.approx(1.0)


def test_verify_q_class_needs_exponents_above_one(catalog):
    with pytest.raises(DomainError):
        verify(catalog["const1"], Q_CLASS, unit_problem(catalog["const1"]))


def test_verify_s_conflicts(catalog):
    with pytest.raises(UsageError):
        verify(catalog["exp"], CONVEX, unit_problem(catalog["exp"]), s=0.5)
    with pytest.raises(UsageError):
        verify(catalog["exp"], ConvexityClass(ClassKind.S_CONVEX), unit_problem(catalog["exp"]))


def test_verify_rejects_negative_interval():
    spec = catalog_lookup("exp")
    with pytest.raises(DomainError):
        verify(spec, CONVEX, IntegralProblem(-1.0, 1.0, 1.0, 1.0, spec))


def test_verify_monotone_quasi_label(catalog):
    report = verify(catalog["exp-neg"], QUASI_CONVEX, unit_problem(catalog["exp-neg"]))
    assert report.verdict is Verdict.HOLDS
    assert report.formula_id == "cor2.5"


def test_constant_attains_quasi_bound(catalog):
    # f constant gives f(x)f(a+b-x) = max(f(a), f(b))^2 everywhere.
    report = verify(catalog["const2"], QUASI_CONVEX, unit_problem(catalog["const2"], 0.5, 2.5))
    assert report.verdict is Verdict.HOLDS
    assert report.ratio <= 1 + 1e-9
    assert report.ratio == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("c", [0.25, 3.7, 10.0])
@pytest.mark.parametrize("fn, cls", [("exp", CONVEX), ("logistic", P_CLASS), ("pow-0.5", ConvexityClass.s_convex(0.5))])
def test_ratio_is_scale_invariant(catalog, fn, cls, c):
    spec = catalog[fn]
    base = verify(spec, cls, unit_problem(spec, 1.5, 0.75), quad_tol=SCALE_FREE_QUADRATURE)
    scaled_spec = spec.scaled(c)
    scaled = verify(scaled_spec, cls, unit_problem(scaled_spec, 1.5, 0.75), quad_tol=SCALE_FREE_QUADRATURE)
    assert scaled.verdict is base.verdict
    assert scaled.ratio == pytest.approx(base.ratio, rel=1e-10)


def test_symmetric_lhs_check(catalog):
    report = symmetric_lhs_check(catalog["abs-centered"], unit_problem(catalog["abs-centered"], 2.0, 0.5))
    assert report.verdict is Verdict.HOLDS
    with pytest.raises(UsageError):
        symmetric_lhs_check(catalog["exp"], unit_problem(catalog["exp"]))


# ---------------------------------------------------------------------------
# Theorem suites over the catalog
# ---------------------------------------------------------------------------


def test_s_convex_suite_on_powers():
    for s in (0.25, 0.5, 0.75):
        spec = catalog_lookup(f"pow-{s}")
        for p, q in [(1.0, 1.0), (0.5, 2.0), (3.0, 1.5)]:
            report = verify(spec, ConvexityClass.s_convex(s), unit_problem(spec, p, q))
            assert report.verdict is Verdict.HOLDS, report
            assert report.ratio <= 1.0


@pytest.mark.parametrize("fn", CONVEX_IDS)
@pytest.mark.parametrize("cls", [CONVEX, P_CLASS], ids=["convex", "p"])
def test_convex_members_hold(fn, cls):
    spec = catalog_lookup(fn, 0.5, 2.5)
    report = verify(spec, cls, IntegralProblem(0.5, 2.5, 1.5, 0.5, spec))
    assert report.verdict is Verdict.HOLDS, report
    assert report.ratio <= 1.0 + 1e-9


@pytest.mark.parametrize("fn", MONOTONE_IDS)
def test_monotone_members_hold_quasi(fn):
    spec = catalog_lookup(fn)
    report = verify(spec, QUASI_CONVEX, unit_problem(spec, 2.0, 1.0))
    assert report.verdict is Verdict.HOLDS, report
    assert report.formula_id == "cor2.5"


@pytest.mark.parametrize("fn", ["const1", "x", "x2", "exp", "exp-neg", "abs-centered", "logistic", "pow-0.5"])
def test_q_class_members_hold(fn):
    spec = catalog_lookup(fn)
    for p in (2.0, 2.5, 3.0):
        for q in (2.0, 2.5, 3.0):
            report = verify(spec, Q_CLASS, unit_problem(spec, p, q))
            assert report.verdict is Verdict.HOLDS, report


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def test_sweep_single_point_matches_verify(catalog):
    reports = sweep(SweepConfig(functions=["exp"]))
    assert len(reports) == 1
    assert reports[0] == verify(catalog["exp"], CONVEX, unit_problem(catalog["exp"]))


def test_sweep_linear_function_diagonal():
    reports = sweep(SweepConfig(functions=["x"], p_grid=[1.0, 2.0], diagonal=True))
    assert [r.verdict for r in reports] == [Verdict.HOLDS, Verdict.HOLDS]
    assert [(r.problem["p"], r.problem["q"]) for r in reports] == [(1.0, 1.0), (2.0, 2.0)]
    assert reports[0].lhs == pytest.approx(1 / 30, abs=1e-12)
    assert reports[0].rhs == pytest.approx(1 / 20, abs=1e-15)


def test_sweep_order_is_lexicographic_and_worker_independent():
    config = SweepConfig(
        functions=["x", "exp"],
        classes=[ClassKind.S_CONVEX, ClassKind.P],
        p_grid=[1.0, 2.0],
        q_grid=[0.5, 1.0],
        s_grid=[0.25, 0.75],
    )
    serial = sweep(config)
    parallel = sweep(config, workers=4)
    assert serial == parallel
    assert len(serial) == 2 * (4 * 2 + 4)
    keys = [(r.problem["function"], r.class_label, r.problem["p"], r.problem["q"]) for r in serial[:3]]
    assert keys == [
        ("x", "s-convex(s=0.25)", 1.0, 0.5),
        ("x", "s-convex(s=0.75)", 1.0, 0.5),
        ("x", "s-convex(s=0.25)", 1.0, 1.0),
    ]


def test_sweep_records_failures_as_inconclusive():
    reports = sweep(SweepConfig(functions=["const1"], classes=[ClassKind.Q], p_grid=[1.0, 2.0], q_grid=[2.0]))
    assert [r.verdict for r in reports] == [Verdict.INCONCLUSIVE, Verdict.HOLDS]
    assert "p > 1" in reports[0].note
    assert math.isnan(reports[0].lhs)


def test_sweep_config_errors():
    with pytest.raises(UsageError):
        sweep(SweepConfig(functions=[]))
    with pytest.raises(FunctionNotFoundError):
        sweep(SweepConfig(functions=["nope"]))
    with pytest.raises(DomainError):
        sweep(SweepConfig(functions=["x"], p_grid=[-1.0]))


# ---------------------------------------------------------------------------
# falsify
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "cls, seed",
    [
        (CONVEX, 42),
        (QUASI_CONVEX, 3),
        (P_CLASS, 3),
        (Q_CLASS, 7),
        (ConvexityClass(ClassKind.S_CONVEX), 3),
        (ConvexityClass.s_convex(0.3), 3),
    ],
    ids=["convex", "quasi", "p", "q", "s-convex-random-s", "s-convex-fixed-s"],
)
def test_falsify_finds_no_violation(cls, seed):
    summary = falsify(cls, trials=200, seed=seed, keep_reports=True)
    assert summary.violated == 0
    assert summary.holds + summary.inconclusive == 200
    assert summary.holds > 0
    assert summary.min_slack is not None and summary.min_slack > 0
    assert min(r.slack for r in summary.reports if r.verdict is Verdict.HOLDS) == summary.min_slack


def test_falsify_is_reproducible():
    first = falsify(P_CLASS, trials=5, seed=123, keep_reports=True)
    second = falsify(P_CLASS, trials=5, seed=123, keep_reports=True, workers=3)
    assert first == second
    assert len(first.reports) == 5
    assert falsify(P_CLASS, trials=1, seed=9, keep_reports=True) == falsify(
        P_CLASS, trials=1, seed=9, keep_reports=True
    )


def test_falsify_rejects_bad_input():
    with pytest.raises(UsageError):
        falsify(CONVEX, trials=0)
    with pytest.raises(DomainError):
        falsify(Q_CLASS, ProblemTemplate(), trials=1)


def test_problem_template_defaults():
    assert ProblemTemplate.for_class(ClassKind.Q).p_range == (1.1, 4.0)
    assert ProblemTemplate.for_class(ClassKind.CONVEX).p_range == (0.25, 4.0)
