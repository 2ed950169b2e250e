import json

import numpy as np
import pytest

from circbeta.verify import (
    CHECK_GROUPS,
    CheckReport,
    _confluent_circular_det,
    _confluent_real_det,
    _confluent_reciprocal_det,
    _orientation_sign,
    _stratified_points,
    check_conditional_densities,
    check_det_identities,
    check_in_recurrence,
    check_interlace_relations,
    check_jacobians,
    check_product_identities,
    check_resolvent,
    rel_err,
    run_suite,
)


def test_report_invariant_and_serialization():
    r = CheckReport.from_errors("demo", [1e-10, 3e-9], 1e-8, n=4)
    assert r.passed and r.trials == 2 and r.max_rel_error == pytest.approx(3e-9)
    doc = json.dumps(r.to_dict())
    assert json.loads(doc)["check"] == "demo"
    bad = CheckReport.from_errors("demo", [1e-7], 1e-8)
    assert not bad.passed


def test_rel_err_scales():
    assert rel_err(1.0, 1.0) == 0.0
    assert rel_err(2.0, 1.0) == pytest.approx(0.5)
    assert rel_err(0.0, 0.0) == 0.0


def test_orientation_sign_brute_force():
    # the closed forms hold up to this sign under the natural block reading
    rng = np.random.default_rng(0)
    for n in range(1, 6):
        lam = _stratified_points(n, rng, -2.0, 2.0)[::-1]
        rhs = np.prod([(lam[k] - lam[j]) ** 4 for j in range(n) for k in range(j + 1, n)])
        ratio = _confluent_real_det(lam) / rhs
        assert ratio == pytest.approx(_orientation_sign(n), rel=1e-8)


def test_resolvent_checks_pass():
    for r in check_resolvent(n=4, trials=10, seed=1):
        assert r.passed, r


def test_product_identity_checks_pass():
    for r in check_product_identities(n=5, trials=10, seed=2):
        assert r.passed, r


def test_det_identity_checks_pass():
    for r in check_det_identities(n=6, trials=25, seed=3):
        assert r.passed, r


@pytest.mark.parametrize(
    "case", ["tridiag", "unitary", "real_orthogonal", "perturbation_phase"]
)
def test_jacobian_checks_pass(case):
    for n in (2, 3):
        r = check_jacobians(case, n, trials=4, seed=4)
        assert r.passed, r


def test_jacobian_unknown_case():
    with pytest.raises(ValueError):
        check_jacobians("banana", 2, trials=1, seed=0)


def test_interlace_checks_pass():
    for r in check_interlace_relations(n=4, trials=50, seed=5):
        assert r.passed, r


def test_in_recurrence_checks_pass():
    assert check_in_recurrence(2.0, 1.0).passed
    assert check_in_recurrence(1.5, 0.5).passed
    with pytest.raises(ValueError):
        check_in_recurrence(1.0, 1.0)  # not normalizable at the second order


def test_conditional_density_dispatch():
    with pytest.raises(ValueError):
        check_conditional_densities("unknown_family", seed=0)
    reports = check_conditional_densities("dixon_anderson", seed=0, m_samples=20000)
    assert all(r.passed for r in reports)


def test_reports_deterministic():
    a = [r.to_dict() for r in check_det_identities(n=3, trials=5, seed=9)]
    b = [r.to_dict() for r in check_det_identities(n=3, trials=5, seed=9)]
    assert a == b


def test_run_suite_rejects_unknown_group():
    with pytest.raises(KeyError):
        run_suite(["not_a_group"], seed=0)
    assert set(CHECK_GROUPS) == {
        "resolvent",
        "product_identities",
        "det_identities",
        "jacobians",
        "interlace_relations",
        "in_recurrence",
        "conditional_densities",
    }


def test_determinant_builders_size_one():
    lam = np.array([0.7])
    assert _confluent_real_det(lam) == pytest.approx(1.0)
    z = np.exp(0.4j)
    assert _confluent_circular_det(np.array([z])) == pytest.approx(z)
    assert _confluent_reciprocal_det(np.array([z])) == pytest.approx(z - 1 / z)
