import dataclasses

import numpy as np
import pytest

from fuzzy_gdm import (
    DecisionMakerProfile,
    DecisionProblem,
    FuzzyPreferenceRelation,
    MultiplicativePreferenceRelation,
    UtilityVector,
    validate_problem,
)
from fuzzy_gdm.problem import ProblemValidationError, require_valid


def replace_dm(problem, index, **changes):
    dms = list(problem.dms)
    dms[index] = dataclasses.replace(dms[index], **changes)
    return DecisionProblem(problem.alternatives, problem.criteria, tuple(dms))


def test_example_has_no_errors(example):
    report = validate_problem(example)
    assert report.ok
    assert report.errors == []
    # only the rounded multiplicative relations leave reciprocity residue
    assert {v.dm for v in report.warnings} == {"J4", "J5"}
    assert all(v.condition.startswith("reciprocity") for v in report.warnings)


def test_example_shapes(example):
    assert (example.m, example.n, len(example.dms)) == (5, 4, 5)
    assert [dm.format for dm in example.dms] == [
        "utility", "fuzzy_preference", "fuzzy_preference", "multiplicative", "multiplicative"]
    assert example.dm_weights.sum() == pytest.approx(1.0)


def test_dm_weights_off_simplex(example):
    bad = replace_dm(example, 4, weight=0.05)  # total 0.9
    report = validate_problem(bad)
    assert len(report.errors) == 1
    err = report.errors[0]
    assert "sum to 1" in err.condition
    assert err.residual == pytest.approx(0.1)


def test_additive_reciprocity_residual(example):
    data = np.array(example.dms[1].preference.data)
    data[0, 1, 2] = 0.30  # pu_12; pl_21 stays 0.65
    bad = replace_dm(example, 1, preference=FuzzyPreferenceRelation(data))
    report = validate_problem(bad)
    assert report.ok
    hits = [v for v in report.warnings if v.dm == "J2"]
    assert len(hits) == 1
    assert hits[0].location == "P(1,2)/(2,1)"
    assert "pu_ij + pl_ji" in hits[0].condition
    assert hits[0].residual == pytest.approx(0.05)


def test_shape_mismatch_names_dm(example):
    bad = replace_dm(example, 0, preference=UtilityVector(example.dms[0].preference.data[:3]))
    report = validate_problem(bad)
    assert not report.ok
    assert [v.dm for v in report.errors] == ["J1"]
    with pytest.raises(ProblemValidationError):
        require_valid(bad)


def test_range_and_order_errors(example):
    sat = np.array(example.dms[2].satisfaction.data)
    sat[0, 0] = [0.5, 0.4, 0.6]
    sat[1, 1] = [0.9, 1.0, 1.2]
    from fuzzy_gdm import SatisfactionMatrix
    bad = replace_dm(example, 2, satisfaction=SatisfactionMatrix(sat))
    conds = {(v.location, v.condition) for v in validate_problem(bad).errors}
    assert ("S[1, 1]", "triple must satisfy lower <= mode <= upper") in conds
    assert ("S[2, 2]", "upper bound must be <= 1") in conds


def test_multiplicative_lower_bound_positive(example):
    data = np.array(example.dms[3].preference.data)
    data[0, 1, 0] = 0.0
    bad = replace_dm(example, 3, preference=MultiplicativePreferenceRelation(data))
    assert any("> 0" in v.condition for v in validate_problem(bad).errors)


def test_validation_is_pure(example):
    a = validate_problem(example)
    b = validate_problem(example)
    assert a.violations == b.violations


def test_reciprocal_closure_restores_reciprocity(example):
    closed = example.reconciled()
    report = validate_problem(closed)
    assert report.violations == []
    # upper triangles untouched
    for before, after in zip(example.dms, closed.dms):
        if before.format == "utility":
            continue
        iu = np.triu_indices(4, 1)
        assert np.array_equal(before.preference.data[iu], after.preference.data[iu])


def test_arrays_are_read_only(example):
    with pytest.raises(ValueError):
        example.dms[0].satisfaction.data[0, 0, 0] = 1.0


def test_profile_format_tag():
    u = UtilityVector([[0.1, 0.2, 0.3], [0.6, 0.7, 0.8]])
    from fuzzy_gdm import SatisfactionMatrix
    dm = DecisionMakerProfile("X", 1.0, u, SatisfactionMatrix([[[0.1, 0.2, 0.3]] * 2] * 2))
    assert dm.format == "utility"
    assert u.entry(1).as_tuple() == (0.6, 0.7, 0.8)
