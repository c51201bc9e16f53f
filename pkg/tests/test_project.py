import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracle
from xpforecast.bn import Point
from xpforecast.project import (CURVE_INTERIOR_POINTS, InvalidPlan, ProjectPlan, Verdict, assess,
                                simulate_project, status_curve)
from xpforecast.xp_model import (ModelParams, PracticeLevel as L, PracticeUsage, ReleaseSpec,
                                 TeamProfile)

HALF = PracticeUsage(L.ABOUT_HALF, L.ABOUT_HALF, L.NEVER)
POINT_PARAMS = ModelParams().at_nominal_means()


def repo_plan(**kw):
    return ProjectPlan((ReleaseSpec(15, 15.0, HALF), ReleaseSpec(14, 15.0, HALF)),
                       TeamProfile(4), **kw)


def test_single_release_point_distributions():
    plan = ProjectPlan((ReleaseSpec(15, 15.0, HALF),), TeamProfile(4), POINT_PARAMS)
    result = simulate_project(plan, 64, seed=1)
    assert result.carried_points == ()
    assert result.total_days.mean == pytest.approx(12.67, abs=5e-3)
    assert np.all(result.total_days_samples == result.total_days_samples[0])


def test_no_defects_no_carry():
    p = ModelParams(defect_injection_ratio=Point(0.0))
    spec = ReleaseSpec(10, 3.0, HALF)
    result = simulate_project(ProjectPlan((spec, spec), TeamProfile(2), p), 1000, seed=4)
    assert result.carried_points == (0.0,)
    assert result.per_release[1].workload == 30.0


def test_deadline_above_deterministic_total():
    det = simulate_project(repo_plan(params=POINT_PARAMS), 1, 0, deterministic=True)
    plan = repo_plan(params=POINT_PARAMS, deadline_days=det.mean_coupled_days + 1)
    result = simulate_project(plan, 500, seed=2)
    assert result.success_probability == 1.0
    assert assess(result, plan) is Verdict.SUCCESS


def test_point_chain_equals_oracle():
    result = simulate_project(repo_plan(params=POINT_PARAMS), 10, seed=3)
    chain = oracle.project_chain([(15, 15, "about_half", "about_half", "never"),
                                  (14, 15, "about_half", "about_half", "never")], 4)
    for outcome, ref in zip(result.per_release, chain):
        assert outcome.mean("estimated_days") == pytest.approx(ref["estimated_days"], rel=1e-12)
    assert result.mean_coupled_days == pytest.approx(
        sum(r["estimated_days"] for r in chain), rel=1e-12)
    assert result.carried_points[0] == pytest.approx(chain[0]["defected_story_points"], rel=1e-12)


def test_curve_two_releases():
    result = simulate_project(repo_plan(params=POINT_PARAMS), 1, 0, deterministic=True)
    curve = status_curve(result, repo_plan())
    assert len(curve) == 1 + 2 * (CURVE_INTERIOR_POINTS + 1)
    assert curve[0].day == 0.0 and curve[0].completed_story_points == 0.0
    assert curve[-1].completed_story_points == pytest.approx(467.4, abs=0.05)


def test_curve_single_release_linear():
    plan = ProjectPlan((ReleaseSpec(15, 15.0, HALF),), TeamProfile(4), POINT_PARAMS)
    curve = simulate_project(plan, 1, 0, deterministic=True).curve
    assert curve[-1].day == pytest.approx(12.67, abs=5e-3)
    assert curve[-1].completed_story_points == 225.0
    slopes = [(b.completed_story_points - a.completed_story_points) / (b.day - a.day)
              for a, b in zip(curve, curve[1:])]
    assert np.allclose(slopes, slopes[0], rtol=1e-9)


def test_zero_workload_release_is_flat():
    p = ModelParams(defect_injection_ratio=Point(0.0))
    plan = ProjectPlan((ReleaseSpec(4, 5.0, HALF), ReleaseSpec(0, 5.0, HALF)), TeamProfile(2), p)
    result = simulate_project(plan, 200, seed=1)
    assert result.per_release[1].mean("estimated_days") == 0.0
    assert result.curve[-1].completed_story_points == 20.0
    days = [pt.day for pt in result.curve]
    assert days == sorted(set(days))


def test_assess():
    plan = repo_plan(deadline_days=30.0)
    result = simulate_project(plan, 2000, seed=5)
    verdict = assess(result, plan)
    expected = Verdict.SUCCESS if result.success_probability >= 0.5 else Verdict.FAILURE
    assert verdict is expected
    no_deadline = repo_plan()
    assert assess(simulate_project(no_deadline, 10, seed=5), no_deadline) is Verdict.NO_DEADLINE


def test_assess_thresholds():
    from dataclasses import replace
    plan = repo_plan(deadline_days=30.0)
    result = simulate_project(plan, 100, seed=5)
    assert assess(replace(result, success_probability=0.9), plan) is Verdict.SUCCESS
    assert assess(replace(result, success_probability=0.4), plan) is Verdict.FAILURE


def test_invalid_plans():
    with pytest.raises(InvalidPlan):
        ProjectPlan((), TeamProfile(3))
    with pytest.raises(InvalidPlan):
        repo_plan(deadline_days=0.0)
    with pytest.raises(InvalidPlan):
        repo_plan(success_probability_threshold=0.0)


def test_deterministic_mode_uses_truncated_means():
    result = simulate_project(repo_plan(), 1000, seed=1, deterministic=True)
    assert result.n == 1
    assert result.per_release[0].mean("estimated_days") == pytest.approx(12.67, abs=5e-3)


def test_workers_do_not_change_result():
    a = simulate_project(repo_plan(), 6000, seed=11, workers=1)
    b = simulate_project(repo_plan(), 6000, seed=11, workers=4)
    np.testing.assert_array_equal(a.total_days_samples, b.total_days_samples)
    assert a.carried_points == b.carried_points


def test_releases_use_distinct_streams():
    result = simulate_project(repo_plan(), 500, seed=1)
    a, b = result.per_release
    assert not np.array_equal(a.samples["dev_initial_skills"], b.samples["dev_initial_skills"])


usage_st = st.builds(PracticeUsage, st.sampled_from(list(L)), st.sampled_from(list(L)),
                     st.sampled_from(list(L)))
plans = st.builds(
    lambda rels, size: ProjectPlan(tuple(rels), TeamProfile(size)),
    st.lists(st.builds(ReleaseSpec, st.integers(0, 20), st.floats(1, 15), usage_st),
             min_size=1, max_size=4),
    st.integers(1, 8),
)


@settings(max_examples=25, deadline=None)
@given(plans, st.integers(0, 2**32))
def test_project_invariants(plan, seed):
    result = simulate_project(plan, 400, seed)
    total = np.zeros(400)
    for outcome in result.per_release:
        total = total + outcome.estimated_days
    np.testing.assert_array_equal(result.total_days_samples, total)
    assert all(c >= 0 for c in result.carried_points)
    assert len(result.carried_points) == len(plan.releases) - 1
    # curve closure
    expected_work, carried = 0.0, [0.0, *result.carried_points]
    for spec, c in zip(plan.releases, carried):
        expected_work += spec.planned_user_stories * spec.avg_story_points_per_story + c
    expected_day = 0.0
    for outcome in result.per_release:
        expected_day += outcome.mean("estimated_days")
    curve = result.curve
    assert curve[-1].completed_story_points == expected_work
    assert curve[-1].day == expected_day
    for a, b in zip(curve, curve[1:]):
        assert b.day > a.day
        assert b.completed_story_points >= a.completed_story_points


@settings(max_examples=15, deadline=None)
@given(st.floats(1, 200), st.floats(0, 100), st.integers(0, 2**32))
def test_monotone_deadline_response(deadline, extra, seed):
    p1 = simulate_project(repo_plan(deadline_days=deadline), 300, seed).success_probability
    p2 = simulate_project(repo_plan(deadline_days=deadline + extra), 300,
                          seed).success_probability
    assert p2 >= p1
