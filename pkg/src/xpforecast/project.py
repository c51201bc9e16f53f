"""Chaining releases into a project forecast."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bn import NodeSummary, summarize_values
from .xp_model import (ModelParams, ReleaseInputs, ReleaseOutcome, ReleaseSpec, TeamProfile,
                       evaluate_release_at_means, simulate_release)

CURVE_INTERIOR_POINTS = 10


class InvalidPlan(ValueError):
    pass


@dataclass(frozen=True)
class ProjectPlan:
    releases: tuple[ReleaseSpec, ...]
    team: TeamProfile
    params: ModelParams = field(default_factory=ModelParams)
    deadline_days: float | None = None
    success_probability_threshold: float = 0.5
    name: str = "project"

    def __post_init__(self):
        object.__setattr__(self, "releases", tuple(self.releases))
        if not self.releases:
            raise InvalidPlan("a project plan needs at least one release")
        if self.deadline_days is not None and not self.deadline_days > 0:
            raise InvalidPlan("deadline_days must be > 0")
        if not 0 < self.success_probability_threshold <= 1:
            raise InvalidPlan("success_probability_threshold must lie in (0, 1]")


@dataclass(frozen=True)
class StatusCurvePoint:
    day: float
    completed_story_points: float


@dataclass(frozen=True)
class ProjectResult:
    per_release: tuple[ReleaseOutcome, ...]
    total_days_samples: np.ndarray
    carried_points: tuple[float, ...]
    curve: tuple[StatusCurvePoint, ...]
    success_probability: float | None
    n: int
    seed: int
    deterministic: bool = False

    @property
    def total_days(self) -> NodeSummary:
        """Summary of the per-draw sum of release durations."""
        return summarize_values(self.total_days_samples)

    @property
    def mean_coupled_days(self) -> float:
        """Sum of per-release mean durations."""
        return float(sum(r.mean("estimated_days") for r in self.per_release))

    @property
    def total_defected_story_points(self) -> float:
        return float(sum(r.mean("defected_story_points") for r in self.per_release))

    @property
    def total_kloc(self) -> float:
        return float(sum(r.mean("estimated_kloc") for r in self.per_release))


class Verdict(Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    NO_DEADLINE = "no_deadline"


def release_seed(seed: int, index: int) -> int:
    # distinct streams per release; node ids repeat across release networks
    return (seed * 1_000_003 + index * 0x9E3779B1) & 0xFFFFFFFFFFFFFFFF


def simulate_project(plan: ProjectPlan, n: int, seed: int, *, deterministic: bool = False,
                     workers: int = 1, backend: str | None = None) -> ProjectResult:
    """Simulate releases in order, passing mean outputs across each boundary.

    With ``deterministic`` every stochastic node is replaced by its mean and ``n``
    is forced to 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if deterministic:
        n = 1
    outcomes: list[ReleaseOutcome] = []
    carried: list[float] = []
    added, elapsed = 0.0, 0.0
    for k, spec in enumerate(plan.releases):
        inputs = ReleaseInputs(spec, plan.team, plan.params,
                               added_story_points=added, project_working_days=elapsed)
        if deterministic:
            outcome = evaluate_release_at_means(inputs)
        else:
            outcome = simulate_release(inputs, n, release_seed(seed, k),
                                       workers=workers, backend=backend)
        outcomes.append(outcome)
        elapsed += outcome.mean("estimated_days")
        added = max(0.0, outcome.mean("defected_story_points"))
        if k + 1 < len(plan.releases):
            carried.append(added)

    total = np.zeros(n)
    for outcome in outcomes:
        total = total + outcome.estimated_days
    total.flags.writeable = False

    prob = None
    if plan.deadline_days is not None:
        prob = float(np.mean(total <= plan.deadline_days))

    curve = _curve(outcomes)
    return ProjectResult(tuple(outcomes), total, tuple(carried), curve, prob, n, seed,
                         deterministic)


def _curve(outcomes) -> tuple[StatusCurvePoint, ...]:
    points = [StatusCurvePoint(0.0, 0.0)]
    start_day, done = 0.0, 0.0
    steps = CURVE_INTERIOR_POINTS + 1
    for outcome in outcomes:
        duration = outcome.mean("estimated_days")
        workload = outcome.workload
        for j in range(1, steps + 1):
            frac = j / steps
            day = start_day + duration * frac
            if day <= points[-1].day:
                continue
            points.append(StatusCurvePoint(day, done + workload * frac))
        start_day += duration
        done += workload
        # pin the boundary to the accumulated totals
        if points[-1].day == start_day:
            points[-1] = StatusCurvePoint(start_day, done)
    return tuple(points)


def status_curve(result: ProjectResult, plan: ProjectPlan | None = None) -> list[StatusCurvePoint]:
    """Mean cumulative completed story points against elapsed mean days."""
    return list(result.curve)


def assess(result: ProjectResult, plan: ProjectPlan) -> Verdict:
    if plan.deadline_days is None or result.success_probability is None:
        return Verdict.NO_DEADLINE
    if result.success_probability >= plan.success_probability_threshold:
        return Verdict.SUCCESS
    return Verdict.FAILURE
