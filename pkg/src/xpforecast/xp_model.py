"""One XP release as a network: team velocity and defected story points.

The arithmetic helpers accept floats or numpy arrays, so the same code backs the
network operations (vectorised over draws) and hand evaluation.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .bn import (Distribution, Network, NodeSummary, NumericError, Point, SampleSet,
                 TruncatedNormal, Normal, Uniform, evaluate_at_means, nominal_mean,
                 register_op, sample, summarize_values)


class PracticeLevel(IntEnum):
    NEVER = 0
    OCCASIONALLY = 1
    ABOUT_HALF = 2
    FREQUENTLY = 3
    ALMOST_USED = 4

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "PracticeLevel":
        try:
            return cls[text.upper()]
        except KeyError:
            raise ValueError(f"unknown practice level {text!r}") from None


_LEVEL_FRACTIONS = {
    PracticeLevel.NEVER: 0.0,
    PracticeLevel.OCCASIONALLY: 0.25,
    PracticeLevel.ABOUT_HALF: 0.5,
    PracticeLevel.FREQUENTLY: 0.75,
    PracticeLevel.ALMOST_USED: 1.0,
}


def level_to_fraction(level: PracticeLevel) -> float:
    return _LEVEL_FRACTIONS[PracticeLevel(level)]


@dataclass(frozen=True)
class PracticeUsage:
    pair_programming: PracticeLevel = PracticeLevel.NEVER
    tdd: PracticeLevel = PracticeLevel.NEVER
    onsite_customer: PracticeLevel = PracticeLevel.NEVER


@dataclass(frozen=True)
class ReleaseSpec:
    planned_user_stories: int
    avg_story_points_per_story: float
    usage: PracticeUsage = field(default_factory=PracticeUsage)

    def __post_init__(self):
        if self.planned_user_stories < 0:
            raise ValueError("planned_user_stories must be >= 0")
        if not self.avg_story_points_per_story > 0:
            raise ValueError("avg_story_points_per_story must be > 0")


@dataclass(frozen=True)
class TeamProfile:
    team_size: int

    def __post_init__(self):
        if self.team_size < 1:
            raise ValueError("team_size must be >= 1")


DISTRIBUTION_FIELDS = ("dev_initial_skills", "dev_initial_velocity", "pp_velocity_impact",
                       "tdd_velocity_impact", "dev_productivity", "defect_injection_ratio")


@dataclass(frozen=True)
class ModelParams:
    dev_initial_skills: Distribution = Uniform(1.0, 10.0)
    dev_initial_velocity: Distribution = TruncatedNormal(4.0, 1.0, 0.1, math.inf)
    learning_coefficient: float = 0.009
    skill_log_base: float = 10.0
    pp_velocity_impact: Distribution = Normal(23.0, 20.0)
    tdd_velocity_impact: Distribution = Normal(-32.0, 42.0)
    dev_productivity: Distribution = TruncatedNormal(40.0, 20.0, 1.0, math.inf)
    defect_injection_ratio: Distribution = TruncatedNormal(20.0, 5.0, 0.0, math.inf)
    osc_defect_reduction: float = 0.8
    tdd_defect_reduction: float = 0.4
    defect_to_story_point_ratio: float = 1.0
    velocity_floor: float = 0.05

    def __post_init__(self):
        if not self.learning_coefficient > 0:
            raise ValueError("learning_coefficient must be > 0")
        if not self.skill_log_base > 1:
            raise ValueError("skill_log_base must be > 1")
        for name in ("osc_defect_reduction", "tdd_defect_reduction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not self.velocity_floor > 0:
            raise ValueError("velocity_floor must be > 0")
        if not self.defect_to_story_point_ratio > 0:
            raise ValueError("defect_to_story_point_ratio must be > 0")

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def at_nominal_means(self) -> "ModelParams":
        """Every distribution collapsed to a Point at its location parameter."""
        return self.replace(**{f: Point(nominal_mean(getattr(self, f)))
                               for f in DISTRIBUTION_FIELDS})


# -- release arithmetic ---------------------------------------------------------

def dev_skills(initial_skills, project_working_days, params: ModelParams):
    arg = initial_skills + project_working_days * params.learning_coefficient
    if np.any(np.asarray(arg) <= 0):
        raise NumericError("dev_skills", None, "non-positive logarithm argument")
    return np.log(arg) / math.log(params.skill_log_base)


def team_velocity(team: TeamProfile, usage: PracticeUsage, dev_velocity, pp_impact,
                  tdd_impact, params: ModelParams):
    initial = team.team_size * dev_velocity
    return _team_velocity(initial, pp_impact, tdd_impact,
                          pp_frac=level_to_fraction(usage.pair_programming),
                          tdd_frac=level_to_fraction(usage.tdd),
                          floor=params.velocity_floor)


def _team_velocity(initial, pp_impact, tdd_impact, *, pp_frac, tdd_frac, floor):
    v = initial * (1.0 + pp_frac * pp_impact / 100.0) * (1.0 + tdd_frac * tdd_impact / 100.0)
    return np.maximum(floor, v)


def release_workload(spec: ReleaseSpec, added_story_points: float) -> float:
    return spec.planned_user_stories * spec.avg_story_points_per_story + added_story_points


def estimated_release_days(workload, velocity):
    return workload / velocity


def estimated_release_kloc(productivity, team: TeamProfile, days):
    return productivity * team.team_size * days / 1000.0


def defected_story_points(kloc, injection_ratio, usage: PracticeUsage, params: ModelParams):
    rate = kloc * injection_ratio
    return _defected_points(rate,
                            osc_frac=level_to_fraction(usage.onsite_customer),
                            tdd_frac=level_to_fraction(usage.tdd),
                            osc_reduction=params.osc_defect_reduction,
                            tdd_reduction=params.tdd_defect_reduction,
                            ratio=params.defect_to_story_point_ratio)


def _defected_points(rate, *, osc_frac, tdd_frac, osc_reduction, tdd_reduction, ratio):
    return (rate * (1.0 - osc_reduction * osc_frac) * (1.0 - tdd_reduction * tdd_frac)
            * ratio)


@register_op("xp.dev_skills", 1)
def _op_dev_skills(initial_skills, *, project_working_days, learning_coefficient, log_base):
    with np.errstate(divide="ignore", invalid="ignore"):
        return (np.log(initial_skills + project_working_days * learning_coefficient)
                / math.log(log_base))


register_op("xp.team_velocity", 3)(_team_velocity)
register_op("xp.defected_story_points", 1)(_defected_points)


@register_op("xp.estimated_kloc", 2)
def _op_kloc(productivity, days, *, team_size):
    return productivity * team_size * days / 1000.0


# -- network --------------------------------------------------------------------

STOCHASTIC_NODES = DISTRIBUTION_FIELDS
DETERMINISTIC_NODES = ("dev_skills", "dev_velocity", "team_initial_velocity", "team_velocity",
                       "workload", "estimated_days", "estimated_kloc", "defect_rate",
                       "defected_story_points")


@dataclass(frozen=True)
class ReleaseInputs:
    spec: ReleaseSpec
    team: TeamProfile
    params: ModelParams = field(default_factory=ModelParams)
    added_story_points: float = 0.0
    project_working_days: float = 0.0

    def __post_init__(self):
        if self.added_story_points < 0:
            raise ValueError("added_story_points must be >= 0")
        if self.project_working_days < 0:
            raise ValueError("project_working_days must be >= 0")


def build_release_network(inputs: ReleaseInputs) -> Network:
    p, usage = inputs.params, inputs.spec.usage
    net = Network()
    for name in STOCHASTIC_NODES:
        net.stochastic(name, getattr(p, name))

    # velocity subnet
    net.deterministic("dev_skills", "xp.dev_skills", ["dev_initial_skills"],
                      project_working_days=float(inputs.project_working_days),
                      learning_coefficient=p.learning_coefficient, log_base=p.skill_log_base)
    net.deterministic("dev_velocity", "sum", ["dev_initial_velocity", "dev_skills"])
    net.deterministic("team_initial_velocity", "scale", ["dev_velocity"],
                      factor=float(inputs.team.team_size))
    net.deterministic("team_velocity", "xp.team_velocity",
                      ["team_initial_velocity", "pp_velocity_impact", "tdd_velocity_impact"],
                      pp_frac=level_to_fraction(usage.pair_programming),
                      tdd_frac=level_to_fraction(usage.tdd), floor=p.velocity_floor)

    net.deterministic("workload", "constant", [],
                      value=float(release_workload(inputs.spec, inputs.added_story_points)))
    net.deterministic("estimated_days", "quotient", ["workload", "team_velocity"])

    # defect subnet
    net.deterministic("estimated_kloc", "xp.estimated_kloc", ["dev_productivity", "estimated_days"],
                      team_size=float(inputs.team.team_size))
    net.deterministic("defect_rate", "product", ["estimated_kloc", "defect_injection_ratio"])
    net.deterministic("defected_story_points", "xp.defected_story_points", ["defect_rate"],
                      osc_frac=level_to_fraction(usage.onsite_customer),
                      tdd_frac=level_to_fraction(usage.tdd),
                      osc_reduction=p.osc_defect_reduction,
                      tdd_reduction=p.tdd_defect_reduction,
                      ratio=p.defect_to_story_point_ratio)
    return net


@dataclass(frozen=True)
class ReleaseOutcome:
    inputs: ReleaseInputs
    samples: SampleSet

    @property
    def workload(self) -> float:
        return float(self.samples["workload"][0])

    def summary(self, node: str) -> NodeSummary:
        return summarize_values(self.samples[node])

    def mean(self, node: str) -> float:
        return float(np.mean(self.samples[node]))

    @property
    def estimated_days(self) -> np.ndarray:
        return self.samples["estimated_days"]

    @property
    def defected_story_points(self) -> np.ndarray:
        return self.samples["defected_story_points"]

    @property
    def estimated_kloc(self) -> np.ndarray:
        return self.samples["estimated_kloc"]


def simulate_release(inputs: ReleaseInputs, n: int, seed: int, **sample_kwargs) -> ReleaseOutcome:
    return ReleaseOutcome(inputs, sample(build_release_network(inputs), n, seed, **sample_kwargs))


def evaluate_release_at_means(inputs: ReleaseInputs) -> ReleaseOutcome:
    """Single-draw outcome holding evaluate_at_means values."""
    net = build_release_network(inputs)
    values = evaluate_at_means(net)
    arrays = {}
    for k, v in values.items():
        a = np.array([v])
        a.flags.writeable = False
        arrays[k] = a
    return ReleaseOutcome(inputs, SampleSet(arrays, 1, 0, tuple(values)))
