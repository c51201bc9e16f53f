"""JSON project descriptions: loading, validation and writing."""
from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import Any

from . import bn
from .project import ProjectPlan
from .xp_model import (DISTRIBUTION_FIELDS, ModelParams, PracticeLevel, PracticeUsage,
                       ReleaseSpec, TeamProfile)

FIXTURES = {"repo": "repo.json", "abrahamsson": "abrahamsson.json"}

REAL_PARAM_FIELDS = ("learning_coefficient", "skill_log_base", "osc_defect_reduction",
                     "tdd_defect_reduction", "defect_to_story_point_ratio", "velocity_floor")
PRACTICE_KEYS = ("pair_programming", "tdd", "onsite_customer")

_TOP_KEYS = {"project", "team", "params", "releases"}
_PROJECT_KEYS = {"name", "deadline_days", "success_threshold"}
_RELEASE_KEYS = {"planned_user_stories", "avg_story_points_per_story", *PRACTICE_KEYS}
_DIST_KEYS = {
    "point": ({"value"}, set()),
    "uniform": ({"low", "high"}, set()),
    "normal": ({"mean", "sd"}, set()),
    "truncated_normal": ({"mean", "sd"}, {"low", "high"}),
}


class ConfigError(ValueError):
    pass


class ParseError(ConfigError):
    def __init__(self, source: str, line: int, column: int, reason: str):
        self.source, self.line, self.column, self.reason = source, line, column, reason
        super().__init__(f"{source}:{line}:{column}: {reason}")


class SchemaError(ConfigError):
    def __init__(self, field: str, reason: str):
        self.field, self.reason = field, reason
        super().__init__(f"{field}: {reason}")


class LevelError(ConfigError):
    def __init__(self, field: str, value: Any):
        self.field, self.value = field, value
        levels = ", ".join(repr(lv.label) for lv in PracticeLevel)
        super().__init__(f"{field}: {value!r} is not a practice level (expected one of {levels})")


def _object(value, where: str, allowed: set[str], required: set[str] = frozenset()) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(where, "expected an object")
    for key in value:
        if key not in allowed:
            raise SchemaError(f"{where}.{key}", "unknown key")
    for key in sorted(required):
        if key not in value:
            raise SchemaError(f"{where}.{key}", "missing required key")
    return value


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(where, "expected a number")
    if not math.isfinite(value):
        raise SchemaError(where, "expected a finite number")
    return float(value)


def _count(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(where, "expected an integer")
    return value


def _level(value, where: str) -> PracticeLevel:
    if not isinstance(value, str):
        raise LevelError(where, value)
    try:
        return PracticeLevel.parse(value)
    except ValueError:
        raise LevelError(where, value) from None


def _distribution(value, where: str) -> bn.Distribution:
    if not isinstance(value, dict) or "dist" not in value:
        raise SchemaError(where, 'expected a distribution object with a "dist" key')
    kind = value["dist"]
    if kind not in _DIST_KEYS:
        raise SchemaError(f"{where}.dist", f"unknown distribution {kind!r}")
    required, optional = _DIST_KEYS[kind]
    _object(value, where, required | optional | {"dist"}, required)
    p = {k: _number(v, f"{where}.{k}") for k, v in value.items() if k != "dist"}
    try:
        if kind == "point":
            return bn.Point(p["value"])
        if kind == "uniform":
            return bn.Uniform(p["low"], p["high"])
        if kind == "normal":
            return bn.Normal(p["mean"], p["sd"])
        return bn.TruncatedNormal(p["mean"], p["sd"], p.get("low", -math.inf),
                                  p.get("high", math.inf))
    except ValueError as exc:
        raise SchemaError(where, str(exc)) from None


def _params(value, where: str = "params") -> ModelParams:
    _object(value, where, set(DISTRIBUTION_FIELDS) | set(REAL_PARAM_FIELDS))
    overrides: dict[str, Any] = {}
    for key, raw in value.items():
        if key in DISTRIBUTION_FIELDS:
            overrides[key] = _distribution(raw, f"{where}.{key}")
        else:
            overrides[key] = _number(raw, f"{where}.{key}")
    try:
        return ModelParams(**overrides)
    except ValueError as exc:
        raise SchemaError(where, str(exc)) from None


def _release(value, where: str) -> ReleaseSpec:
    _object(value, where, _RELEASE_KEYS, _RELEASE_KEYS)
    stories = _count(value["planned_user_stories"], f"{where}.planned_user_stories")
    avg = _number(value["avg_story_points_per_story"], f"{where}.avg_story_points_per_story")
    usage = PracticeUsage(*(_level(value[k], f"{where}.{k}") for k in PRACTICE_KEYS))
    try:
        return ReleaseSpec(stories, avg, usage)
    except ValueError as exc:
        raise SchemaError(where, str(exc)) from None


def plan_from_dict(doc: Any) -> ProjectPlan:
    _object(doc, "$", _TOP_KEYS, {"project", "team", "releases"})
    project = _object(doc["project"], "project", _PROJECT_KEYS)
    name = project.get("name", "project")
    if not isinstance(name, str):
        raise SchemaError("project.name", "expected a string")
    deadline = project.get("deadline_days")
    if deadline is not None:
        deadline = _number(deadline, "project.deadline_days")
        if deadline <= 0:
            raise SchemaError("project.deadline_days", "must be > 0")
    threshold = _number(project.get("success_threshold", 0.5), "project.success_threshold")
    if not 0 < threshold <= 1:
        raise SchemaError("project.success_threshold", "must lie in (0, 1]")

    team = _object(doc["team"], "team", {"size"}, {"size"})
    size = _count(team["size"], "team.size")
    if size < 1:
        raise SchemaError("team.size", "must be >= 1")

    params = _params(doc.get("params", {}))
    releases = doc["releases"]
    if not isinstance(releases, list):
        raise SchemaError("releases", "expected a list")
    if not releases:
        raise SchemaError("releases", "at least one release is required")
    specs = [_release(r, f"releases[{i}]") for i, r in enumerate(releases)]
    return ProjectPlan(tuple(specs), TeamProfile(size), params, deadline, threshold, name)


def loads_config(text: str, source: str = "<string>") -> ProjectPlan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(source, exc.lineno, exc.colno, exc.msg) from None
    return plan_from_dict(doc)


def load_config(path: str | Path) -> ProjectPlan:
    path = Path(path)
    return loads_config(path.read_text(encoding="utf-8"), str(path))


def load_fixture(case: str) -> ProjectPlan:
    if case not in FIXTURES:
        raise KeyError(case)
    text = resources.files("xpforecast.fixtures").joinpath(FIXTURES[case]).read_text("utf-8")
    return loads_config(text, f"<fixture {case}>")


# -- writing --------------------------------------------------------------------

def _dist_to_dict(dist: bn.Distribution) -> dict:
    if isinstance(dist, bn.Point):
        return {"dist": "point", "value": dist.value}
    if isinstance(dist, bn.Uniform):
        return {"dist": "uniform", "low": dist.low, "high": dist.high}
    if isinstance(dist, bn.Normal):
        return {"dist": "normal", "mean": dist.mean_, "sd": dist.sd}
    out = {"dist": "truncated_normal", "mean": dist.mean_, "sd": dist.sd}
    if math.isfinite(dist.low):
        out["low"] = dist.low
    if math.isfinite(dist.high):
        out["high"] = dist.high
    return out


def plan_to_dict(plan: ProjectPlan) -> dict:
    project: dict[str, Any] = {"name": plan.name}
    if plan.deadline_days is not None:
        project["deadline_days"] = plan.deadline_days
    project["success_threshold"] = plan.success_probability_threshold
    params = {f: _dist_to_dict(getattr(plan.params, f)) for f in DISTRIBUTION_FIELDS}
    params.update({f: getattr(plan.params, f) for f in REAL_PARAM_FIELDS})
    return {
        "project": project,
        "team": {"size": plan.team.team_size},
        "params": params,
        "releases": [
            {
                "planned_user_stories": r.planned_user_stories,
                "avg_story_points_per_story": r.avg_story_points_per_story,
                "pair_programming": r.usage.pair_programming.label,
                "tdd": r.usage.tdd.label,
                "onsite_customer": r.usage.onsite_customer.label,
            }
            for r in plan.releases
        ],
    }


def dumps_config(plan: ProjectPlan) -> str:
    return json.dumps(plan_to_dict(plan), indent=2) + "\n"


def write_config(plan: ProjectPlan, path: str | Path) -> None:
    Path(path).write_text(dumps_config(plan), encoding="utf-8")
