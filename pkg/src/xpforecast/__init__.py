"""Bayesian-network Monte Carlo forecasts for XP projects."""
from .bn import (CycleDetected, DanglingParent, Network, NumericError, Normal, Point, SampleSet,
                 TruncatedNormal, Uniform, evaluate_at_means, sample, summarize, validate)
from .config import LevelError, ParseError, SchemaError, load_config, load_fixture, write_config
from .project import (InvalidPlan, ProjectPlan, ProjectResult, StatusCurvePoint, Verdict, assess,
                      simulate_project, status_curve)
from .xp_model import (ModelParams, PracticeLevel, PracticeUsage, ReleaseInputs, ReleaseSpec,
                       TeamProfile, build_release_network)

__version__ = "0.1.0"
