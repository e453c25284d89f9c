"""
Configuration for edgelighter experiments
"""
import math
import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from .errors import ConfigError, InvalidParameterError


class WalkKind(Enum):
    """Noise process driving G_t"""
    STANDARD = "standard"
    BLOCK = "block"
    GLOBAL = "global"


class GraphModel(Enum):
    """Where G_0 comes from"""
    ER = "er"
    SBM = "sbm"
    LOADED = "loaded"


class InitMethod(Enum):
    """Starting point of the Frank-Wolfe ascent"""
    IDENTITY = "identity"
    BARYCENTER = "barycenter"
    RANDOM = "random"


class Profile(Enum):
    """Checkpoint cadence profile"""
    CI = "ci"        # cadence derived from n^2 log n
    FULL = "full"  # fixed per-n cadences for the full-scale runs


# Matching cadences s_n for the full-scale runs
FULL_CADENCES: Dict[GraphModel, Dict[int, int]] = {
    GraphModel.ER: {49: 1, 100: 1, 144: 1, 225: 3, 324: 30, 729: 300},
    GraphModel.SBM: {81: 1, 256: 90, 625: 2100},
}


@dataclass
class SolverOptions:
    """Options for the seeded Frank-Wolfe matcher"""

    init: InitMethod = InitMethod.IDENTITY
    max_iterations: int = 30
    tolerance: float = 1e-6
    restarts: int = 1

    def validate(self) -> bool:
        if self.tolerance <= 0:
            raise InvalidParameterError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_iterations < 1:
            raise InvalidParameterError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.restarts < 1:
            raise InvalidParameterError(f"restarts must be >= 1, got {self.restarts}")
        return True


@dataclass
class ExperimentConfig:
    """Configuration for one anonymization experiment (sweep or loaded network)"""

    name: str = "custom"
    model: GraphModel = GraphModel.ER

    # Initial graph
    n_values: Tuple[int, ...] = (49, 100, 144, 225)
    p: float = 0.5
    communities: Optional[int] = None  # SBM: None uses the preset K for n in {81, 256, 625}

    # Loaded networks
    edge_list: Optional[str] = None
    label_file: Optional[str] = None
    one_indexed: bool = False
    vertex_range: Optional[Tuple[int, int]] = None  # inclusive original-id range
    largest_component: bool = False

    # Walk
    walk_kind: WalkKind = WalkKind.STANDARD
    q_on_to_off: float = 0.5
    q_off_to_on: float = 0.5
    steps_factor: float = 3.0  # step budget = steps_factor * n^2 log n
    max_steps: Optional[int] = None  # overrides the budget when set
    profile: Profile = Profile.CI
    checkpoint_every: Optional[int] = None  # overrides the profile cadence when set
    target_checkpoints: int = 150

    # Matching and anonymization
    seed_fraction: float = 0.05
    betas: Tuple[float, ...] = (0.25, 0.5, 0.75)
    persistence: int = 3
    tail_checkpoints: int = 10
    early_stop: bool = True
    replicates: int = 5
    solver: SolverOptions = field(default_factory=lambda: SolverOptions(init=InitMethod.BARYCENTER))

    # Run
    seed: Optional[int] = None
    threads: Optional[int] = None
    output_dir: Optional[str] = None

    def __post_init__(self):
        """Fill run settings from the environment when not provided"""
        if self.seed is None:
            self.seed = int(os.getenv('EDGELIGHTER_SEED', '0'))

        if self.threads is None:
            self.threads = int(os.getenv('EDGELIGHTER_THREADS', '1'))

        if self.output_dir is None:
            self.output_dir = os.getenv('EDGELIGHTER_OUT_DIR', './outputs')

        self.n_values = tuple(int(n) for n in self.n_values)
        self.betas = tuple(float(b) for b in self.betas)

    def step_budget(self, n: int) -> int:
        """Maximum number of walk steps for a graph on n vertices"""
        if self.max_steps is not None:
            return int(self.max_steps)
        return int(math.ceil(self.steps_factor * n * n * math.log(n)))

    def cadence_for(self, n: int) -> int:
        """Matching cadence s_n"""
        if self.checkpoint_every is not None:
            return int(self.checkpoint_every)
        if self.profile == Profile.FULL:
            table = FULL_CADENCES.get(self.model, {})
            if n in table:
                return table[n]
        return max(1, round(self.step_budget(n) / self.target_checkpoints))

    def validate(self) -> bool:
        """Validate configuration"""
        if self.model != GraphModel.LOADED and not self.n_values:
            raise InvalidParameterError("n_values must not be empty")
        if any(n < 2 for n in self.n_values):
            raise InvalidParameterError(f"Every n must be >= 2, got {self.n_values}")
        for name in ('p', 'q_on_to_off', 'q_off_to_on'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidParameterError(f"{name} must be in [0, 1], got {value}")
        if not 0.0 <= self.seed_fraction <= 1.0:
            raise InvalidParameterError(f"seed_fraction must be in [0, 1], got {self.seed_fraction}")
        if not self.betas or any(not 0.0 < b < 1.0 for b in self.betas):
            raise InvalidParameterError(f"Every beta must lie in (0, 1), got {self.betas}")
        if self.checkpoint_every is not None and self.checkpoint_every < 1:
            raise InvalidParameterError("checkpoint_every must be >= 1")
        if self.max_steps is not None and self.max_steps < 0:
            raise InvalidParameterError("max_steps must be >= 0")
        if self.steps_factor <= 0 or self.target_checkpoints < 1:
            raise InvalidParameterError("steps_factor and target_checkpoints must be positive")
        if self.replicates < 1:
            raise InvalidParameterError(f"replicates must be >= 1, got {self.replicates}")
        if self.persistence < 1 or self.tail_checkpoints < 0:
            raise InvalidParameterError("persistence must be >= 1 and tail_checkpoints >= 0")
        if self.threads < 1:
            raise InvalidParameterError(f"threads must be >= 1, got {self.threads}")
        self.solver.validate()
        return True

    # -- files and presets ---------------------------------------------------

    @classmethod
    def from_dict(cls, tables: Dict[str, Dict[str, Any]]) -> "ExperimentConfig":
        """
        Build from [experiment] / [walk] / [solver] tables

        Args:
            tables: parsed TOML document

        Returns:
            Configuration (not yet validated)
        """
        unknown = set(tables) - {'experiment', 'walk', 'solver'}
        if unknown:
            raise ConfigError(f"Unknown config tables: {sorted(unknown)}")

        values: Dict[str, Any] = {}
        values.update(tables.get('experiment', {}))
        values.update(tables.get('walk', {}))

        preset = values.pop('preset', None)
        base = cls.preset(preset) if preset else cls()

        known = {f.name for f in fields(cls)} - {'solver'}
        bad = set(values) - known
        if bad:
            raise ConfigError(f"Unknown config keys: {sorted(bad)}")

        try:
            converted = {key: _convert(key, value) for key, value in values.items()}
            solver_values = dict(tables.get('solver', {}))
            solver = base.solver
            if solver_values:
                if 'init' in solver_values:
                    solver_values['init'] = InitMethod(solver_values['init'])
                solver = replace(base.solver, **solver_values)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid config value: {e}") from e

        return replace(base, solver=solver, **converted)

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        """Load a TOML config file"""
        try:
            with open(path, 'rb') as f:
                tables = tomllib.load(f)
        except FileNotFoundError as e:
            raise ConfigError(f"Config file not found: {path}") from e
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Could not parse {path}: {e}") from e
        return cls.from_dict(tables)

    @classmethod
    def preset(cls, name: str) -> "ExperimentConfig":
        """Named experiment presets"""
        if name not in PRESETS:
            raise ConfigError(f"Unknown preset '{name}'. Available: {sorted(PRESETS)}")
        return replace(PRESETS[name](), name=name)

    def to_dict(self) -> Dict[str, Any]:
        """Plain dictionary (enums as values) for manifests and summaries"""
        result = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, SolverOptions):
                value = {
                    'init': value.init.value,
                    'max_iterations': value.max_iterations,
                    'tolerance': value.tolerance,
                    'restarts': value.restarts,
                }
            elif isinstance(value, tuple):
                value = list(value)
            result[f.name] = value
        return result


_ENUM_FIELDS = {
    'model': GraphModel,
    'walk_kind': WalkKind,
    'profile': Profile,
}


def _convert(key: str, value: Any) -> Any:
    if key in _ENUM_FIELDS:
        return _ENUM_FIELDS[key](value)
    if key in ('n_values', 'betas', 'vertex_range') and value is not None:
        return tuple(value)
    return value


def _sbm_solver() -> SolverOptions:
    return SolverOptions(init=InitMethod.IDENTITY)


PRESETS = {
    'er-ci': lambda: ExperimentConfig(
        model=GraphModel.ER,
        n_values=(49, 100, 144, 225),
    ),
    'er-full': lambda: ExperimentConfig(
        model=GraphModel.ER,
        n_values=(49, 100, 144, 225, 324, 729),
        profile=Profile.FULL,
        early_stop=False,
    ),
    'sbm-ci': lambda: ExperimentConfig(
        model=GraphModel.SBM,
        n_values=(81, 256),
        walk_kind=WalkKind.BLOCK,
        solver=_sbm_solver(),
    ),
    'sbm-full': lambda: ExperimentConfig(
        model=GraphModel.SBM,
        n_values=(81, 256, 625),
        walk_kind=WalkKind.BLOCK,
        profile=Profile.FULL,
        early_stop=False,
        solver=_sbm_solver(),
    ),
    'facebook': lambda: ExperimentConfig(
        model=GraphModel.LOADED,
        n_values=(),
        edge_list='data/facebook_combined.txt',
        vertex_range=(1921, 2640),
        walk_kind=WalkKind.STANDARD,
        max_steps=900000,
        checkpoint_every=150,
        replicates=1,
        early_stop=False,
        solver=_sbm_solver(),
    ),
    'eu-email': lambda: ExperimentConfig(
        model=GraphModel.LOADED,
        n_values=(),
        edge_list='data/email-Eu-core.txt',
        label_file='data/email-Eu-core-department-labels.txt',
        largest_component=True,
        walk_kind=WalkKind.BLOCK,
        max_steps=1000000,
        checkpoint_every=220,
        replicates=1,
        early_stop=False,
        solver=_sbm_solver(),
    ),
}


# Default configuration
DEFAULT_CONFIG = ExperimentConfig()
