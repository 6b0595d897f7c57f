"""Run configuration: JSON files validated against ``config.schema.json``."""
import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import MissingFile, RangeError, SchemaError
from .experiments import PotentialSpec, SearchConfig
from .grid import make_grid

RANGE_KEYWORDS = {"minimum", "maximum", "exclusiveMinimum", "exclusiveMaximum", "minItems"}


def load_schema():
    return json.loads(resources.files("lpslab").joinpath("config.schema.json").read_text())


@dataclass(frozen=True)
class GridBlock:
    dim: int = 1
    R: float = 4.0
    n: int = 64
    dense_limit: int = 4096


@dataclass(frozen=True)
class PotentialBlock:
    family: str = "CompactBump"
    kappa: float = 5.0
    params: dict = field(default_factory=lambda: {"sigma": 1.0, "r": 1.0, "a": 1.0})


@dataclass(frozen=True)
class ExperimentBlock:
    kind: str = "VerticalH"
    p_list: tuple = (1.25, 1.5, 2.0)
    kappa_list: tuple = (0.0, 1.0, 10.0, 100.0)
    R_list: tuple = (2.0, 4.0, 8.0)
    n_list: tuple = (32, 64, 128)
    t_list: tuple = None
    n_random: int = 8
    n_ascent: int = 3
    step: float = 0.5
    n_quad: int = 40
    panels: int = 64
    nodes_per_panel: int = 8
    window: float = 0.5


@dataclass(frozen=True)
class RunConfig:
    grid: GridBlock = GridBlock()
    potential: PotentialBlock = PotentialBlock()
    experiment: ExperimentBlock = ExperimentBlock()
    seed: int = 0
    output: str = "lps-out"

    def make_grid(self):
        return make_grid(self.grid.dim, self.grid.R, self.grid.n)

    def potential_spec(self):
        return PotentialSpec(self.potential.family, self.potential.kappa, **self.potential.params)

    def search(self, seed=None):
        e = self.experiment
        return SearchConfig(n_random=e.n_random, n_ascent=e.n_ascent, step=e.step,
                            seed=self.seed if seed is None else seed)

    def to_dict(self):
        d = asdict(self)
        for key, value in d["experiment"].items():
            if isinstance(value, tuple):
                d["experiment"][key] = list(value)
        return d


def _field_path(path):
    out = ""
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "<root>"


def validate(raw):
    """Validate a parsed document and return a :class:`RunConfig` with defaults applied.

    Raises
    ------
    SchemaError
        Wrong structure, type or enum value; ``err.field`` names the field.
    RangeError
        A numeric value or list length out of range.
    """
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: (list(map(str, e.absolute_path)), e.validator))
    if errors:
        err = errors[0]
        path = list(err.absolute_path)
        if err.validator == "additionalProperties":
            extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
            path = path + extra[:1]
        cls = RangeError if err.validator in RANGE_KEYWORDS else SchemaError
        raise cls(_field_path(path), err.message)

    grid = GridBlock(**raw.get("grid", {}))
    pot = dict(raw.get("potential", {}))
    params = {**PotentialBlock().params, **pot.pop("params", {})}
    potential = PotentialBlock(params=params, **pot)
    exp = {k: tuple(v) if isinstance(v, list) else v for k, v in raw.get("experiment", {}).items()}
    experiment = ExperimentBlock(**exp)
    cfg = RunConfig(grid, potential, experiment, raw.get("seed", 0), raw.get("output", "lps-out"))

    if grid.n ** grid.dim > grid.dense_limit:
        raise RangeError("grid.n", f"n^dim = {grid.n ** grid.dim} exceeds dense_limit {grid.dense_limit}")
    for i, n in enumerate(experiment.n_list):
        if n ** grid.dim > grid.dense_limit:
            raise RangeError(f"experiment.n_list[{i}]", "n^dim exceeds dense_limit")
    return cfg


def parse_config(path):
    """Read and validate a JSON configuration file."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(str(path), "no such file")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("<root>", f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaError("<root>", "top level must be an object")
    return validate(raw)


def with_seed(cfg, seed):
    return RunConfig(cfg.grid, cfg.potential, cfg.experiment, int(seed), cfg.output)


MASK64 = (1 << 64) - 1


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master, task):
    """Per-task seed: splitmix64 of the master seed mixed with FNV-1a of the task name."""
    h = 0xCBF29CE484222325
    for byte in task.encode():
        h = ((h ^ byte) * 0x100000001B3) & MASK64
    return splitmix64((int(master) ^ h) & MASK64) >> 1
