"""Desk-scale simulation studies: level, power, efficiency, subsampling.

Each study runs R seeded replications per grid cell and aggregates the
rejection fraction into :class:`PowerRecord` rows, written as plot-ready CSV
plus an audit JSON echoing the full configuration.  Per-replication streams
are fixed a priori from (seed, cell index, replication index), so reruns are
bit-reproducible and aggregation order is irrelevant.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .calibrate import DEFAULT_ALPHA, DEFAULT_B, run_test
from .core import Sample
from .distributions import (
    AngularSymmetric,
    Contaminated,
    DistributionSpec,
    FourComponentMixture,
    Gaussian,
    LpSymmetric,
    Spiked,
    SphericalT,
    describe,
    sample,
)
from .rng import RngStream


@dataclass(frozen=True)
class Cell:
    spec: DistributionSpec
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"cell sample size must be >= 2, got {self.n}")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    cells: tuple[Cell, ...]
    R: int = 200
    B: int = DEFAULT_B
    alpha: float = DEFAULT_ALPHA
    seed: int = 0
    output: str | None = None
    center_mode: str = "none"

    def __post_init__(self):
        if self.R < 1:
            raise ValueError(f"R must be >= 1, got {self.R}")
        if len(self.cells) == 0:
            raise ValueError("experiment grid is empty")


@dataclass(frozen=True)
class PowerRecord:
    name: str
    spec: str
    n: int
    d: int
    R: int
    B: int
    alpha: float
    rejections: int
    seed: int
    power: float = field(init=False)
    std_error: float = field(init=False)

    def __post_init__(self):
        if not (0 <= self.rejections <= self.R):
            raise ValueError("rejection count out of range")
        power = self.rejections / self.R
        object.__setattr__(self, "power", power)
        object.__setattr__(self, "std_error", math.sqrt(power * (1.0 - power) / self.R))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "spec": self.spec,
            "n": self.n,
            "d": self.d,
            "R": self.R,
            "B": self.B,
            "alpha": self.alpha,
            "rejections": self.rejections,
            "power": self.power,
            "std_error": self.std_error,
            "seed": self.seed,
        }


CSV_COLUMNS = ["name", "spec", "n", "d", "R", "B", "alpha", "rejections", "power", "std_error", "seed"]


def _cell_power(
    spec: DistributionSpec,
    n: int,
    R: int,
    B: int,
    alpha: float,
    seed: int,
    cell_index: int,
    center_mode: str = "none",
) -> int:
    rejections = 0
    for r in range(R):
        rep = RngStream(seed, (cell_index, r))
        data = sample(spec, n, rep.child(0))
        outcome = run_test(data, rep.child(1), alpha=alpha, B=B, center_mode=center_mode)
        rejections += int(outcome.reject)
    return rejections


def run_power_study(config: ExperimentConfig) -> list[PowerRecord]:
    """Rejection fraction per grid cell over R seeded replications."""
    records = []
    for ci, cell in enumerate(config.cells):
        rejections = _cell_power(
            cell.spec, cell.n, config.R, config.B, config.alpha,
            config.seed, ci, config.center_mode,
        )
        records.append(
            PowerRecord(
                name=config.name,
                spec=describe(cell.spec),
                n=cell.n,
                d=cell.spec.d,
                R=config.R,
                B=config.B,
                alpha=config.alpha,
                rejections=rejections,
                seed=config.seed,
            )
        )
    return records


def pitman_mixing_weight(n: int, gamma: float) -> float:
    """Contamination weight 5 n^gamma / sqrt(n) of the efficiency study."""
    return 5.0 * n**gamma / math.sqrt(n)


def pitman_spec(n: int, gamma: float) -> Contaminated:
    """Local alternative in R^10: mostly standard normal, a vanishing share
    of an equicorrelated normal (0.5 I + 0.5 J)."""
    w = pitman_mixing_weight(n, gamma)
    if not (0.0 <= w <= 1.0):
        raise ValueError(
            f"mixing weight {w:.4f} outside [0, 1] for n={n}, gamma={gamma}"
        )
    return Contaminated(
        delta=w,
        component_f=Gaussian(d=10, rho=0.0),
        component_g=Gaussian(d=10, rho=0.5),
    )


def run_pitman_study(
    gamma: float,
    n_grid: tuple[int, ...] = (50, 100, 250, 500),
    R: int = 200,
    B: int = DEFAULT_B,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
) -> list[PowerRecord]:
    """Power along the sqrt(n)-local contamination alternatives."""
    cells = tuple(Cell(pitman_spec(n, gamma), n) for n in n_grid)
    config = ExperimentConfig(
        name=f"pitman_gamma{gamma:g}", cells=cells, R=R, B=B, alpha=alpha, seed=seed
    )
    return run_power_study(config)


def load_csv_matrix(path: str, has_header: bool = False) -> np.ndarray:
    """Parse a numeric CSV into an n x d matrix with line-numbered errors."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if has_header and lineno == 1:
                continue
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            try:
                values = [float(v) for v in row]
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: non-numeric field ({exc})") from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ValueError(
                    f"{path}: line {lineno}: expected {width} fields, got {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(rows)


def run_subsample_study(
    csv_path: str,
    subsample_sizes: tuple[int, ...],
    R: int = 200,
    B: int = DEFAULT_B,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
    center_mode: str = "spatial-median",
    has_header: bool = False,
) -> list[PowerRecord]:
    """Rejection fraction over random without-replacement subsamples.

    Centering (spatial median by default) is recomputed per subsample.
    """
    data = load_csv_matrix(csv_path, has_header=has_header)
    n_total, d = data.shape
    records = []
    name = os.path.basename(csv_path)
    for ci, size in enumerate(subsample_sizes):
        if not (2 <= size <= n_total):
            raise ValueError(f"subsample size {size} outside [2, {n_total}]")
        rejections = 0
        for r in range(R):
            rep = RngStream(seed, (ci, r))
            idx = rep.child(0).generator().choice(n_total, size=size, replace=False)
            outcome = run_test(
                Sample(data[idx]), rep.child(1), alpha=alpha, B=B, center_mode=center_mode
            )
            rejections += int(outcome.reject)
        records.append(
            PowerRecord(
                name=name,
                spec=f"subsample({name})",
                n=size,
                d=d,
                R=R,
                B=B,
                alpha=alpha,
                rejections=rejections,
                seed=seed,
            )
        )
    return records


def write_records(records: list[PowerRecord], out_prefix: str, config_echo: dict | None = None) -> tuple[str, str]:
    """Write <prefix>.csv (plot-ready) and <prefix>.json (audit)."""
    out_dir = os.path.dirname(out_prefix)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    csv_path = out_prefix + ".csv"
    json_path = out_prefix + ".json"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for rec in records:
            writer.writerow(rec.to_dict())
    payload = {
        "config": config_echo or {},
        "records": [rec.to_dict() for rec in records],
    }
    with open(json_path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path


# --- configuration file format -------------------------------------------
#
# Flat "key = value" lines; '#' starts a comment.  Repeated "cell" keys build
# the grid.  Example:
#
#     name = level_example1a
#     R = 500
#     B = 500
#     alpha = 0.05
#     seed = 11
#     output = results/level_example1a
#     cell = gaussian(rho=0,d=2) n=20
#     cell = gaussian(rho=0,d=32) n=20


def _split_top(body: str) -> list[str]:
    # split on commas outside parentheses, so nested descriptors survive
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:i])
            start = i + 1
    parts.append(body[start:])
    return parts


def parse_distribution(text: str) -> DistributionSpec:
    """Parse a compact family descriptor like ``gaussian(rho=0.5,d=5)``.

    Mixtures nest: ``contaminated(delta=0.5,f=gaussian(rho=0,d=10),g=gaussian(rho=0.5,d=10))``.
    """
    text = text.strip()
    if "(" not in text or not text.endswith(")"):
        raise ValueError(f"bad distribution descriptor: {text!r}")
    family, _, rest = text.partition("(")
    family = family.strip().lower()
    body = rest[:-1].strip()
    items: dict[str, str] = {}
    if body:
        for item in _split_top(body):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"bad parameter {item!r} in {text!r}")
            items[key.strip()] = value.strip()

    if family == "contaminated":
        for key in ("delta", "f", "g"):
            if key not in items:
                raise ValueError(f"distribution 'contaminated' needs parameter {key!r}")
        spec = Contaminated(
            delta=float(items.pop("delta")),
            component_f=parse_distribution(items.pop("f")),
            component_g=parse_distribution(items.pop("g")),
        )
        if items:
            raise ValueError(f"unused parameters {sorted(items)} for family {family!r}")
        return spec

    params: dict[str, float] = {}
    for key, value in items.items():
        try:
            params[key] = math.inf if value in ("inf", "Inf") else float(value)
        except ValueError:
            raise ValueError(f"bad parameter {key}={value!r} in {text!r}") from None

    def need(key, default=None):
        if key in params:
            return params.pop(key)
        if default is not None:
            return default
        raise ValueError(f"distribution {family!r} needs parameter {key!r}")

    if family == "gaussian":
        spec = Gaussian(d=int(need("d")), rho=need("rho", 0.0))
    elif family in ("t", "student"):
        spec = SphericalT(d=int(need("d")), nu=need("nu"))
    elif family == "cauchy":
        spec = SphericalT(d=int(need("d")), nu=1.0)
    elif family == "lp":
        spec = LpSymmetric(d=int(need("d")), p=need("p"))
    elif family == "angular":
        spec = AngularSymmetric(d=int(need("d", 5)))
    elif family == "mixture4":
        spec = FourComponentMixture(d=int(need("d", 5)))
    elif family == "spiked":
        spec = Spiked(d=int(need("d")), gamma=need("gamma"))
    else:
        raise ValueError(f"unknown distribution family: {family!r}")
    if params:
        raise ValueError(f"unused parameters {sorted(params)} for family {family!r}")
    return spec


def parse_cell(text: str) -> Cell:
    parts = text.strip().rsplit(None, 1)
    if len(parts) != 2 or not parts[1].startswith("n="):
        raise ValueError(f"cell must look like '<family(...)> n=<int>', got {text!r}")
    spec = parse_distribution(parts[0])
    n = int(parts[1][2:])
    return Cell(spec=spec, n=n)


def parse_config(path: str) -> ExperimentConfig:
    """Read an experiment configuration file; errors name the offending key."""
    values: dict[str, str] = {}
    cells: list[Cell] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}: line {lineno}: expected 'key = value'")
            key = key.strip()
            value = value.strip()
            if key == "cell":
                try:
                    cells.append(parse_cell(value))
                except ValueError as exc:
                    raise ValueError(f"{path}: line {lineno}: key 'cell': {exc}") from None
            else:
                values[key] = value

    def take(key, convert, default=None):
        if key in values:
            try:
                return convert(values.pop(key))
            except ValueError:
                raise ValueError(f"{path}: key {key!r}: bad value") from None
        if default is None:
            raise ValueError(f"{path}: missing required key {key!r}")
        return default

    name = take("name", str)
    config = ExperimentConfig(
        name=name,
        cells=tuple(cells),
        R=take("R", int, 200),
        B=take("B", int, DEFAULT_B),
        alpha=take("alpha", float, DEFAULT_ALPHA),
        seed=take("seed", int, 0),
        output=values.pop("output", None),
        center_mode=values.pop("center", "none"),
    )
    if values:
        raise ValueError(f"{path}: unknown keys {sorted(values)}")
    return config
