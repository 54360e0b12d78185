"""Experiment plumbing: configs, deterministic parallel replication, output.

Configs come from a TOML file, CLI flags, or both (flags win).  Every
replicate draws from its own counter-based stream keyed by (seed, replicate
index), so results are identical no matter how replicates are batched onto
worker threads; rows are emitted sorted by replicate, which makes the CSV
output byte-identical across thread counts.

CSVs are RFC-4180-style (header row, CRLF, floats at 17 significant digits)
and every CSV gets a JSON summary next to it with the config echo, a version
string, wall time, the claim being checked and its pass/fail status.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DomainError

try:  # tomllib landed in 3.11; tomli is the same parser for 3.10
    import tomllib as _toml
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as _toml

__all__ = [
    "EXPERIMENTS", "ExperimentConfig", "load_config", "ResultTable",
    "map_replicates", "write_outputs", "emit_plot_data", "run_experiment",
    "version_string",
]

EXPERIMENTS = (
    "depth-law", "depth-exact-check", "arcsine", "outdeg-profile",
    "scaling", "subcritical", "texpect", "sanity", "bench",
)

_SEQ_FIELDS = {"n_grid", "t_grid", "j_list"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat, fully-echoable description of one experiment run.

    ``seed`` is mandatory: there is deliberately no wall-clock default, so a
    config that omits it fails loudly instead of being silently irreproducible.
    """

    experiment: str
    seed: int
    n: int = 10_000
    reps: int = 1_000
    threads: int = 1
    out: str | None = None
    n2: int | None = None
    n_grid: tuple[int, ...] = (1_000, 3_000, 10_000, 30_000, 100_000)
    env_model: str = "product_form"
    alpha: float = 0.5
    weight_dist: str = "exponential"
    weight_low: float = 0.5
    weight_high: float = 1.5
    weight_mean: float = 1.0
    increments: str = "gaussian"
    sigma: float = 1.0
    stable_alpha: float = 1.5
    stable_beta: float = 1.0
    p0: float = 0.5
    edge_lengths: str = "unit"
    edge_mean: float = 1.0
    edge_const: float = 1.0
    tol: float | None = None
    t_grid: tuple[float, ...] = (0.2, 0.5, 0.8)
    j_list: tuple[int, ...] | None = None
    cap: int = 20_000
    sigma_m_reps: int = 10_000
    chunk: int = 64
    max_rebuilds: int = 20
    time_limit: float | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(
                f"unknown experiment {self.experiment!r}; choose one of {', '.join(EXPERIMENTS)}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigurationError("seed must be an integer (it is mandatory; no clock default)")
        if not (0 <= self.seed < 2 ** 64):
            raise ConfigurationError(f"seed must fit in 64 bits, got {self.seed}")
        if self.reps < 1:
            raise ConfigurationError(f"reps must be >= 1, got {self.reps}")
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if self.threads < 1:
            raise ConfigurationError(f"threads must be >= 1, got {self.threads}")
        if self.chunk < 1:
            raise ConfigurationError(f"chunk must be >= 1, got {self.chunk}")

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out

    # -- builders for the library objects the experiments need ---------------

    def increment_spec(self):
        from .walk import IncrementSpec
        kind = self.increments
        if kind == "gaussian":
            return IncrementSpec.gaussian(self.sigma)
        if kind == "rademacher":
            return IncrementSpec.rademacher()
        if kind == "lattice_atom":
            return IncrementSpec.lattice_with_atom(self.p0)
        if kind == "stable":
            return IncrementSpec.stable(self.stable_alpha, self.stable_beta)
        raise ConfigurationError(f"unknown increment kind {kind!r}")

    def weight_distribution(self):
        from .env import WeightDist
        kind = self.weight_dist
        if kind == "uniform":
            return WeightDist.uniform(self.weight_low, self.weight_high)
        if kind == "exponential":
            return WeightDist.exponential(self.weight_mean)
        if kind == "constant":
            return WeightDist.constant(self.weight_mean)
        raise ConfigurationError(f"unknown weight distribution {kind!r}")

    def environment_model(self, path=None):
        from .env import EnvModel
        kind = self.env_model
        if kind == "constant":
            return EnvModel.constant()
        if kind == "power":
            return EnvModel.power(self.alpha)
        if kind == "stretched_exp":
            return EnvModel.stretched_exp(self.alpha)
        if kind == "product_form":
            if path is None:
                raise ConfigurationError("product_form environments need a walk path")
            return EnvModel.product_form(path)
        if kind == "iid_weights":
            return EnvModel.iid_weights(self.weight_distribution())
        raise ConfigurationError(f"unknown environment model {kind!r}")

    def edge_spec(self):
        from .treegrow import EdgeLenSpec
        kind = self.edge_lengths
        if kind == "unit":
            return EdgeLenSpec.unit()
        if kind == "deterministic":
            return EdgeLenSpec.deterministic(self.edge_const)
        if kind == "exponential":
            return EdgeLenSpec.exponential(self.edge_mean)
        raise ConfigurationError(f"unknown edge length kind {kind!r}")


def load_config(experiment: str | None = None, config_path=None,
                overrides: dict | None = None) -> ExperimentConfig:
    """Merge TOML file and explicit overrides (overrides win) into a config."""
    valid = {f.name for f in fields(ExperimentConfig)}
    data: dict = {}
    if config_path is not None:
        with open(config_path, "rb") as fh:
            loaded = _toml.load(fh)
        unknown = sorted(set(loaded) - valid)
        if unknown:
            raise ConfigurationError(f"unknown config keys in {config_path}: {', '.join(unknown)}")
        data.update(loaded)
    for k, v in (overrides or {}).items():
        if v is None:
            continue
        if k not in valid:
            raise ConfigurationError(f"unknown config key {k!r}")
        data[k] = v
    if experiment is not None:
        data["experiment"] = experiment
    if "experiment" not in data:
        raise ConfigurationError("no experiment named (subcommand or config file)")
    if "seed" not in data:
        raise ConfigurationError("seed is mandatory and has no default")
    for key in _SEQ_FIELDS & set(data):
        if data[key] is not None:
            data[key] = tuple(data[key])
    return ExperimentConfig(**data)


@dataclass
class ResultTable:
    """Aligned named columns plus a metadata block echoed into the summary."""

    columns: tuple[str, ...]
    data: tuple[np.ndarray, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        self.data = tuple(np.asarray(c) for c in self.data)
        if len(self.columns) != len(self.data):
            raise DomainError("one name per column, please")
        lengths = {c.shape[0] for c in self.data}
        if len(lengths) > 1:
            raise DomainError(f"column lengths differ: {sorted(lengths)}")

    @classmethod
    def empty(cls, columns, meta=None) -> "ResultTable":
        return cls(tuple(columns), tuple(np.empty(0) for _ in columns), meta or {})

    @property
    def nrows(self) -> int:
        return 0 if not self.data else int(self.data[0].shape[0])

    def column(self, name: str) -> np.ndarray:
        try:
            return self.data[self.columns.index(name)]
        except ValueError:
            raise DomainError(f"table has no column {name!r} (has {self.columns})") from None

    def csv_bytes(self) -> bytes:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(self.columns)
        fmts = [("i" if c.dtype.kind in "iu" else
                 "s" if c.dtype.kind in "USO" else "f") for c in self.data]
        for r in range(self.nrows):
            row = []
            for k, c in zip(fmts, self.data):
                if k == "i":
                    row.append(str(int(c[r])))
                elif k == "s":
                    row.append(str(c[r]))
                else:
                    row.append(format(float(c[r]), ".17g"))
            writer.writerow(row)
        return buf.getvalue().encode("utf-8")

    def to_csv(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.csv_bytes())


def map_replicates(worker, reps: int, threads: int, chunk: int = 64):
    """Run worker(lo, hi) over fixed chunks of [0, reps) and concatenate.

    Chunk boundaries depend only on ``chunk``, never on ``threads``, and each
    replicate must key its randomness by its global index, so the output is
    independent of the thread count.
    """
    bounds = [(lo, min(lo + chunk, reps)) for lo in range(0, reps, chunk)]
    if threads <= 1 or len(bounds) <= 1:
        parts = [worker(lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda b: worker(*b), bounds))
    if not parts:
        return ()
    if isinstance(parts[0], tuple):
        width = len(parts[0])
        return tuple(np.concatenate([p[i] for p in parts]) for i in range(width))
    return np.concatenate(parts)


def version_string() -> str:
    from . import __version__
    head = _git_head()
    return f"rrt-lab {__version__}+g{head}" if head else f"rrt-lab {__version__}"


def _git_head() -> str | None:
    """Short commit hash when running from a checkout; None elsewhere."""
    try:
        d = Path(__file__).resolve()
        for parent in d.parents:
            git = parent / ".git"
            if git.is_dir():
                ref = (git / "HEAD").read_text().strip()
                if ref.startswith("ref: "):
                    ref_path = git / ref[5:]
                    if not ref_path.exists():
                        return None
                    ref = ref_path.read_text().strip()
                return ref[:7]
    except OSError:
        return None
    return None


def write_outputs(table: ResultTable, summary: dict, out) -> tuple[Path, Path]:
    """Write table → out (CSV) and summary → out with a .json suffix."""
    out = Path(out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(out)
    json_path = out.with_suffix(".json")
    with open(json_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out, json_path


_PLOT_HEADERS = {
    "profile": ["t", "mean_estimate", "stderr", "limit"],
    "ecdf": ["x", "ecdf", "arcsine_cdf"],
}


def emit_plot_data(table: ResultTable, kind: str, path) -> Path:
    """Aggregate a result table into a small plot-ready CSV.

    * ``profile``: per t in the grid, the across-environment mean of the
      conditional mean outdegree, its standard error, and the limit curve.
    * ``ecdf``: sorted sample, empirical cdf, and the arcsine cdf to overlay.

    An empty table produces a header-only file.
    """
    if kind not in _PLOT_HEADERS:
        raise DomainError(f"unknown plot kind {kind!r}; choose from {sorted(_PLOT_HEADERS)}")
    path = Path(path)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(_PLOT_HEADERS[kind])
    if table.nrows:
        if kind == "profile":
            from .limits import constant_weight_profile, outdeg_profile
            t = table.column("t")
            val = table.column("ewn")
            prof = table.meta.get("profile_limit", {"kind": "power_type", "rho": 0.5})
            for tv in np.unique(t):
                sel = val[t == tv]
                mean = float(sel.mean())
                stderr = float(sel.std(ddof=1) / np.sqrt(sel.size)) if sel.size > 1 else 0.0
                if prof.get("kind") == "constant":
                    lim = float(constant_weight_profile(tv))
                else:
                    lim = float(outdeg_profile(tv, prof.get("rho", 0.5)))
                writer.writerow([format(float(tv), ".17g"), format(mean, ".17g"),
                                 format(stderr, ".17g"), format(lim, ".17g")])
        else:
            from .limits import arcsine_cdf
            x = np.sort(table.column("tau_over_n"))
            rho = float(table.meta.get("rho", 0.5))
            ref = arcsine_cdf(x, rho)
            m = x.size
            for i in range(m):
                writer.writerow([format(float(x[i]), ".17g"),
                                 format((i + 1) / m, ".17g"),
                                 format(float(ref[i]), ".17g")])
    with open(path, "wb") as fh:
        fh.write(buf.getvalue().encode("utf-8"))
    return path


def run_experiment(cfg: ExperimentConfig):
    """Dispatch to the named experiment; returns (table, summary)."""
    from . import experiments
    return experiments.run(cfg)
