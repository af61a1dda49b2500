"""Experiment orchestration: sampling, error metrics, the full
graph -> communities -> cover -> blended interpolation pipeline, and
CSV reporting.

Every source of randomness is derived from the single config seed through
labeled child streams (graph generation, features, clusterer, sampling), so
switching the clusterer never perturbs the sample set.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, replace

import numpy as np

from . import clustering, gbf, graph, pum, spectral
from .errors import Error, ParseError, SampleTooLargeError, ZeroSignalError

REPORT_HEADER = "method,J,modularity,rmae,rrmse,wall_time_ms"

#: Filter depth swept by the "filtered" clusterer inside the pipeline.
FILTER_T_MAX = 10

_CONFIG_KEYS = {
    "graph", "coords", "generator", "rows", "cols", "n", "radius",
    "method", "partition_file", "jmin", "jmax", "N", "k", "R", "eps", "s",
    "signal_count", "seed", "out",
}
_INT_KEYS = {"rows", "cols", "n", "jmin", "jmax", "N", "k", "R",
             "signal_count", "seed"}
_FLOAT_KEYS = {"radius", "eps", "s"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment row: a graph source, a community method, and the
    interpolation parameters."""

    method: str
    sample_count: int
    radius_r: int
    epsilon: float
    s: float
    graph_path: str | None = None
    coords_path: str | None = None
    generator: str | None = None
    rows: int | None = None
    cols: int | None = None
    n: int | None = None
    geo_radius: float | None = None
    partition_file: str | None = None
    jmin: int = 2
    jmax: int = 10
    k: int = 2000
    signal_count: int = 10
    seed: int = 0
    out: str | None = None

    def split_methods(self) -> list["ExperimentConfig"]:
        """One config per comma-separated method label, in config order."""
        return [replace(self, method=m.strip())
                for m in self.method.split(",") if m.strip()]


@dataclass(frozen=True)
class ReportRow:
    method: str
    j: int
    modularity: float
    rmae: float
    rrmse: float
    wall_time_ms: int


def child_seed(seed: int, label: str) -> int:
    """Deterministic, platform-stable child seed for a labeled consumer."""
    key = zlib.crc32(label.encode("utf-8"))
    return int(np.random.SeedSequence(seed, spawn_key=(key,)).generate_state(1)[0])


def clamp_j_range(jmin: int, jmax: int, n: int) -> range:
    """Community-count sweep intersected with the valid interval [1, n]."""
    return range(max(jmin, 1), min(jmax, n) + 1)


def sample_nodes(g: graph.Graph, count: int, seed: int) -> np.ndarray:
    """Uniform sample of ``count`` distinct nodes, sorted ascending."""
    if count > g.n:
        raise SampleTooLargeError(f"{count} samples from {g.n} nodes")
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(g.n, size=count, replace=False))


def rmae(x, xstar) -> float:
    """Relative maximum absolute error, ||x - x*||_inf / ||x||_inf."""
    x = np.asarray(x, dtype=float)
    xstar = np.asarray(xstar, dtype=float)
    if x.shape != xstar.shape:
        raise ValueError(f"signal shapes differ: {x.shape} vs {xstar.shape}")
    denom = np.abs(x).max()
    if denom == 0.0:
        raise ZeroSignalError("reference signal has zero max norm")
    return float(np.abs(x - xstar).max() / denom)


def rrmse(x, xstar) -> float:
    """Relative root mean squared error with the extra 1/sqrt(n) factor:
    ||x - x*||_2 / (sqrt(n) * ||x||_2)."""
    x = np.asarray(x, dtype=float)
    xstar = np.asarray(xstar, dtype=float)
    if x.shape != xstar.shape:
        raise ValueError(f"signal shapes differ: {x.shape} vs {xstar.shape}")
    denom = np.linalg.norm(x)
    if denom == 0.0:
        raise ZeroSignalError("reference signal has zero 2-norm")
    return float(np.linalg.norm(x - xstar) / (np.sqrt(x.size) * denom))


def _stage(name: str, func):
    """Run one pipeline stage, tagging any package error with its name."""
    try:
        return func()
    except Error as exc:
        raise type(exc)(f"stage '{name}': {exc}") from exc


def _load_or_generate(cfg: ExperimentConfig) -> graph.Graph:
    if cfg.graph_path is not None:
        return graph.load_graph(cfg.graph_path, cfg.coords_path)
    if cfg.generator == "grid":
        if cfg.rows is None or cfg.cols is None:
            raise ValueError("grid generator needs rows and cols")
        return graph.generate_grid(cfg.rows, cfg.cols)
    if cfg.generator == "geometric":
        if cfg.n is None or cfg.geo_radius is None:
            raise ValueError("geometric generator needs n and radius")
        return graph.generate_geometric(
            cfg.n, cfg.geo_radius, child_seed(cfg.seed, "graph")
        )
    raise ValueError("config names neither a graph file nor a generator")


def run_experiment(cfg: ExperimentConfig) -> ReportRow:
    """Run the full pipeline for one method and report its metrics.

    Pipeline: build the graph, eigendecompose its normalized Laplacian,
    form the leading-eigenvector sum test signal, detect communities (or
    import them), enlarge into a cover, build the blend weights, sample
    nodes, interpolate, and score. Everything downstream of the config is
    deterministic; wall_time_ms records the measured elapsed time.
    """
    if cfg.radius_r < 0:
        raise ValueError(f"R must be >= 0, got {cfg.radius_r}")
    if cfg.epsilon <= 0:
        raise ValueError(f"eps must be positive, got {cfg.epsilon}")
    t0 = time.perf_counter()

    g = _stage("graph", lambda: _load_or_generate(cfg))
    basis = _stage("eigendecomposition", lambda: spectral.eigendecompose(
        graph.laplacian(g, graph.LaplacianKind.NORMALIZED)))
    x = _stage("signal", lambda: spectral.leading_sum_signal(
        basis, cfg.signal_count))

    if cfg.partition_file is not None:
        part = _stage("partition import", lambda: clustering.import_partition(
            cfg.partition_file, g.n))
        q = _stage("modularity", lambda: clustering.modularity(g, part))
        j = part.n_communities
    else:
        if cfg.method not in clustering.BUILTIN_METHODS:
            raise ValueError(
                f"method {cfg.method!r} is not built in and no "
                "partition_file was given"
            )
        features = None
        if cfg.method == "filtered":
            features = _stage("features", lambda: clustering.random_feature_matrix(
                g.coords, cfg.k, child_seed(cfg.seed, "features")))
        j_range = clamp_j_range(cfg.jmin, cfg.jmax, g.n)
        part, j, q = _stage("clustering", lambda: clustering.select_partition_by_modularity(
            g, cfg.method, j_range,
            seed=child_seed(cfg.seed, "clusterer"),
            features=features, t_max=FILTER_T_MAX))

    cover = _stage("cover", lambda: pum.enlarge_cover(g, part, cfg.radius_r))
    pou = _stage("blend weights", lambda: pum.pou_weights(g, cover))
    nodes = _stage("sampling", lambda: sample_nodes(
        g, cfg.sample_count, child_seed(cfg.seed, "sampling")))
    samples = gbf.SampleSet(nodes=nodes, values=x[nodes])
    xstar = _stage("interpolation", lambda: pum.pum_interpolate(
        g, cover, pou, gbf.GBFSpec(epsilon=cfg.epsilon, s=cfg.s), samples))
    row_rmae = _stage("metrics", lambda: rmae(x, xstar))
    row_rrmse = _stage("metrics", lambda: rrmse(x, xstar))

    wall_ms = int(round((time.perf_counter() - t0) * 1000))
    return ReportRow(method=cfg.method, j=j, modularity=q,
                     rmae=row_rmae, rrmse=row_rrmse, wall_time_ms=wall_ms)


def format_row(row: ReportRow) -> str:
    return (f"{row.method},{row.j},{row.modularity:.4f},"
            f"{row.rmae:.3e},{row.rrmse:.3e},{row.wall_time_ms}")


def write_report(rows, path) -> None:
    """Write rows as CSV: errors in scientific notation with 4 significant
    digits, modularity with 4 decimals."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(REPORT_HEADER + "\n")
        for row in rows:
            fh.write(format_row(row) + "\n")


def parse_config(path) -> ExperimentConfig:
    """Parse a line-oriented "key = value" config file.

    '#' comments and blank lines are ignored; unknown or repeated keys are
    parse errors. The method value may hold a comma-separated list; see
    :meth:`ExperimentConfig.split_methods`.
    """
    raw: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ParseError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_KEYS:
                raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
            if key in raw:
                raise ParseError(f"{path}:{lineno}: repeated key {key!r}")
            if not value:
                raise ParseError(f"{path}:{lineno}: empty value for {key!r}")
            raw[key] = value

    def _convert(key, value):
        try:
            if key in _INT_KEYS:
                return int(value)
            if key in _FLOAT_KEYS:
                return float(value)
        except ValueError:
            raise ParseError(
                f"{path}: key {key!r} needs a number, got {value!r}"
            ) from None
        return value

    values = {key: _convert(key, value) for key, value in raw.items()}

    for key in ("method", "N", "R", "eps", "s"):
        if key not in values:
            raise ParseError(f"{path}: missing required key {key!r}")
    has_file = "graph" in values
    has_gen = "generator" in values
    if has_file == has_gen:
        raise ParseError(
            f"{path}: exactly one of 'graph' and 'generator' is required"
        )
    if has_gen and values["generator"] not in ("grid", "geometric"):
        raise ParseError(
            f"{path}: generator must be 'grid' or 'geometric', "
            f"got {values['generator']!r}"
        )

    return ExperimentConfig(
        method=values["method"],
        sample_count=values["N"],
        radius_r=values["R"],
        epsilon=values["eps"],
        s=values["s"],
        graph_path=values.get("graph"),
        coords_path=values.get("coords"),
        generator=values.get("generator"),
        rows=values.get("rows"),
        cols=values.get("cols"),
        n=values.get("n"),
        geo_radius=values.get("radius"),
        partition_file=values.get("partition_file"),
        jmin=values.get("jmin", 2),
        jmax=values.get("jmax", 10),
        k=values.get("k", 2000),
        signal_count=values.get("signal_count", 10),
        seed=values.get("seed", 0),
        out=values.get("out"),
    )
