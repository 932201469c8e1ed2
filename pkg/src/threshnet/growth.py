"""Growth experiments: size sweeps, concentration checks, and curve fitting.

Sweeps regenerate the graph from scratch at every n under a threshold
schedule.  Node substreams are keyed by id, so node i keeps its latent
vector across all n within a sweep: nodes persist, edges are re-decided.
Growth-curve fits use the natural logarithm throughout.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import analytics
from .errors import DimensionError, DomainError, SeriesFormatError
from .generator import generate
from .model import EdgeRule, ModelConfig, ParetoParams

CSV_COLUMNS = ("n", "m", "em", "var", "theta")


@dataclass(frozen=True)
class GrowthPoint:
    n: int
    m: int
    em: float | None = None
    var: float | None = None
    theta: float | None = None


@dataclass
class GrowthSeries:
    points: list[GrowthPoint] = field(default_factory=list)
    provenance: str = "generated"  # generated | ingested
    log_convention: str = "natural"

    def __post_init__(self):
        ns = [p.n for p in self.points]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise SeriesFormatError("series n values must be strictly increasing")
        if any(p.m < 0 for p in self.points):
            raise SeriesFormatError("edge counts must be non-negative")

    @property
    def ns(self) -> np.ndarray:
        return np.array([p.n for p in self.points])

    @property
    def ms(self) -> np.ndarray:
        return np.array([p.m for p in self.points])


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares coefficients of m ~ c1 * n * ln(n) + c2 * n."""

    c1: float
    c2: float
    residual: float

    def __post_init__(self):
        if self.residual < 0:
            raise DomainError("residual cannot be negative")


@dataclass(frozen=True)
class ConcentrationRow:
    n: int
    mean_m: float
    sample_var: float
    predicted_var: float
    ratio: float
    flagged: bool


def run_growth_sweep(
    schedule,
    ns: list[int],
    pareto: ParetoParams,
    seeds: list[int],
    d: int = 3,
    workers: int = 1,
) -> dict[int, GrowthSeries]:
    """One GrowthSeries per seed: regenerate at each n under schedule's theta(n)."""
    if d != 3:
        raise DimensionError("growth analytics are defined for d = 3 only")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("sweep sizes must be strictly increasing")
    out: dict[int, GrowthSeries] = {}
    for seed in seeds:
        points = []
        for n in ns:
            theta = schedule.theta_for(n, pareto)
            config = ModelConfig(n=n, d=d, pareto=pareto, rule=EdgeRule.undirected(theta), seed=seed)
            graph = generate(config, workers=workers)
            points.append(
                GrowthPoint(
                    n=n,
                    m=graph.n_edges,
                    em=analytics.expected_edges(n, pareto, theta),
                    var=analytics.variance_edges(n, pareto, theta) if n >= 2 else 0.0,
                    theta=theta,
                )
            )
        out[seed] = GrowthSeries(points=points, provenance="generated")
    return out


def concentration_report(series_by_seed: dict[int, GrowthSeries], band=(0.5, 2.0)) -> list[ConcentrationRow]:
    """Sample vs predicted variance of the edge count per n, across seeds."""
    if len(series_by_seed) < 20:
        raise DomainError(f"concentration report needs >= 20 seeds, got {len(series_by_seed)}")
    all_series = list(series_by_seed.values())
    ns = [p.n for p in all_series[0].points]
    for s in all_series[1:]:
        if [p.n for p in s.points] != ns:
            raise DomainError("all seeds must share the same sweep sizes")
    rows = []
    for i, n in enumerate(ns):
        ms = np.array([s.points[i].m for s in all_series], dtype=float)
        predicted = all_series[0].points[i].var
        if predicted is None or predicted <= 0:
            raise DomainError(f"no predicted variance available at n={n}")
        sample_var = float(ms.var(ddof=1))
        ratio = sample_var / predicted
        rows.append(
            ConcentrationRow(
                n=n,
                mean_m=float(ms.mean()),
                sample_var=sample_var,
                predicted_var=float(predicted),
                ratio=ratio,
                flagged=not (band[0] <= ratio <= band[1]),
            )
        )
    return rows


def fit_growth_curve(series) -> GrowthFit:
    """Least squares for m ~ c1 * n * ln(n) + c2 * n over (n, m) pairs."""
    if isinstance(series, GrowthSeries):
        pairs = [(p.n, p.m) for p in series.points]
    else:
        pairs = [(int(n), float(m)) for n, m in series]
    ns = np.array([p[0] for p in pairs], dtype=float)
    ms = np.array([p[1] for p in pairs], dtype=float)
    if np.unique(ns).size < 3:
        raise DomainError("growth fit needs at least 3 distinct n values")
    design = np.column_stack([ns * np.log(ns), ns])
    if np.linalg.matrix_rank(design) < 2:
        raise DomainError("degenerate design: n values make n*ln(n) and n collinear")
    coef, _, _, _ = np.linalg.lstsq(design, ms, rcond=None)
    resid = ms - design @ coef
    return GrowthFit(c1=float(coef[0]), c2=float(coef[1]), residual=float(np.sqrt(np.mean(resid ** 2))))


def write_series_csv(path, series: GrowthSeries) -> None:
    """CSV with header n,m[,em,var,theta]; UTF-8, LF line endings."""
    has_extra = any(p.em is not None for p in series.points)
    cols = CSV_COLUMNS if has_extra else CSV_COLUMNS[:2]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for p in series.points:
            row = [p.n, p.m]
            if has_extra:
                row += [_fmt(p.em), _fmt(p.var), _fmt(p.theta)]
            writer.writerow(row)


def _fmt(x) -> str:
    return "" if x is None else format(x, ".17g")


def ingest_edge_count_series(path) -> GrowthSeries:
    """Parse and validate an (n, m[, em, var, theta]) CSV series."""
    points = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SeriesFormatError(f"{path}: empty file") from None
        header = [c.strip().lower() for c in header]
        if header[:2] != ["n", "m"]:
            raise SeriesFormatError(f"{path}:1: expected header starting with 'n,m', got {header}")
        extra = header[2:]
        if extra and extra != list(CSV_COLUMNS[2:]):
            raise SeriesFormatError(f"{path}:1: unexpected extra columns {extra}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise SeriesFormatError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            try:
                n = int(row[0])
                m = int(row[1])
                opt = [float(c) if c.strip() else None for c in row[2:]]
            except ValueError as exc:
                raise SeriesFormatError(f"{path}:{lineno}: {exc}") from None
            kw = dict(zip(("em", "var", "theta"), opt))
            points.append(GrowthPoint(n=n, m=m, **kw))
    if not points:
        raise SeriesFormatError(f"{path}: no data rows")
    ns = [p.n for p in points]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise SeriesFormatError(f"{path}: n values must be strictly increasing")
    if any(p.m < 0 for p in points):
        raise SeriesFormatError(f"{path}: negative edge count")
    return GrowthSeries(points=points, provenance="ingested")


def linlog_leading_coefficient(D: float, pareto: ParetoParams) -> float:
    """Limit of E[M](n) / (n ln n) under theta(n) = D n^(1/a)."""
    a, w0 = pareto.a, pareto.w0
    return w0 ** (2 * a) / (4.0 * D ** a * (a + 1.0))
