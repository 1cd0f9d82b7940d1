"""Report records and their JSON/CSV forms."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .series import PowerSeries, series_to_list

SCHEMA_VERSION = "1"
HOLDS_RTOL = 1e-9

BOUND_CSV_HEADER = [
    "schema_version", "kind", "regime", "p", "m", "t", "n_coeffs",
    "lhs", "rhs", "ratio", "margin", "holds", "certifying",
]
TRAJECTORY_CSV_HEADER = ["schema_version", "evaluation", "ratio"]
SEARCH_CSV_HEADER = [
    "schema_version", "p", "m", "n_coeffs", "seed", "budget", "evaluations",
    "best_ratio", "search_ratio", "bound", "gap_to_bound",
]
CONSTANTS_CSV_HEADER = ["schema_version", "regime", "p", "m", "value"]
NORM_CSV_HEADER = ["schema_version", "space", "p", "value"]
APPLY_CSV_HEADER = ["schema_version", "k", "re", "im"]
EQUIVALENCE_CSV_HEADER = [
    "schema_version", "series_index", "z_re", "z_im",
    "series_integral", "series_mobius", "integral_mobius",
]


def _num(x):
    """JSON-safe float: infinities become strings."""
    x = float(x)
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


@dataclass
class BoundReport:
    kind: str
    config: dict
    lhs: float
    rhs: float
    regime: str
    certifying: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return math.inf if self.lhs > 0 else 0.0
        return self.lhs / self.rhs

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return bool(self.lhs <= self.rhs * (1.0 + HOLDS_RTOL))

    def holds_with_slack(self, slack: float) -> bool:
        return bool(self.lhs <= self.rhs * (1.0 + slack))

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "regime": self.regime,
            "config": self.config,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "ratio": _num(self.ratio),
            "margin": _num(self.margin),
            "holds": self.holds,
            "certifying": self.certifying,
            "notes": list(self.notes),
        }

    def csv_row(self) -> list:
        c = self.config
        return [SCHEMA_VERSION, self.kind, self.regime, c.get("p"), c.get("m"), c.get("t", ""),
                len(c.get("coeffs", [])), repr(self.lhs), repr(self.rhs), repr(self.ratio),
                repr(self.margin), self.holds, self.certifying]


@dataclass
class SearchResult:
    best_coeffs: PowerSeries
    best_ratio: float
    evaluations: int
    seed: int
    trajectory: list[tuple[int, float]]
    config: dict
    search_ratio: float = math.nan
    bound: float = math.nan

    @property
    def gap(self) -> float:
        return self.bound - self.best_ratio

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "best_coeffs": series_to_list(self.best_coeffs),
            "best_ratio": _num(self.best_ratio),
            "search_ratio": _num(self.search_ratio),
            "bound": _num(self.bound),
            "gap_to_bound": _num(self.gap),
            "evaluations": self.evaluations,
            "seed": self.seed,
            "trajectory": [[int(i), _num(r)] for i, r in self.trajectory],
        }


def table_csv(header: list[str], rows) -> str:
    """CSV text with ``header`` first; every row is prefixed with the schema version."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([SCHEMA_VERSION, *(v.item() if isinstance(v, np.generic) else v for v in row)])
    return buf.getvalue()


def bound_reports_csv(reports) -> str:
    return table_csv(BOUND_CSV_HEADER, (r.csv_row()[1:] for r in reports))


def trajectory_csv(result: SearchResult) -> str:
    return table_csv(TRAJECTORY_CSV_HEADER, ([i, repr(float(r))] for i, r in result.trajectory))


def search_csv(result: SearchResult) -> str:
    c = result.config
    row = [c.get("p"), c.get("m"), c.get("n_coeffs"), result.seed, c.get("budget"), result.evaluations,
           repr(result.best_ratio), repr(result.search_ratio), repr(result.bound), repr(result.gap)]
    return table_csv(SEARCH_CSV_HEADER, [row])


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, PowerSeries):
        return series_to_list(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dumps(obj, indent: int | None = 2) -> str:
    return json.dumps(obj, indent=indent, sort_keys=True, default=_default, allow_nan=False)


def canonical(obj) -> str:
    """Byte-comparison form: compact JSON with every ``timestamp`` key removed."""

    def strip(o):
        if isinstance(o, dict):
            return {k: strip(v) for k, v in o.items() if k != "timestamp"}
        if isinstance(o, list):
            return [strip(v) for v in o]
        return o

    if isinstance(obj, str):
        obj = json.loads(obj)
    return json.dumps(strip(obj), sort_keys=True, separators=(",", ":"))
