#!/usr/bin/env python3
"""Print bound constants for every regime over a p grid (CSV on stdout)."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import numpy as np

from hilbert_tensor.hilbert import DomainError
from hilbert_tensor.special import BoundConstantSpec, Regime, bound_constant


@dataclass
class TableConfig:
    p_min: float = 2.05
    p_max: float = 24.0
    points: int = 60
    orders: list[int] = field(default_factory=lambda: [2, 4, 6])


def rows(cfg: TableConfig):
    for m in cfg.orders:
        for p in np.linspace(cfg.p_min, cfg.p_max, cfg.points):
            for regime in Regime:
                try:
                    spec = BoundConstantSpec(float(p), m, regime)
                except DomainError:
                    continue
                yield regime.value, m, float(p), bound_constant(spec)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-min", type=float, default=TableConfig.p_min)
    ap.add_argument("--p-max", type=float, default=TableConfig.p_max)
    ap.add_argument("--points", type=int, default=TableConfig.points)
    ap.add_argument("--orders", type=int, nargs="+", default=[2, 4, 6])
    a = ap.parse_args(argv)
    cfg = TableConfig(a.p_min, a.p_max, a.points, a.orders)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["regime", "m", "p", "constant"])
    w.writerows(rows(cfg))


if __name__ == "__main__":
    main()
