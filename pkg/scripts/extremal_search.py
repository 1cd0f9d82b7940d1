#!/usr/bin/env python3
"""Extremal search across polynomial lengths, warm-starting each length from the last.

Reports the best ratio per length and its gap to the bound constant. These are
lower bounds on the operator norm only.
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

from hilbert_tensor.experiments import extremal_search


@dataclass
class SearchConfig:
    p: float = 4.0
    m: int = 2
    lengths: list[int] = field(default_factory=lambda: [2, 4, 8, 12])
    budget: int = 5000
    seed: int = 7
    restarts: int = 8


def run(cfg: SearchConfig) -> dict:
    out, init = [], None
    for n in cfg.lengths:
        res = extremal_search(cfg.p, cfg.m, n, cfg.budget, cfg.seed, restarts=cfg.restarts, init=init)
        init = res.best_coeffs.coeffs.real
        out.append({"n": n, "best_ratio": res.best_ratio, "bound": res.bound, "gap": res.gap,
                    "evaluations": res.evaluations})
        print(f"n={n:3d}  best={res.best_ratio:.6f}  bound={res.bound:.6f}  gap={res.gap:.6f}", flush=True)
    return {"config": asdict(cfg), "runs": out}


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=4.0)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--lengths", type=int, nargs="+", default=[2, 4, 8, 12])
    ap.add_argument("--budget", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--json", help="also write the summary here")
    a = ap.parse_args(argv)
    result = run(SearchConfig(a.p, a.m, a.lengths, a.budget, a.seed))
    if a.json:
        with open(a.json, "w") as fh:
            json.dump(result, fh, indent=2)


if __name__ == "__main__":
    main()
