#!/usr/bin/env python3
"""Verify the tensor bound over a seeded corpus and summarize lhs/rhs per (m, p)."""

from __future__ import annotations

import argparse
import json
import logging
from dataclasses import asdict, dataclass, field

from hilbert_tensor.experiments import verify_bound
from hilbert_tensor.series import random_corpus

log = logging.getLogger("bound_sweep")


@dataclass
class SweepConfig:
    count: int = 200
    seed: int = 20240607
    max_len: int = 8
    cases: list[tuple[int, float]] = field(
        default_factory=lambda: [(2, 4.0), (2, 6.0), (3, 6.0), (3, 8.0), (4, 10.0)])


def run(cfg: SweepConfig) -> dict:
    corpus = random_corpus(cfg.count, cfg.seed, cfg.max_len)
    summary = []
    for m, p in cfg.cases:
        ratios = []
        holds = True
        for f in corpus:
            rep = verify_bound(f, p, m)
            ratios.append(rep.ratio)
            holds &= rep.holds
        best = max(range(len(ratios)), key=ratios.__getitem__)
        log.info("m=%d p=%g max ratio %.4f", m, p, ratios[best])
        summary.append({"m": m, "p": p, "all_hold": holds, "max_ratio": ratios[best],
                        "mean_ratio": sum(ratios) / len(ratios), "argmax_index": best})
    return {"config": asdict(cfg), "summary": summary}


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=SweepConfig.count)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    print(json.dumps(run(SweepConfig(count=a.count, seed=a.seed)), indent=2))


if __name__ == "__main__":
    main()
