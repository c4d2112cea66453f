"""
A small sweep
=============

Sample a few hosts, embed a mixed corpus into each one and write the result
table. Running it twice produces identical files apart from timings.csv.
"""

import tempfile

from degenuniv.experiment import ExperimentConfig, run_experiment

config = ExperimentConfig.from_dict(
    {
        "n": 2000,
        "d": 2,
        "overrides": {"block_constant": 36, "prob_boost_factor": 8},
        "corpus": [
            {"family": "random_degenerate", "count": 4, "knobs": {"mode": "varied"}},
            {"family": "bounded_degree", "count": 2},
            {"family": "star"},
            {"family": "complete_bipartite"},
        ],
        "host_seeds": [0, 1],
    }
)

with tempfile.TemporaryDirectory() as out:
    config.out = out
    result = run_experiment(config)
    for seed in config.host_seeds:
        print(f"host {seed}: success rate {result.success_rate(seed):.2f}")
    print(open(f"{out}/results.csv").read().splitlines()[0])
