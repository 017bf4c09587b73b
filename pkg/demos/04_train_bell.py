"""Train a clipped-surrogate agent to prepare a Bell pair.

A short run is enough for the policy to lock onto a 2-gate circuit.
Writes per-seed CSVs, a cross-seed summary, the best circuit, and an
SVG convergence plot under demos/out/.
"""

import os

import numpy as np

from gatesearch.harness import RunConfig, run_experiment
from gatesearch.harness.plot import emit_plot

out_dir = os.path.join(os.path.dirname(__file__), "out", "bell_ppo")
config = RunConfig(
    name="bell-ppo-demo",
    algorithm="ppo",
    target="bell",
    episodes=800,
    seeds=(0, 1, 2),
    out_dir=out_dir,
)

print(f"training {config.algorithm} on '{config.target}', "
      f"{config.episodes} episodes x {len(config.seeds)} seeds")
result = run_experiment(config)

for seed in config.seeds:
    train = result.seed_results[seed]
    returns = train.returns()
    first_hit = next(
        (r.episode for r in train.episodes if r.fidelity >= 0.99), None
    )
    print(f"seed {seed}: first success at episode {first_hit}, "
          f"mean return last 100 = {returns[-100:].mean():+.4f}, "
          f"best circuit length = {len(train.best_actions)}")

best = result.best_program()
print()
print(f"best circuit across seeds (fidelity {best.fidelity:.6f}):")
for label in best.labels:
    print(f"  {label}")

plot_path = os.path.join(out_dir, "bell-ppo-demo_plot.svg")
emit_plot(result.summary_csv_path, plot_path, title="Bell pair, clipped updates")
print()
print("metrics:", result.summary_csv_path)
print("plot:   ", plot_path)

# sanity: by the end, most episodes should be at the 2-gate optimum
lengths = np.array([r.length for r in result.seed_results[0].episodes[-100:]])
print("median episode length over the last 100 episodes:",
      int(np.median(lengths)))
