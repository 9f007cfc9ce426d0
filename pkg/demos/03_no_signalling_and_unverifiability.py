"""Walkthrough: the two hard limits of linear quantum mechanics.

1. No local operation on the observer's side can move the cat's reduced
   state — not random Kraus channels, not the full erase pipeline.
2. No measurement on the observer can tell a steered world from an
   untouched one: the observer's reduced state is identical either way.

Run with:  python demos/03_no_signalling_and_unverifiability.py
"""

import numpy as np

from realitysteer import (
    BranchStructure,
    RegisterLayout,
    StateVector,
    apply_local_channel,
    canonical_scenario,
    check_indistinguishability,
    check_no_signalling,
    partial_trace,
    random_channel,
    trace_distance,
)

rng = np.random.default_rng(20260810)

print("=== random local channels on the observer never move the cat ===")
layout = RegisterLayout.from_sizes([("C", 1), ("B", 1)])
worst = 0.0
for index in range(25):
    amps = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    state = StateVector(amps / np.linalg.norm(amps), 2)
    before = partial_trace(state, layout, ["C"])
    channel = random_channel(arity=1, num_kraus=1 + index % 3, rng=rng)
    after = partial_trace(apply_local_channel(state, layout, "B", channel), layout, ["C"])
    worst = max(worst, trace_distance(before, after))
print(f"  max trace distance over 25 random channel/state pairs: {worst:.2e}")

print("\n=== the bundled check adds the erase pipeline as a channel ===")
verdict = check_no_signalling(num_random_channels=100, rng_seed=1)
print(f"  {verdict.check_name}: metric={verdict.metric:.2e} "
      f"tolerance={verdict.tolerance:.0e} passed={verdict.passed}")

print("\n=== steering is operationally invisible to the observer ===")
for c0_sq in (0.5, 0.36):
    scenario = canonical_scenario(
        branch_structure=BranchStructure.two_branch(np.sqrt(c0_sq), np.sqrt(1 - c0_sq))
    )
    verdict = check_indistinguishability(scenario)
    print(f"  |c0|^2 = {c0_sq}: trace distance between the observer's state "
          f"with/without steering = {verdict.metric:.2e}")
print("\na transition leaves no internal witness: memories on both paths are")
print("self-consistent, so the observer cannot confirm that steering happened.")
