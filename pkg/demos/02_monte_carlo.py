"""
Simulated border crossings
==========================

Draws finite populations through the test and compares what happens with
the analytic expectations. Replicates use independent, seeded streams so the
numbers below are the same on every machine and for any worker count.
"""

# %%
from screening_audit import ADDS_TEST, SimulationConfig, build_event_tree, joint_matrix, simulate_screening
from screening_audit.render import tree_text

tree = build_event_tree(ADDS_TEST, 0.01, 10_000)
print(tree_text(tree))

# %%
# One large crossing, one million people
# --------------------------------------
big = simulate_screening(SimulationConfig(ADDS_TEST, 0.05, 10**6, master_seed=1))
m = joint_matrix(ADDS_TEST, 0.05)
for k, v in big.joint_frequencies.items():
    print(f"{k}: simulated {v:.5f}  expected {getattr(m, k):.5f}")
print(f"PPV {big.ppv.estimate:.4f}  95% interval [{big.ppv.lower:.4f}, {big.ppv.upper:.4f}]")

# %%
# Many small flights
# ------------------
# Referral load fluctuates around its mean from one flight to the next.
flights = simulate_screening(SimulationConfig(ADDS_TEST, 0.05, 200, replicates=500, master_seed=2), n_jobs=4)
print(f"referrals per 200-seat flight: mean {flights.mean_referrals:.1f}, "
      f"range {flights.referrals.min()}..{flights.referrals.max()}")
