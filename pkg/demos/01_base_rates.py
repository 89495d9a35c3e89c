"""
Why a 75% accurate lie detector mostly flags honest travellers
==============================================================

A walk through the Bayesian side of the package: the joint outcome matrix,
the posteriors, and how both move with the share of liars in the crowd.
Run with ``python demos/01_base_rates.py``; figures land in ``demo_output/``.
"""

# %%
# The test and one scenario
# -------------------------
from pathlib import Path

import numpy as np

from screening_audit import ADDS_TEST, breakeven_prior, joint_matrix, posterior_report, prevalence_sweep
from screening_audit.render import posterior_table
from screening_audit.svg import sweep_svg

out = Path("demo_output")
out.mkdir(exist_ok=True)

print(ADDS_TEST)
report = posterior_report(ADDS_TEST, 0.05, 1000)
print(posterior_table(report))

# %%
# Where the positives come from
# -----------------------------
# Almost every positive comes from the large truthful group.
m = joint_matrix(ADDS_TEST, 0.05)
print(f"share of positives that are false alarms: {m.fp / m.p_positive:.1%}")

# %%
# Sweeping the prior
# ------------------
# PPV collapses as liars get rarer. A log grid shows the whole range.
curve = prevalence_sweep(ADDS_TEST, np.geomspace(1e-5, 0.5, 200).tolist())
for prior in (1e-4, 1e-3, 1e-2, 0.05):
    print(f"prior {prior:>7g}: PPV {posterior_report(ADDS_TEST, prior, 1).ppv:.2%}")
(out / "sweep.svg").write_text(sweep_svg(curve))

# %%
# Break-even
# ----------
p = breakeven_prior(ADDS_TEST, 0.5).value
print(f"a positive is a coin flip only once {p:.2%} of travellers lie (about 1 in {round(1 / p)})")
