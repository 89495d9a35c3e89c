"""
How many independent samples are there really?
==============================================

Tens of thousands of segments sound like plenty. Segments from one person
are strongly correlated, though, so the number that matters is closer to
the participant count.
"""

# %%
from screening_audit.diagnostics import diagnose, effective_sample_size
from screening_audit.replica import DatasetSpec, generate_synthetic_dataset

data = generate_synthetic_dataset(DatasetSpec(target_total_vectors=32 * 13 * 26))
report = diagnose(data, holdout=2)
for note in report.notes:
    print(note)
print(f"ICC {report.icc:.3f}; {report.n_segments:.0f} training segments are worth about "
      f"{report.effective_sample_size:.0f} independent ones")

# %%
# The discount as a function of ICC
# ---------------------------------
for icc in (0.0, 0.01, 0.1, 0.5, 1.0):
    print(f"icc {icc:4.2f}: ESS {effective_sample_size(86_586, 30, icc):10.1f}")
