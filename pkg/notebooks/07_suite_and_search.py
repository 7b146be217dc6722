"""
Sweeps and counterexample search
================================

The suite evaluates every cell on generated orthogonal tripotents and on
five neighbouring families.  The search looks for matrices where a condition
and membership disagree.
"""

# %%
import numpy as np

from tripotent import SuiteConfig, run_suite, search_counterexample

report = run_suite(SuiteConfig(sizes=(1, 2, 3), trials_per_cell=2, theorems=("average", "linear-family")))
print(report.summary_by_theorem())
for (cell, fam, n), st in sorted(report.failures.items()):
    print("inconsistent:", cell, fam, n, st.failed)

# %% The normal matrices with eigenvalues +-i/sqrt3 satisfy A + A^+ = 2A*
found = search_counterexample("average/toStar", "normal-unit-modulus-spectrum", 10_000, seed=0)
A, rep = found
print(np.round(np.linalg.eigvals(A), 6), rep.condition_holds, rep.is_three_op)
print(search_counterexample("average/toA", "all", 2_000, seed=0))
