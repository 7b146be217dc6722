"""
When does commuting with a power of S force commuting with S?
=============================================================

For positive diagonal S, S^s K = K S^s with s != 0 implies S K = K S.  The
two-power version needs s*t >= 0; the pair (3, -3) below shows why.
"""

# %%
import numpy as np

from tripotent import check_commutation, paper_examples

S, K = paper_examples()["commutation"]
sigma = np.diag(S).real
chk = check_commutation(sigma, K, 3, -3)
print("S^3 + S^-3 =", np.diag(np.diag(S) ** 3 + np.diag(S) ** -3).real)
print("premise residual", chk.premise_residual, "conclusion residual", chk.conclusion_residual)
print("inside the hypothesis?", chk.hypothesis)

# %% Inside the hypothesis the implication holds
print(check_commutation(sigma, K, 3, 2))
print(check_commutation([1.0, 1.0, 2.0], np.array([[0, 1, 0], [1, 0, 0], [0, 0, 5]]), 2))
