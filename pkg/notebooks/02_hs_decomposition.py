"""
Hartwig-Spindelböck decomposition
=================================

A = U [[S K, S L], [0, 0]] U* with U unitary, S the positive singular values
and K K* + L L* = I.  Most class memberships can be read off the blocks.
"""

# %%
import numpy as np

from tripotent import hs_class_check, hs_decompose, is_member, mp_inverse, mp_via_hs
from tripotent.classes import ClassLabel

rng = np.random.default_rng(1)
A = (rng.standard_normal((4, 2)) @ rng.standard_normal((2, 4))).astype(complex)
d = hs_decompose(A)
print("rank", d.r, "sigma", d.sigma)
print("KK* + LL* - I:", d.unitarity_residual())
print("reconstruction:", np.linalg.norm(d.reconstruct() - A))

# %% Two routes to the pseudoinverse
print(np.linalg.norm(mp_via_hs(d) - mp_inverse(A)))

# %% Block criteria against the defining equations
for label in ClassLabel:
    if label is ClassLabel.P:
        continue
    print(f"{label.value:8s} blocks={hs_class_check(d, label)!s:5s} equation={is_member(A, label)}")
