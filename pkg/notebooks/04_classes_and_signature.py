"""
Class membership, the signature and the intersection identities
===============================================================
"""

# %%
import numpy as np

from tripotent import INTERSECTIONS, GenSpec, classify, generate, signature
from tripotent.classes import intersection_agreement

A = generate(GenSpec(6, "ThreeOP", seed=2, signature=(3, 1, 2)))
for label, (ok, res) in classify(A).items():
    print(f"{label.value:8s} {ok!s:5s} {res:.1e}")
print("signature", signature(A))

# %% Each intersection of classes should contain exactly the orthogonal tripotents
for fam in ("ThreeOP", "TM", "MP", "PI", "hermitian-nontripotent"):
    B = generate(GenSpec(4, fam, seed=0))
    print(fam, {k: v[0] for k, v in intersection_agreement(B).items()})
print(INTERSECTIONS["a"])
