"""
Seeded generators
=================

Positive classes, negative families used for completeness sweeps, and
near misses made with ``perturb``.
"""

# %%
import numpy as np

from tripotent import GenSpec, generate, is_member, perturb, random_unitary
from tripotent.generators import COMPLETENESS_FAMILIES, task_rng, sample

U = random_unitary(5, seed=0)
print("unitarity", np.linalg.norm(U.conj().T @ U - np.eye(5)))

# %% Negative families fail exactly one property of the orthogonal tripotents
for fam in COMPLETENESS_FAMILIES:
    A = generate(GenSpec(4, fam, seed=1))
    print(f"{fam:24s}", {lab: is_member(A, lab) for lab in ("H", "TM", "N", "EP", "PI", "ThreeOP")})

# %% Near misses
T = generate(GenSpec(5, "ThreeOP", seed=3))
print(is_member(perturb(T, 1e-12, 0), "ThreeOP"), is_member(perturb(T, 1e-3, 0), "ThreeOP"))

# %% Streams for parallel work come from SeedSequence([base_seed, *index])
print(sample("H", 2, task_rng(7, 0, 1)).real)
