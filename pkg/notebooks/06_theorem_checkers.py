"""
Theorem checkers
================

Each checker evaluates a condition on A and compares it with membership in
the orthogonal tripotents.  Parameters outside a theorem's side conditions
are refused.
"""

# %%
import numpy as np

from tripotent import GenSpec, generate, paper_examples
from tripotent import characterizations as ch

T = generate(GenSpec(5, "ThreeOP", seed=0))
E = paper_examples()["average-star"]

for rep in (ch.check_average(T, "toStar"), ch.check_average(E, "toStar"), ch.check_average(E, "toA")):
    print(rep.to_dict())

# %% Power identities with Khatri negative powers
print(ch.check_power_family(T, "b", -2, 1).condition_holds)
try:
    ch.check_power_family(T, "b", 1, 2)
except ch.SideConditionError as exc:
    print("refused:", exc)

# %% One Facts object shares A*, A^+ and Gram powers across many checks
f = ch.Facts(T)
print(all(ch.check_rank_gram_matrix(f, "a", "b'", s, 0).condition_holds for s in (1, 2, 3)))

# %% Literal readings that do not characterize the class
print(ch.check_linear_family(np.diag([2.0]), "f").to_dict()["verdict_consistent"])
print(ch.check_condition_matrix(np.diag([1.0, -1.0, 0.0]), "b", "a'").condition_holds)
