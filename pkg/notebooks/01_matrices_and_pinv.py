"""
Matrices, tolerances and the Moore-Penrose inverse
==================================================

Every object in the package is a read-only complex128 array.  Equality is
always a relative Frobenius comparison, and rank uses a singular value cutoff.
"""

# %%
import numpy as np

from tripotent import DEFAULT_TOL, approx_eq, as_matrix, mp_inverse, numerical_rank, penrose_residuals

A = as_matrix([[1, 1], [0, 0]])
print(A.dtype, A.flags.writeable)

# %% The pseudoinverse comes from the SVD, so small singular values are dropped consistently
X = mp_inverse(A)
print(X.real)
print(penrose_residuals(A, X))

# %% Rank at the default cutoff ignores a singular value of 1e-15
print(numerical_rank(np.diag([1.0, 1e-15])), DEFAULT_TOL)

# %% A tiny perturbation still compares equal; a visible one does not
rng = np.random.default_rng(0)
G = rng.standard_normal((2, 2))
G /= np.linalg.norm(G)
print(approx_eq(A + 1e-13 * G, A), approx_eq(A + 1e-6 * G, A))
