"""SVD, Hermitian eigensolver, Moore-Penrose inverse and the Hartwig-Spindelböck form.

Every square matrix ``A`` of rank ``r`` can be written as::

    A = U [[S K, S L],
           [  0,   0]] U*

with ``U`` unitary, ``S = diag(sigma_1..sigma_r)`` the positive singular values
and ``K K* + L L* = I_r``.  :func:`hs_decompose` produces that form from the SVD;
the pseudoinverse then has the block expression used by :func:`mp_via_hs`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    EPS,
    NotSquareError,
    ToleranceConfig,
    approx_eq,
    as_matrix,
    rank_from_singular_values,
    require_square,
)


class ConvergenceError(ArithmeticError):
    """An iterative factorization hit its iteration cap."""


class NotHermitianError(ValueError):
    pass


def _freeze(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SvdResult:
    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        n, m = self.U.shape[0], self.V.shape[0]
        S = np.zeros((n, m), dtype=np.complex128)
        k = self.singular_values.size
        S[:k, :k] = np.diag(self.singular_values)
        return self.U @ S @ self.V.conj().T


@dataclass(frozen=True)
class HSDecomposition:
    """``A = U [[S K, S L], [0, 0]] U*`` with ``S = diag(sigma)``."""

    U: np.ndarray
    sigma: np.ndarray
    K: np.ndarray
    L: np.ndarray
    r: int

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @property
    def Sigma(self) -> np.ndarray:
        return np.diag(self.sigma).astype(np.complex128)

    def unitarity_residual(self) -> float:
        """``||K K* + L L* - I_r||_F``."""
        if self.r == 0:
            return 0.0
        G = self.K @ self.K.conj().T + self.L @ self.L.conj().T
        return float(np.linalg.norm(G - np.eye(self.r)))

    def reconstruct(self) -> np.ndarray:
        n, r = self.n, self.r
        M = np.zeros((n, n), dtype=np.complex128)
        if r:
            M[:r, :r] = self.sigma[:, None] * self.K
            M[:r, r:] = self.sigma[:, None] * self.L
        return self.U @ M @ self.U.conj().T


@dataclass(frozen=True)
class HermEig:
    Q: np.ndarray
    eigenvalues: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.Q * self.eigenvalues) @ self.Q.conj().T


def svd(A) -> SvdResult:
    """Full SVD ``A = U diag(s) V*`` with nonincreasing ``s``."""
    A = as_matrix(A)
    try:
        U, s, Vh = np.linalg.svd(A, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    return SvdResult(_freeze(U), _freeze(s), _freeze(Vh.conj().T))


def _pinv_from_svd(U, s, Vh, shape, cfg):
    r = rank_from_singular_values(s, shape, cfg)
    if r == 0:
        return np.zeros((shape[1], shape[0]), dtype=np.complex128)
    return (Vh[:r].conj().T / s[:r]) @ U[:, :r].conj().T


def mp_inverse(A, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse from the SVD, zeroing singular values under the rank cutoff."""
    A = as_matrix(A)
    try:
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    return _freeze(_pinv_from_svd(U, s, Vh, A.shape, cfg))


def penrose_residuals(A, X) -> dict:
    """Relative residuals of the four Penrose equations for a candidate ``X = A^+``."""
    A = np.asarray(A)
    X = np.asarray(X)
    scale = max(1.0, float(np.linalg.norm(A)))
    AX, XA = A @ X, X @ A
    return {
        "AXA=A": float(np.linalg.norm(AX @ A - A)) / scale,
        "XAX=X": float(np.linalg.norm(XA @ X - X)) / max(1.0, float(np.linalg.norm(X))),
        "(AX)*=AX": float(np.linalg.norm(AX.conj().T - AX)) / max(1.0, float(np.linalg.norm(AX))),
        "(XA)*=XA": float(np.linalg.norm(XA.conj().T - XA)) / max(1.0, float(np.linalg.norm(XA))),
    }


def hs_decompose(A, cfg: ToleranceConfig = DEFAULT_TOL) -> HSDecomposition:
    """Hartwig-Spindelböck decomposition built from the SVD ``A = W S V*``.

    Taking ``U = W`` gives ``U* A U = [[S V_r* W], [0]]``, so ``[K L] = V_r* W``,
    whose rows are orthonormal.  The zero matrix maps to ``r = 0`` and ``U = I``.
    """
    A = as_matrix(A)
    n = require_square(A)
    try:
        W, s, Vh = np.linalg.svd(A, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    r = rank_from_singular_values(s, A.shape, cfg)
    if r == 0:
        empty = np.zeros((0, 0), dtype=np.complex128)
        return HSDecomposition(
            _freeze(np.eye(n, dtype=np.complex128)),
            _freeze(np.zeros(0)),
            _freeze(empty),
            _freeze(np.zeros((0, n), dtype=np.complex128)),
            0,
        )
    KL = Vh[:r] @ W
    return HSDecomposition(
        _freeze(W), _freeze(s[:r].copy()), _freeze(KL[:, :r].copy()), _freeze(KL[:, r:].copy()), r
    )


def mp_via_hs(d: HSDecomposition) -> np.ndarray:
    """``A^+ = U [[K* S^-1, 0], [L* S^-1, 0]] U*``."""
    n, r = d.n, d.r
    M = np.zeros((n, n), dtype=np.complex128)
    if r:
        inv = 1.0 / d.sigma
        M[:r, :r] = d.K.conj().T * inv
        M[r:, :r] = d.L.conj().T * inv
    return _freeze(d.U @ M @ d.U.conj().T)


# -- Hermitian eigensolver -------------------------------------------------

def _tridiagonalize(A: np.ndarray):
    """Householder reduction ``A = Q T Q*`` with ``T`` Hermitian tridiagonal."""
    n = A.shape[0]
    T = A.astype(np.complex128, copy=True)
    Q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = T[k + 1:, k].copy()
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * norm_x
        v /= np.linalg.norm(v)
        # H = I - 2 v v* acting on rows/cols k+1..n-1
        T[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ T[k + 1:, :])
        T[:, k + 1:] -= 2.0 * np.outer(T[:, k + 1:] @ v, v.conj())
        Q[:, k + 1:] -= 2.0 * np.outer(Q[:, k + 1:] @ v, v.conj())
    return Q, T


def _tql_implicit(d: np.ndarray, e: np.ndarray, Z: np.ndarray, max_iter: int) -> None:
    """Implicit-shift QL on a real symmetric tridiagonal matrix, in place.

    ``d`` is the diagonal, ``e[i]`` the entry (i+1, i) with ``e[-1] = 0``; Givens
    rotations are accumulated into the columns of ``Z``.
    """
    n = d.size
    total = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > max_iter:
                raise ConvergenceError(f"QL iteration exceeded {max_iter} sweeps")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = Z[:, i + 1].copy()
                Z[:, i + 1] = s * Z[:, i] + c * zi1
                Z[:, i] = c * Z[:, i] - s * zi1
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def herm_eig(A, cfg: ToleranceConfig = DEFAULT_TOL) -> HermEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues nonincreasing.

    Householder tridiagonalization, a diagonal phase change that makes the
    off-diagonal real and nonnegative, then implicit QL.  The QL loop is capped
    at ``100 * n`` sweeps; hitting the cap raises :class:`ConvergenceError`.
    """
    A = as_matrix(A)
    n = require_square(A)
    if not approx_eq(A, A.conj().T, cfg):
        raise NotHermitianError("herm_eig requires a Hermitian matrix")
    H = 0.5 * (A + A.conj().T)
    Q, T = _tridiagonalize(H)
    d = T.diagonal().real.copy()
    off = T.diagonal(-1).copy()
    phases = np.ones(n, dtype=np.complex128)
    for k, z in enumerate(off):
        phases[k + 1] = phases[k] * (z / abs(z) if z != 0 else 1.0)
    e = np.zeros(n)
    e[: n - 1] = np.abs(off)
    Z = np.eye(n)
    _tql_implicit(d, e, Z, max_iter=100 * n)
    order = np.argsort(-d, kind="stable")
    vecs = (Q * phases) @ Z[:, order]
    return HermEig(_freeze(vecs), _freeze(d[order].copy()))


# -- Gram powers --------------------------------------------------------------

def gram_matrix(A, which: str) -> np.ndarray:
    A = np.asarray(A)
    if which == "left":
        return A @ A.conj().T
    if which == "right":
        return A.conj().T @ A
    raise ValueError(f"which must be 'left' or 'right', got {which!r}")


def gram_power(A, which: str, s: int, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``(AA*)^s`` (``which='left'``) or ``(A*A)^s`` (``'right'``).

    Negative exponents follow Khatri: ``G^-k = (G^+)^k``; ``G^0 = I``.
    """
    A = as_matrix(A)
    require_square(A)
    G = gram_matrix(A, which)
    s = int(s)
    if s < 0:
        G = mp_inverse(G, cfg)
    return _freeze(np.linalg.matrix_power(G, abs(s)))


# -- commutation with a positive diagonal ------------------------------------

def sigma_power(sigma, s: int) -> np.ndarray:
    return np.diag(np.asarray(sigma, dtype=np.float64) ** int(s)).astype(np.complex128)


def commutator_norm(S, K) -> float:
    S, K = np.asarray(S), np.asarray(K)
    return float(np.linalg.norm(S @ K - K @ S))


@dataclass(frozen=True)
class CommutationCheck:
    hypothesis: bool      # exponents satisfy the side condition of the implication
    premise: bool         # (S^s [+ S^t]) K = K (S^s [+ S^t])
    conclusion: bool      # S K = K S
    premise_residual: float
    conclusion_residual: float

    @property
    def consistent(self) -> bool:
        """False only when the implication applies, the premise holds and the conclusion fails."""
        return not (self.hypothesis and self.premise) or self.conclusion


def check_commutation(sigma, K, s: int, t: int | None = None, cfg: ToleranceConfig = DEFAULT_TOL):
    """Test whether commuting with ``S^s`` (or ``S^s + S^t``) forces ``S K = K S``.

    The implication is claimed for ``s != 0`` in the single-power form and for
    ``s*t >= 0, (s, t) != (0, 0)`` in the two-power form.
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    if np.any(sigma <= 0):
        raise ValueError("sigma entries must be positive")
    K = np.asarray(K, dtype=np.complex128)
    if t is None:
        M = sigma_power(sigma, s)
        hypothesis = s != 0
    else:
        M = sigma_power(sigma, s) + sigma_power(sigma, t)
        hypothesis = s * t >= 0 and (s, t) != (0, 0)
    S = sigma_power(sigma, 1)
    scale = max(1.0, float(np.linalg.norm(M)) * float(np.linalg.norm(K)))
    pres = commutator_norm(M, K)
    cres = commutator_norm(S, K)
    cscale = max(1.0, float(np.linalg.norm(S)) * float(np.linalg.norm(K)))
    return CommutationCheck(
        hypothesis=hypothesis,
        premise=pres <= cfg.eq_tol * scale,
        conclusion=cres <= cfg.eq_tol * cscale,
        premise_residual=pres,
        conclusion_residual=cres,
    )


def check_power_sum_commutation(sigma, K, exponents, cfg: ToleranceConfig = DEFAULT_TOL):
    """Sum version over nonnegative exponents, not all zero."""
    exponents = [int(e) for e in exponents]
    if any(e < 0 for e in exponents):
        raise ValueError("exponents must be nonnegative")
    sigma = np.asarray(sigma, dtype=np.float64)
    K = np.asarray(K, dtype=np.complex128)
    M = sum(sigma_power(sigma, e) for e in exponents)
    S = sigma_power(sigma, 1)
    pres = commutator_norm(M, K)
    cres = commutator_norm(S, K)
    return CommutationCheck(
        hypothesis=any(e != 0 for e in exponents),
        premise=pres <= cfg.eq_tol * max(1.0, float(np.linalg.norm(M)) * float(np.linalg.norm(K))),
        conclusion=cres <= cfg.eq_tol * max(1.0, float(np.linalg.norm(S)) * float(np.linalg.norm(K))),
        premise_residual=pres,
        conclusion_residual=cres,
    )
