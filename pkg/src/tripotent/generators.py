"""Seeded construction of matrices in each class, near-misses, and the worked examples.

Randomness comes from ``numpy.random.Generator`` (PCG64).  Independent
streams for sweep tasks are derived with :func:`task_rng`, which hashes
``(base_seed, *task_index)`` through ``numpy.random.SeedSequence``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classes import ClassLabel, Signature

# Negative families: each fails exactly the advertised property.
NAMED = (
    "hermitian-nontripotent",
    "tripotent-nonhermitian",
    "normal-nontripotent",
    "partial-isometry-nonEP",
    "ep-nonPI",
    "normal-unit-modulus-spectrum",
    "gaussian",
)

COMPLETENESS_FAMILIES = (
    "hermitian-nontripotent",
    "tripotent-nonhermitian",
    "normal-nontripotent",
    "partial-isometry-nonEP",
    "ep-nonPI",
)

MAX_SIMILARITY_COND = 50.0


class InfeasibleSpecError(ValueError):
    pass


def _freeze(arr):
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


def rng_from_seed(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF))


def task_rng(base_seed: int, *index: int) -> np.random.Generator:
    entropy = [int(base_seed) & 0xFFFFFFFFFFFFFFFF] + [int(i) for i in index]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def complex_gaussian(rng, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _haar(rng, n: int) -> np.ndarray:
    Z = complex_gaussian(rng, (n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Ginibre matrix, R's diagonal phases moved into Q."""
    if n < 1:
        raise ValueError("n must be positive")
    return _freeze(_haar(rng_from_seed(seed), n))


def _conjugate(W, D):
    return W @ D @ W.conj().T


def _diag_conj(rng, values) -> np.ndarray:
    values = np.asarray(values, dtype=np.complex128)
    W = _haar(rng, values.size)
    return (W * values) @ W.conj().T


def _bounded_similarity(rng, n: int) -> np.ndarray:
    """Random invertible non-unitary P with condition number in (2, MAX_SIMILARITY_COND]."""
    W1, W2 = _haar(rng, n), _haar(rng, n)
    log_s = rng.uniform(0.0, np.log(MAX_SIMILARITY_COND), size=n)
    log_s[0], log_s[-1] = 0.0, rng.uniform(np.log(2.0), np.log(MAX_SIMILARITY_COND))
    return (W1 * np.exp(log_s)) @ W2.conj().T


def _similar(rng, values) -> np.ndarray:
    n = len(values)
    P = _bounded_similarity(rng, n)
    return (P * np.asarray(values, dtype=np.complex128)) @ np.linalg.inv(P)


def _signature_values(sig: Signature) -> np.ndarray:
    return np.array([1.0] * sig.p + [-1.0] * sig.q + [0.0] * sig.z)


def _random_signature(rng, n: int) -> Signature:
    p, q, _ = rng.multinomial(n, [1 / 3] * 3)
    return Signature(int(p), int(q), int(n - p - q))


def _away_from(rng, size, targets=(-1.0, 0.0, 1.0), margin=0.2, low=-2.5, high=2.5):
    out = np.empty(size)
    for i in range(size):
        while True:
            x = rng.uniform(low, high)
            if min(abs(x - t) for t in targets) >= margin:
                out[i] = x
                break
    return out


def _sigma_not_one(rng, r: int) -> np.ndarray:
    """Positive singular values, at least one bounded away from 1."""
    s = rng.uniform(0.3, 3.0, size=r)
    j = rng.integers(r)
    s[j] = rng.choice([rng.uniform(0.3, 0.8), rng.uniform(1.25, 3.0)])
    return s


def hs_assemble(U, sigma, K, L) -> np.ndarray:
    """``U [[S K, S L], [0, 0]] U*``."""
    U = np.asarray(U)
    n = U.shape[0]
    r = len(sigma)
    M = np.zeros((n, n), dtype=np.complex128)
    if r:
        sig = np.asarray(sigma, dtype=np.float64)[:, None]
        M[:r, :r] = sig * np.asarray(K)
        M[:r, r:] = sig * np.asarray(L)
    return U @ M @ U.conj().T


def _orthonormal_rows(rng, r: int, n: int) -> np.ndarray:
    return _haar(rng, n)[:r]


def _pick_rank(rng, n, rank, low=0, high=None):
    high = n if high is None else high
    if rank is not None:
        if not low <= rank <= high:
            raise InfeasibleSpecError(f"rank {rank} outside [{low}, {high}] for n={n}")
        return rank
    if low > high:
        raise InfeasibleSpecError(f"no admissible rank for n={n}")
    return int(rng.integers(low, high + 1))


@dataclass(frozen=True)
class GenSpec:
    n: int
    label: str
    seed: int = 0
    signature: tuple | None = None
    rank: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InfeasibleSpecError("n must be positive")
        if self.rank is not None and not 0 <= self.rank <= self.n:
            raise InfeasibleSpecError(f"rank {self.rank} infeasible for n={self.n}")
        if self.signature is not None:
            if _label_key(self.label) != ClassLabel.ThreeOP.value:
                raise InfeasibleSpecError("signature only applies to ThreeOP")
            if len(self.signature) != 3 or sum(self.signature) != self.n or min(self.signature) < 0:
                raise InfeasibleSpecError(f"signature {self.signature} must be nonnegative and sum to n")


def _label_key(label) -> str:
    if isinstance(label, ClassLabel):
        return label.value
    if label in NAMED:
        return label
    return ClassLabel.parse(label).value


def generate(spec: GenSpec) -> np.ndarray:
    """Matrix of the requested class or named negative construction."""
    return _freeze(_build(spec.n, _label_key(spec.label), rng_from_seed(spec.seed), spec.signature, spec.rank))


def sample(label, n: int, rng, signature=None, rank=None) -> np.ndarray:
    """Like :func:`generate` but drawing from an existing generator."""
    return _freeze(_build(n, _label_key(label), rng, signature, rank))


def _build(n, key, rng, signature=None, rank=None):
    if key == "ThreeOP":
        sig = Signature(*signature) if signature is not None else None
        if sig is None:
            if rank is not None:
                p = int(rng.integers(0, rank + 1))
                sig = Signature(p, rank - p, n - rank)
            else:
                sig = _random_signature(rng, n)
        return _diag_conj(rng, _signature_values(sig))
    if key == "OP":
        r = _pick_rank(rng, n, rank)
        return _diag_conj(rng, [1.0] * r + [0.0] * (n - r))
    if key == "H":
        r = _pick_rank(rng, n, rank)
        return _diag_conj(rng, list(rng.uniform(-2.5, 2.5, r)) + [0.0] * (n - r))
    if key == "P":
        r = _pick_rank(rng, n, rank)
        return _similar(rng, [1.0] * r + [0.0] * (n - r))
    if key == "TM":
        r = _pick_rank(rng, n, rank)
        return _similar(rng, list(rng.choice([-1.0, 1.0], r)) + [0.0] * (n - r))
    if key == "N":
        r = _pick_rank(rng, n, rank)
        lam = complex_gaussian(rng, r) * 1.5
        return _diag_conj(rng, list(lam) + [0.0] * (n - r))
    if key == "EP":
        r = _pick_rank(rng, n, rank)
        K = _haar(rng, r) if r else np.zeros((0, 0))
        return hs_assemble(_haar(rng, n), rng.uniform(0.3, 3.0, r), K, np.zeros((r, n - r)))
    if key == "MP":
        r = _pick_rank(rng, n, rank)
        M = _similar(rng, rng.choice([-1.0, 1.0], r)) if r else np.zeros((0, 0))
        B = np.zeros((n, n), dtype=np.complex128)
        B[:r, :r] = M
        return _conjugate(_haar(rng, n), B)
    if key == "SD":
        r = _pick_rank(rng, n, rank)
        sigma = rng.uniform(0.3, 3.0, r)
        # K diagonal commutes with S; only min(r, n - r) rows of L can be nonzero
        m = min(r, n - r)
        k_mod = np.ones(r)
        k_mod[:m] = rng.uniform(0.2, 1.0, m)
        K = np.diag(k_mod * np.exp(2j * np.pi * rng.random(r)))
        L = np.zeros((r, n - r), dtype=np.complex128)
        if m:
            L[:m] = np.sqrt(1.0 - k_mod[:m] ** 2)[:, None] * _orthonormal_rows(rng, m, n - r)
        return hs_assemble(_haar(rng, n), sigma, K, L)
    if key == "PI":
        r = _pick_rank(rng, n, rank)
        KL = _orthonormal_rows(rng, r, n)
        return hs_assemble(_haar(rng, n), np.ones(r), KL[:, :r], KL[:, r:])

    if key == "hermitian-nontripotent":
        r = _pick_rank(rng, n, rank, low=1)
        lam = list(rng.choice([-1.0, 1.0, 0.0], r)) + [0.0] * (n - r)
        lam[int(rng.integers(r))] = _away_from(rng, 1)[0]
        return _diag_conj(rng, lam)
    if key == "tripotent-nonhermitian":
        if n < 2:
            raise InfeasibleSpecError("a non-Hermitian tripotent needs n >= 2")
        r = _pick_rank(rng, n, rank, low=1)
        vals = list(rng.choice([-1.0, 1.0], r)) + [0.0] * (n - r)
        if len(set(vals)) == 1:
            vals[-1] = -vals[-1]
        while True:
            A = _similar(rng, vals)
            if np.linalg.norm(A - A.conj().T) >= 1e-2 * max(1.0, np.linalg.norm(A)):
                return A
    if key == "normal-nontripotent":
        r = _pick_rank(rng, n, rank, low=1)
        lam = complex_gaussian(rng, r) * 1.5
        for j in range(r):
            while min(abs(lam[j] - t) for t in (-1, 0, 1)) < 0.2:
                lam[j] = complex_gaussian(rng, 1)[0] * 1.5
        return _diag_conj(rng, list(lam) + [0.0] * (n - r))
    if key == "partial-isometry-nonEP":
        if n < 2:
            raise InfeasibleSpecError("a non-EP partial isometry needs n >= 2")
        r = _pick_rank(rng, n, rank, low=1, high=n - 1)
        # rows of [K L] orthonormal with L bounded away from zero
        while True:
            KL = _orthonormal_rows(rng, r, n)
            if np.linalg.norm(KL[:, r:]) >= 0.2:
                break
        return hs_assemble(_haar(rng, n), np.ones(r), KL[:, :r], KL[:, r:])
    if key == "ep-nonPI":
        r = _pick_rank(rng, n, rank, low=1)
        return hs_assemble(_haar(rng, n), _sigma_not_one(rng, r), _haar(rng, r), np.zeros((r, n - r)))
    if key == "normal-unit-modulus-spectrum":
        return _diag_conj(rng, lattice_spectrum(rng, n))
    if key == "gaussian":
        return complex_gaussian(rng, (n, n))
    raise InfeasibleSpecError(f"unknown label {key!r}")


# Spectrum lattice: phases at multiples of pi/4 on a few moduli, plus zero.
LATTICE_MODULI = (1.0, 1.0 / np.sqrt(3.0), np.sqrt(3.0), 0.5, 2.0)
LATTICE_PHASES = tuple(np.exp(1j * np.pi * k / 4) for k in range(8))


def lattice_spectrum(rng, n: int) -> np.ndarray:
    points = [0.0] + [m * ph for m in LATTICE_MODULI for ph in LATTICE_PHASES]
    idx = rng.integers(len(points), size=n)
    return np.array([points[i] for i in idx], dtype=np.complex128)


def perturb(A, epsilon: float, seed) -> np.ndarray:
    """``A + epsilon * G`` with ``G`` a seeded complex Gaussian of unit Frobenius norm."""
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    A = np.asarray(A, dtype=np.complex128)
    if epsilon == 0:
        return _freeze(A.copy())
    G = complex_gaussian(rng_from_seed(seed), A.shape)
    return _freeze(A + epsilon * G / np.linalg.norm(G))


def paper_examples() -> dict:
    """The two worked examples: the commutation counterexample and the 4x4 normal matrix."""
    s3 = np.sqrt(3.0)
    A = np.diag([1.0, -1.0, 1j / s3, -1j / s3])
    return {
        "commutation": (_freeze(np.diag([2.0, 0.5])), _freeze(np.array([[0.0, 1.0], [1.0, 0.0]]))),
        "average-star": _freeze(A),
        "average-star-pinv": _freeze(np.diag([1.0, -1.0, -s3 * 1j, s3 * 1j])),
    }
