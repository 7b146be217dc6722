"""Membership tests for the matrix classes and the +1/-1/0 signature.

Each class is defined by a matrix equation; membership means the equation
holds in relative Frobenius norm (:func:`tripotent.core.approx_eq`).  The same
classes can also be read off a Hartwig-Spindelböck decomposition, which gives
an independent second route used by :func:`hs_class_check`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, ToleranceConfig, approx_eq, as_matrix, require_square
from .decompositions import HSDecomposition, herm_eig, mp_inverse


class ClassLabel(str, enum.Enum):
    H = "H"          # Hermitian: A = A*
    P = "P"          # idempotent: A^2 = A
    OP = "OP"        # orthogonal projector: A^2 = A = A*
    TM = "TM"        # tripotent: A^3 = A
    N = "N"          # normal: AA* = A*A
    EP = "EP"        # AA^+ = A^+A
    MP = "MP"        # A^+ = A
    SD = "SD"        # star-dagger: A^+A* = A*A^+
    PI = "PI"        # partial isometry: A = AA*A
    ThreeOP = "ThreeOP"  # A^3 = A = A*

    @classmethod
    def parse(cls, value) -> "ClassLabel":
        if isinstance(value, cls):
            return value
        key = str(value).strip()
        aliases = {"3-OP": "ThreeOP", "3OP": "ThreeOP", "THREEOP": "ThreeOP"}
        key = aliases.get(key.upper(), key)
        for label in cls:
            if label.value.upper() == key.upper():
                return label
        raise ValueError(f"unknown class label {value!r}")


class UnsupportedLabelError(ValueError):
    pass


class NotThreeOPError(ValueError):
    pass


class UnclassifiableEigenvalueError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    p: int  # eigenvalue +1
    q: int  # eigenvalue -1
    z: int  # eigenvalue 0

    def __post_init__(self):
        if min(self.p, self.q, self.z) < 0:
            raise ValueError("signature counts must be nonnegative")

    @property
    def n(self) -> int:
        return self.p + self.q + self.z

    def as_tuple(self):
        return (self.p, self.q, self.z)


def _residual(X, Y) -> float:
    scale = max(1.0, float(np.linalg.norm(X)), float(np.linalg.norm(Y)))
    return float(np.linalg.norm(X - Y)) / scale


def class_residuals(A, cfg: ToleranceConfig = DEFAULT_TOL, pinv=None) -> dict:
    """Relative residual of each defining equation (ThreeOP takes the worse of its two)."""
    A = as_matrix(A)
    require_square(A)
    As = A.conj().T
    Ap = mp_inverse(A, cfg) if pinv is None else pinv
    A2 = A @ A
    A3 = A2 @ A
    h = _residual(A, As)
    p = _residual(A2, A)
    tm = _residual(A3, A)
    return {
        ClassLabel.H: h,
        ClassLabel.P: p,
        ClassLabel.OP: max(p, h),
        ClassLabel.TM: tm,
        ClassLabel.N: _residual(A @ As, As @ A),
        ClassLabel.EP: _residual(A @ Ap, Ap @ A),
        ClassLabel.MP: _residual(Ap, A),
        ClassLabel.SD: _residual(Ap @ As, As @ Ap),
        ClassLabel.PI: _residual(A @ As @ A, A),
        ClassLabel.ThreeOP: max(tm, h),
    }


def is_member(A, label, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    label = ClassLabel.parse(label)
    return class_residuals(A, cfg)[label] <= cfg.eq_tol


def classify(A, cfg: ToleranceConfig = DEFAULT_TOL) -> dict:
    """``{label: (member, residual)}`` for every class."""
    res = class_residuals(A, cfg)
    return {label: (r <= cfg.eq_tol, r) for label, r in res.items()}


def _close(X, Y, cfg) -> bool:
    return approx_eq(X, Y, cfg)


def hs_class_check(d: HSDecomposition, label, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Class membership read off the blocks ``S``, ``K``, ``L`` of the decomposition.

    ``P`` has no criterion of this kind and raises :class:`UnsupportedLabelError`.
    """
    label = ClassLabel.parse(label)
    if label is ClassLabel.P:
        raise UnsupportedLabelError("no block criterion for idempotents; use is_member")
    r = d.r
    if r == 0:
        return True
    I = np.eye(r)
    S = d.Sigma
    SK = S @ d.K
    l_zero = float(np.linalg.norm(d.L)) <= cfg.eq_tol * max(1.0, float(np.linalg.norm(d.K)))
    sigma_one = _close(S, I, cfg)
    ks_commute = _close(d.K @ S, SK, cfg)
    involution = _close(SK @ SK, I, cfg)
    if label is ClassLabel.EP:
        return l_zero
    if label is ClassLabel.PI:
        return sigma_one
    if label is ClassLabel.SD:
        return ks_commute
    if label is ClassLabel.N:
        return l_zero and ks_commute
    if label is ClassLabel.H:
        return l_zero and _close(SK.conj().T, SK, cfg)
    if label is ClassLabel.MP:
        return l_zero and involution
    if label is ClassLabel.TM:
        return involution
    if label is ClassLabel.ThreeOP:
        return l_zero and sigma_one and _close(d.K, d.K.conj().T, cfg)
    if label is ClassLabel.OP:
        # a projector restricted to its range is the identity
        return l_zero and sigma_one and _close(d.K, I, cfg)
    raise UnsupportedLabelError(label)  # pragma: no cover


def signature(A, cfg: ToleranceConfig = DEFAULT_TOL) -> Signature:
    """Counts of eigenvalues +1, -1, 0 for an orthogonal tripotent matrix."""
    A = as_matrix(A)
    require_square(A)
    if not is_member(A, ClassLabel.ThreeOP, cfg):
        raise NotThreeOPError("signature is only defined for A with A^3 = A = A*")
    lam = herm_eig(A, cfg).eigenvalues
    return snap_signature(lam, cfg)


def snap_signature(eigenvalues, cfg: ToleranceConfig = DEFAULT_TOL) -> Signature:
    counts = {1: 0, -1: 0, 0: 0}
    for lam in np.asarray(eigenvalues):
        for target in (1, -1, 0):
            if abs(lam - target) <= cfg.eig_class_tol:
                counts[target] += 1
                break
        else:
            raise UnclassifiableEigenvalueError(
                f"eigenvalue {lam!r} is not within {cfg.eig_class_tol} of -1, 0 or 1"
            )
    return Signature(counts[1], counts[-1], counts[0])


def k_idempotent_reduce(k: int) -> ClassLabel:
    """Class equivalent to ``A^k = A = A*``: projectors for even k, tripotents for odd k."""
    k = int(k)
    if k < 2:
        raise ValueError("k must be at least 2")
    return ClassLabel.OP if k % 2 == 0 else ClassLabel.ThreeOP


# Each item expresses ThreeOP as an intersection of other classes.
INTERSECTIONS = {
    "a": (ClassLabel.TM, ClassLabel.N),
    "b": (ClassLabel.H, ClassLabel.PI),
    "c": (ClassLabel.H, ClassLabel.MP),
    "d": (ClassLabel.TM, ClassLabel.EP, ClassLabel.PI),
    "e": (ClassLabel.TM, ClassLabel.EP, ClassLabel.SD),
    "f": (ClassLabel.MP, ClassLabel.SD),
    "g": (ClassLabel.MP, ClassLabel.PI),
}


def intersection_agreement(A, cfg: ToleranceConfig = DEFAULT_TOL) -> dict:
    """For each intersection item, ``(in_intersection, is_three_op)``."""
    member = {label: ok for label, (ok, _) in classify(A, cfg).items()}
    three = member[ClassLabel.ThreeOP]
    return {item: (all(member[l] for l in labels), three) for item, labels in INTERSECTIONS.items()}
