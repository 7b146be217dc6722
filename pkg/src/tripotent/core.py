"""Dense complex matrix substrate: validation, products, norms, rank, JSON I/O.

Matrices are plain ``numpy`` complex arrays.  :func:`as_matrix` is the single
entry point that admits data into the library: it rejects NaN/Inf, coerces to
``complex128`` and returns a read-only array, so every downstream function can
treat its inputs as immutable values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

EPS = np.finfo(np.float64).eps

# Multiplier on ``eps * max(rows, cols)`` for the default relative rank cutoff.
RANK_EPS_FACTOR = 10.0


class MatrixError(ValueError):
    """Invalid matrix data (non-finite entries, wrong rank of array)."""


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class NotSquareError(DimensionError):
    """A square matrix was required."""


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared by every predicate and checker.

    Parameters
    ----------
    eq_tol : float
        Relative Frobenius threshold used by :func:`approx_eq`.
    rank_rel_tol : float or None
        Relative singular-value cutoff for :func:`numerical_rank`.  ``None``
        selects ``RANK_EPS_FACTOR * eps * max(rows, cols)`` per matrix.
    eig_class_tol : float
        Distance below which an eigenvalue is snapped to a target value.
    """

    eq_tol: float = 1e-10
    rank_rel_tol: float | None = None
    eig_class_tol: float = 1e-8

    def __post_init__(self):
        for name in ("eq_tol", "rank_rel_tol", "eig_class_tol"):
            value = getattr(self, name)
            if value is not None and not (value >= 0 and np.isfinite(value)):
                raise ValueError(f"{name} must be a finite nonnegative number, got {value!r}")

    def rank_cutoff(self, shape) -> float:
        if self.rank_rel_tol is not None:
            return self.rank_rel_tol
        return RANK_EPS_FACTOR * EPS * max(shape)

    def with_eq_tol(self, eq_tol: float) -> "ToleranceConfig":
        return replace(self, eq_tol=eq_tol)


DEFAULT_TOL = ToleranceConfig()


def as_matrix(data) -> np.ndarray:
    """Validate ``data`` and return it as a read-only 2-D complex array."""
    if isinstance(data, np.ndarray) and data.dtype == np.complex128 and not data.flags.writeable:
        if data.ndim != 2:
            raise MatrixError(f"expected a 2-D array, got shape {data.shape}")
        return data
    try:
        arr = np.array(data, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise MatrixError(f"cannot interpret data as a complex matrix: {exc}") from exc
    if arr.ndim != 2:
        raise MatrixError(f"expected a 2-D array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise MatrixError(f"matrix dimensions must be positive, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise MatrixError("matrix contains NaN or Inf entries")
    arr.flags.writeable = False
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def require_square(A: np.ndarray) -> int:
    if A.shape[0] != A.shape[1]:
        raise NotSquareError(f"square matrix required, got shape {A.shape}")
    return A.shape[0]


def identity(n: int) -> np.ndarray:
    return _freeze(np.eye(n, dtype=np.complex128))


def conj_transpose(A) -> np.ndarray:
    """Return ``A*``, the conjugate transpose."""
    A = as_matrix(A)
    return _freeze(A.conj().T.copy())


def mat_mul(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    return _freeze(A @ B)


def trace(A) -> complex:
    A = as_matrix(A)
    require_square(A)
    return complex(np.trace(A))


def frobenius_norm(A) -> float:
    return float(np.linalg.norm(A))


def frobenius_distance(A, B) -> float:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    return float(np.linalg.norm(A - B))


def relative_residual(A, B) -> float:
    """``||A - B||_F / max(1, ||A||_F, ||B||_F)``, the quantity thresholded by :func:`approx_eq`."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    scale = max(1.0, float(np.linalg.norm(A)), float(np.linalg.norm(B)))
    return float(np.linalg.norm(A - B)) / scale


def approx_eq(A, B, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Relative-or-absolute Frobenius comparison at ``cfg.eq_tol``."""
    return relative_residual(A, B) <= cfg.eq_tol


def singular_values(A) -> np.ndarray:
    return np.linalg.svd(np.asarray(A), compute_uv=False)


def rank_from_singular_values(s: np.ndarray, shape, cfg: ToleranceConfig = DEFAULT_TOL,
                              scale: float | None = None) -> int:
    """Count singular values above ``cutoff * max(sigma_max, scale)``.

    ``scale`` is the magnitude of the operands when the matrix was formed by
    cancellation, such as ``I - AA*``; without it roundoff in an exactly zero
    difference would be counted as rank.
    """
    ref = float(s[0]) if s.size else 0.0
    if scale is not None:
        ref = max(ref, float(scale))
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(s > cfg.rank_cutoff(shape) * ref))


def numerical_rank(A, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    """Number of singular values above ``cutoff * sigma_max`` (0 for the zero matrix)."""
    A = as_matrix(A)
    return rank_from_singular_values(singular_values(A), A.shape, cfg)


# -- matrix JSON ------------------------------------------------------------

def matrix_to_dict(A) -> dict:
    A = as_matrix(A)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "re": A.real.tolist(),
        "im": A.imag.tolist(),
    }


def matrix_from_dict(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixError("matrix JSON must be an object")
    try:
        rows, cols = obj["rows"], obj["cols"]
        re, im = obj["re"], obj["im"]
    except KeyError as exc:
        raise MatrixError(f"matrix JSON missing field {exc}") from exc
    if not (isinstance(rows, int) and isinstance(cols, int)) or isinstance(rows, bool) or isinstance(cols, bool):
        raise MatrixError("'rows' and 'cols' must be integers")
    try:
        re = np.array(re, dtype=np.float64)
        im = np.array(im, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MatrixError(f"'re'/'im' must be nested arrays of numbers: {exc}") from exc
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise MatrixError(f"'re'/'im' must have shape ({rows}, {cols})")
    return as_matrix(re + 1j * im)


def dumps_matrix(A, indent=None) -> str:
    # json emits the shortest round-tripping repr (<= 17 significant digits).
    return json.dumps(matrix_to_dict(A), indent=indent, allow_nan=False)


def loads_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixError(f"invalid JSON: {exc}") from exc
    return matrix_from_dict(obj)


def read_matrix(path) -> np.ndarray:
    return loads_matrix(Path(path).read_text())


def write_matrix(path, A) -> None:
    Path(path).write_text(dumps_matrix(A) + "\n")
