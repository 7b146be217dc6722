"""Executable characterizations of orthogonal tripotent matrices (A^3 = A = A*).

Each ``check_*`` function evaluates one family of equivalent conditions on a
matrix and compares the outcome with direct membership in the class.  The
result is a :class:`TheoremReport`; ``verdict_consistent`` is False only when a
claimed equivalence is contradicted numerically.

All checkers accept either an array or a :class:`Facts` instance.  ``Facts``
caches the quantities most identities share (``A*``, ``A^+``, Gram powers,
ranks), which keeps the large parameter sweeps affordable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classes import ClassLabel, class_residuals
from .core import DEFAULT_TOL, ToleranceConfig, as_matrix, matrix_to_dict, rank_from_singular_values, require_square
from .decompositions import _pinv_from_svd, herm_eig

INV_SQRT3 = 1.0 / np.sqrt(3.0)


class SideConditionError(ValueError):
    """The requested parameters fall outside the range where the equivalence is claimed."""


class UnknownVariantError(ValueError):
    pass


@dataclass
class TheoremReport:
    theorem_id: str
    condition_holds: bool
    is_three_op: bool
    verdict_consistent: bool
    residuals: dict = field(default_factory=dict)
    witness: np.ndarray | None = None
    variant: str | None = None
    params: dict = field(default_factory=dict)
    exclusion_flag: bool | None = None
    reference: str = "ThreeOP"
    reference_holds: bool | None = None

    def to_dict(self) -> dict:
        out = {
            "theorem_id": self.theorem_id,
            "condition_holds": bool(self.condition_holds),
            "is_three_op": bool(self.is_three_op),
            "verdict_consistent": bool(self.verdict_consistent),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "witness": None if self.witness is None else matrix_to_dict(self.witness),
        }
        if self.variant is not None:
            out["variant"] = self.variant
        if self.params:
            out["params"] = dict(self.params)
        if self.exclusion_flag is not None:
            out["exclusion_flag"] = bool(self.exclusion_flag)
        if self.reference != "ThreeOP":
            out["reference"] = self.reference
            out["reference_holds"] = bool(self.reference_holds)
        return out


def _rel(X, Y) -> float:
    scale = max(1.0, float(np.linalg.norm(X)), float(np.linalg.norm(Y)))
    return float(np.linalg.norm(X - Y)) / scale


class Facts:
    """Lazily computed, cached quantities of one square matrix."""

    def __init__(self, A, cfg: ToleranceConfig = DEFAULT_TOL):
        A = as_matrix(A)
        self.n = require_square(A)
        self.A = A
        self.cfg = cfg
        self._memo = {}
        self.As = A.conj().T
        U, s, Vh = np.linalg.svd(A)
        self.singular_values = s
        self.rank = rank_from_singular_values(s, A.shape, cfg)
        self.Ap = _pinv_from_svd(U, s, Vh, A.shape, cfg)
        self._svd = (U, s, Vh)
        self.norm2 = float(s[0]) if s.size else 0.0
        self.I = np.eye(self.n, dtype=np.complex128)

    def memo(self, key, fn):
        try:
            return self._memo[key]
        except KeyError:
            value = self._memo[key] = fn()
            return value

    @property
    def class_residuals(self):
        return self.memo("classes", lambda: class_residuals(self.A, self.cfg, pinv=self.Ap))

    def member(self, label) -> bool:
        return self.class_residuals[ClassLabel.parse(label)] <= self.cfg.eq_tol

    @property
    def is_three_op(self) -> bool:
        return self.member(ClassLabel.ThreeOP)

    def power(self, k: int) -> np.ndarray:
        if k == 0:
            return self.I
        if k == 1:
            return self.A
        return self.memo(("pow", k), lambda: self.power(k - 1) @ self.A)

    def gram(self, which: str, s: int) -> np.ndarray:
        """Khatri powers of ``AA*`` ('L') or ``A*A`` ('R')."""
        def build():
            if s == 0:
                return self.I
            if s == 1:
                return self.A @ self.As if which == "L" else self.As @ self.A
            if s == -1:
                G = self.gram(which, 1)
                Ug, sg, Vhg = np.linalg.svd(G)
                return _pinv_from_svd(Ug, sg, Vhg, G.shape, self.cfg)
            step = 1 if s > 0 else -1
            return self.gram(which, s - step) @ self.gram(which, step)
        return self.memo(("gram", which, s), build)

    def rank_of(self, key, M, scale: float | None = None) -> int:
        def build():
            return rank_from_singular_values(np.linalg.svd(M, compute_uv=False), M.shape, self.cfg, scale)
        return self.memo(("rank", key), build)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.memo("eigvals", lambda: np.linalg.eigvals(self.A))


def facts(A, cfg: ToleranceConfig = DEFAULT_TOL) -> Facts:
    if isinstance(A, Facts):
        return A
    return Facts(A, cfg)


class _Eval:
    """Collects named residuals while evaluating equalities."""

    def __init__(self, f: Facts):
        self.f = f
        self.residuals = {}

    def eq(self, name, X, Y) -> bool:
        r = _rel(X, Y)
        self.residuals[name] = r
        return r <= self.f.cfg.eq_tol

    def scalar_eq(self, name, a, b) -> bool:
        """Complex scalar equality at ``eq_tol * n`` relative to ``max(1, |a|, |b|)``."""
        diff = abs(complex(a) - complex(b))
        self.residuals[name] = diff
        return diff <= self.f.cfg.eq_tol * self.f.n * max(1.0, abs(a), abs(b))

    def int_eq(self, name, a: int, b: int) -> bool:
        self.residuals[name] = float(abs(a - b))
        return a == b


def _report(theorem_id, f: Facts, holds: bool, ev: _Eval, variant=None, params=None, **extra) -> TheoremReport:
    three = f.is_three_op
    return TheoremReport(
        theorem_id=theorem_id,
        condition_holds=bool(holds),
        is_three_op=three,
        verdict_consistent=bool(holds) == three,
        residuals=ev.residuals,
        witness=None if bool(holds) == three else f.A,
        variant=variant,
        params=params or {},
        **extra,
    )


def _variant(variant, allowed):
    v = str(variant).strip()
    if v not in allowed:
        raise UnknownVariantError(f"unknown variant {variant!r}; expected one of {sorted(allowed)}")
    return v


# -- canonical form, A = A* = A^+, E - F, SVD factors --------------------------

def check_canonical_form(A, cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """Unitary similarity to ``diag(1..1, -1..-1, 0..0)``."""
    f = facts(A, cfg)
    ev = _Eval(f)
    hermitian = ev.eq("A=A*", f.A, f.As)
    holds = False
    if hermitian:
        eig = herm_eig(f.A, f.cfg)
        lam = eig.eigenvalues
        snapped = np.array([min((-1.0, 0.0, 1.0), key=lambda t: abs(x - t)) for x in lam])
        dist = float(np.max(np.abs(lam - snapped))) if lam.size else 0.0
        ev.residuals["eigenvalue_snap"] = dist
        if dist <= f.cfg.eig_class_tol:
            holds = ev.eq("A=Q diag Q*", f.A, (eig.Q * snapped) @ eig.Q.conj().T)
    return _report("canonical-form", f, holds, ev)


def check_star_dagger_identity(A, cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """``A = A* = A^+``."""
    f = facts(A, cfg)
    ev = _Eval(f)
    h = ev.eq("A=A*", f.A, f.As)
    m = ev.eq("A=A+", f.A, f.Ap)
    return _report("star-dagger-identity", f, h and m, ev)


def _is_op(ev, name, E) -> bool:
    idem = ev.eq(f"{name}^2={name}", E @ E, E)
    herm = ev.eq(f"{name}={name}*", E, E.conj().T)
    return idem and herm


def _is_three_op(ev, name, H) -> bool:
    trip = ev.eq(f"{name}^3={name}", H @ H @ H, H)
    herm = ev.eq(f"{name}={name}*", H, H.conj().T)
    return trip and herm


def check_structural(A, cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """``A = E - F`` with commuting orthogonal projectors, and ``A = H + L`` with ``HL = LH = 0``.

    Uses ``E = (A^2 + A)/2`` and ``F = (A^2 - A)/2``: any commuting projector pair
    with ``A = E - F`` forces these formulas, so the construction is exhaustive.
    """
    f = facts(A, cfg)
    ev = _Eval(f)
    A2 = f.power(2)
    E = 0.5 * (A2 + f.A)
    F = 0.5 * (A2 - f.A)
    split_a = all([
        _is_op(ev, "E", E),
        _is_op(ev, "F", F),
        ev.eq("EF=FE", E @ F, F @ E),
        ev.eq("A=E-F", f.A, E - F),
    ])
    H, L = E, -F
    Z = np.zeros_like(f.A)
    split_b = all([
        _is_three_op(ev, "H", H),
        _is_three_op(ev, "L", L),
        ev.eq("HL=0", H @ L, Z),
        ev.eq("LH=0", L @ H, Z),
        ev.eq("A=H+L", f.A, H + L),
    ])
    ev.residuals["EF=0"] = _rel(E @ F, Z)
    return _report("structural", f, split_a and split_b, ev)


def check_svd_factors(A, cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """``A = U1 V1* = V1 U1*`` and ``(U1* V1)^2 = I_r`` for the rank-r SVD frames."""
    f = facts(A, cfg)
    ev = _Eval(f)
    U, _, Vh = f._svd
    r = f.rank
    U1 = U[:, :r]
    V1 = Vh[:r].conj().T
    Ir = np.eye(r)
    conds = [
        ev.eq("U1*U1=I", U1.conj().T @ U1, Ir),
        ev.eq("V1*V1=I", V1.conj().T @ V1, Ir),
        ev.eq("A=U1V1*", f.A, U1 @ V1.conj().T),
        ev.eq("A=V1U1*", f.A, V1 @ U1.conj().T),
    ]
    W = U1.conj().T @ V1
    conds.append(ev.eq("(U1*V1)^2=I", W @ W, Ir))
    return _report("svd-factors", f, all(conds), ev)


# -- averages ------------------------------------------------------------------

AVERAGE_VARIANTS = ("toA", "toDagger", "toStar")


def check_average(A, variant: str = "toA", cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """``(A + A* + A^+)/3`` equal to ``A``, ``A^+`` or ``A*``.

    For ``toStar`` the equivalence needs ``+-i/sqrt(3)`` to be absent from the
    spectrum; ``exclusion_flag`` records whether that hypothesis holds, and the
    verdict is only judged when it does.
    """
    variant = _variant(variant, AVERAGE_VARIANTS)
    f = facts(A, cfg)
    ev = _Eval(f)
    avg = (f.A + f.As + f.Ap) / 3.0
    target = {"toA": f.A, "toDagger": f.Ap, "toStar": f.As}[variant]
    holds = ev.eq(f"avg={variant[2:]}", avg, target)
    if variant != "toStar":
        return _report("average", f, holds, ev, variant=variant)
    lam = f.eigenvalues
    dist = float(np.min(np.abs(np.abs(lam.imag) - INV_SQRT3) + np.abs(lam.real))) if lam.size else np.inf
    ev.residuals["distance_to_i/sqrt3"] = dist
    exclusion = dist > f.cfg.eig_class_tol
    rep = _report("average", f, holds, ev, variant=variant, exclusion_flag=exclusion)
    if not exclusion:
        rep.verdict_consistent = True
        rep.witness = None
    return rep


# -- linear equations ------------------------------------------------------------

def _linear_sides(f: Facts, v: str):
    A, As, Ap = f.A, f.As, f.Ap
    if v == "b":
        return As + A @ Ap @ As, A + A @ As @ A
    if v == "c":
        return A + A @ Ap @ As, Ap + A @ As @ Ap
    if v == "d":
        return A + f.power(2) @ Ap, Ap + Ap @ A @ As
    if v == "e":
        return A + f.power(2) @ As, Ap + Ap @ A @ As
    if v == "f":
        return A + f.power(2) @ As, As + As @ A @ As
    if v == "g":
        return Ap @ A + Ap @ As, f.power(2) + As @ As
    if v == "h":
        return Ap @ A + As @ Ap, f.power(2) + As @ As
    raise UnknownVariantError(v)  # pragma: no cover


LINEAR_VARIANTS = tuple("bcdefgh")


def check_linear_family(A, variant: str = "b", cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """Linear identities in ``A``, ``A*``, ``A^+`` (e.g. ``A* + AA^+A* = A + AA*A``)."""
    variant = _variant(variant, LINEAR_VARIANTS)
    f = facts(A, cfg)
    ev = _Eval(f)
    lhs, rhs = _linear_sides(f, variant)
    return _report("linear-family", f, ev.eq(f"({variant})", lhs, rhs), ev, variant=variant)


# -- integer powers of AA* and A*A ---------------------------------------------------

# variant -> (left factor, left Gram, right factor, right Gram)
POWER_IDENTITIES = {
    "b": ("A", "L", "Ap", "L"),
    "c": ("As", "L", "A", "R"),
    "d": ("A", "R", "As", "R"),
    "e": ("A", "R", "Ap", "R"),
    "f": ("A", "L", "As", "L"),
    "g": ("A", "R", "Ap", "L"),
}

POWER_SIDE = {
    "b": lambda s, t: s != t and s - t + 1 != 0,
    "c": lambda s, t: s != t and s + t + 1 != 0,
    "d": lambda s, t: s != t and s - t + 1 != 0,
    "e": lambda s, t: s != t and s - t + 1 != 0,
    "f": lambda s, t: s != t and s - t - 1 != 0,
    "g": lambda s, t: s != -t and s - t + 1 != 0,
}


def _factor(f: Facts, name):
    return {"A": f.A, "As": f.As, "Ap": f.Ap}[name]


def _two_power_identity(f: Facts, spec, s, t):
    x, gx, y, gy = spec
    return _factor(f, x) @ f.gram(gx, s), _factor(f, y) @ f.gram(gy, t)


def _power_name(spec, s, t):
    x, gx, y, gy = spec
    g = {"L": "(AA*)", "R": "(A*A)"}
    return f"{x}{g[gx]}^{s}={y}{g[gy]}^{t}"


def check_power_family(A, variant: str = "b", s: int = 2, t: int = 0, cfg: ToleranceConfig = DEFAULT_TOL):
    """Two-exponent identities such as ``A(AA*)^s = A^+(AA*)^t``."""
    variant = _variant(variant, POWER_IDENTITIES)
    s, t = int(s), int(t)
    if not POWER_SIDE[variant](s, t):
        raise SideConditionError(f"power-family ({variant}) makes no claim for s={s}, t={t}")
    f = facts(A, cfg)
    ev = _Eval(f)
    spec = POWER_IDENTITIES[variant]
    lhs, rhs = _two_power_identity(f, spec, s, t)
    holds = ev.eq(_power_name(spec, s, t), lhs, rhs)
    return _report("power-family", f, holds, ev, variant=variant, params={"s": s, "t": t})


# variant -> (lhs factor, rhs factor, Gram, excluded s)
COROLLARY_IDENTITIES = {
    "b": ("A", "Ap", "L", 1),
    "c": ("Ap", "A", "L", -1),
    "d": ("As", "A", "R", -1),
    "e": ("A", "As", "L", -1),
    "f": ("A", "As", "R", 1),
    "g": ("A", "Ap", "R", 1),
    "h": ("Ap", "A", "R", -1),
    "i": ("As", "A", "L", 1),
}


def corollary_side(variant, s) -> bool:
    return s != 0 and s != COROLLARY_IDENTITIES[variant][3]


def _one_power_identity(f: Facts, spec, s):
    x, y, g, _ = spec
    return _factor(f, x), _factor(f, y) @ f.gram(g, s)


def _one_power_name(spec, s):
    x, y, g, _ = spec
    return f"{x}={y}{ {'L': '(AA*)', 'R': '(A*A)'}[g] }^{s}".replace(" ", "")


def check_corollary_powers(A, variant: str = "b", s: int = 2, cfg: ToleranceConfig = DEFAULT_TOL):
    """One-exponent identities such as ``A = A^+(AA*)^s``."""
    variant = _variant(variant, COROLLARY_IDENTITIES)
    s = int(s)
    if not corollary_side(variant, s):
        raise SideConditionError(f"corollary ({variant}) makes no claim for s={s}")
    f = facts(A, cfg)
    ev = _Eval(f)
    spec = COROLLARY_IDENTITIES[variant]
    lhs, rhs = _one_power_identity(f, spec, s)
    holds = ev.eq(_one_power_name(spec, s), lhs, rhs)
    return _report("corollary-powers", f, holds, ev, variant=variant, params={"s": s})


# b..g reuse one-exponent identities, h..l two-exponent ones, with the same exclusions
GRAM_PROJECTOR_MAP = {
    "b": ("corollary", "b"),
    "c": ("corollary", "c"),
    "d": ("corollary", "d"),
    "e": ("corollary", "e"),
    "f": ("corollary", "i"),
    "g": ("corollary", "h"),
    "h": ("power", "b"),
    "i": ("power", "c"),
    "j": ("power", "d"),
    "k": ("power", "f"),
    "l": ("power", "g"),
}


def gram_projector_side(variant, s, t=None) -> bool:
    kind, base = GRAM_PROJECTOR_MAP[variant]
    if kind == "corollary":
        return corollary_side(base, s)
    return POWER_SIDE[base](s, t)


def _gram_is_projector(f: Facts, ev: _Eval) -> bool:
    def build():
        G = f.gram("L", 1)
        return (_rel(G @ G, G), _rel(G, G.conj().T))
    idem, herm = f.memo("gram-op", build)
    ev.residuals["(AA*)^2=AA*"] = idem
    ev.residuals["AA*=(AA*)*"] = herm
    return idem <= f.cfg.eq_tol and herm <= f.cfg.eq_tol


def check_gram_projector_family(A, variant: str = "b", s: int = 2, t: int | None = None,
                                cfg: ToleranceConfig = DEFAULT_TOL):
    """``AA*`` an orthogonal projector together with a power identity."""
    variant = _variant(variant, GRAM_PROJECTOR_MAP)
    kind, base = GRAM_PROJECTOR_MAP[variant]
    s = int(s)
    if kind == "power":
        if t is None:
            raise SideConditionError(f"gram-projector ({variant}) needs both s and t")
        t = int(t)
    if not gram_projector_side(variant, s, t):
        raise SideConditionError(f"gram-projector ({variant}) makes no claim for s={s}, t={t}")
    f = facts(A, cfg)
    ev = _Eval(f)
    op = _gram_is_projector(f, ev)
    if kind == "corollary":
        spec = COROLLARY_IDENTITIES[base]
        lhs, rhs = _one_power_identity(f, spec, s)
        ident = ev.eq(_one_power_name(spec, s), lhs, rhs)
        params = {"s": s}
    else:
        spec = POWER_IDENTITIES[base]
        lhs, rhs = _two_power_identity(f, spec, s, t)
        ident = ev.eq(_power_name(spec, s, t), lhs, rhs)
        params = {"s": s, "t": t}
    return _report("gram-projector", f, op and ident, ev, variant=variant, params=params)


# -- rank and trace ----------------------------------------------------------------

def _tr(M) -> complex:
    return complex(np.trace(M))


RANK_TRACE_VARIANTS = tuple("bcde")


def check_rank_trace(A, variant: str = "b", cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """Trace equalities paired with a matrix equation, e.g. ``tr(A*A) + tr((A*A)^+) = 2 r(A)``."""
    variant = _variant(variant, RANK_TRACE_VARIANTS)
    f = facts(A, cfg)
    ev = _Eval(f)
    A, As, Ap, r = f.A, f.As, f.Ap, f.rank
    R = f.gram("R", 1)
    if variant in ("b", "c"):
        tr_ok = ev.scalar_eq("tr(A*A)+tr((A*A)^+)=2r", _tr(R) + _tr(f.gram("R", -1)), 2 * r)
        if variant == "b":
            mat_ok = ev.eq("A*A=A*A^+", R, As @ Ap)
        else:
            mat_ok = ev.eq("A^+A=A^+A*", Ap @ A, Ap @ As)
    elif variant == "d":
        tr_ok = ev.scalar_eq("tr(AA*)+tr(A*A)=2Re tr(A^2)", _tr(f.gram("L", 1)) + _tr(R), 2 * _tr(f.power(2)).real)
        mat_ok = ev.eq("A*A=A*A^+", R, As @ Ap)
    else:
        lhs = _tr(A @ Ap) + _tr(f.power(3) @ Ap @ As @ As)
        tr_ok = ev.scalar_eq("tr(AA^+)+tr(A^3A^+(A*)^2)=2Re tr(A^2)", lhs, 2 * _tr(f.power(2)).real)
        mat_ok = ev.eq("AA*=A*A", f.gram("L", 1), R)
    return _report("rank-trace", f, tr_ok and mat_ok, ev, variant=variant)


REMARK_VARIANTS = tuple("abc")


def check_remark_identities(A, variant: str = "a", k: int = 3, cfg: ToleranceConfig = DEFAULT_TOL):
    """Trace identities derived from the rank/trace family.

    (a) ``A = A*`` and ``r(A) + tr(A^4) = 2 Re tr(A^2)``;
    (b) ``A`` normal and ``r(AA^+) + tr(A^2 (A*)^2) = 2 Re tr(A^2)``;
    (c) ``r(A) + tr(A^k A^+ (A*)^(k-1)) = 2 Re tr(A^(k-1))``, compared with ``A^k = A``
        rather than with orthogonal tripotency.
    """
    variant = _variant(variant, REMARK_VARIANTS)
    f = facts(A, cfg)
    ev = _Eval(f)
    A, As, Ap, r = f.A, f.As, f.Ap, f.rank
    if variant == "a":
        herm = ev.eq("A=A*", A, As)
        ident = ev.scalar_eq("r+tr(A^4)=2Re tr(A^2)", r + _tr(f.power(4)), 2 * _tr(f.power(2)).real)
        return _report("remark-identities", f, herm and ident, ev, variant=variant)
    if variant == "b":
        normal = ev.eq("AA*=A*A", f.gram("L", 1), f.gram("R", 1))
        rp = f.rank_of("AA+", A @ Ap, 1.0)
        ident = ev.scalar_eq("r(AA^+)+tr(A^2(A*)^2)=2Re tr(A^2)", rp + _tr(f.power(2) @ As @ As),
                             2 * _tr(f.power(2)).real)
        return _report("remark-identities", f, normal and ident, ev, variant=variant)
    k = int(k)
    if k < 2:
        raise SideConditionError("variant (c) needs k >= 2")
    As_km1 = np.linalg.matrix_power(As, k - 1)
    lhs = r + _tr(f.power(k) @ Ap @ As_km1)
    holds = ev.scalar_eq(f"r+tr(A^{k}A^+(A*)^{k - 1})=2Re tr(A^{k - 1})", lhs, 2 * _tr(f.power(k - 1)).real)
    ref = _rel(f.power(k), A) <= f.cfg.eq_tol
    ev.residuals[f"A^{k}=A"] = _rel(f.power(k), A)
    return TheoremReport(
        theorem_id="remark-identities",
        condition_holds=holds,
        is_three_op=f.is_three_op,
        verdict_consistent=holds == ref,
        residuals=ev.residuals,
        witness=None if holds == ref else f.A,
        variant=variant,
        params={"k": k},
        reference=f"A^{k}=A",
        reference_holds=ref,
    )


NORMAL_TRACE_VARIANTS = tuple("bcde")


def check_normal_trace(A, variant: str = "b", cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """``A`` normal, ``AA*`` an orthogonal projector, and a trace identity.

    In (e) the last term is read as ``tr((A^+)^2)``.
    """
    variant = _variant(variant, NORMAL_TRACE_VARIANTS)
    f = facts(A, cfg)
    ev = _Eval(f)
    A, As, Ap, r = f.A, f.As, f.Ap, f.rank
    normal = ev.eq("AA*=A*A", f.gram("L", 1), f.gram("R", 1))
    op = _gram_is_projector(f, ev)
    trAAs = _tr(f.gram("L", 1))
    if variant == "b":
        ident = ev.scalar_eq("r+tr(AA*)=2tr(A^2)", r + trAAs, 2 * _tr(f.power(2)))
    elif variant == "c":
        ident = ev.scalar_eq("r+tr(AA^+)=2tr(A*A^+)", r + _tr(A @ Ap), 2 * _tr(As @ Ap))
    elif variant == "d":
        ident = ev.scalar_eq("r+tr(AA*)=2Re tr((A*)^2)", r + trAAs, 2 * _tr(As @ As).real)
    else:
        ident = ev.scalar_eq("r+tr(AA*)=Re(tr(AA^+)+tr((A^+)^2))", r + trAAs, (_tr(A @ Ap) + _tr(Ap @ Ap)).real)
    return _report("normal-trace", f, normal and op and ident, ev, variant=variant)


# -- condition matrices ---------------------------------------------------------------

def _semisimple_at(f: Facts, mus) -> bool:
    """Index one at each ``mu``: ``r(A - mu I) = r((A - mu I)^2)``."""
    for mu in mus:
        B = f.A - mu * f.I
        scale = f.norm2 + abs(mu)
        if f.rank_of(("A-mu", mu), B, scale) != f.rank_of(("(A-mu)^2", mu), B @ B, scale ** 2):
            return False
    return True


def _null_basis(M, cfg, scale=None) -> np.ndarray:
    _, s, Vh = np.linalg.svd(M)
    r = rank_from_singular_values(s, M.shape, cfg, scale)
    return Vh[r:].conj().T


def _range_basis(M, cfg, scale=None) -> np.ndarray:
    U, s, _ = np.linalg.svd(M)
    r = rank_from_singular_values(s, M.shape, cfg, scale)
    return U[:, :r]


def _is_direct_sum_of_whole_space(f: Facts, bases) -> bool:
    dims = sum(b.shape[1] for b in bases)
    if dims != f.n:
        return False
    joined = np.hstack(bases)
    return rank_from_singular_values(np.linalg.svd(joined, compute_uv=False), joined.shape, f.cfg) == f.n


def tripotent_row(f: Facts, row: str, k: int = 1, ev: _Eval | None = None) -> bool:
    """Row conditions, each claimed equivalent to ``A^3 = A``."""
    ev = ev or _Eval(f)
    A, Ap, n = f.A, f.Ap, f.n
    if row == "a":
        total = f.rank + f.rank_of("I-A", f.I - A, 1 + f.norm2) + f.rank_of("I+A", f.I + A, 1 + f.norm2)
        return ev.int_eq("r(A)+r(I-A)+r(I+A)=2n", total, 2 * n)
    if row == "b":
        def build():
            bases = [_range_basis(M, f.cfg, 1 + f.norm2) for M in (A, f.I - A, f.I + A)]
            return _is_direct_sum_of_whole_space(f, bases)
        ok = f.memo("row-b", build)
        ev.residuals["R(A)+R(I-A)+R(I+A) direct"] = 0.0 if ok else 1.0
        return ok
    if row == "c":
        def build():
            bases = [_null_basis(M, f.cfg, 1 + f.norm2) for M in (A, f.I - A, f.I + A)]
            return _is_direct_sum_of_whole_space(f, bases)
        ok = f.memo("row-c", build)
        ev.residuals["N(A)+N(I-A)+N(I+A) direct"] = 0.0 if ok else 1.0
        return ok
    if row in ("d", "e"):
        k = int(k)
        if k < 1:
            raise SideConditionError("rows (d) and (e) need k >= 1")
        power_ok = ev.eq(f"A^{k + 2}=A^{k}", f.power(k + 2), f.power(k))
        if row == "d":
            extra = _semisimple_at(f, (0.0, 1.0, -1.0))
            ev.residuals["diagonalizable"] = 0.0 if extra else 1.0
        else:
            extra = f.member(ClassLabel.EP)
            ev.residuals["EP"] = f.class_residuals[ClassLabel.EP]
        return power_ok and extra
    if row == "f":
        return ev.eq("A^+(A^2)*=A^+", Ap @ f.power(2).conj().T, Ap)
    if row == "g":
        return ev.eq("A^+=A^+A^3A^+", Ap, Ap @ f.power(3) @ Ap)
    raise UnknownVariantError(row)


def hermitian_col(f: Facts, col: str, ev: _Eval | None = None) -> bool:
    """Column conditions, each claimed equivalent to ``A = A*``."""
    ev = ev or _Eval(f)
    A, As, Ap = f.A, f.As, f.Ap
    sides = {
        "a'": ("A^+A=A^+A*", Ap @ A, Ap @ As),
        "b'": ("A^+A=A*A^+", Ap @ A, As @ Ap),
        "c'": ("A*=A^2A^+", As, f.power(2) @ Ap),
        "d'": ("A=AA^+A*", A, A @ Ap @ As),
        "e'": ("A=A*AA^+", A, As @ A @ Ap),
        "f'": ("A=A^+A*A", A, Ap @ As @ A),
        "g'": ("A=A*A^+A", A, As @ Ap @ A),
    }
    if col not in sides:
        raise UnknownVariantError(col)
    name, lhs, rhs = sides[col]
    return ev.eq(name, lhs, rhs)


CONDITION_ROWS = tuple("abcdefg")
CONDITION_COLS = ("a'", "b'", "c'", "d'", "e'", "f'", "g'")


def _split_cell(variant):
    for sep in (":", ",", "/"):
        if sep in variant:
            row, col = variant.split(sep, 1)
            return row.strip(), col.strip()
    raise UnknownVariantError(f"cell variant must look like \"a:a'\", got {variant!r}")


def _prime(col: str) -> str:
    col = col.strip()
    return col if col.endswith("'") else col + "'"


def check_condition_matrix(A, row: str = "a", col: str = "a'", k: int = 1, cfg: ToleranceConfig = DEFAULT_TOL):
    """A tripotency condition (rows a-g) together with a Hermitian condition (columns a'-g')."""
    row = _variant(row, CONDITION_ROWS)
    col = _variant(_prime(col), CONDITION_COLS)
    f = facts(A, cfg)
    ev = _Eval(f)
    r_ok = tripotent_row(f, row, k, ev)
    c_ok = hermitian_col(f, col, ev)
    params = {"k": int(k)} if row in ("d", "e") else {}
    return _report("condition-matrix", f, r_ok and c_ok, ev, variant=f"{row}:{col}", params=params)


# rank rows: r(I - X) = n - r(A) for X in {AA*, A*A, A^+A*, A*A^+}
RANK_GRAM_ROWS = ("a", "b", "c", "d")

# col -> (identity spec, side condition); a' is a one-exponent identity
RANK_GRAM_COLS = {
    "a'": (("A", "As", "R"), lambda s, t: s != 0),
    "b'": (("As", "L", "A", "R"), lambda s, t: s != t),
    "c'": (("A", "R", "As", "R"), lambda s, t: s != t),
    "d'": (("A", "L", "As", "L"), lambda s, t: s != t),
    "e'": (("A", "R", "Ap", "L"), lambda s, t: s != t),
    "f'": (("A", "L", "Ap", "L"), lambda s, t: s != t - 1),
    "g'": (("A", "R", "Ap", "R"), lambda s, t: s != t - 1),
}


def rank_gram_row(f: Facts, row: str, ev: _Eval | None = None) -> bool:
    ev = ev or _Eval(f)
    X = {
        "a": lambda: f.gram("L", 1),
        "b": lambda: f.gram("R", 1),
        "c": lambda: f.Ap @ f.As,
        "d": lambda: f.As @ f.Ap,
    }[row]
    Xm = X()
    rk = f.rank_of(("I-X", row), f.I - Xm, 1 + float(np.linalg.norm(Xm, 2)))
    return ev.int_eq(f"r(I-X_{row})=n-r(A)", rk, f.n - f.rank)


def rank_gram_col(f: Facts, col: str, s: int, t: int | None, ev: _Eval | None = None) -> bool:
    ev = ev or _Eval(f)
    spec, _ = RANK_GRAM_COLS[col]
    if col == "a'":
        name = f"A=A*(A*A)^{s}"
    else:
        name = _power_name(spec, s, t)

    def build():
        if col == "a'":
            return _rel(f.A, f.As @ f.gram(spec[2], s))
        return _rel(*_two_power_identity(f, spec, s, t))

    r = f.memo(("rg-col", col, s, t), build)
    ev.residuals[name] = r
    return r <= f.cfg.eq_tol


def rank_gram_side(col: str, s: int, t: int | None) -> bool:
    return RANK_GRAM_COLS[col][1](s, t)


def check_rank_gram_matrix(A, row: str = "a", col: str = "a'", s: int = 2, t: int | None = None,
                           cfg: ToleranceConfig = DEFAULT_TOL):
    """A rank condition on ``I - AA*`` (or a relative) together with a power identity."""
    row = _variant(row, RANK_GRAM_ROWS)
    col = _variant(_prime(col), RANK_GRAM_COLS)
    s = int(s)
    if col != "a'":
        if t is None:
            raise SideConditionError(f"column {col} needs both s and t")
        t = int(t)
    else:
        t = None
    if not rank_gram_side(col, s, t):
        raise SideConditionError(f"rank-gram column {col} makes no claim for s={s}, t={t}")
    f = facts(A, cfg)
    ev = _Eval(f)
    r_ok = rank_gram_row(f, row, ev)
    c_ok = rank_gram_col(f, col, s, t, ev)
    params = {"s": s} if t is None else {"s": s, "t": t}
    return _report("rank-gram", f, r_ok and c_ok, ev, variant=f"{row}:{col}", params=params)


def coprime_rank_identity(A, cfg: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """``r(A) + r(I - A) + r(I + A) = 2n + r(A - A^3)``, true for every square matrix."""
    f = facts(A, cfg)
    ev = _Eval(f)
    lhs = f.rank + f.rank_of("I-A", f.I - f.A, 1 + f.norm2) + f.rank_of("I+A", f.I + f.A, 1 + f.norm2)
    rhs = 2 * f.n + f.rank_of("A-A^3", f.A - f.power(3), f.norm2 + f.norm2 ** 3)
    holds = ev.int_eq("r(A)+r(I-A)+r(I+A)=2n+r(A-A^3)", lhs, rhs)
    return TheoremReport(
        theorem_id="coprime-rank",
        condition_holds=holds,
        is_three_op=f.is_three_op,
        verdict_consistent=holds,
        residuals=ev.residuals,
        witness=None if holds else f.A,
        reference="identity",
        reference_holds=True,
        params={"lhs": lhs, "rhs": rhs},
    )
