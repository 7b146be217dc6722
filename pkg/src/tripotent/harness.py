"""Sweep driver and counterexample search over the theorem checkers.

A *cell* is one (theorem, variant, parameters) combination.  The suite draws
matrices from the soundness family (generated orthogonal tripotents) and from
the adjacent negative families, evaluates every cell on each matrix and
tallies verdicts per (cell, family, size).
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import characterizations as ch
from .classes import ClassLabel
from .core import DEFAULT_TOL, ToleranceConfig
from .generators import COMPLETENESS_FAMILIES, InfeasibleSpecError, NAMED, sample, task_rng

SOUNDNESS_FAMILY = "ThreeOP"

THEOREM_IDS = (
    "canonical-form",
    "star-dagger-identity",
    "structural",
    "svd-factors",
    "average",
    "linear-family",
    "power-family",
    "corollary-powers",
    "gram-projector",
    "rank-trace",
    "remark-identities",
    "normal-trace",
    "condition-matrix",
    "rank-gram",
    "coprime-rank",
)


@dataclass(frozen=True)
class Cell:
    theorem_id: str
    variant: str | None = None
    params: tuple = ()

    @property
    def key(self) -> str:
        parts = [self.theorem_id]
        if self.variant is not None:
            parts.append(self.variant)
        parts += [f"{k}={v}" for k, v in self.params]
        return "/".join(parts)

    def evaluate(self, f) -> ch.TheoremReport:
        p = dict(self.params)
        tid, v = self.theorem_id, self.variant
        if tid == "canonical-form":
            return ch.check_canonical_form(f)
        if tid == "star-dagger-identity":
            return ch.check_star_dagger_identity(f)
        if tid == "structural":
            return ch.check_structural(f)
        if tid == "svd-factors":
            return ch.check_svd_factors(f)
        if tid == "average":
            return ch.check_average(f, v)
        if tid == "linear-family":
            return ch.check_linear_family(f, v)
        if tid == "power-family":
            return ch.check_power_family(f, v, p["s"], p["t"])
        if tid == "corollary-powers":
            return ch.check_corollary_powers(f, v, p["s"])
        if tid == "gram-projector":
            return ch.check_gram_projector_family(f, v, p["s"], p.get("t"))
        if tid == "rank-trace":
            return ch.check_rank_trace(f, v)
        if tid == "remark-identities":
            return ch.check_remark_identities(f, v, p.get("k", 3))
        if tid == "normal-trace":
            return ch.check_normal_trace(f, v)
        if tid == "condition-matrix":
            row, col = v.split(":")
            return ch.check_condition_matrix(f, row, col, p.get("k", 1))
        if tid == "rank-gram":
            row, col = v.split(":")
            return ch.check_rank_gram_matrix(f, row, col, p["s"], p.get("t"))
        if tid == "coprime-rank":
            return ch.coprime_rank_identity(f)
        raise ValueError(f"unknown theorem {tid!r}")


def enumerate_cells(theorems=THEOREM_IDS, power_range=range(-3, 4), ks=(1, 2), remark_ks=(2, 3, 4)):
    """All cells of the selected theorems, keeping only parameters inside the side conditions."""
    grid = list(power_range)
    cells = []
    for tid in theorems:
        if tid in ("canonical-form", "star-dagger-identity", "structural", "svd-factors", "coprime-rank"):
            cells.append(Cell(tid))
        elif tid == "average":
            cells += [Cell(tid, v) for v in ch.AVERAGE_VARIANTS]
        elif tid == "linear-family":
            cells += [Cell(tid, v) for v in ch.LINEAR_VARIANTS]
        elif tid == "power-family":
            cells += [Cell(tid, v, (("s", s), ("t", t)))
                      for v, side in ch.POWER_SIDE.items() for s in grid for t in grid if side(s, t)]
        elif tid == "corollary-powers":
            cells += [Cell(tid, v, (("s", s),))
                      for v in ch.COROLLARY_IDENTITIES for s in grid if ch.corollary_side(v, s)]
        elif tid == "gram-projector":
            for v, (kind, _) in ch.GRAM_PROJECTOR_MAP.items():
                if kind == "corollary":
                    cells += [Cell(tid, v, (("s", s),)) for s in grid if ch.gram_projector_side(v, s)]
                else:
                    cells += [Cell(tid, v, (("s", s), ("t", t)))
                              for s in grid for t in grid if ch.gram_projector_side(v, s, t)]
        elif tid == "rank-trace":
            cells += [Cell(tid, v) for v in ch.RANK_TRACE_VARIANTS]
        elif tid == "remark-identities":
            cells += [Cell(tid, "a"), Cell(tid, "b")]
            cells += [Cell(tid, "c", (("k", k),)) for k in remark_ks]
        elif tid == "normal-trace":
            cells += [Cell(tid, v) for v in ch.NORMAL_TRACE_VARIANTS]
        elif tid == "condition-matrix":
            for row in ch.CONDITION_ROWS:
                for col in ch.CONDITION_COLS:
                    if row in ("d", "e"):
                        cells += [Cell(tid, f"{row}:{col}", (("k", k),)) for k in ks]
                    else:
                        cells.append(Cell(tid, f"{row}:{col}"))
        elif tid == "rank-gram":
            for row in ch.RANK_GRAM_ROWS:
                for col in ch.RANK_GRAM_COLS:
                    if col == "a'":
                        cells += [Cell(tid, f"{row}:{col}", (("s", s),))
                                  for s in grid if ch.rank_gram_side(col, s, None)]
                    else:
                        cells += [Cell(tid, f"{row}:{col}", (("s", s), ("t", t)))
                                  for s in grid for t in grid if ch.rank_gram_side(col, s, t)]
        else:
            raise ValueError(f"unknown theorem {tid!r}")
    return cells


@dataclass
class SuiteConfig:
    sizes: tuple = tuple(range(1, 9))
    trials_per_cell: int = 50
    seed: int = 0
    tolerance: ToleranceConfig = DEFAULT_TOL
    theorems: tuple = THEOREM_IDS
    power_range: tuple = tuple(range(-3, 4))
    families: tuple = (SOUNDNESS_FAMILY,) + COMPLETENESS_FAMILIES
    ks: tuple = (1, 2)
    remark_ks: tuple = (2, 3, 4)

    def __post_init__(self):
        if not self.sizes:
            raise ValueError("sizes must be nonempty")
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be at least 1")

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteConfig":
        d = dict(d)
        if "tolerance" in d and isinstance(d["tolerance"], dict):
            d["tolerance"] = ToleranceConfig(**d["tolerance"])
        for key in ("sizes", "theorems", "power_range", "families", "ks", "remark_ks"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)


@dataclass
class CellStats:
    passed: int = 0
    failed: int = 0
    expected_exception: int = 0
    condition_true: int = 0
    max_residual: float = 0.0
    witnesses: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.expected_exception


@dataclass
class SuiteReport:
    cells: dict                      # (cell key, family, n) -> CellStats
    infeasible: list                 # (family, n) pairs that cannot be generated
    duration: float

    @property
    def failures(self) -> dict:
        return {k: v for k, v in self.cells.items() if v.failed}

    @property
    def ok(self) -> bool:
        return not self.failures

    def grid(self) -> dict:
        """Pass/fail counts only; used for reproducibility comparisons."""
        return {k: (v.passed, v.failed, v.expected_exception) for k, v in self.cells.items()}

    def summary_by_theorem(self) -> dict:
        out = defaultdict(lambda: [0, 0, 0])
        for (key, _, _), st in self.cells.items():
            tid = key.split("/")[0]
            out[tid][0] += st.passed
            out[tid][1] += st.failed
            out[tid][2] += st.expected_exception
        return dict(out)

    def to_dict(self, max_witnesses: int = 20) -> dict:
        from .core import matrix_to_dict

        failing = []
        for (key, fam, n), st in sorted(self.failures.items()):
            failing.append({
                "cell": key, "family": fam, "n": n, "failed": st.failed,
                "witnesses": [matrix_to_dict(w) for w in st.witnesses[:1]],
            })
        return {
            "ok": self.ok,
            "duration_seconds": self.duration,
            "cells_evaluated": len(self.cells),
            "by_theorem": {k: {"passed": a, "failed": b, "expected_exception": c}
                           for k, (a, b, c) in sorted(self.summary_by_theorem().items())},
            "failing_cells": failing[:max_witnesses] if max_witnesses else failing,
            "failing_cell_count": len(failing),
            "infeasible": [list(x) for x in self.infeasible],
        }


def _classify(rep: ch.TheoremReport) -> str:
    if rep.exclusion_flag is False and rep.condition_holds and not rep.is_three_op:
        return "expected_exception"
    return "passed" if rep.verdict_consistent else "failed"


def run_suite(cfg: SuiteConfig | None = None, progress=None) -> SuiteReport:
    """Evaluate every selected cell on ``trials_per_cell`` matrices per (family, size)."""
    cfg = cfg or SuiteConfig()
    start = time.perf_counter()
    cells = enumerate_cells(cfg.theorems, cfg.power_range, cfg.ks, cfg.remark_ks)
    stats = {}
    infeasible = []
    for fi, family in enumerate(cfg.families):
        for n in cfg.sizes:
            for trial in range(cfg.trials_per_cell):
                rng = task_rng(cfg.seed, fi, n, trial)
                try:
                    A = sample(family, n, rng)
                except InfeasibleSpecError:
                    infeasible.append((family, n))
                    break
                f = ch.Facts(A, cfg.tolerance)
                for cell in cells:
                    rep = cell.evaluate(f)
                    st = stats.get((cell.key, family, n))
                    if st is None:
                        st = stats[(cell.key, family, n)] = CellStats()
                    outcome = _classify(rep)
                    setattr(st, outcome, getattr(st, outcome) + 1)
                    st.condition_true += bool(rep.condition_holds)
                    if rep.residuals:
                        finite = [v for v in rep.residuals.values() if np.isfinite(v)]
                        if finite:
                            st.max_residual = max(st.max_residual, max(finite))
                    if outcome == "failed" and len(st.witnesses) < 3:
                        st.witnesses.append(np.array(A))
            if progress:
                progress(family, n)
    return SuiteReport(stats, infeasible, time.perf_counter() - start)


def identity_cell(identity_id: str, s=None, t=None, k=None) -> Cell:
    """Parse ``theorem[/variant]`` into a cell, e.g. ``average/toStar`` or ``power-family/b``."""
    tid, _, variant = identity_id.partition("/")
    params = []
    if s is not None:
        params.append(("s", int(s)))
    if t is not None:
        params.append(("t", int(t)))
    if k is not None:
        params.append(("k", int(k)))
    return Cell(tid, variant or None, tuple(params))


def search_counterexample(identity_id: str, ensemble: str, budget: int, seed: int = 0,
                          cfg: ToleranceConfig = DEFAULT_TOL, n_range=(1, 4), s=None, t=None, k=None):
    """First sampled matrix whose condition disagrees with membership, ignoring exclusions.

    Returns ``(matrix, report)`` or ``None`` when the budget runs out.
    """
    cell = identity_cell(identity_id, s, t, k)
    ensembles = list(NAMED) + [lab.value for lab in ClassLabel] if ensemble == "all" else [ensemble]
    lo, hi = n_range
    for i in range(int(budget)):
        rng = task_rng(seed, i)
        fam = ensembles[i % len(ensembles)]
        n = int(rng.integers(lo, hi + 1))
        try:
            A = sample(fam, n, rng)
        except InfeasibleSpecError:
            continue
        rep = cell.evaluate(ch.Facts(A, cfg))
        reference = rep.reference_holds if rep.reference_holds is not None else rep.is_three_op
        if bool(rep.condition_holds) != bool(reference):
            return A, rep
    return None
