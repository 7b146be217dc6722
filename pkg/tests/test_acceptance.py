"""Acceptance criteria 1-9, each printed as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import sys
import time

import numpy as np
import pytest

from tripotent import characterizations as ch
from tripotent.classes import INTERSECTIONS, ClassLabel, class_residuals, signature
from tripotent.core import DEFAULT_TOL
from tripotent.decompositions import check_commutation, herm_eig, hs_decompose, mp_inverse, mp_via_hs, penrose_residuals
from tripotent.generators import (
    COMPLETENESS_FAMILIES,
    InfeasibleSpecError,
    paper_examples,
    perturb,
    sample,
    task_rng,
)
from tripotent.harness import SuiteConfig, run_suite, search_counterexample

SEED = 20240611


def _gauss(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def _random_rank(rng, m, n, r):
    if r == 0:
        return np.zeros((m, n), dtype=complex)
    return _gauss(rng, m, r) @ _gauss(rng, r, n)


def _rel(X, Y):
    return float(np.linalg.norm(X - Y)) / max(1.0, float(np.linalg.norm(X)), float(np.linalg.norm(Y)))


# -- criteria ---------------------------------------------------------------------

def criterion_1():
    rng = np.random.default_rng(SEED + 1)
    start = time.perf_counter()
    worst = 0.0
    for i in range(500):
        m = int(rng.integers(1, 17))
        n = m if i % 2 == 0 else int(rng.integers(1, 17))
        r = min(m, n) if i % 3 else int(rng.integers(0, min(m, n) + 1))
        A = _random_rank(rng, m, n, r)
        worst = max(worst, max(penrose_residuals(A, mp_inverse(A)).values()))
    elapsed = time.perf_counter() - start
    return worst <= 1e-10 and elapsed < 10, f"max Penrose residual {worst:.2e}, {elapsed:.2f}s"


def criterion_2():
    rng = np.random.default_rng(SEED + 2)
    start = time.perf_counter()
    rec = uni = agree = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 13))
        r = int(rng.integers(0, n + 1))
        A = _random_rank(rng, n, n, r)
        d = hs_decompose(A)
        rec = max(rec, float(np.linalg.norm(A - d.reconstruct())) / max(1.0, float(np.linalg.norm(A))))
        uni = max(uni, d.unitarity_residual())
        agree = max(agree, _rel(mp_via_hs(d), mp_inverse(A)))
    elapsed = time.perf_counter() - start
    ok = max(rec, uni, agree) <= 1e-10 and elapsed < 10
    return ok, f"reconstruction {rec:.2e}, KK*+LL*-I {uni:.2e}, two routes to A^+ {agree:.2e}, {elapsed:.2f}s"


def criterion_3():
    S, K = paper_examples()["commutation"]
    chk = check_commutation(np.diag(S).real, K, 3, -3)
    sum_comm, comm = chk.premise_residual, chk.conclusion_residual
    ok = sum_comm <= 1e-14 and abs(comm - 2.12132) <= 1e-5
    return ok, f"||(S^3+S^-3)K - K(S^3+S^-3)|| = {sum_comm:.1e}, ||SK - KS|| = {comm:.6f}"


def criterion_4():
    ex = paper_examples()
    A, Ap_shown = ex["average-star"], ex["average-star-pinv"]
    Ap = mp_inverse(A)
    d_pinv = float(np.linalg.norm(Ap - Ap_shown))
    d_avg = float(np.linalg.norm(A + Ap - 2 * A.conj().T))
    d_herm = float(np.linalg.norm(A - A.conj().T))
    three = class_residuals(A)[ClassLabel.ThreeOP] <= DEFAULT_TOL.eq_tol
    ok = d_pinv <= 1e-12 and d_avg <= 1e-12 and abs(d_herm - 1.63299) <= 1e-5 and not three
    return ok, f"||A^+ - displayed|| {d_pinv:.1e}, ||A + A^+ - 2A*|| {d_avg:.1e}, ||A - A*|| {d_herm:.6f}, ThreeOP {three}"


def criterion_5():
    worst = 0.0
    mismatched = 0
    for n in range(1, 13):
        for trial in range(100):
            rng = task_rng(SEED + 5, n, trial)
            p = int(rng.integers(0, n + 1))
            q = int(rng.integers(0, n - p + 1))
            sig = (p, q, n - p - q)
            A = sample("ThreeOP", n, rng, signature=sig)
            lam = herm_eig(A).eigenvalues
            worst = max(worst, float(np.max(np.min(np.abs(lam[:, None] - np.array([-1.0, 0.0, 1.0])), axis=1))))
            mismatched += signature(A).as_tuple() != sig
    ok = worst <= 1e-8 and mismatched == 0
    return ok, f"1200 matrices, max eigenvalue distance {worst:.1e}, signature mismatches {mismatched}"


def criterion_6():
    report = run_suite(SuiteConfig(sizes=tuple(range(1, 9)), trials_per_cell=50, seed=SEED + 6))
    fails = report.failures
    cells = sorted({key.rsplit("/s=", 1)[0].rsplit("/k=", 1)[0] for key, _, _ in fails})
    ok = not fails and report.duration < 300
    detail = (f"{len(report.cells)} (cell, family, size) groups, {len(fails)} inconsistent, "
              f"{report.duration:.0f}s")
    if cells:
        detail += "; inconsistent cells: " + ", ".join(cells)
    return ok, detail


def _negative_samples(count):
    families = list(COMPLETENESS_FAMILIES) + ["TM", "MP", "PI", "SD", "EP", "N", "H", "gaussian", "perturbed"]
    out = []
    i = 0
    while len(out) < count:
        fam = families[i % len(families)]
        rng = task_rng(SEED + 7, 1, i)
        n = int(rng.integers(1, 9))
        i += 1
        try:
            if fam == "perturbed":
                A = perturb(sample("ThreeOP", n, rng), 10.0 ** rng.uniform(-6, -2), int(rng.integers(1 << 31)))
            else:
                A = sample(fam, n, rng)
        except InfeasibleSpecError:
            continue
        if class_residuals(A)[ClassLabel.ThreeOP] > DEFAULT_TOL.eq_tol:
            out.append(A)
    return out


def criterion_7():
    pos = [sample("ThreeOP", 1 + i % 10, task_rng(SEED + 7, 0, i)) for i in range(500)]
    neg = _negative_samples(500)
    disagreements = 0
    for A in pos + neg:
        res = class_residuals(A)
        three = res[ClassLabel.ThreeOP] <= DEFAULT_TOL.eq_tol
        for labels in INTERSECTIONS.values():
            inter = all(res[lab] <= DEFAULT_TOL.eq_tol for lab in labels)
            disagreements += inter != three
    return disagreements == 0, f"500 positive + 500 negative samples x 7 identities, {disagreements} disagreements"


def _rank_verdicts(A, cfg):
    f = ch.Facts(A, cfg)
    out = [ch.coprime_rank_identity(f).condition_holds, f.rank]
    out += [ch.tripotent_row(f, row) for row in ("a", "c")]
    out += [ch.rank_gram_row(f, row) for row in ch.RANK_GRAM_ROWS]
    return out


def criterion_8():
    half = DEFAULT_TOL.with_eq_tol(DEFAULT_TOL.eq_tol / 2)
    families = ["gaussian", "TM", "ThreeOP", "P", "hermitian-nontripotent", "PI", "lowrank"]
    failures = unstable = 0
    for i in range(200):
        rng = task_rng(SEED + 8, i)
        n = int(rng.integers(1, 9))
        fam = families[i % len(families)]
        if fam == "lowrank":
            A = _random_rank(rng, n, n, int(rng.integers(0, n + 1)))
        else:
            A = sample(fam, n, rng)
        rep = ch.coprime_rank_identity(A)
        lhs, rhs = rep.params["lhs"], rep.params["rhs"]
        failures += not (rep.condition_holds and isinstance(lhs, int) and lhs == rhs)
        unstable += _rank_verdicts(A, DEFAULT_TOL) != _rank_verdicts(A, half)
    ok = failures == 0 and unstable == 0
    return ok, f"200 matrices, identity failures {failures}, verdicts changed by halving eq_tol {unstable}"


def criterion_9():
    start = time.perf_counter()
    found = search_counterexample("average/toStar", "normal-unit-modulus-spectrum", 100_000, seed=SEED + 9)
    elapsed = time.perf_counter() - start
    if found is None:
        return False, "no witness within 1e5 samples"
    A, rep = found
    lam = np.linalg.eigvals(A)
    targets = np.array([1j, -1j]) / np.sqrt(3.0)
    dist = float(np.min(np.abs(lam[:, None] - targets)))
    ok = dist <= 1e-6 and rep.condition_holds and not rep.is_three_op
    return ok, f"witness n={A.shape[0]}, eigenvalue distance to +-i/sqrt3 {dist:.1e}, {elapsed:.2f}s"


CRITERIA = {
    1: ("Penrose residuals", criterion_1),
    2: ("Hartwig-Spindelbock decomposition", criterion_2),
    3: ("commutation counterexample", criterion_3),
    4: ("4x4 normal counterexample", criterion_4),
    5: ("canonical-form soundness", criterion_5),
    6: ("theorem equivalence sweeps", criterion_6),
    7: ("class-lattice identities", criterion_7),
    8: ("rank-identity integrality", criterion_8),
    9: ("counterexample rediscovery", criterion_9),
}


def _line(num, ok, detail):
    name = CRITERIA[num][0]
    return f"CRITERION {num} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    ok, detail = CRITERIA[num][1]()
    with capsys.disabled():
        print("\n" + _line(num, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for num in sorted(CRITERIA):
        ok, detail = CRITERIA[num][1]()
        print(_line(num, ok, detail), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
