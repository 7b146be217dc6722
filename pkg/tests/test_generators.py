import numpy as np
import pytest

from tripotent.classes import ClassLabel, is_member, signature
from tripotent.generators import (
    COMPLETENESS_FAMILIES,
    MAX_SIMILARITY_COND,
    GenSpec,
    InfeasibleSpecError,
    generate,
    paper_examples,
    perturb,
    random_unitary,
    task_rng,
)
from tripotent.decompositions import mp_inverse

LABELS = list(ClassLabel)


def test_random_unitary_examples():
    u = random_unitary(1, 5)
    assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-15
    assert np.array_equal(random_unitary(4, 11), random_unitary(4, 11))
    U = random_unitary(8, 3)
    assert np.linalg.norm(U.conj().T @ U - np.eye(8)) < 1e-12 * 8


def test_random_unitary_phase_distribution():
    # Haar first columns have uniformly distributed phases: the mean of u_00 is near zero
    z = np.array([random_unitary(3, s)[0, 0] for s in range(2000)])
    assert abs(z.mean()) < 0.05


@pytest.mark.parametrize("label", LABELS)
def test_round_trip_membership(label):
    for n in range(1, 13):
        for seed in range(50):
            A = generate(GenSpec(n, label, seed=seed))
            assert is_member(A, label), (label, n, seed)


def test_signature_recovered():
    for n in range(1, 11):
        for p in range(n + 1):
            for q in range(n - p + 1):
                sig = (p, q, n - p - q)
                A = generate(GenSpec(n, "ThreeOP", seed=p * 31 + q, signature=sig))
                assert signature(A).as_tuple() == sig


def test_generate_examples():
    assert signature(generate(GenSpec(5, "ThreeOP", seed=0, signature=(2, 2, 1)))).as_tuple() == (2, 2, 1)
    A = generate(GenSpec(4, "partial-isometry-nonEP", seed=0))
    assert is_member(A, "PI") and not is_member(A, "EP")
    P = generate(GenSpec(3, "OP", seed=0, rank=2))
    assert abs(np.trace(P) - 2) < 1e-12 and is_member(P, "ThreeOP")


# family -> (must pass, must fail)
PROFILES = {
    "hermitian-nontripotent": (["H", "N", "EP"], ["TM", "ThreeOP"]),
    "tripotent-nonhermitian": (["TM"], ["H", "ThreeOP"]),
    "normal-nontripotent": (["N", "EP"], ["TM", "ThreeOP"]),
    "partial-isometry-nonEP": (["PI"], ["EP", "ThreeOP"]),
    "ep-nonPI": (["EP"], ["PI", "ThreeOP"]),
}


@pytest.mark.parametrize("family", COMPLETENESS_FAMILIES)
def test_negative_profiles(family):
    must, must_not = PROFILES[family]
    for n in range(1, 13):
        for seed in range(30):
            try:
                A = generate(GenSpec(n, family, seed=seed))
            except InfeasibleSpecError:
                assert n == 1
                continue
            for lab in must:
                assert is_member(A, lab), (family, n, seed, lab)
            for lab in must_not:
                assert not is_member(A, lab), (family, n, seed, lab)


def test_tripotent_nonhermitian_similarity_bounded():
    for seed in range(30):
        A = generate(GenSpec(5, "tripotent-nonhermitian", seed=seed))
        assert np.linalg.norm(A, 2) <= MAX_SIMILARITY_COND


def test_infeasible_specs():
    with pytest.raises(InfeasibleSpecError):
        GenSpec(3, "OP", rank=4)
    with pytest.raises(InfeasibleSpecError):
        GenSpec(3, "H", signature=(1, 1, 1))
    with pytest.raises(InfeasibleSpecError):
        GenSpec(3, "ThreeOP", signature=(1, 1, 2))
    with pytest.raises(InfeasibleSpecError):
        generate(GenSpec(1, "tripotent-nonhermitian"))


def test_determinism():
    for label in ["ThreeOP", "SD", "partial-isometry-nonEP", "gaussian"]:
        a = generate(GenSpec(6, label, seed=42))
        b = generate(GenSpec(6, label, seed=42))
        assert np.array_equal(a, b)
    assert np.array_equal(task_rng(1, 2, 3).random(4), task_rng(1, 2, 3).random(4))
    assert not np.array_equal(task_rng(1, 2, 3).random(4), task_rng(1, 2, 4).random(4))


def test_perturb():
    A = generate(GenSpec(5, "ThreeOP", seed=1))
    assert np.array_equal(perturb(A, 0.0, 3), A)
    assert not is_member(perturb(A, 1e-3, 3), "ThreeOP")
    assert is_member(perturb(A, 1e-12, 3), "ThreeOP")
    assert np.linalg.norm(perturb(A, 0.5, 3) - A) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        perturb(A, -1.0, 0)


def test_worked_examples():
    ex = paper_examples()
    assert len(ex) == 3
    A, Ap = ex["average-star"], ex["average-star-pinv"]
    assert np.linalg.norm(mp_inverse(A) - Ap) <= 1e-10
    assert np.linalg.norm(A + Ap - 2 * A.conj().T) <= 1e-12
    S, K = ex["commutation"]
    np.testing.assert_array_equal(S, np.diag([2, 0.5]))
    np.testing.assert_array_equal(K, [[0, 1], [1, 0]])
