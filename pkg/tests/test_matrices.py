import math

import numpy as np
import pytest

from ef_lab.matrices import (
    ComplexMatrix,
    ImpossibleInputError,
    Permutation,
    RoundingUnstableError,
    adjoint,
    hermitian_eig,
    hs_norm,
    identity,
    matmul,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    permutation_matrix,
    rotation,
    round_to_partial_isometry,
    standard_partial_isometry,
    zeros,
)
from oracles import jacobi_svd_singular_values, schoolbook_matmul

RNG = np.random.default_rng(20260810)


def random_matrix(m, rng=RNG):
    return ComplexMatrix(rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m)))


def test_matmul_identity():
    a = random_matrix(4)
    assert matmul(a, identity(4)).close_to(a, 1e-12)
    assert matmul(identity(4), a).close_to(a, 1e-12)


def test_matmul_rotation_composition():
    quarter = rotation(math.pi / 2)
    assert matmul(quarter, quarter).close_to(rotation(math.pi), 1e-12)


def test_matmul_matches_schoolbook_oracle():
    for _ in range(10):
        a = random_matrix(3)
        b = random_matrix(3)
        expected = schoolbook_matmul(a.data, b.data)
        assert np.max(np.abs(matmul(a, b).data - expected)) <= 1e-12


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError):
        matmul(random_matrix(2), random_matrix(3))


def test_adjoint_examples():
    alpha = 0.73
    assert adjoint(rotation(alpha)).close_to(rotation(-alpha), 1e-12)
    p = ComplexMatrix([[0.5, 0.5], [0.5, 0.5]])
    assert adjoint(p).close_to(p, 1e-15)
    a = random_matrix(5)
    assert adjoint(adjoint(a)).close_to(a, 1e-15)


def test_adjoint_reverses_products_and_is_conjugate_linear():
    a, b = random_matrix(4), random_matrix(4)
    assert adjoint(matmul(a, b)).close_to(matmul(adjoint(b), adjoint(a)), 1e-12)
    lam = 0.3 - 1.7j
    assert adjoint(lam * a).close_to(np.conj(lam) * adjoint(a), 1e-12)


def test_hs_norm_examples():
    assert hs_norm(identity(5)) == 1.0
    assert hs_norm(zeros(4)) == 0.0
    m = 6
    single = np.zeros((m, m), dtype=complex)
    single[2, 4] = math.sqrt(m)
    assert abs(hs_norm(ComplexMatrix(single)) - 1.0) <= 1e-12


def test_single_entry_m_has_hs_sqrt_m_and_op_m():
    # entry m: the dimension-normalized square sum is m^2/m = m
    m = 5
    single = np.zeros((m, m), dtype=complex)
    single[1, 3] = m
    a = ComplexMatrix(single)
    assert abs(hs_norm(a) - math.sqrt(m)) <= 1e-12
    assert abs(op_norm(a) - m) <= 1e-9


def test_op_norm_examples():
    assert abs(op_norm(identity(6)) - 1.0) <= 1e-10
    assert abs(op_norm(ComplexMatrix([[0, 2], [0, 0]])) - 2.0) <= 1e-10
    assert op_norm(zeros(3)) == 0.0


def test_op_norm_against_jacobi_svd_oracle():
    for _ in range(20):
        a = random_matrix(5)
        expect = jacobi_svd_singular_values(a.data)[0]
        assert abs(op_norm(a) - expect) <= 1e-8


def test_op_norm_invalid_tolerance():
    with pytest.raises(ValueError):
        op_norm(identity(2), tol=0.0)


def test_norm_inequalities_on_samples():
    for _ in range(25):
        a = random_matrix(5)
        b = random_matrix(5)
        assert hs_norm(a) <= op_norm(a) + 1e-9
        assert op_norm(matmul(a, b)) <= op_norm(a) * op_norm(b) + 1e-9


def test_rotation_and_projection_examples():
    p = ComplexMatrix([[0.5, 0.5], [0.5, 0.5]])
    assert matmul(p, p).close_to(p, 1e-15)
    assert rotation(0.0).close_to(identity(2), 1e-15)
    image = rotation(math.pi / 2).data @ np.array([1.0, 0.0])
    assert np.max(np.abs(image - np.array([0.0, 1.0]))) <= 1e-12


def test_permutation_matrix_examples():
    assert permutation_matrix(Permutation.identity(4)).close_to(identity(4), 1e-15)
    rng = np.random.default_rng(5)
    for _ in range(10):
        p = Permutation.random(5, rng)
        q = Permutation.random(5, rng)
        lhs = matmul(permutation_matrix(p), permutation_matrix(q))
        rhs = permutation_matrix(p.compose(q))
        assert lhs.close_to(rhs, 1e-15)


def test_permutation_matrix_hs_distance_identity():
    rng = np.random.default_rng(6)
    for _ in range(50):
        m = int(rng.integers(4, 12))
        p = Permutation.random(m, rng)
        q = Permutation.random(m, rng)
        delta = sum(1 for j in range(m) if p(j) != q(j))
        gap = hs_norm(permutation_matrix(p) - permutation_matrix(q))
        assert abs(gap - math.sqrt(2 * delta / m)) <= 1e-12


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_standard_partial_isometry_small():
    v = standard_partial_isometry(2)
    assert np.array_equal(v.data, np.array([[0, 1], [0, 0]], dtype=complex))
    vv = matmul(adjoint(v), v)
    assert vv.close_to(ComplexMatrix(np.diag([0.0, 1.0])), 1e-15)
    assert matmul(v, adjoint(v)).close_to(ComplexMatrix(np.diag([1.0, 0.0])), 1e-15)


def test_standard_partial_isometry_rank_and_parity():
    v = standard_partial_isometry(4)
    support = matmul(adjoint(v), v)
    assert abs(np.trace(support.data).real - 2.0) <= 1e-12  # rank m/2
    assert (support + matmul(v, adjoint(v))).close_to(identity(4), 1e-12)
    with pytest.raises(ValueError):
        standard_partial_isometry(3)


def test_hermitian_eig_matches_numpy():
    rng = np.random.default_rng(9)
    for _ in range(15):
        m = int(rng.integers(2, 10))
        g = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        h = (g + g.conj().T) / 2
        vals, vecs = hermitian_eig(ComplexMatrix(h))
        assert np.max(np.abs(vals - np.linalg.eigvalsh(h))) <= 1e-10
        assert np.max(np.abs(vecs @ np.diag(vals) @ vecs.conj().T - h)) <= 1e-10
        assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(m))) <= 1e-10


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig(ComplexMatrix([[0, 1], [0, 0]]))


def defects(v):
    p = matmul(adjoint(v), v)
    d1 = op_norm(p - matmul(p, p))
    d2 = op_norm(p + matmul(v, adjoint(v)) - identity(v.m))
    return d1, d2


def test_round_exact_input_returns_it_up_to_phase():
    v = standard_partial_isometry(2)
    out = round_to_partial_isometry(v)
    assert max(defects(out)) <= 1e-12
    # up to phase: the single nonzero entry keeps modulus 1 in place
    assert abs(abs(out.data[0, 1]) - 1.0) <= 1e-12
    phased = ComplexMatrix(np.exp(0.4j) * v.data)
    out = round_to_partial_isometry(phased)
    assert max(defects(out)) <= 1e-12
    assert abs(abs(out.data[0, 1]) - 1.0) <= 1e-12


def test_round_perturbed_witness_m4():
    v = standard_partial_isometry(4)
    perturbed = ComplexMatrix(v.data + 0.01 * np.ones((4, 4)))
    out = round_to_partial_isometry(perturbed)
    assert max(defects(out)) <= 1e-10
    assert np.max(np.abs(out.data - v.data)) <= 0.1  # stays near the input


def test_round_refuses_far_inputs():
    with pytest.raises(ValueError):
        round_to_partial_isometry(zeros(4))  # complement defect is 1


def test_round_refuses_uncluttered_spectrum():
    # defects just under 1/4 but spectrum at the forbidden midpoint band
    t = math.sqrt((3 - math.sqrt(5)) / 2)
    b = np.zeros((3, 3), dtype=complex)
    b[0, 1] = 1.0
    b[2, 2] = t
    with pytest.raises(RoundingUnstableError):
        round_to_partial_isometry(ComplexMatrix(b))


def test_round_random_m3_samples_never_qualify():
    # parity consistency: no randomly sampled contraction in odd dimension 3
    # comes close to the complementary-projection identities
    rng = np.random.default_rng(77)
    for _ in range(1000):
        g = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))) / math.sqrt(2)
        nrm = np.linalg.svd(g, compute_uv=False)[0]
        b = g / max(1.0, nrm)
        p = b.conj().T @ b
        q = b @ b.conj().T
        d1 = np.linalg.svd(p - p @ p, compute_uv=False)[0]
        d2 = np.linalg.svd(p + q - np.eye(3), compute_uv=False)[0]
        assert max(d1, d2) >= 0.25


def test_matrix_json_round_trip():
    a = random_matrix(3)
    blob = matrix_to_json(a)
    assert set(blob) == {"m", "re", "im"}
    assert matrix_from_json(blob).close_to(a, 1e-15)


def test_matrix_json_validation():
    with pytest.raises(ValueError):
        matrix_from_json({"m": 2, "re": [[1, 0]], "im": [[0, 0]]})


def test_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        ComplexMatrix([[float("nan"), 0], [0, 0]])
