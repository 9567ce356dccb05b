import time

import numpy as np
import pytest

import phermit
from phermit.algebra.operators import Metric


def _rel(a, b, *norms):
    return np.linalg.norm(a - b) / np.prod([np.linalg.norm(n) for n in norms])


def test_check_op():
    op = phermit.algebra.operators.check_op([[1, 2], [3, 4]])
    assert op.dtype == np.complex128 and op.shape == (2, 2)
    assert phermit.algebra.operators.check_op(3.0).shape == (1, 1)
    with pytest.raises(AssertionError):
        phermit.algebra.operators.check_op(np.ones((2, 3)))
    with pytest.raises(AssertionError):
        phermit.algebra.operators.check_op([[np.nan, 0], [0, 1]])
    with pytest.raises(AssertionError):
        phermit.algebra.operators.check_op(np.ones(3))
    assert phermit.algebra.operators.check_op(np.ones((2, 3)), square=False).shape == (2, 3)
    with pytest.raises(AssertionError):
        phermit.algebra.operators.check_state([1.0, np.inf])
    with pytest.raises(AssertionError):
        phermit.algebra.operators.check_state([1.0, 2.0], dim=3)


def test_metric_validation():
    eta = Metric([[2, 1j], [-1j, 3]])
    assert np.allclose(eta.op @ eta.inverse, np.eye(2))
    assert eta.inertia == (2, 0)
    assert repr(eta)
    with pytest.raises(ValueError):
        eta.op[0, 0] = 5.0
    with pytest.raises(AssertionError):
        _ = Metric([[1, 1], [0, 1]])  # not hermitian
    with pytest.raises(AssertionError):
        _ = Metric([[1, 1], [1, 1]])  # singular
    with pytest.raises(AssertionError):
        _ = Metric(np.zeros((3, 3)))
    with pytest.raises(AssertionError):
        _ = Metric(np.diag([1.0, -1.0]), inverse=np.eye(2))
    sig = Metric.signature([1, -1, -1])
    assert sig.inertia == (1, 2)
    assert np.array_equal(sig.inverse, sig.op)
    with pytest.raises(AssertionError):
        _ = Metric.signature([1, 2])
    assert Metric.identity(1).dim == 1
    # tiny roundoff asymmetry is removed
    eta = Metric(np.array([[1.0, 0.5 + 1e-14], [0.5, 1.0]]))
    assert np.array_equal(eta.op, eta.op.conj().T)


def test_pseudo_adjoint_identity_reduction():
    rng = np.random.default_rng(0)
    op = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.allclose(phermit.algebra.pseudo_adjoint(op, Metric.identity(4)), op.conj().T, atol=0, rtol=1e-15)
    eta = phermit.algebra.operators.random_metric(4, seed=1)
    assert np.allclose(phermit.algebra.pseudo_adjoint(np.eye(4), eta), np.eye(4), atol=1e-13)
    assert np.array_equal(phermit.algebra.pseudo_adjoint(np.eye(3), Metric.signature([1, -1, 1])), np.eye(3))


def test_sharp_algebra_random_triples():
    # involution, antilinearity and product reversal on random signature metrics
    rng = np.random.default_rng(1234)
    start = time.time()
    for _ in range(100):
        eta = phermit.algebra.operators.random_metric(8, seed=rng)
        a = phermit.algebra.operators.ginibre(8, rng)
        b = phermit.algebra.operators.ginibre(8, rng)
        alpha, beta = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        a_sharp = phermit.algebra.pseudo_adjoint(a, eta)
        b_sharp = phermit.algebra.pseudo_adjoint(b, eta)
        assert _rel(phermit.algebra.pseudo_adjoint(a_sharp, eta), a, a) <= 1e-12
        combo = phermit.algebra.pseudo_adjoint(alpha * a + beta * b, eta)
        assert _rel(combo, np.conj(alpha) * a_sharp + np.conj(beta) * b_sharp, a) <= 1e-12 * (abs(alpha) + abs(beta))
        assert _rel(phermit.algebra.pseudo_adjoint(a @ b, eta), b_sharp @ a_sharp, a, b) <= 1e-12
    assert time.time() - start < 2.0


def test_sharp_mixed_metric_chain():
    rng = np.random.default_rng(7)
    eta1 = phermit.algebra.operators.random_metric(3, seed=rng)
    eta2 = phermit.algebra.operators.random_metric(5, seed=rng)
    eta3 = phermit.algebra.operators.random_metric(4, seed=rng)
    a = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    b = rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5))
    a_sharp = phermit.algebra.pseudo_adjoint(a, eta1, eta2)
    b_sharp = phermit.algebra.pseudo_adjoint(b, eta2, eta3)
    assert a_sharp.shape == (3, 5)
    ba_sharp = phermit.algebra.pseudo_adjoint(b @ a, eta1, eta3)
    assert _rel(ba_sharp, a_sharp @ b_sharp, a, b) <= 1e-12
    with pytest.raises(AssertionError):
        _ = phermit.algebra.pseudo_adjoint(a, eta2, eta1)


def test_residuals_and_inner_products():
    swap = Metric([[0, 1], [1, 0]], inverse=[[0, 1], [1, 0]])
    h = np.diag([1j, -1j])
    assert phermit.algebra.pseudo_hermiticity_residual(h, swap) == 0.0
    assert phermit.algebra.operators.is_pseudo_hermitian(h, swap)
    assert not phermit.algebra.operators.is_pseudo_hermitian(np.diag([1j, 2j]), Metric.identity(2))
    assert phermit.algebra.pseudo_hermiticity_residual(np.zeros((2, 2)), swap) == 0.0
    with pytest.raises(AssertionError):
        _ = phermit.algebra.pseudo_hermiticity_residual(np.eye(3), swap)
    psi1, psi2 = np.array([1, 1j]), np.array([2, 0])
    assert np.isclose(phermit.algebra.indefinite_inner(psi1, psi2, swap), -2j)
    assert np.isclose(phermit.algebra.indefinite_inner(psi2, psi1, swap), 2j)
    assert np.isclose(phermit.algebra.operators.parity_inner(psi2, psi1, [[0, 1], [1, 0]]), 2j)
    # eigenvectors with non-real eigenvalues have vanishing semi-norm
    assert phermit.algebra.operators.eta_semi_norm_sq([1, 0], swap) == 0.0
    assert phermit.algebra.operators.eta_semi_norm_sq([1, 1], swap) == 2.0
    assert phermit.algebra.operators.eta_semi_norm_sq([1, 1], Metric.signature([1, -1])) == 0.0
    assert phermit.algebra.operators.eta_semi_norm_sq([1, 2], Metric.signature([1, -1])) == -3.0


def test_eigenvector_orthogonality():
    rng = np.random.default_rng(3)
    for _ in range(10):
        eta = phermit.algebra.operators.random_metric(6, seed=rng)
        h = phermit.algebra.random_pseudo_hermitian(eta, dim=6, seed=rng)
        assert phermit.algebra.pseudo_hermiticity_residual(h, eta) <= 1e-13
        eigvals, vectors = np.linalg.eig(h)
        assert phermit.algebra.operators.eta_orthogonality_defect(vectors, eigvals, eta) <= 1e-8
    with pytest.raises(AssertionError):
        _ = phermit.algebra.random_pseudo_hermitian(Metric.identity(3), dim=4)


def test_unitary_transport_preserves_residuals():
    rng = np.random.default_rng(10)
    for _ in range(50):
        eta = phermit.algebra.operators.random_metric(6, seed=rng)
        h = phermit.algebra.random_pseudo_hermitian(eta, seed=rng)
        unitary = phermit.algebra.operators.random_unitary(6, seed=rng)
        new_h, new_eta = phermit.algebra.operators.unitary_transport(h, eta, unitary)
        before = phermit.algebra.pseudo_hermiticity_residual(h, eta)
        after = phermit.algebra.pseudo_hermiticity_residual(new_h, new_eta)
        assert abs(after - before) <= 1e-12
        eigvals, new_eigvals = np.linalg.eigvals(h), np.linalg.eigvals(new_h)
        assert np.max(np.min(np.abs(new_eigvals[:, None] - eigvals[None, :]), axis=1)) <= 1e-8
    with pytest.raises(AssertionError):
        _ = phermit.algebra.operators.unitary_transport(np.eye(2), Metric.identity(2), 2 * np.eye(2))


def test_dual_metric_symmetry_candidate():
    rng = np.random.default_rng(11)
    for _ in range(10):
        basis = phermit.algebra.operators.ginibre(5, rng)
        h = phermit.algebra.synthesize_hamiltonian([1, 2, 3, 4, 5], basis)
        system = phermit.algebra.eig_biorthonormal(h)
        phi = system.left_vectors
        eta1 = Metric(phi @ phi.conj().T)
        weights = rng.uniform(0.5, 2.0, size=5)
        eta2 = Metric((phi * weights[None, :]) @ phi.conj().T)
        assert phermit.algebra.pseudo_hermiticity_residual(h, eta1) <= 1e-10
        assert phermit.algebra.pseudo_hermiticity_residual(h, eta2) <= 1e-10
        sym = phermit.algebra.operators.symmetry_candidate(eta1, eta2)
        assert phermit.algebra.operators.commutator_residual(sym, h) <= 1e-10
    with pytest.raises(AssertionError):
        _ = phermit.algebra.operators.symmetry_candidate(Metric.identity(2), Metric.identity(3))


def test_random_generators():
    unitary = phermit.algebra.operators.random_unitary(5, seed=0)
    assert np.allclose(unitary.conj().T @ unitary, np.eye(5))
    eta = phermit.algebra.operators.random_metric(5, seed=0, signature=[1, 1, -1, -1, -1])
    assert eta.inertia == (2, 3)
    flat = phermit.algebra.operators.random_metric(3, seed=0, signature=[1, -1, 1], rotate=False)
    assert np.array_equal(flat.op, np.diag([1.0, -1.0, 1.0]))
    assert np.array_equal(phermit.algebra.operators.ginibre(3, seed=5), phermit.algebra.operators.ginibre(3, seed=5))
