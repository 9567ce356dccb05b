import time

import numpy as np
import pytest

import phermit
from phermit import evolution
from phermit.algebra.operators import Metric
from phermit.models import discretize, wdw

SWAP = [[0, 1], [1, 0]]
SWAP_PSEUDO_HERMITIAN = np.array([[1.0, 2.0], [0.5, 1.0]])


def test_zero_hamiltonian():
    psi0 = np.array([1.0, 2.0j])
    traj = evolution.evolve(np.zeros((2, 2)), psi0, 1.0, 0.25)
    assert len(traj) == 5 and traj.dim == 2 and repr(traj)
    assert np.allclose(traj.times, [0, 0.25, 0.5, 0.75, 1.0])
    assert np.array_equal(traj.final_state, psi0)
    assert evolution.max_stable_step(np.zeros((2, 2))) == np.inf


def test_diagonal_phases():
    psi0 = np.array([1.0, 1.0]) / np.sqrt(2)
    traj = evolution.evolve(np.diag([1.0, 2.0]), psi0, np.pi, 1e-3)
    assert traj.times[-1] == np.pi
    assert np.allclose(traj.final_state, np.exp(-1j * np.array([1.0, 2.0]) * np.pi) * psi0, rtol=0, atol=1e-8)
    assert np.isclose(evolution.max_stable_step(np.diag([1.0, 2.0])), 0.05)


def test_norm_growth():
    traj = evolution.evolve([[1j]], [1.0], 1.0, 1e-3)
    assert abs(abs(traj.final_state[0]) - np.e) / np.e <= 1e-8
    assert np.isclose(evolution.inner_product_rate([[1j]], [1.0], [1.0], [[1.0]]), 2.0)


def test_record_interval():
    traj = evolution.evolve(np.diag([1.0, 2.0]), [1.0, 0.0], 1.0, 0.1, record_every=3)
    assert np.allclose(traj.times, [0.0, 0.3, 0.6, 0.9, 1.0])
    assert traj.states.shape == (5, 2)
    assert len(evolution.evolve(np.eye(2), [1.0, 0.0], 0.0, 0.1)) == 1
    with pytest.raises(AssertionError):
        _ = evolution.evolve(np.eye(2), [1.0, 0.0], 1.0, 0.0)
    with pytest.raises(AssertionError):
        _ = evolution.evolve(np.eye(2), [1.0, 0.0], -1.0, 0.1)
    with pytest.raises(AssertionError):
        _ = evolution.evolve(np.eye(2), [1.0, 0.0], 1.0, 0.1, record_every=0)
    with pytest.raises(AssertionError):
        _ = evolution.evolve(np.eye(2), [1.0, 0.0, 0.0], 1.0, 0.1)


def test_instability():
    with pytest.raises(FloatingPointError):
        with np.errstate(over="ignore", invalid="ignore"):
            _ = evolution.evolve([[1e200j]], [1.0], 1.0, 1.0)


def test_convergence_order(mocker):
    _ = mocker.patch.object(evolution.logger, "warning")
    hamiltonian = np.diag([1.0, 2.0])
    psi0 = np.array([1.0, 1.0])
    exact = np.exp(-1j * np.array([1.0, 2.0]) * 3.2) * psi0
    errors = [np.linalg.norm(evolution.evolve(hamiltonian, psi0, 3.2, dt).final_state - exact) for dt in (0.1, 0.05)]
    assert 12 < errors[0] / errors[1] < 20


def test_step_guidance_logging(mocker):
    mock_warn = mocker.patch.object(evolution.logger, "warning")
    mock_debug = mocker.patch.object(evolution.logger, "debug")
    _ = evolution.evolve(np.diag([1.0, 2.0]), [1.0, 0.0], 0.2, 0.1)
    assert mock_warn.call_count == 1
    assert mock_warn.call_args[0] == ("time step 1.000e-01 exceeds the stability guidance 5.000e-02 (0.1 / ||H||)",)
    assert mock_debug.call_args[0] == ("integrated 2 steps up to t=0.2",)
    mock_warn.reset_mock()
    _ = evolution.evolve(np.diag([1.0, 2.0]), [1.0, 0.0], 0.2, 0.01)
    assert not mock_warn.called


def test_pseudo_hermitian_drift():
    start = time.time()
    eta = Metric(SWAP)
    assert phermit.algebra.pseudo_hermiticity_residual(SWAP_PSEUDO_HERMITIAN, eta) == 0
    traj1 = evolution.evolve(SWAP_PSEUDO_HERMITIAN, [1.0, 0.0], 10.0, 1e-3)
    traj2 = evolution.evolve(SWAP_PSEUDO_HERMITIAN, [1.0, 1.0], 10.0, 1e-3)
    assert np.isclose(traj1.inner_products(traj2, eta)[0], 1.0)
    assert evolution.inner_product_drift(traj1, traj2, eta) <= 1e-7
    assert evolution.inner_product_drift(traj1, traj2, np.eye(2)) > 1e-2
    rate = evolution.inner_product_rate(SWAP_PSEUDO_HERMITIAN, [1.0, 0.0], [1.0, 1.0], eta)
    assert abs(rate) <= 1e-14
    assert time.time() - start < 10


def test_non_pseudo_hermitian_drift():
    hamiltonian = np.diag([1j, 2j])
    traj1 = evolution.evolve(hamiltonian, [1.0, 1.0], 1.0, 1e-3)
    traj2 = evolution.evolve(hamiltonian, [1.0, 1.0], 1.0, 1e-3)
    assert evolution.inner_product_drift(traj1, traj2, SWAP) > 1e-2
    assert abs(evolution.inner_product_rate(hamiltonian, [1.0, 1.0], [1.0, 1.0], SWAP)) > 1


def test_mismatched_trajectories():
    traj1 = evolution.evolve(np.eye(2), [1.0, 0.0], 1.0, 0.1)
    traj2 = evolution.evolve(np.eye(2), [1.0, 0.0], 1.0, 0.2)
    with pytest.raises(AssertionError):
        _ = traj1.inner_products(traj2, np.eye(2))
    with pytest.raises(AssertionError):
        _ = traj1.inner_products(traj1, np.eye(3))


def test_wdw_klein_gordon_drift(mocker):
    mock_warn = mocker.patch.object(evolution.logger, "warning")
    model = wdw.WdwModel(0, 1.0, -10.0, phi_grid=discretize.make_grid(101, 8.0))
    nodes = model.phi_grid.nodes
    gaussian = np.exp(-nodes ** 2)
    zeros = np.zeros_like(gaussian)
    psi1 = np.concatenate([gaussian, zeros])
    psi2 = np.concatenate([gaussian, 0.5 * gaussian])
    generator = wdw.wdw_generator(model)
    traj1 = evolution.evolve(generator, psi1, 10.0, 1e-3, record_every=100)
    traj2 = evolution.evolve(generator, psi2, 10.0, 1e-3, record_every=100)
    eta = wdw.wdw_metric(101)
    assert evolution.inner_product_drift(traj1, traj2, eta) <= 1e-7
    assert evolution.inner_product_drift(traj1, traj1, eta) <= 1e-7
    assert mock_warn.called
