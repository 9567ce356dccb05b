import time

import numpy as np
import pytest
import scipy.linalg

import phermit
from phermit.algebra import biorthogonal
from phermit.algebra.operators import pseudo_hermiticity_residual
from phermit.models import discretize, wdw


def test_model_validation():
    with pytest.raises(AssertionError):
        _ = wdw.WdwModel(2, 1.0, 0.0)
    with pytest.raises(AssertionError):
        _ = wdw.WdwModel(0, 0.0, 0.0)
    with pytest.raises(AssertionError):
        _ = wdw.WdwModel(0, 1.0, np.inf)
    model = wdw.WdwModel(1, 2.0, 0.0, n_points=11)
    assert np.isclose(model.omega, 2.0)
    assert np.isclose(model.phi_grid.half_width, 6.0)
    assert len(model.phi_grid) == 11 and repr(model)
    shifted = model.with_alpha(1.0)
    assert shifted.phi_grid is model.phi_grid and shifted.alpha == 1.0
    assert np.isclose(wdw.default_half_width(0.25), 12.0)


def test_d_operator_spectrum():
    d_eigvals = scipy.linalg.eigvalsh(wdw.wdw_d_operator(wdw.WdwModel(0, 1.0, 0.0)))
    assert np.allclose(d_eigvals[:3], [1, 3, 5], atol=1e-2)
    d_eigvals = scipy.linalg.eigvalsh(wdw.wdw_d_operator(wdw.WdwModel(1, 1.0, 0.0)))
    assert np.allclose(d_eigvals[:3], [0, 2, 4], atol=1e-2)
    d_eigvals = scipy.linalg.eigvalsh(wdw.wdw_d_operator(wdw.WdwModel(-1, 1.0, 0.0)))
    assert np.all(d_eigvals > 0)
    d_op = wdw.wdw_d_operator(wdw.WdwModel(1, 1.0, 0.3, n_points=51))
    assert np.array_equal(d_op, d_op.conj().T)


def test_hamiltonian_assembly():
    h = wdw.wdw_hamiltonian([[4.0]])
    assert np.allclose(np.sort(scipy.linalg.eigvals(h).real), [-2, 2])
    h = wdw.wdw_hamiltonian(np.zeros((1, 1)))
    assert np.allclose(h @ h, 0) and not np.allclose(h, 0)
    h = wdw.wdw_hamiltonian(np.diag([1.0, 4.0]))
    assert np.allclose(np.sort(scipy.linalg.eigvals(h).real), [-2, -1, 1, 2])
    assert abs(np.trace(h)) == 0
    with pytest.raises(AssertionError):
        _ = wdw.wdw_hamiltonian(np.ones((2, 3)))


def test_metric():
    assert np.array_equal(wdw.wdw_metric(1).op, np.diag([1, -1]))
    assert wdw.wdw_metric(3).inertia == (3, 3)
    model = wdw.WdwModel(0, 1.0, 0.0, n_points=101)
    h = wdw.wdw_hamiltonian(wdw.wdw_d_operator(model))
    assert pseudo_hermiticity_residual(h, wdw.wdw_metric(101)) <= 1e-12
    rng = np.random.default_rng(3)
    d_op = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    d_op = d_op + d_op.conj().T
    assert pseudo_hermiticity_residual(wdw.wdw_hamiltonian(d_op), wdw.wdw_metric(6)) <= 1e-12


def test_reality_boundary():
    assert wdw.wdw_reality_boundary(wdw.WdwModel(1, 1.0, 0.0, n_points=11), 0) == 0.0
    assert np.isclose(wdw.wdw_reality_boundary(wdw.WdwModel(1, 1.0, 0.0, n_points=11), 1), np.log(3))
    assert np.isclose(wdw.wdw_reality_boundary(wdw.WdwModel(1, 2.0, 0.0, n_points=11), 0), np.log(2))
    with pytest.raises(AssertionError):
        _ = wdw.wdw_reality_boundary(wdw.WdwModel(0, 1.0, 0.0, n_points=11), 0)
    with pytest.raises(AssertionError):
        _ = wdw.wdw_reality_boundary(wdw.WdwModel(1, 1.0, 0.0, n_points=11), -1)


def test_flat_oscillator_spectrum():
    start = time.time()
    model = wdw.WdwModel(0, 1.0, 0.0, n_points=501, half_width=12.0)
    spectrum = wdw.wdw_spectrum(model)
    assert np.all(spectrum.imag == 0)
    magnitudes = np.sort(np.abs(spectrum))[:8]
    expected = np.repeat(np.sqrt(2 * np.arange(4) + 1), 2)
    assert np.all(np.abs(magnitudes - expected) / expected <= 1e-3)
    analysis = wdw.wdw_mode_analysis(model)
    assert analysis.classification == biorthogonal.ALL_REAL
    assert time.time() - start < 30


def test_closed_universe_modes():
    model = wdw.WdwModel(1, 1.0, 0.5)
    analysis = wdw.wdw_mode_analysis(model)
    assert analysis.kinds[:2] == ["imaginary", "real"]
    assert analysis.count("imaginary") == 1 and not analysis.boundary_modes
    assert analysis.classification == biorthogonal.MIXED
    mode0, mode1 = analysis.eigenvalues[0:2], analysis.eigenvalues[2:4]
    assert np.allclose(np.sort(mode0.imag), [-1.705, 1.705], atol=1e-2) and np.allclose(mode0.real, 0)
    assert np.allclose(np.sort(mode1.real), [-2.461, 2.461], atol=1e-2) and np.allclose(mode1.imag, 0)
    assert analysis.spectrum_class.is_pseudo_hermitian and repr(analysis)
    assert wdw.wdw_reality_boundary(model, 0) < model.alpha < wdw.wdw_reality_boundary(model, 1)


def test_boundary_mode(mocker):
    _ = mocker.patch.object(wdw, "wdw_d_eigenvalues", return_value=np.array([0.0, 3.0]))
    mock_warn = mocker.patch.object(wdw.logger, "warning")
    analysis = wdw.wdw_mode_analysis(wdw.WdwModel(1, 1.0, 0.0, n_points=11))
    assert analysis.boundary_modes == [0]
    assert analysis.kinds == ["boundary", "real"]
    assert analysis.classification == biorthogonal.ALL_REAL
    assert mock_warn.call_count == 1


def test_dense_matches_modes():
    for kappa, alpha in [(0, 0.0), (1, 0.5), (-1, 0.2)]:
        model = wdw.WdwModel(kappa, 1.0, alpha, n_points=101)
        modes = wdw.wdw_spectrum(model, method="modes")
        dense = wdw.wdw_spectrum(model, method="dense")
        assert modes.size == dense.size == 202
        distances = np.min(np.abs(modes[:, None] - dense[None, :]), axis=1)
        assert np.all(distances <= 1e-8 * np.maximum(1.0, np.abs(modes)))
    with pytest.raises(AssertionError):
        _ = wdw.wdw_spectrum(model, method="sparse")


def test_two_component_state():
    grid = discretize.make_grid(21, 4.0)
    psi = np.exp(-grid.nodes ** 2).astype(np.complex128)
    dpsi = 0.5j * grid.nodes * psi
    state = phermit.models.TwoComponentState.from_wavefunction(psi, dpsi)
    assert len(state) == 21
    psi_out, dpsi_out = state.to_wavefunction()
    assert np.allclose(psi_out, psi) and np.allclose(dpsi_out, dpsi)
    assert np.isclose(wdw.kg_inner(state, state).real, state.kg_norm())
    restored = wdw.TwoComponentState.from_vector(state.to_vector())
    assert np.array_equal(restored.upper, state.upper) and np.array_equal(restored.lower, state.lower)
    eta = wdw.wdw_metric(21)
    vec = state.to_vector()
    assert np.isclose(np.vdot(vec, eta.op @ vec).real, state.kg_norm())
    # a real wave function with a real derivative carries zero Klein-Gordon norm
    assert np.isclose(wdw.TwoComponentState.from_wavefunction(psi.real, grid.nodes).kg_norm(), 0.0)
    with pytest.raises(AssertionError):
        _ = wdw.TwoComponentState.from_vector(np.ones(5))
    with pytest.raises(AssertionError):
        _ = wdw.kg_inner(state, wdw.TwoComponentState(np.ones(3), np.ones(3)))
    with pytest.raises(AssertionError):
        _ = wdw.TwoComponentState(np.ones(3), np.ones(4))


def test_generator():
    model = wdw.WdwModel(1, 1.0, -0.5, n_points=31, half_width=8.0)
    generator = wdw.wdw_generator(model)
    assert np.allclose(generator(0.0), wdw.wdw_hamiltonian(wdw.wdw_d_operator(model)))
    assert np.allclose(generator(0.7), wdw.wdw_hamiltonian(wdw.wdw_d_operator(model.with_alpha(0.2))))


def test_sweep():
    model = wdw.WdwModel(1, 1.0, -0.5, n_points=101, half_width=8.0)
    report = wdw.wdw_sweep(model, [-0.5, -0.25, 0.25, 0.5])
    assert [row["classification"] for row in report.rows] == [biorthogonal.ALL_REAL, biorthogonal.ALL_REAL,
                                                             biorthogonal.MIXED, biorthogonal.MIXED]
    assert report.transitions() == [0.25]
    assert report.rows[-1]["imaginary_pairs"] == 1 and report.rows[0]["imaginary_pairs"] == 0
    assert report.rows[-1]["min_d"] < 0 < report.rows[0]["min_d"]
    assert all([row["real_pairs"] + row["imaginary_pairs"] == 101 for row in report.rows])
    assert all([row["classification"] != biorthogonal.NOT_PSEUDO_HERMITIAN for row in report.rows])
