"""Two-component Wheeler-DeWitt model module.

The Wheeler-DeWitt equation of a Friedmann-Robertson-Walker minisuperspace coupled to a massive real scalar
field ``phi`` takes the Schrodinger form ``i dPsi/dalpha = H(alpha) Psi`` with ``alpha`` the logarithm of the
scale factor, the two-component wave function ``Psi = (psi + i dpsi/dalpha, psi - i dpsi/dalpha) / sqrt(2)``,
and the block Hamiltonian ``H = [[1 + D, -1 + D], [1 - D, -1 - D]] / 2`` where
``D = -d^2/dphi^2 + m^2 exp(6 alpha) phi^2 - kappa exp(4 alpha)``. ``H`` is not Hermitian, but it is
pseudo-Hermitian with respect to the Klein-Gordon metric ``diag(1, -1)``. Each eigenvalue ``d`` of ``D``
yields the eigenvalue pair ``+/- sqrt(d)`` of ``H``, which is real for ``d > 0`` and purely imaginary for
``d < 0``. The ``d = 0`` case is a Jordan block (reported as a boundary mode).
"""

import logging
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg
import tqdm

import phermit.typedefs  # noqa: F401
from phermit.algebra.biorthogonal import DEFAULT_PAIR_TOL, classify_eigenvalues
from phermit.algebra.operators import Metric, check_op, check_state
from phermit.models.discretize import Grid1D, build_ops, make_grid
from phermit.reports import SweepReport

if TYPE_CHECKING:
    from typing import Callable, Iterable, List, Optional  # noqa: F401

logger = logging.getLogger(__name__)

DEFAULT_N_POINTS = 501
BOUNDARY_TOL = 1e-8
"""Relative tolerance under which an eigenvalue of ``D`` is treated as zero (boundary mode)."""


def default_half_width(omega):
    # type: (float) -> float
    """Returns the default scalar field half-width, ``max(6, 6 / sqrt(omega))`` oscillator lengths."""
    assert omega > 0, "oscillator frequency should be strictly positive"
    return max(6.0, 6.0 / np.sqrt(omega))


class WdwModel:
    """Parameters of the minisuperspace model at a given scale factor.

    Attributes:
        kappa: spatial curvature (-1 open, 0 flat, +1 closed).
        mass: scalar field mass.
        alpha: logarithm of the scale factor.
        phi_grid: grid over the scalar field.
    """

    def __init__(self, kappa, mass, alpha, phi_grid=None, n_points=DEFAULT_N_POINTS, half_width=None):
        # type: (int, float, float, Optional[Grid1D], int, Optional[float]) -> None
        if kappa not in (-1, 0, 1):
            raise AssertionError(f"curvature should be -1, 0 or +1 (got {kappa})")
        if not mass > 0:
            raise AssertionError(f"scalar field mass should be strictly positive (got {mass})")
        if not np.isfinite(alpha):
            raise AssertionError(f"log scale factor should be finite (got {alpha})")
        self.kappa = int(kappa)
        self.mass = float(mass)
        self.alpha = float(alpha)
        if phi_grid is None:
            phi_grid = make_grid(n_points, half_width if half_width is not None else default_half_width(self.omega))
        assert isinstance(phi_grid, Grid1D), "unexpected scalar field grid type"
        self.phi_grid = phi_grid

    @property
    def omega(self):
        # type: () -> float
        """Oscillator frequency ``m exp(3 alpha)`` of ``D / 2``."""
        return self.mass * np.exp(3.0 * self.alpha)

    def with_alpha(self, alpha):
        # type: (float) -> WdwModel
        """Returns a copy of the model at another scale factor, on the same grid."""
        return WdwModel(self.kappa, self.mass, alpha, phi_grid=self.phi_grid)

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(kappa={self.kappa}, mass={self.mass}, alpha={self.alpha}, phi_grid={repr(self.phi_grid)})"


class TwoComponentState:
    """Two-component wave function, ``(psi + i dpsi/dalpha, psi - i dpsi/dalpha) / sqrt(2)``.

    Attributes:
        upper: the ``psi + i dpsi/dalpha`` component.
        lower: the ``psi - i dpsi/dalpha`` component.
    """

    def __init__(self, upper, lower):
        self.upper = check_state(upper, name="upper component")
        self.lower = check_state(lower, self.upper.size, name="lower component")

    @staticmethod
    def from_wavefunction(psi, dpsi_dalpha):
        # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType) -> TwoComponentState
        """Encodes a wave function and its scale factor derivative."""
        psi = check_state(psi, name="wave function")
        dpsi = check_state(dpsi_dalpha, psi.size, name="wave function derivative")
        return TwoComponentState((psi + 1j * dpsi) / np.sqrt(2), (psi - 1j * dpsi) / np.sqrt(2))

    @staticmethod
    def from_vector(vector):
        # type: (phermit.typedefs.ArrayType) -> TwoComponentState
        vector = check_state(vector, name="two-component state")
        if vector.size % 2:
            raise AssertionError(f"two-component state should have an even size (got {vector.size})")
        half = vector.size // 2
        return TwoComponentState(vector[:half], vector[half:])

    def to_vector(self):
        # type: () -> phermit.typedefs.StateVecType
        return np.concatenate([self.upper, self.lower])

    def to_wavefunction(self):
        """Returns the decoded ``(psi, dpsi/dalpha)`` tuple."""
        return (self.upper + self.lower) / np.sqrt(2), (self.upper - self.lower) / (1j * np.sqrt(2))

    def kg_norm(self):
        # type: () -> float
        """Returns the (indefinite) Klein-Gordon norm ``|upper|^2 - |lower|^2``."""
        return float(np.vdot(self.upper, self.upper).real - np.vdot(self.lower, self.lower).real)

    def __len__(self):
        return self.upper.size


def kg_inner(state1, state2):
    # type: (TwoComponentState, TwoComponentState) -> complex
    """Returns the Klein-Gordon inner product of two states, i.e. the ``diag(1, -1)`` indefinite product."""
    if len(state1) != len(state2):
        raise AssertionError(f"state dimension mismatch ({len(state1)} vs {len(state2)})")
    return complex(np.vdot(state1.upper, state2.upper) - np.vdot(state1.lower, state2.lower))


def _potential(model):
    nodes = model.phi_grid.nodes
    return model.mass ** 2 * np.exp(6.0 * model.alpha) * nodes ** 2 - model.kappa * np.exp(4.0 * model.alpha)


def wdw_d_operator(model):
    # type: (WdwModel) -> phermit.typedefs.OpType
    """Returns the (Hermitian) grid matrix of ``D = -d^2/dphi^2 + m^2 exp(6 alpha) phi^2 - kappa exp(4 alpha)``."""
    ops = build_ops(model.phi_grid)
    return ops.Lap + np.diag(_potential(model))


def wdw_hamiltonian(d_op):
    # type: (phermit.typedefs.ArrayType) -> phermit.typedefs.OpType
    """Assembles the traceless two-component Hamiltonian ``[[1 + D, -1 + D], [1 - D, -1 - D]] / 2``."""
    d_op = check_op(d_op, "D operator")
    eye = np.eye(d_op.shape[0])
    return 0.5 * np.block([[eye + d_op, -eye + d_op], [eye - d_op, -eye - d_op]])


def wdw_metric(n):
    # type: (int) -> Metric
    """Returns the Klein-Gordon metric ``diag(1, -1)`` tensored with the identity of dimension ``n``."""
    assert n >= 1, "grid size should be positive"
    return Metric.signature([1.0] * n + [-1.0] * n)


def wdw_reality_boundary(model, n):
    # type: (WdwModel, int) -> float
    """Returns the log scale factor above which the mode-``n`` eigenvalue pair becomes imaginary.

    The boundary solves ``m exp(3 alpha) (2n + 1) = exp(4 alpha)``, i.e. ``alpha = ln(m (2n + 1))``. It only
    exists for closed universes (``kappa = +1``); otherwise every eigenvalue stays real.
    """
    if model.kappa != 1:
        raise AssertionError(f"no reality boundary for kappa={model.kappa} (all eigenvalues are real)")
    if n < 0:
        raise AssertionError(f"mode index should be non-negative (got {n})")
    return float(np.log(model.mass * (2 * n + 1)))


def _sort_spectrum(eigenvalues):
    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    return eigenvalues[order]


def wdw_d_eigenvalues(model):
    # type: (WdwModel) -> np.ndarray
    """Returns the eigenvalues of the ``D`` operator in increasing order."""
    return scipy.linalg.eigvalsh(wdw_d_operator(model))


def wdw_spectrum(model, method="modes"):
    # type: (WdwModel, str) -> np.ndarray
    """Returns the spectrum of the two-component Hamiltonian, ordered by (real, imaginary) part.

    Args:
        model: the model.
        method: ``"modes"`` maps each eigenvalue ``d`` of ``D`` to ``+/- sqrt(d)``; ``"dense"`` diagonalizes the
            assembled ``2N x 2N`` matrix directly (a cross-check).
    """
    if method == "modes":
        roots = np.sqrt(wdw_d_eigenvalues(model).astype(np.complex128))
        return _sort_spectrum(np.concatenate([roots, -roots]))
    if method == "dense":
        return _sort_spectrum(scipy.linalg.eigvals(wdw_hamiltonian(wdw_d_operator(model))))
    raise AssertionError(f"unknown spectrum method '{method}' (expected 'modes' or 'dense')")


class WdwModeAnalysis:
    """Per-mode spectral analysis of the two-component Hamiltonian.

    Attributes:
        model: the analyzed model.
        d_eigenvalues: eigenvalues ``d_k`` of ``D`` (increasing).
        eigenvalues: for each mode, the ``+sqrt(d_k)`` and ``-sqrt(d_k)`` eigenvalues (interleaved).
        kinds: per mode, one of ``real``, ``imaginary`` or ``boundary``.
        boundary_modes: indices of modes with ``|d_k|`` under the boundary tolerance.
        spectrum_class: classification of the interleaved eigenvalues.
    """

    def __init__(self, model, d_eigenvalues, tol, pair_tol):
        self.model = model
        self.d_eigenvalues = np.asarray(d_eigenvalues, dtype=np.float64)
        roots = np.sqrt(self.d_eigenvalues.astype(np.complex128))
        self.eigenvalues = np.stack([roots, -roots], axis=1).reshape(-1)
        scale = max(1.0, model.omega, np.exp(4.0 * model.alpha) * abs(model.kappa))
        boundary = np.abs(self.d_eigenvalues) <= tol * scale
        self.kinds = ["boundary" if is_boundary else ("real" if d > 0 else "imaginary")
                      for d, is_boundary in zip(self.d_eigenvalues, boundary)]
        self.boundary_modes = np.flatnonzero(boundary).tolist()
        self.spectrum_class = classify_eigenvalues(self.eigenvalues, pair_tol=pair_tol)

    @property
    def classification(self):
        # type: () -> str
        return self.spectrum_class.classification

    def count(self, kind):
        # type: (str) -> int
        return sum([k == kind for k in self.kinds])

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(alpha={self.model.alpha}, classification={repr(self.classification)}, " + \
               f"imaginary={self.count('imaginary')}, boundary={self.count('boundary')})"


def wdw_mode_analysis(model, tol=BOUNDARY_TOL, pair_tol=DEFAULT_PAIR_TOL):
    # type: (WdwModel, float, float) -> WdwModeAnalysis
    """Classifies the spectrum of the two-component Hamiltonian mode by mode.

    Boundary modes (``d_k = 0`` within ``tol`` times the scale of the potential) make the Hamiltonian
    non-diagonalizable on their block; they are flagged and logged rather than decomposed.
    """
    analysis = WdwModeAnalysis(model, wdw_d_eigenvalues(model), tol, pair_tol)
    if analysis.boundary_modes:
        logger.warning("boundary (Jordan) mode(s) %s at alpha=%g; the Hamiltonian is not diagonalizable there"
                       % (analysis.boundary_modes, model.alpha))
    return analysis


def wdw_generator(model):
    # type: (WdwModel) -> Callable[[float], phermit.typedefs.OpType]
    """Returns the time-dependent Hamiltonian ``t -> H(alpha + t)`` on the model's fixed grid.

    The scale factor logarithm plays the role of time, so ``t`` is measured from ``model.alpha``.
    """
    lap = build_ops(model.phi_grid).Lap

    def generator(t):
        current = model.with_alpha(model.alpha + t)
        return wdw_hamiltonian(lap + np.diag(_potential(current)))

    return generator


def wdw_sweep(model, alphas, tol=BOUNDARY_TOL, pair_tol=DEFAULT_PAIR_TOL, progress=False):
    # type: (WdwModel, Iterable[float], float, float, bool) -> SweepReport
    """Classifies the spectrum over a range of scale factors on the model's grid.

    Args:
        model: the reference model (its grid is reused at each scale factor).
        alphas: the log scale factors to analyze.
        tol: boundary mode tolerance.
        pair_tol: eigenvalue pairing tolerance.
        progress: whether to display a progress bar.
    """
    rows = []
    for alpha in tqdm.tqdm(list(alphas), desc="alpha sweep", disable=not progress):
        analysis = wdw_mode_analysis(model.with_alpha(float(alpha)), tol=tol, pair_tol=pair_tol)
        rows.append({
            "alpha": float(alpha),
            "classification": analysis.classification,
            "real_pairs": analysis.count("real"),
            "imaginary_pairs": analysis.count("imaginary"),
            "boundary_modes": analysis.count("boundary"),
            "min_d": float(analysis.d_eigenvalues[0]),
        })
    logger.debug("swept %d scale factors" % len(rows))
    return SweepReport(rows)
