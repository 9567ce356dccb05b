"""Pseudo-supersymmetry module.

This module realizes pseudo-supersymmetric quantum mechanics in the two-component representation: given an
operator ``D`` mapping a space with metric ``eta_plus`` into a space with metric ``eta_minus``, the charge
``Q = [[0, 0], [D, 0]]`` and its pseudo-adjoint satisfy the pseudo-superalgebra with
``H = diag(D# D, D D#) / 2``, and the partners ``H_+`` and ``H_-`` are intertwined by ``D`` (hence
isospectral, except for the modes annihilated by ``D`` or ``D#``).

It also provides the first-order factory ``D = p + f(x) + i g(x)`` with ``eta_+ = P`` and ``eta_- = -P``,
which produces non-Hermitian Hamiltonians ``H_-`` with a real spectrum (possibly without PT symmetry) when
the Hermiticity condition of ``H_+`` (``g_+ = 0``, ``g_- = -xi' / 2`` with ``f_+ = lambda exp(xi)``) holds.
On the grid, the product-built pair maps node values to cell midpoints (staggered scheme), so that
``H_+`` has the three-point ``Lap`` kinetic term and only ``H_-`` inherits a zero mode.
"""

import copy
import logging
from typing import TYPE_CHECKING

import numpy as np
import scipy.integrate
import scipy.linalg

import phermit.typedefs  # noqa: F401
from phermit.algebra.biorthogonal import DEFAULT_COND_MAX, DefectiveMatrixError
from phermit.algebra.operators import (Metric, _relative, as_metric, check_op, commutator_residual, pseudo_adjoint,
                                       pseudo_hermiticity_residual)
from phermit.models.discretize import Grid1D, build_ops, central_derivative, check_parity, staggered_ops
from phermit.reports import SpectralMapReport

if TYPE_CHECKING:
    from typing import Callable, Dict, Optional, Tuple  # noqa: F401

logger = logging.getLogger(__name__)

ZERO_MODE_TOL = 1e-8
"""Relative tolerance under which ``||D v||`` (vs. ``||D|| ||v||``) flags ``v`` as a zero mode."""

SCHEMES = ("literal", "staggered")


class Grading:
    """Z2 grading operator ``tau = diag(I, -I)`` of a two-component space.

    Attributes:
        tau: the grading operator.
        n_plus: dimension of the even subspace.
        n_minus: dimension of the odd subspace.
    """

    def __init__(self, n_plus, n_minus=None):
        # type: (int, Optional[int]) -> None
        n_minus = n_plus if n_minus is None else n_minus
        assert n_plus >= 1 and n_minus >= 1, "graded subspaces should be non-empty"
        self.n_plus = int(n_plus)
        self.n_minus = int(n_minus)
        self.tau = np.diag(np.concatenate([np.ones(self.n_plus), -np.ones(self.n_minus)])).astype(np.complex128)

    @property
    def dim(self):
        # type: () -> int
        return self.n_plus + self.n_minus


def _block_diag(top, bottom):
    return scipy.linalg.block_diag(top, bottom).astype(np.complex128)


class SusyPair:
    """Pseudo-supersymmetric partner Hamiltonians built from an intertwiner.

    Attributes:
        D: intertwiner from the plus space (dimension ``n``) to the minus space (dimension ``m``).
        D_sharp: its pseudo-adjoint ``inv(eta_plus) D^H eta_minus``.
        H_plus: ``D# D / 2``.
        H_minus: ``D D# / 2``.
        eta_plus: metric of the plus space.
        eta_minus: metric of the minus space.
        grading: the Z2 grading of the two-component space.
        Q: odd charge ``[[0, 0], [D, 0]]``.
        Q_sharp: its pseudo-adjoint ``[[0, D#], [0, 0]]``.
    """

    def __init__(self, D, D_sharp, eta_plus, eta_minus):
        self.D = D
        self.D_sharp = D_sharp
        self.eta_plus = eta_plus
        self.eta_minus = eta_minus
        self.H_plus = 0.5 * (D_sharp @ D)
        self.H_minus = 0.5 * (D @ D_sharp)
        n_minus, n_plus = D.shape
        self.grading = Grading(n_plus, n_minus)
        self.Q = np.zeros((n_plus + n_minus, n_plus + n_minus), dtype=np.complex128)
        self.Q[n_plus:, :n_plus] = D
        self.Q_sharp = np.zeros_like(self.Q)
        self.Q_sharp[:n_plus, n_plus:] = D_sharp

    @property
    def H(self):
        # type: () -> phermit.typedefs.OpType
        """Block Hamiltonian ``diag(H_plus, H_minus)``."""
        return _block_diag(self.H_plus, self.H_minus)

    @property
    def eta(self):
        # type: () -> Metric
        """Block (even) metric ``diag(eta_plus, eta_minus)``."""
        return Metric(_block_diag(self.eta_plus.op, self.eta_minus.op),
                      inverse=_block_diag(self.eta_plus.inverse, self.eta_minus.inverse))

    def residuals(self):
        # type: () -> Dict[str, float]
        """Returns the superalgebra, intertwining and pseudo-Hermiticity residuals of the pair.

        The superalgebra entries (``Q^2``, ``Q#^2``, ``{Q, Q#} - 2H``, ``{tau, Q}``, ``[tau, eta]``,
        ``[tau, H]``) are block identities and vanish up to roundoff. The intertwining entries measure
        ``D H_+ - H_- D`` and ``D# H_- - H_+ D#``; ``sharp`` measures the distance between the stored
        ``D#`` and ``inv(eta_+) D^H eta_-``.
        """
        tau, hamiltonian, eta = self.grading.tau, self.H, self.eta
        q_norm, qs_norm = np.linalg.norm(self.Q), np.linalg.norm(self.Q_sharp)
        d_norm, ds_norm = np.linalg.norm(self.D), np.linalg.norm(self.D_sharp)
        exact_sharp = pseudo_adjoint(self.D, self.eta_plus, self.eta_minus)
        return {
            "Q2": _relative(np.linalg.norm(self.Q @ self.Q), q_norm, q_norm),
            "Q_sharp2": _relative(np.linalg.norm(self.Q_sharp @ self.Q_sharp), qs_norm, qs_norm),
            "anticommutator": _relative(np.linalg.norm(self.Q @ self.Q_sharp + self.Q_sharp @ self.Q - 2 * hamiltonian),
                                        np.linalg.norm(hamiltonian)),
            "tau_Q": _relative(np.linalg.norm(tau @ self.Q + self.Q @ tau), q_norm),
            "tau_eta": commutator_residual(tau, eta.op),
            "tau_H": commutator_residual(tau, hamiltonian),
            "sharp": _relative(np.linalg.norm(self.D_sharp - exact_sharp), d_norm),
            "intertwining": _relative(np.linalg.norm(self.D @ self.H_plus - self.H_minus @ self.D),
                                      d_norm, np.linalg.norm(self.H_plus)),
            "intertwining_sharp": _relative(np.linalg.norm(self.D_sharp @ self.H_minus - self.H_plus @ self.D_sharp),
                                            ds_norm, np.linalg.norm(self.H_minus)),
            "pseudo_hermiticity_plus": pseudo_hermiticity_residual(self.H_plus, self.eta_plus),
            "pseudo_hermiticity_minus": pseudo_hermiticity_residual(self.H_minus, self.eta_minus),
        }

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(n_plus={self.grading.n_plus}, n_minus={self.grading.n_minus})"


def build_susy_pair(D, eta_plus, eta_minus):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.OpOrMetricType, phermit.typedefs.OpOrMetricType) -> SusyPair
    """Builds the pseudo-supersymmetric pair generated by the intertwiner ``D``.

    Args:
        D: operator from the plus space (dimension ``n``) into the minus space (dimension ``m``), as an
            ``m x n`` matrix.
        eta_plus: metric of the plus space.
        eta_minus: metric of the minus space.
    """
    D = check_op(D, "intertwiner", square=False)
    eta_plus, eta_minus = as_metric(eta_plus), as_metric(eta_minus)
    return SusyPair(D, pseudo_adjoint(D, eta_plus, eta_minus), eta_plus, eta_minus)


def _sorted_eigenpairs(op):
    eigvals, vectors = scipy.linalg.eig(op)
    order = np.lexsort((eigvals.imag, eigvals.real))
    vectors = vectors[:, order]
    return eigvals[order], vectors / np.linalg.norm(vectors, axis=0)[None, :]


def _map_levels(side, source, image_op, target, n_levels, zero_tol, cond_max):
    eigvals, vectors = _sorted_eigenpairs(source)
    n_levels = eigvals.size if n_levels is None else min(int(n_levels), eigvals.size)
    condition_number = np.linalg.cond(vectors[:, :n_levels])
    if not np.isfinite(condition_number) or condition_number > cond_max:
        raise DefectiveMatrixError(condition_number)
    target_eigvals = scipy.linalg.eigvals(target)
    op_norm = float(np.linalg.norm(image_op, 2))
    target_norm = max(float(np.linalg.norm(target)), np.finfo(np.float64).tiny)
    rows = []
    for idx in range(n_levels):
        energy, vector = eigvals[idx], vectors[:, idx]
        image = image_op @ vector
        image_norm = float(np.linalg.norm(image))
        zero_mode = image_norm <= zero_tol * op_norm
        distance = float(np.min(np.abs(target_eigvals - energy)))
        residual = 0.0
        if not zero_mode:
            residual = float(np.linalg.norm(target @ image - energy * image)) / (target_norm * image_norm)
        rows.append({
            "side": side,
            "index": idx,
            "eigenvalue": complex(energy),
            "image_norm": image_norm,
            "zero_mode": bool(zero_mode),
            "residual": residual,
            "partner_distance": distance / max(1.0, abs(energy)),
        })
    return rows


def spectral_map(pair, n_levels=None, zero_tol=ZERO_MODE_TOL, cond_max=DEFAULT_COND_MAX):
    # type: (SusyPair, Optional[int], float, float) -> SpectralMapReport
    """Checks that ``D`` maps eigenvectors of ``H_+`` to eigenvectors of ``H_-`` (and ``D#`` the converse).

    For each resolved eigenpair ``(E, v)`` of ``H_+`` (lowest real parts first), ``D v`` is either a zero
    mode (``||D v|| <= zero_tol ||D|| ||v||``, which forces ``E = 0``) or an eigenvector of ``H_-`` with the
    same eigenvalue. The symmetric statement is checked for ``D#`` and ``H_-``.

    Args:
        pair: the pseudo-supersymmetric pair.
        n_levels: number of lowest levels to check on each side (default: all).
        zero_tol: zero-mode tolerance.
        cond_max: eigenvector condition number above which the resolved levels are declared defective.

    Raises:
        DefectiveMatrixError: if the resolved eigenvectors of ``H_+`` or ``H_-`` are (nearly) dependent.
    """
    rows = _map_levels("plus", pair.H_plus, pair.D, pair.H_minus, n_levels, zero_tol, cond_max)
    rows += _map_levels("minus", pair.H_minus, pair.D_sharp, pair.H_plus, n_levels, zero_tol, cond_max)
    report = SpectralMapReport(rows)
    for row in rows:
        if row["zero_mode"]:
            logger.debug("zero mode on %s side at level %d (E=%s)" % (row["side"], row["index"], row["eigenvalue"]))
    return report


def kernel_dimension(op, zero_tol=ZERO_MODE_TOL):
    # type: (phermit.typedefs.ArrayType, float) -> int
    """Returns the number of columns of ``op`` minus its rank (singular values above ``zero_tol`` times the largest)."""
    op = np.asarray(op)
    singular = scipy.linalg.svdvals(op)
    if singular.size == 0 or singular[0] == 0:
        return op.shape[1]
    return op.shape[1] - int(np.count_nonzero(singular > zero_tol * singular[0]))


def partner_levels(pair, n_levels=None, zero_tol=ZERO_MODE_TOL):
    # type: (SusyPair, Optional[int], float) -> Tuple[np.ndarray, np.ndarray]
    """Returns the lowest levels of ``H_+`` and ``H_-``, without the zero modes of ``D`` and ``D#``.

    The levels annihilated by the intertwiner (as many as the dimension of its kernel, smallest moduli first)
    have no partner; the remaining ones are sorted by real part, then imaginary part.
    """
    levels = []
    for hamiltonian, image_op in [(pair.H_plus, pair.D), (pair.H_minus, pair.D_sharp)]:
        eigvals = scipy.linalg.eigvals(hamiltonian)
        n_zero = kernel_dimension(image_op, zero_tol)
        if n_zero:
            logger.debug("dropping %d zero mode(s) out of %d levels" % (n_zero, eigvals.size))
            eigvals = np.delete(eigvals, np.argsort(np.abs(eigvals))[:n_zero])
        eigvals = eigvals[np.lexsort((eigvals.imag, eigvals.real))]
        levels.append(eigvals if n_levels is None else eigvals[:n_levels])
    return levels[0], levels[1]


def isospectrality_residual(e_plus, e_minus):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType) -> float
    """Returns ``max |E_+ - E_-| / max(1, |E_+|)`` over the levels present on both sides (0 if none)."""
    count = min(len(e_plus), len(e_minus))
    if count == 0:
        return 0.0
    e_plus, e_minus = np.asarray(e_plus)[:count], np.asarray(e_minus)[:count]
    return float(np.max(np.abs(e_plus - e_minus) / np.maximum(1.0, np.abs(e_plus))))


class XiPolynomial:
    """Even exponent ``xi(x) = -(x / ell)^(2n)`` with analytic derivatives.

    Attributes:
        n: positive integer power.
        ell: positive length scale.
    """

    def __init__(self, n, ell=1.0):
        # type: (int, float) -> None
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise AssertionError(f"xi power should be a positive integer (got {n})")
        if not ell > 0:
            raise AssertionError(f"xi length scale should be strictly positive (got {ell})")
        self.n = int(n)
        self.ell = float(ell)

    def __call__(self, x):
        return -(np.asarray(x, dtype=np.float64) / self.ell) ** (2 * self.n)

    def derivative(self, x, order=1):
        # type: (phermit.typedefs.ArrayType, int) -> np.ndarray
        """Returns ``xi'`` (order 1) or ``xi''`` (order 2) at the given positions."""
        x = np.asarray(x, dtype=np.float64)
        n, scale = self.n, self.ell ** (2 * self.n)
        if order == 1:
            return -2 * n * x ** (2 * n - 1) / scale
        if order == 2:
            return -2 * n * (2 * n - 1) * x ** (2 * n - 2) / scale
        raise AssertionError(f"unsupported derivative order {order}")

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}(n={self.n}, ell={self.ell})"


def parse_xi(spec):
    # type: (str) -> XiPolynomial
    """Parses a ``poly:<n>:<ell>`` exponent spec (``ell`` defaults to 1)."""
    tokens = spec.strip().split(":")
    if tokens[0] != "poly" or len(tokens) not in (2, 3):
        raise AssertionError(f"invalid xi spec '{spec}' (expected poly:<n>:<ell>)")
    try:
        n = int(tokens[1])
        ell = float(tokens[2]) if len(tokens) == 3 else 1.0
    except ValueError:
        raise AssertionError(f"invalid xi spec '{spec}' (expected poly:<n>:<ell>)")
    return XiPolynomial(n, ell)


class FirstOrderData:
    """Functions defining the first-order intertwiner ``D = p + f(x) + i g(x)``, tabulated on a grid.

    The functions are split into even and odd parts, ``f = f_+ + f_-`` and ``g = g_+ + g_-``, with
    ``f_+ = lambda exp(xi)`` for an even exponent ``xi`` (positive branch). Exponent derivatives are
    analytic for exponents exposing a ``derivative`` method (e.g. :class:`XiPolynomial`), and central
    differences otherwise.

    Attributes:
        grid: the grid.
        lam: the nonzero real ``lambda``.
        xi, xi_prime, xi_second: the exponent and its derivatives.
        xi_mid: the exponent on the cell midpoints.
        f_plus, f_minus, g_plus, g_minus: even/odd parts of ``f`` and ``g``.
        g_minus_prime: derivative of ``g_-``.
        phase, phase_mid: the (even) antiderivative of ``f_-`` on the nodes and on the cell midpoints.
        checked: whether the Hermiticity condition of ``H_+`` has been imposed.
        degenerate: whether ``xi`` is constant (so that ``H_-`` is Hermitian as well).
    """

    def __init__(self, grid, xi, lam, f_minus=None, g_plus=None, g_minus=None):
        # type: (Grid1D, Callable, float, Optional[Callable], Optional[Callable], Optional[Callable]) -> None
        if not np.isfinite(lam) or lam == 0:
            raise AssertionError(f"lambda should be a nonzero real number (got {lam})")
        self.grid = grid
        self.lam = float(lam)
        nodes = grid.nodes
        self.xi = check_parity(self._tabulate(xi), grid, even=True, name="xi")
        if hasattr(xi, "derivative"):
            self.xi_prime = np.asarray(xi.derivative(nodes, 1), dtype=np.float64)
            self.xi_second = np.asarray(xi.derivative(nodes, 2), dtype=np.float64)
        else:
            self.xi_prime = central_derivative(self.xi, grid)
            self.xi_second = central_derivative(self.xi_prime, grid)
        self.f_plus = self.lam * np.exp(self.xi)
        self.f_minus = check_parity(self._tabulate(f_minus), grid, even=False, name="f_minus")
        self.g_plus = check_parity(self._tabulate(g_plus), grid, even=True, name="g_plus")
        self.g_minus = check_parity(self._tabulate(g_minus), grid, even=False, name="g_minus")
        self.g_minus_prime = central_derivative(self.g_minus, grid)
        self.xi_mid = self._tabulate(xi, grid.midpoints)
        # antiderivative of f_- vanishing at the origin, on the half-spacing grid through nodes and midpoints
        half = 0.5 * grid.spacing * (np.arange(2 * grid.n_points + 3) - (grid.n_points + 1))
        phase = scipy.integrate.cumulative_trapezoid(self._tabulate(f_minus, half), half, initial=0.0)
        phase = 0.5 * (phase + phase[::-1]) - phase[grid.n_points + 1]
        self.phase = phase[2:-1:2]
        self.phase_mid = phase[1::2]
        self.checked = False
        self.degenerate = False

    def _tabulate(self, func, positions=None):
        positions = self.grid.nodes if positions is None else positions
        if func is None:
            return np.zeros(len(positions))
        return np.array(np.broadcast_to(np.asarray(func(positions), dtype=np.float64), (len(positions),)))

    @property
    def f_plus_prime(self):
        # type: () -> np.ndarray
        return self.f_plus * self.xi_prime

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(grid={repr(self.grid)}, lam={self.lam}, checked={self.checked})"


def hermitian_plus_condition(data):
    # type: (FirstOrderData) -> FirstOrderData
    """Imposes the Hermiticity condition of ``H_+``: ``g_+ = 0`` and ``g_- = -f_+' / (2 f_+) = -xi' / 2``.

    Returns:
        A checked copy of the data, with ``g_-`` (and its derivative) derived from the exponent.

    Raises:
        AssertionError: if ``g_+`` does not vanish, or if ``lambda`` is zero.
    """
    if data.lam == 0:
        raise AssertionError("lambda should be nonzero")
    if np.any(data.g_plus != 0):
        raise AssertionError("the Hermiticity condition of H_+ requires g_+ = 0")
    checked = copy.copy(data)
    checked.g_minus = -0.5 * data.xi_prime
    checked.g_minus_prime = -0.5 * data.xi_second
    checked.checked = True
    checked.degenerate = bool(np.all(data.xi_prime == 0))
    if checked.degenerate:
        logger.warning("constant exponent: g_- vanishes and H_- is Hermitian as well")
    return checked


def first_order_operator(ops, f, g):
    # type: (phermit.models.discretize.GridOps, phermit.typedefs.ArrayType, phermit.typedefs.ArrayType) -> phermit.typedefs.OpType  # noqa: E501
    """Returns ``Pmom + diag(f + i g)`` for real functions tabulated on the grid nodes."""
    return ops.Pmom + np.diag(np.asarray(f, dtype=np.float64) + 1j * np.asarray(g, dtype=np.float64))


def _staggered_kernels(data):
    # difference and average stencils weighted by exp(-xi/2) on midpoints and exp(xi/2) on nodes
    diff, avg, _ = staggered_ops(data.grid)
    xi_nodes, xi_mid = data.xi[None, :], data.xi_mid[:, None]
    ratio = diff * np.exp(np.where(diff != 0, 0.5 * (xi_nodes - xi_mid), 0.0))
    product = avg * np.exp(np.where(avg != 0, 0.5 * (xi_nodes + xi_mid), 0.0))
    return ratio, product


def _phases(data):
    return np.exp(1j * data.phase), np.exp(1j * data.phase_mid)


def _kinetic(data):
    # [p + f_-]^2 as exp(-i phase) Lap exp(i phase)
    u_nodes = np.exp(1j * data.phase)
    return u_nodes.conj()[:, None] * build_ops(data.grid).Lap * u_nodes[None, :]


def _check_scheme(data, scheme):
    if scheme not in SCHEMES:
        raise AssertionError(f"unknown discretization scheme '{scheme}' (expected one of {SCHEMES})")
    if scheme == "staggered" and not data.checked:
        raise AssertionError("the staggered scheme requires data satisfying the Hermiticity condition of H_+")


def first_order_D(data, scheme="literal"):
    # type: (FirstOrderData, str) -> phermit.typedefs.OpType
    """Returns the grid intertwiner ``D = p + f + i g``.

    Args:
        data: the tabulated functions.
        scheme: ``"literal"`` assembles the square ``Pmom + diag(f + i g)``. ``"staggered"`` (checked data only)
            maps node values to the ``n_points + 1`` cell midpoints and assembles the same continuum operator as
            ``exp(-i phase) (exp(-xi/2) p exp(xi/2) + lambda exp(xi)) exp(i phase)`` with the forward difference
            and the node average. Its product ``D# D / 2`` is exactly Hermitian with the three-point ``Lap``
            kinetic term, and ``D D# / 2`` carries the single zero mode of ``D#``.
    """
    _check_scheme(data, scheme)
    if scheme == "literal":
        ops = build_ops(data.grid)
        return first_order_operator(ops, data.f_plus + data.f_minus, data.g_plus + data.g_minus)
    ratio, product = _staggered_kernels(data)
    u_nodes, u_mid = _phases(data)
    return u_mid.conj()[:, None] * (-1j * ratio + data.lam * product) * u_nodes[None, :]


def first_order_D_sharp(data, scheme="literal"):
    # type: (FirstOrderData, str) -> phermit.typedefs.OpType
    """Returns the closed form of ``D# = -P D^H P``, i.e. ``p - f_+ + f_- + i (g_+ - g_-)`` for the literal scheme.

    For the staggered scheme, ``P`` is the node parity on the left and the midpoint parity on the right.
    """
    _check_scheme(data, scheme)
    if scheme == "literal":
        ops = build_ops(data.grid)
        return first_order_operator(ops, -data.f_plus + data.f_minus, data.g_plus - data.g_minus)
    ratio, product = _staggered_kernels(data)
    u_nodes, u_mid = _phases(data)
    return u_nodes.conj()[:, None] * (1j * ratio.T - data.lam * product.T) * u_mid[None, :]


def parity_metrics(grid, staggered=False):
    # type: (Grid1D, bool) -> Tuple[Metric, Metric]
    """Returns the metrics ``(P, -P)`` of the plus and minus spaces (minus space on the cell midpoints if staggered)."""
    parity = build_ops(grid).Par
    minus_parity = staggered_ops(grid)[2] if staggered else parity
    return Metric(parity, inverse=parity), Metric(-minus_parity, inverse=-minus_parity)


def first_order_hamiltonians(data):
    # type: (FirstOrderData) -> Tuple[phermit.typedefs.OpType, phermit.typedefs.OpType]
    """Returns the closed forms of ``H_+ = D# D / 2`` and ``H_- = D D# / 2`` for arbitrary ``f_+/-`` and ``g_+/-``.

    ``H_+/- = ([p + f_-]^2 +/- g_-' + g_-^2 - f_+^2 - i [2 g_- f_+ +/- f_+'] + K) / 2`` with
    ``K = i {g_+, p} + g_+ (2 i f_- - g_+)``. The derivative ``g_-'`` changes sign between the partners
    (it comes from commuting ``p`` through ``i g`` in ``D#`` for ``H_+`` and through ``-i g_-`` in ``D``
    for ``H_-``), while ``g_-^2`` does not. The kinetic term ``[p + f_-]^2`` is ``Lap`` conjugated by the
    phase ``exp(i int f_-)``.
    """
    kinetic = _kinetic(data)
    pmom = build_ops(data.grid).Pmom
    g_plus = np.diag(data.g_plus).astype(np.complex128)
    k_term = 1j * (g_plus @ pmom + pmom @ g_plus) + np.diag(data.g_plus * (2j * data.f_minus - data.g_plus))
    common = data.g_minus ** 2 - data.f_plus ** 2 - 2j * data.g_minus * data.f_plus
    h_plus = kinetic + np.diag(common + data.g_minus_prime - 1j * data.f_plus_prime)
    h_minus = kinetic + np.diag(common - data.g_minus_prime + 1j * data.f_plus_prime)
    return 0.5 * (h_plus + k_term), 0.5 * (h_minus + k_term)


def xi_family_hamiltonians(data):
    # type: (FirstOrderData) -> Tuple[phermit.typedefs.OpType, phermit.typedefs.OpType]
    """Returns the closed forms of the partners once the Hermiticity condition of ``H_+`` holds.

    ``H_+ = ([p + f_-]^2 + xi'^2 / 4 - xi'' / 2 - lambda^2 exp(2 xi)) / 2`` is Hermitian, and
    ``H_- = ([p + f_-]^2 + xi'^2 / 4 + xi'' / 2 - lambda^2 exp(2 xi) + 2 i lambda exp(xi) xi') / 2``
    is its isospectral (up to zero modes), generally non-Hermitian partner. Both are assembled on the nodes.
    """
    if not data.checked:
        raise AssertionError("the Hermiticity condition of H_+ should be imposed first")
    kinetic = _kinetic(data)
    base = 0.25 * data.xi_prime ** 2 - data.lam ** 2 * np.exp(2 * data.xi)
    h_plus = 0.5 * (kinetic + np.diag(base - 0.5 * data.xi_second))
    h_minus = 0.5 * (kinetic + np.diag(base + 0.5 * data.xi_second + 2j * data.lam * np.exp(data.xi) * data.xi_prime))
    return h_plus, h_minus


def xi_family_potentials(x, n, ell, lam):
    # type: (phermit.typedefs.ArrayType, int, float, float) -> Tuple[np.ndarray, np.ndarray]
    """Returns the potentials ``V_+`` and ``V_-`` of the ``xi = -(x / ell)^(2n)`` family.

    With ``f_- = 0``, the partners are ``H_+/- = p^2 / 2 + V_+/-``.
    """
    x = np.asarray(x, dtype=np.float64)
    decay = np.exp(-(ell ** (-2 * n)) * x ** (2 * n))
    quartic = n ** 2 * ell ** (-4 * n) * x ** (4 * n - 2)
    quadratic = n * (2 * n - 1) * ell ** (-2 * n) * x ** (2 * n - 2)
    v_plus = 0.5 * (quartic + quadratic - lam ** 2 * decay ** 2)
    v_minus = 0.5 * (quartic - quadratic - lam ** 2 * decay ** 2 - 4j * lam * n * ell ** (-2 * n) * x ** (2 * n - 1) * decay)
    return v_plus, v_minus


def xi_family_pair(data, scheme="staggered"):
    # type: (FirstOrderData, str) -> SusyPair
    """Returns the product-built pair ``(D# D / 2, D D# / 2)`` with ``eta_+ = P`` and ``eta_- = -P``.

    With the (default) staggered scheme, ``H_-`` acts on the ``n_points + 1`` cell midpoints.
    """
    if not data.checked:
        data = hermitian_plus_condition(data)
    eta_plus, eta_minus = parity_metrics(data.grid, staggered=(scheme == "staggered"))
    return build_susy_pair(first_order_D(data, scheme), eta_plus, eta_minus)


def resolved_levels(n_points):
    # type: (int) -> int
    """Returns the number of low-lying grid levels treated as resolved (a quarter of the grid)."""
    return max(1, n_points // 4)
