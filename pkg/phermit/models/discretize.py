"""Uniform one-dimensional grid discretization module.

This module realizes position, momentum and parity as dense matrices on a symmetric grid with implied
Dirichlet boundaries outside ``[-L, L]``, and assembles the standard-form PT-symmetric Hamiltonians
``p^2 / 2m + V_+(x) + i V_-(x)`` and the two reference operators ``p^2 + x^2 p`` and
``p^2 + i (x^2 p + p x^2)``. Units use ``hbar = 1``.

The parity, Hermiticity and symmetry identities of the returned matrices hold exactly (not within a
tolerance): nodes are integer multiples of the spacing, and every stencil is antisymmetric or symmetric.
"""

import logging
from typing import TYPE_CHECKING

import numpy as np

import phermit.typedefs  # noqa: F401

if TYPE_CHECKING:
    from typing import Callable, List, Optional, Sequence, Tuple  # noqa: F401

logger = logging.getLogger(__name__)

PARITY_TOL = 1e-12
"""Relative tolerance used to validate the parity of functions tabulated on grid nodes."""


class Grid1D:
    """Symmetric uniform grid with an odd number of nodes, centered on the origin.

    Nodes are ``x_j = spacing * (j - (n_points - 1) / 2)`` with ``spacing = 2 L / (n_points + 1)``, so that
    the (implied) Dirichlet boundary nodes sit exactly at ``-L`` and ``+L``.

    Attributes:
        n_points: number of interior nodes (odd).
        half_width: half-width ``L`` of the domain.
        spacing: node spacing.
        nodes: read-only array of node positions.
    """

    def __init__(self, n_points, half_width):
        # type: (int, float) -> None
        if isinstance(n_points, bool) or not isinstance(n_points, (int, np.integer)):
            raise AssertionError(f"grid size should be an integer (got {repr(n_points)})")
        if n_points < 3 or n_points % 2 == 0:
            raise AssertionError(f"grid size should be odd and at least 3 (got {n_points}); "
                                 "parity needs a symmetric grid with a center node")
        if not np.isfinite(half_width) or half_width <= 0:
            raise AssertionError(f"grid half-width should be strictly positive (got {half_width})")
        self.n_points = int(n_points)
        self.half_width = float(half_width)
        self.spacing = 2.0 * self.half_width / (self.n_points + 1)
        offsets = np.arange(self.n_points) - (self.n_points - 1) // 2
        nodes = self.spacing * offsets.astype(np.float64)
        nodes.setflags(write=False)
        self.nodes = nodes

    @property
    def midpoints(self):
        # type: () -> np.ndarray
        """Centers of the ``n_points + 1`` cells between consecutive nodes, boundary cells included."""
        offsets = np.arange(self.n_points + 1) - self.n_points / 2.0
        return self.spacing * offsets

    def __len__(self):
        return self.n_points

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(n_points={self.n_points}, half_width={self.half_width})"


class GridOps:
    """Dense grid operators.

    Attributes:
        grid: the underlying grid.
        X: diagonal position operator.
        Pmom: momentum operator, ``-i`` times the central first difference.
        Par: parity operator (anti-identity permutation).
        Lap: three-point Dirichlet second difference, i.e. ``-d^2/dx^2``.
    """

    def __init__(self, grid, X, Pmom, Par, Lap):
        self.grid = grid
        self.X = X
        self.Pmom = Pmom
        self.Par = Par
        self.Lap = Lap

    @property
    def dim(self):
        # type: () -> int
        return self.grid.n_points


def make_grid(n_points, half_width):
    # type: (int, float) -> Grid1D
    """Returns the symmetric uniform grid with the given (odd) node count and half-width."""
    return Grid1D(n_points, half_width)


def build_ops(grid):
    # type: (Grid1D) -> GridOps
    """Builds the position, momentum, parity and second-difference matrices of a grid."""
    dim, spacing = grid.n_points, grid.spacing
    ones = np.ones(dim - 1)
    diff = np.diag(ones, k=1) - np.diag(ones, k=-1)
    pmom = (-1j / (2.0 * spacing)) * diff.astype(np.complex128)
    lap = (2.0 * np.eye(dim) - np.diag(ones, k=1) - np.diag(ones, k=-1)) / spacing ** 2
    return GridOps(
        grid=grid,
        X=np.diag(grid.nodes).astype(np.complex128),
        Pmom=pmom,
        Par=np.fliplr(np.eye(dim)).astype(np.complex128),
        Lap=lap.astype(np.complex128),
    )


def staggered_ops(grid):
    # type: (Grid1D) -> Tuple[np.ndarray, np.ndarray, np.ndarray]
    """Builds the node-to-midpoint forward difference and average, and the midpoint parity.

    The difference ``G`` and average ``A`` are ``(n_points + 1) x n_points`` matrices acting on node values
    with zero (Dirichlet) boundary values. ``G^T G`` is ``Lap``, ``A^T G`` is the central difference stencil,
    and ``Pm G Par = -G`` and ``Pm A Par = A`` hold exactly for the midpoint parity ``Pm``.
    """
    dim = grid.n_points
    rows = np.arange(dim)
    stencil = np.zeros((dim + 1, dim))
    stencil[rows, rows] = 1.0
    stencil[rows + 1, rows] = -1.0
    return stencil / grid.spacing, 0.5 * np.abs(stencil), np.fliplr(np.eye(dim + 1))


def check_parity(values, grid, even=True, name="function", tol=PARITY_TOL):
    # type: (phermit.typedefs.ArrayType, Grid1D, bool, str, float) -> np.ndarray
    """Validates that values tabulated on the grid nodes are even (or odd), and returns them.

    Raises:
        AssertionError: listing the offending nodes when the parity check fails.
    """
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.size != grid.n_points:
        raise AssertionError(f"{name} has {values.size} values, expected {grid.n_points}")
    if not np.all(np.isfinite(values)):
        raise AssertionError(f"{name} has non-finite values on the grid")
    mirrored = values[::-1] if even else -values[::-1]
    scale = max(1.0, float(np.max(np.abs(values))))
    bad = np.flatnonzero(np.abs(values - mirrored) > tol * scale)
    if bad.size:
        bad = bad[grid.nodes[bad] >= 0]
        shown = ", ".join([f"x={grid.nodes[idx]:.6g}" for idx in bad[:5]])
        more = f" (+{bad.size - 5} more)" if bad.size > 5 else ""
        raise AssertionError(f"{name} is not {'even' if even else 'odd'} at nodes: {shown}{more}")
    return values


def central_derivative(values, grid):
    # type: (phermit.typedefs.ArrayType, Grid1D) -> np.ndarray
    """Returns the first derivative of tabulated values (central differences, one-sided at the ends)."""
    return np.gradient(np.asarray(values, dtype=np.float64), grid.spacing)


def _tabulate(func, grid):
    if func is None:
        return np.zeros(grid.n_points)
    values = np.broadcast_to(np.asarray(func(grid.nodes), dtype=np.float64), (grid.n_points,))
    return np.array(values)


def schrodinger_hamiltonian(ops, mass, V_even=None, V_odd=None):
    # type: (GridOps, float, Optional[phermit.typedefs.GridFunctionType], Optional[phermit.typedefs.GridFunctionType]) -> phermit.typedefs.OpType  # noqa: E501
    """Assembles the standard-form Hamiltonian ``Pmom^2 / 2m + diag(V_+ + i V_-)``.

    With an even real part and an odd imaginary part, the result is PT-symmetric and pseudo-Hermitian with
    respect to the parity operator, both exactly at matrix level.

    Args:
        ops: the grid operators.
        mass: the (positive) mass.
        V_even: even real part of the potential (``None`` for zero).
        V_odd: odd imaginary part of the potential (``None`` for zero).
    """
    if not mass > 0:
        raise AssertionError(f"mass should be strictly positive (got {mass})")
    v_plus = check_parity(_tabulate(V_even, ops.grid), ops.grid, even=True, name="V_even")
    v_minus = check_parity(_tabulate(V_odd, ops.grid), ops.grid, even=False, name="V_odd")
    return ops.Pmom @ ops.Pmom / (2.0 * mass) + np.diag(v_plus + 1j * v_minus)


def example_h1(ops):
    # type: (GridOps) -> phermit.typedefs.OpType
    """Returns ``p^2 + x^2 p``, which is PT-symmetric but not parity-pseudo-Hermitian."""
    return ops.Pmom @ ops.Pmom + ops.X @ ops.X @ ops.Pmom


def example_h2(ops):
    # type: (GridOps) -> phermit.typedefs.OpType
    """Returns ``p^2 + i (x^2 p + p x^2)``, which is parity-pseudo-Hermitian but not PT-symmetric."""
    return ops.Pmom @ ops.Pmom + 1j * (ops.X @ ops.X @ ops.Pmom + ops.Pmom @ ops.X @ ops.X)


def polynomial(coeffs):
    # type: (Sequence[float]) -> phermit.typedefs.GridFunctionType
    """Returns the callable ``x -> sum_k coeffs[k] x^k``."""
    coeffs = np.asarray(list(coeffs), dtype=np.float64)
    if coeffs.size == 0:
        raise AssertionError("polynomial needs at least one coefficient")

    def func(x):
        return np.polynomial.polynomial.polyval(x, coeffs)

    return func


_NAMED_FUNCTIONS = {
    "zero": [0.0],
    "x": [0.0, 1.0],
    "x2": [0.0, 0.0, 1.0],
    "x3": [0.0, 0.0, 0.0, 1.0],
}


def parse_function(spec):
    # type: (str) -> phermit.typedefs.GridFunctionType
    """Parses a command-line function spec: ``zero``, ``x``, ``x2``, ``x3`` or ``poly:c0,c1,...``."""
    spec = spec.strip()
    if spec in _NAMED_FUNCTIONS:
        return polynomial(_NAMED_FUNCTIONS[spec])
    if spec.startswith("poly:"):
        try:
            coeffs = [float(tok) for tok in spec[len("poly:"):].split(",") if tok.strip()]
        except ValueError:
            raise AssertionError(f"invalid polynomial coefficients in '{spec}'")
        return polynomial(coeffs)
    raise AssertionError(f"unknown function spec '{spec}' (expected one of {sorted(_NAMED_FUNCTIONS)} or poly:c0,c1,...)")
