"""Pseudo-adjoint algebra module.

This module contains the finite-dimensional building blocks of pseudo-Hermitian quantum mechanics: the
validated :class:`Metric` wrapper for Hermitian linear automorphisms, the pseudo-adjoint operation
``O# = inv(eta_plus) @ O^H @ eta_minus``, the indefinite inner product it induces, and a few generators
of random test instances. Operators are plain dense complex ``numpy`` arrays; every public function
validates its inputs through :func:`check_op` and :func:`check_state`.

All residuals use the Frobenius norm, normalized by the product of the norms of the factors involved.
"""

import logging
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

import phermit.typedefs  # noqa: F401

if TYPE_CHECKING:
    from typing import Iterable, Optional, Tuple, Union  # noqa: F401

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
"""Default relative tolerance for algebraic identities."""

METRIC_COND_MAX = 1e14
"""Condition number above which a candidate metric is considered singular."""


def check_op(op, name="operator", square=True):
    # type: (phermit.typedefs.ArrayType, str, bool) -> phermit.typedefs.OpType
    """Validates and returns a dense complex matrix (copy) for the given operator.

    Args:
        op: array-like operator representation.
        name: name used in error messages.
        square: whether the operator must map a space onto itself.
    """
    if isinstance(op, Metric):
        return op.op
    op = np.array(op, dtype=np.complex128)
    if op.ndim == 0:
        op = op.reshape(1, 1)
    if op.ndim != 2 or op.size == 0:
        raise AssertionError(f"{name} should be a non-empty 2D matrix (got shape {op.shape})")
    if square and op.shape[0] != op.shape[1]:
        raise AssertionError(f"{name} should be square (got shape {op.shape})")
    if not np.all(np.isfinite(op)):
        raise AssertionError(f"{name} contains non-finite entries")
    return op


def check_state(psi, dim=None, name="state"):
    # type: (phermit.typedefs.ArrayType, Optional[int], str) -> phermit.typedefs.StateVecType
    """Validates and returns a complex amplitude vector (copy), optionally checking its dimension."""
    psi = np.array(psi, dtype=np.complex128).reshape(-1)
    if psi.size == 0:
        raise AssertionError(f"{name} should not be empty")
    if not np.all(np.isfinite(psi)):
        raise AssertionError(f"{name} contains non-finite amplitudes")
    if dim is not None and psi.size != dim:
        raise AssertionError(f"{name} dimension mismatch (got {psi.size}, expected {dim})")
    return psi


def _relative(numerator, *norms):
    denominator = float(np.prod(norms))
    if denominator == 0.0:
        return float(numerator)
    return float(numerator) / denominator


class Metric:
    """Hermitian invertible operator defining an indefinite inner product.

    The candidate operator is validated once at construction: its Hermiticity residual must lie within
    the given tolerance, after which it is symmetrized as ``(op + op^H) / 2``. Its inverse is computed
    and cached (or validated, when an exactly known inverse is provided, e.g. for permutations and
    signature matrices). Instances are immutable.

    Attributes:
        op: the symmetrized metric operator (read-only array).
        inverse: the cached inverse (read-only array).
        hermiticity_residual: ``||op - op^H|| / ||op||`` measured before symmetrization.
        condition_estimate: 2-norm condition number of ``op``.
    """

    def __init__(self, op, tol=DEFAULT_TOL, inverse=None):
        # type: (phermit.typedefs.ArrayType, float, Optional[phermit.typedefs.ArrayType]) -> None
        assert tol > 0, "tolerance should be strictly positive"
        op = check_op(op, "metric")
        norm = np.linalg.norm(op)
        if norm == 0.0:
            raise AssertionError("metric cannot be the zero operator")
        self.hermiticity_residual = float(np.linalg.norm(op - op.conj().T) / norm)
        if self.hermiticity_residual > tol:
            raise AssertionError(f"metric is not Hermitian (residual={self.hermiticity_residual:.3e}, tol={tol:.1e})")
        op = 0.5 * (op + op.conj().T)
        self.condition_estimate = float(np.linalg.cond(op))
        if not np.isfinite(self.condition_estimate) or self.condition_estimate > METRIC_COND_MAX:
            raise AssertionError(f"metric is not invertible (condition={self.condition_estimate:.3e})")
        if inverse is None:
            inverse = scipy.linalg.inv(op)
        else:
            inverse = check_op(inverse, "metric inverse")
            if inverse.shape != op.shape:
                raise AssertionError(f"metric inverse shape mismatch ({inverse.shape} vs {op.shape})")
        inv_residual = np.linalg.norm(op @ inverse - np.eye(op.shape[0]))
        if inv_residual > tol * self.condition_estimate * np.sqrt(op.shape[0]):
            raise AssertionError(f"metric inverse is inconsistent (residual={inv_residual:.3e})")
        op.setflags(write=False)
        inverse.setflags(write=False)
        self.op = op
        self.inverse = inverse
        self.tol = tol

    @staticmethod
    def identity(dim):
        # type: (int) -> Metric
        """Returns the Euclidean metric (identity) of the given dimension."""
        assert dim >= 1, "dimension should be positive"
        return Metric(np.eye(dim), inverse=np.eye(dim))

    @staticmethod
    def signature(signs):
        # type: (Iterable[int]) -> Metric
        """Returns the diagonal signature metric built from a list of +1/-1 entries."""
        signs = np.asarray(list(signs), dtype=np.float64)
        assert signs.size > 0 and np.all(np.abs(signs) == 1), "signature entries should be +1 or -1"
        return Metric(np.diag(signs), inverse=np.diag(signs))

    @property
    def dim(self):
        # type: () -> int
        return int(self.op.shape[0])

    @property
    def inertia(self):
        # type: () -> Tuple[int, int]
        """Returns the (positive, negative) eigenvalue counts of the metric."""
        eigvals = scipy.linalg.eigvalsh(self.op)
        return int(np.sum(eigvals > 0)), int(np.sum(eigvals < 0))

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(dim={self.dim}, inertia={self.inertia}, condition_estimate={self.condition_estimate:.3e})"


def as_metric(eta, tol=DEFAULT_TOL):
    # type: (phermit.typedefs.OpOrMetricType, float) -> Metric
    """Wraps a raw operator into a :class:`Metric` (no-op if already one)."""
    if isinstance(eta, Metric):
        return eta
    return Metric(eta, tol=tol)


def pseudo_adjoint(op, eta_plus, eta_minus=None):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.OpOrMetricType, Optional[phermit.typedefs.OpOrMetricType]) -> phermit.typedefs.OpType  # noqa: E501
    """Returns the pseudo-adjoint ``inv(eta_plus) @ op^H @ eta_minus`` of an operator.

    The operator maps the space carrying ``eta_plus`` (dimension ``n``) into the space carrying
    ``eta_minus`` (dimension ``m``), so it is given as an ``m x n`` matrix; the result maps back and has
    shape ``n x m``. When ``eta_minus`` is omitted, ``eta_plus`` is used on both sides.

    Args:
        op: the operator to transform.
        eta_plus: metric of the domain space.
        eta_minus: metric of the target space (default: ``eta_plus``).
    """
    op = check_op(op, square=False)
    eta_plus = as_metric(eta_plus)
    eta_minus = eta_plus if eta_minus is None else as_metric(eta_minus)
    if eta_plus.dim != op.shape[1] or eta_minus.dim != op.shape[0]:
        raise AssertionError(f"operator shape {op.shape} incompatible with metric dims "
                             f"(plus={eta_plus.dim}, minus={eta_minus.dim})")
    return eta_plus.inverse @ op.conj().T @ eta_minus.op


def pseudo_hermiticity_residual(hamiltonian, eta):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.OpOrMetricType) -> float
    """Returns ``||eta H - H^H eta|| / (||eta|| ||H||)``, which vanishes iff H is eta-pseudo-Hermitian."""
    hamiltonian = check_op(hamiltonian, "hamiltonian")
    eta = as_metric(eta)
    if eta.dim != hamiltonian.shape[0]:
        raise AssertionError(f"dimension mismatch (hamiltonian={hamiltonian.shape[0]}, metric={eta.dim})")
    diff = eta.op @ hamiltonian - hamiltonian.conj().T @ eta.op
    return _relative(np.linalg.norm(diff), np.linalg.norm(eta.op), np.linalg.norm(hamiltonian))


def is_pseudo_hermitian(hamiltonian, eta, tol=DEFAULT_TOL):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.OpOrMetricType, float) -> bool
    """Returns whether the pseudo-Hermiticity residual lies within the given tolerance."""
    return pseudo_hermiticity_residual(hamiltonian, eta) <= tol


def indefinite_inner(psi1, psi2, eta):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType, phermit.typedefs.OpOrMetricType) -> complex
    """Returns the indefinite inner product ``<psi1|eta|psi2>`` (conjugate-linear in ``psi1``)."""
    eta = as_metric(eta)
    psi1 = check_state(psi1, eta.dim, "first state")
    psi2 = check_state(psi2, eta.dim, "second state")
    return complex(np.vdot(psi1, eta.op @ psi2))


def parity_inner(psi1, psi2, parity):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType, phermit.typedefs.ArrayType) -> complex
    """Returns the parity inner product ``<psi1|P|psi2>`` for an involutive parity operator."""
    parity = check_op(parity, "parity")
    return indefinite_inner(psi1, psi2, Metric(parity, inverse=parity))


def eta_semi_norm_sq(psi, eta, tol=DEFAULT_TOL):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.OpOrMetricType, float) -> float
    """Returns the (possibly negative or zero) real quadratic form ``<psi|eta|psi>``."""
    eta = as_metric(eta)
    value = indefinite_inner(psi, psi, eta)
    scale = np.vdot(psi, psi).real * np.linalg.norm(eta.op, 2)
    if abs(value.imag) > tol * max(scale, np.finfo(np.float64).tiny):
        raise AssertionError(f"semi-norm has a non-negligible imaginary part ({value.imag:.3e})")
    return float(value.real)


def unitary_transport(op, eta, unitary, tol=DEFAULT_TOL):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.OpOrMetricType, phermit.typedefs.ArrayType, float) -> Tuple[phermit.typedefs.OpType, Metric]  # noqa: E501
    """Returns ``(U^H O U, U^H eta U)``, which preserves pseudo-Hermiticity.

    Args:
        op: the operator to transport.
        eta: the metric to transport.
        unitary: the unitary change of basis; ``||U^H U - I||`` must lie within ``tol``.
        tol: unitarity tolerance.
    """
    op = check_op(op)
    eta = as_metric(eta)
    unitary = check_op(unitary, "unitary")
    if not (op.shape == unitary.shape and eta.dim == op.shape[0]):
        raise AssertionError(f"dimension mismatch (op={op.shape}, eta={eta.dim}, unitary={unitary.shape})")
    defect = np.linalg.norm(unitary.conj().T @ unitary - np.eye(unitary.shape[0]))
    if defect > tol:
        raise AssertionError(f"transport operator is not unitary (defect={defect:.3e})")
    uh = unitary.conj().T
    new_eta = uh @ eta.op @ unitary
    new_inverse = uh @ eta.inverse @ unitary
    new_eta = 0.5 * (new_eta + new_eta.conj().T)
    new_inverse = 0.5 * (new_inverse + new_inverse.conj().T)
    return uh @ op @ unitary, Metric(new_eta, tol=max(tol, eta.tol), inverse=new_inverse)


def symmetry_candidate(eta1, eta2):
    # type: (phermit.typedefs.OpOrMetricType, phermit.typedefs.OpOrMetricType) -> phermit.typedefs.OpType
    """Returns ``inv(eta2) @ eta1``, a symmetry of any Hamiltonian pseudo-Hermitian w.r.t. both metrics."""
    eta1, eta2 = as_metric(eta1), as_metric(eta2)
    if eta1.dim != eta2.dim:
        raise AssertionError(f"metric dimension mismatch ({eta1.dim} vs {eta2.dim})")
    return eta2.inverse @ eta1.op


def commutator_residual(op1, op2):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType) -> float
    """Returns ``||[A, B]|| / (||A|| ||B||)``."""
    op1, op2 = check_op(op1), check_op(op2)
    if op1.shape != op2.shape:
        raise AssertionError(f"dimension mismatch ({op1.shape} vs {op2.shape})")
    return _relative(np.linalg.norm(op1 @ op2 - op2 @ op1), np.linalg.norm(op1), np.linalg.norm(op2))


def eta_orthogonality_defect(vectors, eigenvalues, eta, sep=1e-6):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType, phermit.typedefs.OpOrMetricType, float) -> float
    """Returns the largest normalized eta-overlap between eigenvectors that must be eta-orthogonal.

    For an eta-pseudo-Hermitian operator, eigenvectors with eigenvalues ``E_i`` and ``E_j`` satisfying
    ``conj(E_i) != E_j`` are eta-orthogonal; in particular, eigenvectors with non-real eigenvalues have
    a vanishing eta-semi-norm.

    Args:
        vectors: eigenvectors stored as columns.
        eigenvalues: matching eigenvalues.
        eta: the metric.
        sep: minimal separation ``|conj(E_i) - E_j|`` above which orthogonality is enforced.
    """
    eta = as_metric(eta)
    vectors = check_op(vectors, "eigenvectors", square=False)
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128).reshape(-1)
    if vectors.shape[0] != eta.dim or vectors.shape[1] != eigenvalues.size:
        raise AssertionError("eigenvector matrix shape incompatible with metric/eigenvalues")
    gram = vectors.conj().T @ eta.op @ vectors
    norms = np.linalg.norm(vectors, axis=0)
    separated = np.abs(eigenvalues.conj()[:, None] - eigenvalues[None, :]) > sep
    if not np.any(separated):
        return 0.0
    normalized = np.abs(gram) / np.outer(norms, norms)
    return float(np.max(normalized[separated]))


def ginibre(dim, seed=None):
    # type: (int, Optional[Union[int, np.random.Generator]]) -> phermit.typedefs.OpType
    """Returns a complex Ginibre matrix (i.i.d. standard complex Gaussian entries)."""
    assert dim >= 1, "dimension should be positive"
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)


def random_unitary(dim, seed=None):
    # type: (int, Optional[Union[int, np.random.Generator]]) -> phermit.typedefs.OpType
    """Returns a Haar-distributed unitary matrix (QR of a Ginibre matrix with phase correction)."""
    q, r = scipy.linalg.qr(ginibre(dim, seed))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[None, :]


def random_metric(dim, seed=None, signature=None, rotate=True):
    # type: (int, Optional[Union[int, np.random.Generator]], Optional[Iterable[int]], bool) -> Metric
    """Returns a random involutive metric ``U diag(s) U^H`` with a random or given signature ``s``.

    Args:
        dim: metric dimension.
        seed: seed or generator used to draw the signature and the rotation.
        signature: optional list of +1/-1 entries (drawn uniformly when omitted).
        rotate: whether to rotate the signature matrix by a random unitary.
    """
    rng = np.random.default_rng(seed)
    if signature is None:
        signs = rng.choice([-1.0, 1.0], size=dim)
    else:
        signs = np.asarray(list(signature), dtype=np.float64)
        assert signs.size == dim, "signature length should match dimension"
    if not rotate:
        return Metric.signature(signs)
    unitary = random_unitary(dim, rng)
    op = (unitary * signs[None, :]) @ unitary.conj().T
    op = 0.5 * (op + op.conj().T)
    return Metric(op, inverse=op)


def random_pseudo_hermitian(eta, dim=None, seed=None):
    # type: (phermit.typedefs.OpOrMetricType, Optional[int], Optional[Union[int, np.random.Generator]]) -> phermit.typedefs.OpType  # noqa: E501
    """Returns a random eta-pseudo-Hermitian matrix ``(B + inv(eta) B^H eta) / 2`` for a Ginibre ``B``.

    Args:
        eta: the metric w.r.t. which the result is pseudo-Hermitian.
        dim: expected dimension (must match the metric's when given).
        seed: seed or generator for the Ginibre draw.
    """
    eta = as_metric(eta)
    if dim is not None and dim != eta.dim:
        raise AssertionError(f"dimension mismatch (requested {dim}, metric {eta.dim})")
    base = ginibre(eta.dim, seed)
    return 0.5 * (base + eta.inverse @ base.conj().T @ eta.op)
