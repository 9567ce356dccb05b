"""Biorthonormal eigendecomposition module.

This module decomposes a diagonalizable operator into its complete biorthonormal eigensystem (right
eigenvectors of ``H`` paired with left eigenvectors of ``H^H``), classifies its spectrum into real
eigenvalues and complex-conjugate pairs, and uses that classification to build explicit metrics for which
the operator is pseudo-Hermitian. An operator with a complete biorthonormal eigensystem is pseudo-Hermitian
exactly when its non-real eigenvalues come in complex-conjugate pairs with matching multiplicities.
"""

import logging
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

import phermit.typedefs  # noqa: F401
from phermit.algebra.operators import DEFAULT_TOL, Metric, as_metric, check_op, pseudo_hermiticity_residual

if TYPE_CHECKING:
    from typing import Dict, List, Optional, Tuple  # noqa: F401

logger = logging.getLogger(__name__)

ALL_REAL = "AllReal"
CONJUGATE_PAIRED = "ConjugatePaired"
MIXED = "Mixed"
NOT_PSEUDO_HERMITIAN = "NotPseudoHermitian"
CLASSIFICATIONS = frozenset([ALL_REAL, CONJUGATE_PAIRED, MIXED, NOT_PSEUDO_HERMITIAN])

DEFAULT_PAIR_TOL = 1e-8
"""Default relative tolerance used to decide reality and conjugate pairing of eigenvalues."""

DEFAULT_CLUSTER_TOL = 1e-8
"""Default clustering tolerance, relative to the spectral radius."""

DEFAULT_COND_MAX = 1e10
"""Eigenvector matrix condition number above which a matrix is treated as defective."""


class DefectiveMatrixError(AssertionError):
    """Raised when an operator does not admit a (numerically) complete biorthonormal eigensystem.

    Attributes:
        condition_number: condition number of the right eigenvector matrix.
    """

    def __init__(self, condition_number, msg=None):
        # type: (float, Optional[str]) -> None
        self.condition_number = float(condition_number)
        super().__init__(msg or f"matrix is defective or too close to defective "
                                f"(eigenvector condition number {self.condition_number:.3e})")


class NotPseudoHermitianError(AssertionError):
    """Raised when a spectrum contains complex eigenvalues without a conjugate partner.

    Attributes:
        spectrum_class: the failed :class:`SpectrumClass`.
    """

    def __init__(self, spectrum_class, msg=None):
        # type: (SpectrumClass, Optional[str]) -> None
        self.spectrum_class = spectrum_class
        unpaired = [complex(spectrum_class.eigenvalues[idx]) for idx in spectrum_class.unpaired]
        super().__init__(msg or f"spectrum is not pseudo-Hermitian (unpaired eigenvalues: {unpaired})")


def cluster_eigenvalues(eigenvalues, tol):
    # type: (phermit.typedefs.ArrayType, float) -> Tuple[List[List[int]], np.ndarray]
    """Groups eigenvalues into degenerate clusters by transitive closure of ``|E_i - E_j| <= tol``.

    Returns:
        A tuple of the list of clusters (sorted index lists, ordered by first member) and the array
        mapping each eigenvalue index to its cluster index.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128).reshape(-1)
    parent = list(range(eigenvalues.size))

    def find(idx):
        while parent[idx] != idx:
            parent[idx] = parent[parent[idx]]
            idx = parent[idx]
        return idx

    close = np.abs(eigenvalues[:, None] - eigenvalues[None, :]) <= tol
    for i, j in np.argwhere(np.triu(close, k=1)):
        root_i, root_j = find(int(i)), find(int(j))
        if root_i != root_j:
            parent[max(root_i, root_j)] = min(root_i, root_j)
    groups = {}  # type: Dict[int, List[int]]
    for idx in range(eigenvalues.size):
        groups.setdefault(find(idx), []).append(idx)
    clusters = sorted(groups.values(), key=lambda members: members[0])
    cluster_of = np.empty(eigenvalues.size, dtype=np.int64)
    for cluster_idx, members in enumerate(clusters):
        cluster_of[members] = cluster_idx
    return clusters, cluster_of


class BiSystem:
    """Complete biorthonormal eigensystem of a diagonalizable operator.

    The right eigenvectors ``psi`` are stored as the columns of :attr:`right_vectors`, and the left
    eigenvectors ``phi`` (eigenvectors of ``H^H``) as the columns of :attr:`left_vectors`, normalized so
    that ``phi^H psi = I`` and ``psi phi^H = I``.

    Attributes:
        eigenvalues: eigenvalues, ordered by (real, imaginary) part.
        right_vectors: right eigenvectors (columns).
        left_vectors: left eigenvectors (columns).
        clusters: index lists of numerically degenerate eigenvalues.
        cluster_of: cluster index of each eigenvalue.
        multiplicities: size of each cluster.
        cluster_tol: absolute tolerance used for clustering.
        completeness_residual: ``||psi phi^H - I||``.
        biorthonormality_residual: ``||phi^H psi - I||``.
        condition_number: condition number of the right eigenvector matrix.
        hamiltonian: the decomposed operator (if known).
    """

    def __init__(self, eigenvalues, right_vectors, left_vectors, cluster_tol, hamiltonian=None):
        self.eigenvalues = np.asarray(eigenvalues, dtype=np.complex128).reshape(-1)
        self.right_vectors = check_op(right_vectors, "right eigenvectors")
        self.left_vectors = check_op(left_vectors, "left eigenvectors")
        if self.right_vectors.shape != self.left_vectors.shape or self.right_vectors.shape[1] != self.eigenvalues.size:
            raise AssertionError("eigenvector matrices do not match the eigenvalue count")
        self.cluster_tol = float(cluster_tol)
        self.clusters, self.cluster_of = cluster_eigenvalues(self.eigenvalues, self.cluster_tol)
        self.multiplicities = [len(members) for members in self.clusters]
        identity = np.eye(self.dim)
        self.completeness_residual = float(np.linalg.norm(self.right_vectors @ self.left_vectors.conj().T - identity))
        self.biorthonormality_residual = \
            float(np.linalg.norm(self.left_vectors.conj().T @ self.right_vectors - identity))
        self.condition_number = float(np.linalg.cond(self.right_vectors))
        self.hamiltonian = hamiltonian

    @property
    def dim(self):
        # type: () -> int
        return int(self.eigenvalues.size)

    def multiplicity_of(self, idx):
        # type: (int) -> int
        """Returns the multiplicity of the cluster holding the eigenvalue at the given index."""
        return self.multiplicities[int(self.cluster_of[idx])]

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(dim={self.dim}, clusters={len(self.clusters)}, " + \
               f"completeness_residual={self.completeness_residual:.3e}, condition_number={self.condition_number:.3e})"


class SpectrumClass:
    """Partition of a spectrum into real eigenvalues, complex-conjugate pairs, and unpaired eigenvalues.

    Attributes:
        eigenvalues: the classified eigenvalues.
        real_indices: indices of eigenvalues classified as real.
        pairs: ``(plus, minus)`` index tuples, ``plus`` having the positive imaginary part.
        unpaired: indices of complex eigenvalues without a conjugate partner (failure when non-empty).
        classification: one of ``AllReal``, ``ConjugatePaired``, ``Mixed`` or ``NotPseudoHermitian``.
        pair_tol: the relative tolerance used for reality and pairing decisions.
    """

    def __init__(self, eigenvalues, real_indices, pairs, unpaired, pair_tol):
        self.eigenvalues = np.asarray(eigenvalues, dtype=np.complex128).reshape(-1)
        self.real_indices = sorted(int(idx) for idx in real_indices)
        self.pairs = sorted((int(p), int(m)) for p, m in pairs)
        self.unpaired = sorted(int(idx) for idx in unpaired)
        self.pair_tol = pair_tol
        seen = self.real_indices + [idx for pair in self.pairs for idx in pair] + self.unpaired
        assert sorted(seen) == list(range(self.eigenvalues.size)), "eigenvalue indices should be partitioned"
        if self.unpaired:
            self.classification = NOT_PSEUDO_HERMITIAN
        elif not self.pairs:
            self.classification = ALL_REAL
        elif not self.real_indices:
            self.classification = CONJUGATE_PAIRED
        else:
            self.classification = MIXED
        self._partners = {}
        for plus, minus in self.pairs:
            self._partners[plus] = minus
            self._partners[minus] = plus

    @property
    def is_pseudo_hermitian(self):
        # type: () -> bool
        return self.classification != NOT_PSEUDO_HERMITIAN

    def partner(self, idx):
        # type: (int) -> int
        """Returns the index of the conjugate partner of an eigenvalue, or -1 when it has none."""
        return self._partners.get(int(idx), -1)

    def label(self, idx):
        # type: (int) -> str
        """Returns the per-eigenvalue class label (``real``, ``pair+``, ``pair-`` or ``unpaired``)."""
        idx = int(idx)
        if idx in self._partners:
            return "pair+" if self.eigenvalues[idx].imag > 0 else "pair-"
        if idx in self.unpaired:
            return "unpaired"
        return "real"

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(classification={repr(self.classification)}, real={len(self.real_indices)}, " + \
               f"pairs={len(self.pairs)}, unpaired={len(self.unpaired)})"


def classify_eigenvalues(eigenvalues, pair_tol=DEFAULT_PAIR_TOL, cluster_of=None):
    # type: (phermit.typedefs.ArrayType, float, Optional[np.ndarray]) -> SpectrumClass
    """Classifies a bare eigenvalue array into real eigenvalues and complex-conjugate pairs.

    An eigenvalue is real when ``|Im E| <= pair_tol * (1 + |E|)``. The remaining eigenvalues are matched
    greedily by increasing ``|E_plus - conj(E_minus)|`` (ties broken by index order), and a match is only
    accepted within ``pair_tol * (1 + |E_plus|)``. When cluster labels are given, pairs joining clusters of
    different sizes are dissolved, since conjugate eigenvalues of a pseudo-Hermitian operator always share
    the same multiplicity.

    Args:
        eigenvalues: the eigenvalues to classify.
        pair_tol: relative tolerance for reality and pairing decisions.
        cluster_of: optional cluster index of each eigenvalue.
    """
    assert pair_tol > 0, "pair tolerance should be strictly positive"
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128).reshape(-1)
    magnitudes = np.abs(eigenvalues)
    is_real = np.abs(eigenvalues.imag) <= pair_tol * (1.0 + magnitudes)
    real_indices = np.flatnonzero(is_real).tolist()
    plus = np.flatnonzero(~is_real & (eigenvalues.imag > 0))
    minus = np.flatnonzero(~is_real & (eigenvalues.imag < 0))
    pairs = []
    if plus.size and minus.size:
        dist = np.abs(eigenvalues[plus][:, None] - eigenvalues[minus][None, :].conj())
        used_plus, used_minus = set(), set()
        for flat_idx in np.argsort(dist, axis=None, kind="stable"):
            i, j = np.unravel_index(flat_idx, dist.shape)
            if dist[i, j] > pair_tol * (1.0 + magnitudes[plus[i]]):
                break
            if i in used_plus or j in used_minus:
                continue
            used_plus.add(i)
            used_minus.add(j)
            pairs.append((int(plus[i]), int(minus[j])))
    if cluster_of is not None:
        cluster_sizes = np.bincount(np.asarray(cluster_of))
        mismatched = [(p, m) for p, m in pairs if cluster_sizes[cluster_of[p]] != cluster_sizes[cluster_of[m]]]
        if mismatched:
            logger.warning("dissolving %d conjugate pair(s) with mismatched multiplicities" % len(mismatched))
            pairs = [pair for pair in pairs if pair not in mismatched]
    paired = {idx for pair in pairs for idx in pair}
    unpaired = [int(idx) for idx in np.concatenate([plus, minus]) if int(idx) not in paired]
    return SpectrumClass(eigenvalues, real_indices, pairs, unpaired, pair_tol)


def eig_biorthonormal(hamiltonian, cluster_tol=None, cond_max=DEFAULT_COND_MAX):
    # type: (phermit.typedefs.ArrayType, Optional[float], float) -> BiSystem
    """Computes the complete biorthonormal eigensystem of a diagonalizable operator.

    Right eigenvectors come from a dense general eigensolver. Left eigenvectors are the conjugated rows
    of the inverse of the right eigenvector matrix, which enforces biorthonormality by construction; the
    conditioning of that inverse is surfaced through :attr:`BiSystem.completeness_residual`.

    Args:
        hamiltonian: the operator to decompose.
        cluster_tol: absolute clustering tolerance (default: ``1e-8`` times the spectral radius, at least ``1e-8``).
        cond_max: eigenvector condition number above which the operator is declared defective.

    Raises:
        DefectiveMatrixError: if the eigenvector matrix is singular or too ill-conditioned.
    """
    hamiltonian = check_op(hamiltonian, "hamiltonian")
    eigenvalues, right = scipy.linalg.eig(hamiltonian)
    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    eigenvalues, right = eigenvalues[order], right[:, order]
    right = right / np.linalg.norm(right, axis=0)[None, :]
    condition_number = np.linalg.cond(right)
    if not np.isfinite(condition_number) or condition_number > cond_max:
        raise DefectiveMatrixError(condition_number)
    left = scipy.linalg.inv(right).conj().T
    if cluster_tol is None:
        spectral_radius = float(np.max(np.abs(eigenvalues)))
        cluster_tol = DEFAULT_CLUSTER_TOL * max(1.0, spectral_radius)
    system = BiSystem(eigenvalues, right, left, cluster_tol, hamiltonian=hamiltonian)
    logger.debug("decomposed %dx%d operator: %d clusters, condition=%.3e, completeness residual=%.3e"
                 % (system.dim, system.dim, len(system.clusters), system.condition_number,
                    system.completeness_residual))
    return system


def classify_spectrum(system, pair_tol=DEFAULT_PAIR_TOL):
    # type: (BiSystem, float) -> SpectrumClass
    """Classifies the spectrum of a biorthonormal system (see :func:`classify_eigenvalues`)."""
    return classify_eigenvalues(system.eigenvalues, pair_tol=pair_tol, cluster_of=system.cluster_of)


class GaugeAlignment:
    """Record of the basis transformation applied by :func:`align_gauge`.

    Attributes:
        c_real: per real cluster, the Hermitian matrix ``phi^H inv(eta) phi`` before alignment.
        c_pair: per ``(plus, minus)`` cluster pair, the matrix ``phi_minus^H inv(eta) phi_plus`` before alignment.
        cluster_pairs: the ``(plus, minus)`` cluster index pairs.
        rescale_factors: per basis vector, the factor applied to the right eigenvector.
        signs: per basis vector, the sign left on the diagonal of the real c-matrices (+1 for paired vectors).
        residual: largest deviation of the transformed c-matrices from their target (signs or identity).
        pattern: expected eta-Gram matrix of the aligned right eigenvectors.
    """

    def __init__(self, c_real, c_pair, cluster_pairs, rescale_factors, signs, residual, pattern):
        self.c_real = c_real
        self.c_pair = c_pair
        self.cluster_pairs = cluster_pairs
        self.rescale_factors = rescale_factors
        self.signs = signs
        self.residual = residual
        self.pattern = pattern

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(real_blocks={len(self.c_real)}, pair_blocks={len(self.c_pair)}, " + \
               f"negative_signs={int(np.sum(self.signs < 0))}, residual={self.residual:.3e})"


def _pair_clusters(system, spectrum_class):
    cluster_pairs = {}  # type: Dict[int, int]
    for plus, minus in spectrum_class.pairs:
        plus_cluster, minus_cluster = int(system.cluster_of[plus]), int(system.cluster_of[minus])
        if cluster_pairs.setdefault(plus_cluster, minus_cluster) != minus_cluster:
            raise AssertionError("a degenerate eigenvalue cluster is paired with more than one conjugate cluster")
    return sorted(cluster_pairs.items())


def align_gauge(system, eta, spectrum_class=None, pair_tol=DEFAULT_PAIR_TOL, tol=DEFAULT_TOL):
    # type: (BiSystem, phermit.typedefs.OpOrMetricType, Optional[SpectrumClass], float, float) -> Tuple[BiSystem, GaugeAlignment]  # noqa: E501
    """Rotates and rescales a biorthonormal system so that it is eta-orthonormal up to signs.

    For each real cluster, the Hermitian matrix ``c = phi^H inv(eta) phi`` is diagonalized by a unitary
    block transformation and the basis vectors are rescaled so that its diagonal entries have unit
    modulus; the remaining signs cannot be removed by rescaling and are recorded. For each conjugate
    cluster pair, the cross block ``c = phi_minus^H inv(eta) phi_plus`` is brought to the identity using
    its singular value decomposition. Afterwards, the eta-Gram matrix of the right eigenvectors is the
    signature on the real block, the anti-diagonal pairing on conjugate blocks, and zero elsewhere.

    Args:
        system: the biorthonormal system of an eta-pseudo-Hermitian operator.
        eta: the metric.
        spectrum_class: classification of the system (computed when omitted).
        pair_tol: pairing tolerance used when the classification is computed here.
        tol: relative threshold below which a c-block is considered singular.

    Raises:
        NotPseudoHermitianError: if the spectrum has unpaired complex eigenvalues.
        AssertionError: if a c-block is singular, i.e. eta does not pair the eigenspaces.
    """
    eta = as_metric(eta)
    if eta.dim != system.dim:
        raise AssertionError(f"dimension mismatch (system={system.dim}, metric={eta.dim})")
    spectrum_class = spectrum_class or classify_spectrum(system, pair_tol)
    if not spectrum_class.is_pseudo_hermitian:
        raise NotPseudoHermitianError(spectrum_class)
    right, left = system.right_vectors.copy(), system.left_vectors.copy()
    rescale_factors, signs = np.ones(system.dim), np.ones(system.dim)
    real_set = set(spectrum_class.real_indices)
    c_real, c_pair = {}, {}
    for cluster_idx, members in enumerate(system.clusters):
        member_is_real = [idx in real_set for idx in members]
        if not any(member_is_real):
            continue
        if not all(member_is_real):
            raise AssertionError(f"cluster {cluster_idx} mixes real and non-real eigenvalues")
        phi = left[:, members]
        block = phi.conj().T @ eta.inverse @ phi
        block = 0.5 * (block + block.conj().T)
        c_real[cluster_idx] = block
        values, rotation = scipy.linalg.eigh(block)
        if np.min(np.abs(values)) <= tol * np.max(np.abs(values)):
            raise AssertionError(f"singular c-block for real cluster {cluster_idx}; metric does not match the system")
        scale = np.sqrt(np.abs(values))
        right[:, members] = (system.right_vectors[:, members] @ rotation) * scale[None, :]
        left[:, members] = (phi @ rotation) / scale[None, :]
        rescale_factors[members] = scale
        signs[members] = np.sign(values)
    cluster_pairs = _pair_clusters(system, spectrum_class)
    for plus_cluster, minus_cluster in cluster_pairs:
        plus, minus = system.clusters[plus_cluster], system.clusters[minus_cluster]
        if len(plus) != len(minus):
            raise AssertionError(f"conjugate clusters {plus_cluster}/{minus_cluster} have different multiplicities")
        block = left[:, minus].conj().T @ eta.inverse @ left[:, plus]
        c_pair[(plus_cluster, minus_cluster)] = block
        u, sv, vh = scipy.linalg.svd(block)
        if np.min(sv) <= tol * np.max(sv):
            raise AssertionError(f"singular c-block for conjugate clusters {plus_cluster}/{minus_cluster}")
        scale = np.sqrt(sv)
        v = vh.conj().T
        right[:, plus] = (system.right_vectors[:, plus] @ v) * scale[None, :]
        left[:, plus] = (system.left_vectors[:, plus] @ v) / scale[None, :]
        right[:, minus] = (system.right_vectors[:, minus] @ u) * scale[None, :]
        left[:, minus] = (system.left_vectors[:, minus] @ u) / scale[None, :]
        rescale_factors[plus] = scale
        rescale_factors[minus] = scale
    aligned = BiSystem(system.eigenvalues, right, left, system.cluster_tol, hamiltonian=system.hamiltonian)
    residual = 0.0
    for cluster_idx in c_real:
        members = system.clusters[cluster_idx]
        block = left[:, members].conj().T @ eta.inverse @ left[:, members]
        residual = max(residual, float(np.max(np.abs(block - np.diag(signs[members])))))
    for plus_cluster, minus_cluster in cluster_pairs:
        plus, minus = system.clusters[plus_cluster], system.clusters[minus_cluster]
        block = left[:, minus].conj().T @ eta.inverse @ left[:, plus]
        residual = max(residual, float(np.max(np.abs(block - np.eye(len(plus))))))
    pattern = expected_gram_pattern(system, spectrum_class, signs)
    gauge = GaugeAlignment(c_real, c_pair, cluster_pairs, rescale_factors, signs, residual, pattern)
    logger.debug("aligned gauge: %s" % repr(gauge))
    return aligned, gauge


def expected_gram_pattern(system, spectrum_class, signs=None):
    # type: (BiSystem, SpectrumClass, Optional[np.ndarray]) -> phermit.typedefs.OpType
    """Returns the eta-Gram matrix expected from a gauge-aligned system.

    Real eigenvectors contribute their sign on the diagonal; the ``a``-th member of a plus cluster is
    paired with the ``a``-th member of its conjugate minus cluster through unit anti-diagonal entries.
    Every other entry vanishes.
    """
    signs = np.ones(system.dim) if signs is None else np.asarray(signs, dtype=np.float64)
    pattern = np.zeros((system.dim, system.dim), dtype=np.complex128)
    for idx in spectrum_class.real_indices:
        pattern[idx, idx] = signs[idx]
    for plus_cluster, minus_cluster in _pair_clusters(system, spectrum_class):
        plus, minus = system.clusters[plus_cluster], system.clusters[minus_cluster]
        pattern[minus, plus] = 1.0
        pattern[plus, minus] = 1.0
    return pattern


def eta_gram(system, eta):
    # type: (BiSystem, phermit.typedefs.OpOrMetricType) -> phermit.typedefs.OpType
    """Returns the eta-Gram matrix ``<<psi_i|psi_j>>`` of the right eigenvectors of a system."""
    eta = as_metric(eta)
    return system.right_vectors.conj().T @ eta.op @ system.right_vectors


def _partner_permutation(system, spectrum_class):
    if not spectrum_class.is_pseudo_hermitian:
        raise NotPseudoHermitianError(spectrum_class)
    if spectrum_class.eigenvalues.size != system.dim:
        raise AssertionError("spectrum classification does not match the system")
    partners = np.arange(system.dim)
    for plus, minus in spectrum_class.pairs:
        partners[plus], partners[minus] = minus, plus
    return partners


def construct_eta_inverse(system, spectrum_class):
    # type: (BiSystem, SpectrumClass) -> phermit.typedefs.OpType
    """Assembles the inverse of the metric of :func:`construct_eta` from the right eigenvectors."""
    partners = _partner_permutation(system, spectrum_class)
    psi = system.right_vectors
    inverse = psi[:, partners] @ psi.conj().T
    return 0.5 * (inverse + inverse.conj().T)


def construct_eta(system, spectrum_class, tol=DEFAULT_TOL):
    # type: (BiSystem, SpectrumClass, float) -> Metric
    """Assembles a metric for which the decomposed operator is pseudo-Hermitian.

    The metric is the sum of ``|phi_n><phi_n|`` over real eigenvalues, plus
    ``|phi_minus><phi_plus| + |phi_plus><phi_minus|`` over conjugate pairs (unit weights), symmetrized to
    remove roundoff. Its inverse is assembled the same way from the right eigenvectors.

    Raises:
        NotPseudoHermitianError: if the spectrum has unpaired complex eigenvalues.
    """
    partners = _partner_permutation(system, spectrum_class)
    phi = system.left_vectors
    eta = phi[:, partners] @ phi.conj().T
    eta = 0.5 * (eta + eta.conj().T)
    metric = Metric(eta, tol=tol, inverse=construct_eta_inverse(system, spectrum_class))
    if system.hamiltonian is not None:
        logger.debug("constructed metric residual: %.3e" % pseudo_hermiticity_residual(system.hamiltonian, metric))
    return metric


def synthesize_hamiltonian(spectrum, basis, pair_tol=DEFAULT_PAIR_TOL, check_pairing=True, cond_max=DEFAULT_COND_MAX):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType, float, bool, float) -> phermit.typedefs.OpType
    """Assembles ``H = sum_n E_n |psi_n><phi_n|`` from a prescribed spectrum and right eigenbasis.

    Args:
        spectrum: the eigenvalues, one per basis column.
        basis: invertible matrix whose columns are the right eigenvectors.
        pair_tol: tolerance used to validate the conjugate pairing of the spectrum.
        check_pairing: whether to reject spectra with unpaired complex eigenvalues.
        cond_max: basis condition number above which the basis is considered singular.
    """
    basis = check_op(basis, "basis")
    spectrum = np.asarray(spectrum, dtype=np.complex128).reshape(-1)
    if spectrum.size != basis.shape[0]:
        raise AssertionError(f"spectrum size {spectrum.size} does not match basis dimension {basis.shape[0]}")
    condition_number = np.linalg.cond(basis)
    if not np.isfinite(condition_number) or condition_number > cond_max:
        raise AssertionError(f"basis is not invertible (condition number {condition_number:.3e})")
    if check_pairing:
        spectrum_class = classify_eigenvalues(spectrum, pair_tol)
        if not spectrum_class.is_pseudo_hermitian:
            raise NotPseudoHermitianError(spectrum_class)
    return (basis * spectrum[None, :]) @ scipy.linalg.inv(basis)


def _check_parity(parity, dim, tol):
    parity = check_op(parity, "parity")
    if parity.shape[0] != dim:
        raise AssertionError(f"dimension mismatch (parity={parity.shape[0]}, operator={dim})")
    defect = np.linalg.norm(parity @ parity - np.eye(dim))
    if defect > tol * np.sqrt(dim):
        raise AssertionError(f"parity operator is not an involution (defect={defect:.3e})")
    return parity


def is_pt_symmetric(hamiltonian, parity, tol=DEFAULT_TOL):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType, float) -> float
    """Returns the PT-symmetry residual ``||P conj(H) P - H|| / ||H||``.

    Time reversal acts as entrywise complex conjugation in the represented (position) basis.

    Raises:
        AssertionError: if the parity operator is not an involution.
    """
    hamiltonian = check_op(hamiltonian, "hamiltonian")
    parity = _check_parity(parity, hamiltonian.shape[0], tol)
    norm = np.linalg.norm(hamiltonian)
    diff = np.linalg.norm(parity @ hamiltonian.conj() @ parity - hamiltonian)
    return float(diff / norm) if norm > 0 else float(diff)


def pt_exactness(hamiltonian, parity, system=None, tol=1e-8):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType, Optional[BiSystem], float) -> Dict[str, np.ndarray]
    """Measures how far each eigenvector is from being invariant (up to a phase) under PT.

    An eigenvector that is PT-invariant up to a phase must have a real eigenvalue (exact PT symmetry).
    The defect of a unit eigenvector ``psi`` is ``||PT psi - exp(i theta) psi||`` for the best phase, the distance between
    ``PT psi`` and the closest phase multiple of ``psi``. The measure is only meaningful for
    non-degenerate eigenvalues, since a degenerate eigenspace may be invariant as a whole.

    Returns:
        A dictionary with the eigenvalues, the per-eigenvector ``defects``, the boolean ``exact`` mask
        (defect within ``tol``), and ``max_imag_exact``, the largest ``|Im E|`` over exact modes.
    """
    hamiltonian = check_op(hamiltonian, "hamiltonian")
    parity = _check_parity(parity, hamiltonian.shape[0], DEFAULT_TOL)
    system = system or eig_biorthonormal(hamiltonian)
    psi = system.right_vectors / np.linalg.norm(system.right_vectors, axis=0)[None, :]
    pt_psi = parity @ psi.conj()
    overlaps = np.sum(psi.conj() * pt_psi, axis=0)
    phases = np.ones_like(overlaps)
    nonzero = np.abs(overlaps) > 0
    phases[nonzero] = overlaps[nonzero] / np.abs(overlaps[nonzero])
    defects = np.linalg.norm(pt_psi - psi * phases[None, :], axis=0)
    exact = defects <= tol
    max_imag = float(np.max(np.abs(system.eigenvalues.imag[exact]))) if np.any(exact) else 0.0
    return {"eigenvalues": system.eigenvalues, "defects": defects, "exact": exact, "max_imag_exact": max_imag}


class Certificate:
    """Outcome of the decomposition, classification and metric construction pipeline.

    Attributes:
        system: the biorthonormal eigensystem.
        spectrum_class: its classification.
        eta: the constructed metric.
        residual: pseudo-Hermiticity residual of the source operator w.r.t. the constructed metric.
    """

    def __init__(self, system, spectrum_class, eta, residual):
        self.system = system
        self.spectrum_class = spectrum_class
        self.eta = eta
        self.residual = residual

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(classification={repr(self.spectrum_class.classification)}, residual={self.residual:.3e})"


def certify(hamiltonian, pair_tol=DEFAULT_PAIR_TOL, cluster_tol=None, cond_max=DEFAULT_COND_MAX, tol=DEFAULT_TOL):
    # type: (phermit.typedefs.ArrayType, float, Optional[float], float, float) -> Certificate
    """Decomposes, classifies and, when possible, builds a metric certifying pseudo-Hermiticity.

    Raises:
        DefectiveMatrixError: if the operator lacks a complete biorthonormal eigensystem.
        NotPseudoHermitianError: if its spectrum has unpaired complex eigenvalues.
    """
    system = eig_biorthonormal(hamiltonian, cluster_tol=cluster_tol, cond_max=cond_max)
    spectrum_class = classify_spectrum(system, pair_tol)
    logger.debug("spectrum classification: %s" % repr(spectrum_class))
    if not spectrum_class.is_pseudo_hermitian:
        raise NotPseudoHermitianError(spectrum_class)
    eta = construct_eta(system, spectrum_class, tol=tol)
    residual = pseudo_hermiticity_residual(system.hamiltonian, eta)
    if residual > tol:
        logger.warning("constructed metric residual %.3e exceeds tolerance %.1e" % (residual, tol))
    return Certificate(system, spectrum_class, eta, residual)
