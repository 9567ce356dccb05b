"""Pseudo-Hermitian linear algebra package.

This package contains the finite-dimensional algebra of pseudo-adjoints and indefinite metrics, and the
biorthonormal eigendecomposition machinery used to classify spectra and construct explicit metrics.
"""

import logging

import phermit.algebra.biorthogonal  # noqa: F401
import phermit.algebra.operators  # noqa: F401
from phermit.algebra.biorthogonal import BiSystem  # noqa: F401
from phermit.algebra.biorthogonal import Certificate  # noqa: F401
from phermit.algebra.biorthogonal import DefectiveMatrixError  # noqa: F401
from phermit.algebra.biorthogonal import GaugeAlignment  # noqa: F401
from phermit.algebra.biorthogonal import NotPseudoHermitianError  # noqa: F401
from phermit.algebra.biorthogonal import SpectrumClass  # noqa: F401
from phermit.algebra.biorthogonal import align_gauge  # noqa: F401
from phermit.algebra.biorthogonal import certify  # noqa: F401
from phermit.algebra.biorthogonal import classify_eigenvalues  # noqa: F401
from phermit.algebra.biorthogonal import classify_spectrum  # noqa: F401
from phermit.algebra.biorthogonal import construct_eta  # noqa: F401
from phermit.algebra.biorthogonal import construct_eta_inverse  # noqa: F401
from phermit.algebra.biorthogonal import eig_biorthonormal  # noqa: F401
from phermit.algebra.biorthogonal import eta_gram  # noqa: F401
from phermit.algebra.biorthogonal import expected_gram_pattern  # noqa: F401
from phermit.algebra.biorthogonal import is_pt_symmetric  # noqa: F401
from phermit.algebra.biorthogonal import pt_exactness  # noqa: F401
from phermit.algebra.biorthogonal import synthesize_hamiltonian  # noqa: F401
from phermit.algebra.operators import Metric  # noqa: F401
from phermit.algebra.operators import as_metric  # noqa: F401
from phermit.algebra.operators import indefinite_inner  # noqa: F401
from phermit.algebra.operators import pseudo_adjoint  # noqa: F401
from phermit.algebra.operators import pseudo_hermiticity_residual  # noqa: F401
from phermit.algebra.operators import random_pseudo_hermitian  # noqa: F401

logger = logging.getLogger("phermit.algebra")
