"""Physical models package.

This package contains the grid discretization of one-dimensional operators and the two models built on it:
the two-component Wheeler-DeWitt (minisuperspace) model and the pseudo-supersymmetric factory of
non-Hermitian Hamiltonians with real spectra.
"""

import logging

import phermit.models.discretize  # noqa: F401
import phermit.models.psusy  # noqa: F401
import phermit.models.wdw  # noqa: F401
from phermit.models.discretize import Grid1D  # noqa: F401
from phermit.models.discretize import GridOps  # noqa: F401
from phermit.models.discretize import build_ops  # noqa: F401
from phermit.models.discretize import make_grid  # noqa: F401
from phermit.models.discretize import schrodinger_hamiltonian  # noqa: F401
from phermit.models.psusy import FirstOrderData  # noqa: F401
from phermit.models.psusy import Grading  # noqa: F401
from phermit.models.psusy import SusyPair  # noqa: F401
from phermit.models.psusy import XiPolynomial  # noqa: F401
from phermit.models.psusy import build_susy_pair  # noqa: F401
from phermit.models.psusy import first_order_D  # noqa: F401
from phermit.models.psusy import hermitian_plus_condition  # noqa: F401
from phermit.models.psusy import partner_levels  # noqa: F401
from phermit.models.psusy import spectral_map  # noqa: F401
from phermit.models.psusy import xi_family_hamiltonians  # noqa: F401
from phermit.models.wdw import TwoComponentState  # noqa: F401
from phermit.models.wdw import WdwModel  # noqa: F401
from phermit.models.wdw import wdw_d_operator  # noqa: F401
from phermit.models.wdw import wdw_hamiltonian  # noqa: F401
from phermit.models.wdw import wdw_metric  # noqa: F401
from phermit.models.wdw import wdw_reality_boundary  # noqa: F401

logger = logging.getLogger("phermit.models")
