"""Top-level package for the 'phermit' toolkit.

Running ``import phermit`` will recursively import all important subpackages and modules.
"""

import logging

import phermit.algebra  # noqa: F401
import phermit.cli  # noqa: F401
import phermit.evolution  # noqa: F401
import phermit.ifaces  # noqa: F401
import phermit.models  # noqa: F401
import phermit.reports  # noqa: F401
import phermit.typedefs  # noqa: F401
import phermit.utils  # noqa: F401

logger = logging.getLogger("phermit")

__version__ = "0.1.0"
