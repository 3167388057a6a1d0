"""
GKM workbench - fixed-point lattices, generalized holes and root multiplicities.

This package builds the Leech lattice from the Golay code, derives the
fixed-point lattices of its prime-order automorphisms, checks the eta-quotient
theta identities, enumerates the generalized holes of the real simple roots
and evaluates root multiplicities of the fixed-point algebras and their
hyperbolic subalgebras.
"""

__version__ = "1.0.0"

# Import key components for easier access
from .logging_utils import configure_logger, get_logger
from .error_handling import WorkbenchError, VerificationError, safe_operation
from .qseries import QSeries, colored_partitions, global_bound, p_sigma, theta_rhs
from .lattice import GramLattice, fixed_lattice, short_vectors, verify_theta_identity
from .holes import Hole, enumerate_holes, volume_audit
from .multiplicity import LorentzRoot, PetersonEngine, gkm_mult, mult_table
from .workbench_controller import WorkbenchController, run_workbench
