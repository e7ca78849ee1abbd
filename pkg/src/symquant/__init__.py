"""Sum and product rules for measures, probabilities and complex amplitudes."""
from ._backend import BACKEND
from .born import (born, mean_rate_closed, mean_rate_mc, poisson_stream, sample_prior,
                   solve_alpha)
from .errors import SymquantError
from .hilbert import (AmplitudeVector, Selection, composite_amplitude, normalize_single_object,
                      project, rotate, sample_object)
from .measure import Measure, combine, commensurable, shear
from .network import NetworkSpec, compare_modes, mach_zehnder, simulate
from .pairs import BilinearProduct, Kind, Pair, classify, pair_sum, polar, product
from .tree import PartitionTree, TreePath, bayes, chain

__version__ = "0.1.0"
