"""Følner averaging of group-homology cycles over amenable normal subgroups.

Exact-rational chains in the coinvariants of the simplicial resolution,
averaging maps over finite subsets of a normal subgroup, the push-forward
estimate with explicit constants, an LP-based l1-seminorm oracle and the
efficient-cycle recipe built from them.
"""

from .averaging import (AveragingReport, FolnerSequence, average, average_report,
                        averaged_norm, boundary_ratio, s_boundary, transfer_finite)
from .chains import (Chain, Cocycle, boundary, canonicalize, chain_from_json, chain_to_json,
                     cocycle_catalogue, l1_norm, pair, pushforward, section_lift, torus_form)
from .errors import (CycleError, DescriptorMismatch, FillingMismatch, InconsistentGroups,
                     Infeasible, MalformedInput, NonzeroPushforward, NotACycle, NotInSubgroup,
                     ValidationError)
from .estimate import (EstimateCertificate, SigmaDecomposition, certify, epsilon_split,
                       estimate_bound, sigma_decompose, split_and_decompose)
from .groups import (AmenableExtension, DirectProduct, FiniteCyclic, FreeAbelian,
                     GroupDescriptor, GroupElement, Heisenberg3, compose, embed, enumerate_ball,
                     identity, inverse, parse_extension, parse_group, project, section)
from .pipeline import (ConvergenceRow, RecipeInput, convergence_experiment, efficient_cycle,
                       load_config)
from .seminorm import SeminormBound, Truncation, fill_boundary, seminorm_upper_bound
from .twisted import (CoinvariantModule, NormedModule, coinvariant_seminorm, twisted_average,
                      twisted_chain, twisted_pushforward)

__version__ = "0.1.0"
