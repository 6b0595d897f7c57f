"""Square functions, semigroups and their L^p ratios for discrete
``L = -Lap + V`` (``V >= 0``) on Dirichlet boxes."""

__version__ = "0.1.0"

from .errors import LpsLabError
from .grid import (Grid, dirac_delta, discrete_laplacian, inner, lp_norm,
                   make_grid, nodal_gradient_product)
from .spectral import (SchrodingerOperator, SpectralDecomposition,
                       apply_spectral_function, assemble, decompose,
                       eigendecompose, poisson_via_subordination)
from .square import (ALL_KINDS, SquareFunctionKind, square_function,
                     square_function_quadrature)
from .experiments import (PotentialSpec, SearchConfig, domain_sweep,
                          estimate_sup_ratio, make_potential, ratio,
                          refinement_sweep, scaling_sweep)
