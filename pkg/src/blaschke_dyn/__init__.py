"""Finite Blaschke products: elliptic descents, factorisation and exact dynamics."""

from ._config import USE_NUMBA
from .blaschke import (DiskAutomorphism, FiniteBlaschkeProduct, associated, compose,
                       critical_data, equals_fbp, iota, iterate, make_fbp, power_map,
                       totally_ramified_normal_form)
from .cheby import ChebyBlaschke, chebyshev_representation, cheby_blaschke, nested
from .dynamics import (ExactBlaschke, ExactComposite, canonical_height_estimate,
                       degree_growth_experiment, orbit, orbit_intersection)
from .ellrat import ell_rat_critical_values, ell_rat_eval, ell_rat_fit, equivalence_check
from .errors import ConstructionError, DomainError, GrowthCapError, NumericalError
from .factorization import (bilu_tichy_pair, common_iteration, decompose_recognized,
                            ritt_move_cheby, ritt_move_power, zieve_muller_bound)
from .gaussian import GaussianRational, naive_height
from .monodromy import block_systems, factor_degree_lattice, numerical_monodromy

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA", "DiskAutomorphism", "FiniteBlaschkeProduct", "associated", "compose",
    "critical_data", "equals_fbp", "iota", "iterate", "make_fbp", "power_map",
    "totally_ramified_normal_form", "ChebyBlaschke", "chebyshev_representation",
    "cheby_blaschke", "nested", "ExactBlaschke", "ExactComposite",
    "canonical_height_estimate", "degree_growth_experiment", "orbit", "orbit_intersection",
    "ell_rat_critical_values", "ell_rat_eval", "ell_rat_fit", "equivalence_check",
    "ConstructionError", "DomainError", "GrowthCapError", "NumericalError",
    "bilu_tichy_pair", "common_iteration", "decompose_recognized", "ritt_move_cheby",
    "ritt_move_power", "zieve_muller_bound", "GaussianRational", "naive_height",
    "block_systems", "factor_degree_lattice", "numerical_monodromy",
]
