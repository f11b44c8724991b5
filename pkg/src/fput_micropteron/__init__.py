"""Traveling waves of the diatomic FPUT lattice near the monatomic limit.

Numerical construction of micropterons: a monatomic solitary core, an
exponentially small periodic ripple, and a localized corrector, plus direct
lattice simulation to check them.
"""

from .dispersion import WaveParameters, critical_frequency, critical_frequency_mu, eigencurves
from .jost import JostSolution, neumann_jost
from .lattice_sim import LatticeState, TravelingProfile, init_from_profiles, run_and_compare
from .micropteron import MicropteronSolution, assemble_profiles, beale_iterate
from .periodic import PeriodicWave, solve_periodic
from .solitary import SolitaryWave, solve_monatomic
from .spectral_ops import Grid, GridFunction, ProfilePair

__all__ = [
    "Grid", "GridFunction", "JostSolution", "LatticeState", "MicropteronSolution", "PeriodicWave",
    "ProfilePair", "SolitaryWave", "TravelingProfile", "WaveParameters", "assemble_profiles",
    "beale_iterate", "critical_frequency", "critical_frequency_mu", "eigencurves", "init_from_profiles",
    "neumann_jost", "run_and_compare", "solve_monatomic", "solve_periodic",
]
__version__ = "0.1.0"
