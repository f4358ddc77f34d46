"""Numerical laboratory for the defocusing radial quadratic NLS in three dimensions."""
from .radial_spectral import RadialGrid, RadialField, sample_function, relative_l2_error
from .transforms import free_propagate, kernel_propagate, pseudo_conformal, conj_fourier_final_data
from .solver import SolverConfig, evolve, picard_lwp, energy_increment_check
from .norms import EnergyTrace, SpaceTimeTrace, criticality, modified_energy
from .lp_decomp import split_high_low, project_dyadic
from .pipeline import run_high_low_pipeline, PipelineReport
from .corpus import corpus, gaussian

__version__ = "0.1.0"

__all__ = [
    "RadialGrid", "RadialField", "sample_function", "relative_l2_error",
    "free_propagate", "kernel_propagate", "pseudo_conformal", "conj_fourier_final_data",
    "SolverConfig", "evolve", "picard_lwp", "energy_increment_check",
    "EnergyTrace", "SpaceTimeTrace", "criticality", "modified_energy",
    "split_high_low", "project_dyadic", "run_high_low_pipeline", "PipelineReport",
    "corpus", "gaussian",
]
