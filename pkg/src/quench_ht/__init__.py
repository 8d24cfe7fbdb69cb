"""Quench-protocol Hamiltonian tomography with random measurement noise."""

__version__ = "0.1.0"

from .experiment import ExperimentConfig, SweepKind, SweepResult, run_sweep, run_trial
from .model import HamiltonianModel, ModelId, build_basis, random_model
from .noise import JitterMode, NoiseConfig
from .protocol import QuenchTrial, build_p_matrix, estimate, fidelity
from .rng import RandomStream

__all__ = [
    "ExperimentConfig",
    "HamiltonianModel",
    "JitterMode",
    "ModelId",
    "NoiseConfig",
    "QuenchTrial",
    "RandomStream",
    "SweepKind",
    "SweepResult",
    "build_basis",
    "build_p_matrix",
    "estimate",
    "fidelity",
    "random_model",
    "run_sweep",
    "run_trial",
]
