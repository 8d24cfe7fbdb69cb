"""Quench-protocol core: states, P matrix, least-squares estimate, fidelity.

For each pair i the initial state psi_i and its evolution psi_i(T) under the
unknown Hamiltonian satisfy <H>_0 = <H>_T, which makes the true coefficient
vector a null vector of

    P[i, j] = <psi_i|M_j|psi_i> - <psi_i(T_ij)|M_j|psi_i(T_ij)>.

Noise enters through distorted operators Q_j M_j Q_j^H (one Q_j per operator,
shared by all pairs) and through jittered observation times T_ij.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import evolve_eig, expectation, hermitian_eig, min_right_singular_vector
from .model import HamiltonianModel
from .noise import JitterMode, NoiseConfig, distort, jitter_time, perturbation_matrix
from .rng import RandomStream


class ZeroVector(ValueError):
    pass


def sample_initial_state(dim: int, rng: RandomStream) -> np.ndarray:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    if dim not in (2, 4, 8):
        raise ValueError(f"dim must be 2, 4 or 8, got {dim}")
    re = rng.normal(size=dim)
    im = rng.normal(size=dim)
    psi = re + 1j * im
    return psi / np.linalg.norm(psi)


def sample_states(dim: int, r: int, rng: RandomStream) -> list[np.ndarray]:
    # one child per pair so the first k states do not depend on r
    return [sample_initial_state(dim, rng.child("state", i)) for i in range(r)]


@dataclass
class QuenchTrial:
    model: HamiltonianModel
    states: list[np.ndarray]
    noise: NoiseConfig = field(default_factory=NoiseConfig)

    def __post_init__(self):
        if len(self.states) < 2:
            raise ValueError("at least two pairs are required")
        if len(self.states) < self.model.eta - 1:
            raise ValueError(f"need r >= eta - 1 = {self.model.eta - 1} pairs, got {len(self.states)}")
        for psi in self.states:
            if psi.shape != (self.model.dim,):
                raise ValueError(f"state shape {psi.shape} does not match dimension {self.model.dim}")
            if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
                raise ValueError("initial states must have unit norm")

    @property
    def r(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class EstimationResult:
    alpha_hat: np.ndarray
    s_min: float
    degenerate: bool
    fidelity: float | None = None

    @property
    def lagrange_multiplier(self) -> float:
        return self.s_min**2


def measurement_operators(trial: QuenchTrial, rng: RandomStream) -> list[np.ndarray]:
    """Distorted operators, one fresh perturbation per basis operator."""
    sigma = trial.noise.sigma
    n_qubits = int(np.log2(trial.model.dim))
    if sigma == 0:
        return [np.asarray(m, dtype=complex) for m in trial.model.basis]
    return [
        distort(m, perturbation_matrix(n_qubits, sigma, rng.child("perturbation", j)))
        for j, m in enumerate(trial.model.basis)
    ]


def observation_times(trial: QuenchTrial, rng: RandomStream) -> np.ndarray:
    """r x eta matrix of evolution times, per entry or shared along each row."""
    cfg = trial.noise
    eta = trial.model.eta
    times = np.empty((trial.r, eta))
    for i in range(trial.r):
        row_rng = rng.child("jitter", i)
        if cfg.jitter_mode is JitterMode.PER_PAIR:
            times[i, :] = jitter_time(cfg, row_rng)
        else:
            times[i, :] = [jitter_time(cfg, row_rng) for _ in range(eta)]
    return times


def build_p_matrix(trial: QuenchTrial, rng: RandomStream) -> np.ndarray:
    ops = measurement_operators(trial, rng)
    times = observation_times(trial, rng)
    eigvals, eigvecs = hermitian_eig(trial.model.hamiltonian())

    p = np.empty((trial.r, trial.model.eta))
    for i, psi in enumerate(trial.states):
        evolved = {}
        for j, m in enumerate(ops):
            t = times[i, j]
            if t not in evolved:
                evolved[t] = evolve_eig(eigvals, eigvecs, t, psi)
            p[i, j] = expectation(m, psi, check=False) - expectation(m, evolved[t], check=False)
    return p


def estimate(p: np.ndarray) -> EstimationResult:
    """Constrained least squares: minimize |P a|^2 subject to |a| = 1."""
    sv = min_right_singular_vector(p)
    return EstimationResult(alpha_hat=sv.vector, s_min=sv.s_min, degenerate=sv.degenerate)


def fidelity(alpha, alpha_hat) -> float:
    """|cos| of the angle between two coefficient vectors."""
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(alpha_hat, dtype=float)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < 1e-300 or nb < 1e-300:
        raise ZeroVector("fidelity is undefined for a zero vector")
    return float(min(1.0, abs(a @ b) / (na * nb)))


def run_quench(trial: QuenchTrial, rng: RandomStream) -> EstimationResult:
    """Build the noisy P matrix for ``trial``, estimate, and score against the truth."""
    result = estimate(build_p_matrix(trial, rng))
    return EstimationResult(
        alpha_hat=result.alpha_hat,
        s_min=result.s_min,
        degenerate=result.degenerate,
        fidelity=fidelity(trial.model.alpha, result.alpha_hat),
    )
