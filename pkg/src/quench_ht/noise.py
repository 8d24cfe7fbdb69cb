"""Noise channels: random local unitary miscalibration and timing jitter."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import is_hermitian, is_unitary, kron
from .rng import RandomStream

# clamp target for non-positive jitter draws, as a fraction of T
JITTER_FLOOR = 1e-6


class JitterMode(str, enum.Enum):
    PER_ENTRY = "entry"
    PER_PAIR = "pair"


@dataclass(frozen=True)
class NoiseConfig:
    sigma: float = 0.0
    quench_time: float = 1.0
    delta_tau: float = 0.0
    jitter_mode: JitterMode = JitterMode.PER_ENTRY

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not self.delta_tau >= 0:
            raise ValueError(f"delta_tau must be >= 0, got {self.delta_tau}")
        if not self.quench_time > 0:
            raise ValueError(f"quench_time must be > 0, got {self.quench_time}")
        object.__setattr__(self, "jitter_mode", JitterMode(self.jitter_mode))


def euler_unitary(w1: float, w2: float, w3: float) -> np.ndarray:
    """ZYZ Euler rotation Rz(w1) Ry(w2) Rz(w3), written out entrywise."""
    c, s = np.cos(w2 / 2), np.sin(w2 / 2)
    return np.array(
        [
            [np.exp(-0.5j * (w1 + w3)) * c, -np.exp(0.5j * (w3 - w1)) * s],
            [np.exp(-0.5j * (w3 - w1)) * s, np.exp(0.5j * (w1 + w3)) * c],
        ]
    )


def random_unitary_2(sigma: float, rng: RandomStream) -> np.ndarray:
    """Single-qubit unitary with Euler angles drawn i.i.d. from N(0, sigma)."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    w1, w2, w3 = rng.normal(0.0, sigma, size=3)
    return euler_unitary(w1, w2, w3)


def perturbation_matrix(n_qubits: int, sigma: float, rng: RandomStream) -> np.ndarray:
    """Tensor product of ``n_qubits`` independent local random unitaries.

    Local factors are drawn in qubit order from ``rng``.
    """
    if n_qubits not in (1, 2, 3):
        raise ValueError(f"n_qubits must be 1, 2 or 3, got {n_qubits}")
    return kron(*[random_unitary_2(sigma, rng) for _ in range(n_qubits)])


def distort(m: np.ndarray, q: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    q = np.asarray(q, dtype=complex)
    if m.shape != q.shape:
        raise ValueError(f"dimension mismatch: operator {m.shape} vs unitary {q.shape}")
    if not is_hermitian(m):
        raise ValueError("measurement operator is not Hermitian")
    if not is_unitary(q):
        raise ValueError("perturbation matrix is not unitary")
    out = q @ m @ q.conj().T
    return 0.5 * (out + out.conj().T)


def jitter_time(cfg: NoiseConfig, rng: RandomStream) -> float:
    """One observation time drawn from N(T, delta_tau), clamped to stay positive."""
    if cfg.delta_tau == 0:
        return cfg.quench_time
    t = float(rng.normal(cfg.quench_time, cfg.delta_tau))
    return t if t > 0 else JITTER_FLOOR * cfg.quench_time
