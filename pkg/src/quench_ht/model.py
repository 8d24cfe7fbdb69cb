"""Hamiltonian families H = sum_j alpha_j M_j used in the tomography study."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .linalg import is_hermitian, kron
from .rng import RandomStream

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
# standard convention; the opposite sign spans the same real space
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


class ModelId(str, enum.Enum):
    SIC = "sic"
    POLARIZATION = "polarization"
    PAULI = "pauli"
    TFIM2 = "tfim2"
    RF3 = "rf3"

    @property
    def n_qubits(self) -> int:
        return {ModelId.TFIM2: 2, ModelId.RF3: 3}.get(self, 1)

    @property
    def eta(self) -> int:
        return 6 if self is ModelId.RF3 else 3

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @classmethod
    def parse(cls, name: str) -> ModelId:
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown model {name!r}; valid ids: {valid}") from None


def _projector(ket) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def sic_states() -> list[np.ndarray]:
    a, b = 1 / np.sqrt(3), np.sqrt(2 / 3)
    return [np.array([a, b * np.exp(2j * np.pi * k / 3)]) for k in range(3)]


def polarization_states() -> list[np.ndarray]:
    s = 1 / np.sqrt(2)
    return [np.array([1, 0]), np.array([s, s]), np.array([s, 1j * s])]


def build_basis(model_id: ModelId | str) -> list[np.ndarray]:
    """Operator basis of a model, in the fixed coefficient order.

    RF3 order is three transverse X terms followed by the ZZ couplings on
    pairs (1,2), (2,3), (1,3).
    """
    model_id = ModelId(model_id)
    if model_id is ModelId.SIC:
        return [_projector(k) for k in sic_states()]
    if model_id is ModelId.POLARIZATION:
        return [_projector(k) for k in polarization_states()]
    if model_id is ModelId.PAULI:
        return [SX.copy(), SY.copy(), SZ.copy()]
    if model_id is ModelId.TFIM2:
        return [kron(SX, I2), kron(I2, SX), kron(SZ, SZ)]
    if model_id is ModelId.RF3:
        return [
            kron(SX, I2, I2),
            kron(I2, SX, I2),
            kron(I2, I2, SX),
            kron(SZ, SZ, I2),
            kron(I2, SZ, SZ),
            kron(SZ, I2, SZ),
        ]
    raise AssertionError(model_id)


def gram_matrix(basis: list[np.ndarray]) -> np.ndarray:
    """Hilbert-Schmidt Gram matrix Re tr(M_i^H M_j)."""
    return np.array([[np.vdot(a, b).real for b in basis] for a in basis])


@dataclass(frozen=True)
class HamiltonianModel:
    model_id: ModelId
    alpha: np.ndarray
    basis: list[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        model_id = ModelId(self.model_id)
        object.__setattr__(self, "model_id", model_id)
        if self.basis is None:
            object.__setattr__(self, "basis", build_basis(model_id))
        alpha = np.asarray(self.alpha, dtype=float)
        if alpha.shape != (len(self.basis),):
            raise ValueError(f"alpha must have length {len(self.basis)}, got shape {alpha.shape}")
        if abs(np.linalg.norm(alpha) - 1.0) > 1e-12:
            raise ValueError("alpha must have unit Euclidean norm")
        for m in self.basis:
            if not is_hermitian(m, 1e-12):
                raise ValueError("basis operators must be Hermitian")
        if np.linalg.eigvalsh(gram_matrix(self.basis))[0] <= 1e-6:
            raise ValueError("basis operators are not linearly independent")
        object.__setattr__(self, "alpha", alpha)

    @property
    def eta(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return self.basis[0].shape[0]

    def hamiltonian(self) -> np.ndarray:
        return assemble_hamiltonian(self)


def sample_coefficients(eta: int, rng: RandomStream) -> np.ndarray:
    """Uniform direction on the unit sphere in R^eta."""
    if eta < 2:
        raise ValueError("eta must be at least 2")
    v = rng.normal(size=eta)
    return v / np.linalg.norm(v)


def random_model(model_id: ModelId | str, rng: RandomStream) -> HamiltonianModel:
    model_id = ModelId(model_id)
    return HamiltonianModel(model_id, sample_coefficients(model_id.eta, rng))


def combine(coeffs, basis: list[np.ndarray]) -> np.ndarray:
    """sum_j coeffs[j] * basis[j] for arbitrary real coefficients."""
    h = np.zeros_like(basis[0], dtype=complex)
    for c, m in zip(coeffs, basis, strict=True):
        h += c * m
    return h


def assemble_hamiltonian(model: HamiltonianModel) -> np.ndarray:
    return combine(model.alpha, model.basis)
