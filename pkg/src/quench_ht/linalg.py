"""Small dense linear algebra for 1-3 qubit problems.

Matrices are plain ``numpy`` complex arrays; every dimension handled here is
at most 8, so everything is computed exactly by eigendecomposition.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

HERMITIAN_TOL = 1e-10
IMAG_TOL = 1e-10
DEGENERACY_RTOL = 1e-9


class NotHermitian(ValueError):
    pass


class ImaginaryResidue(ValueError):
    pass


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    gram = m.conj().T @ m
    return bool(np.max(np.abs(gram - np.eye(m.shape[0]))) <= tol)


def _check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise NotHermitian(f"matrix of shape {m.shape} is not Hermitian within {tol:g}")
    return m


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


def hermitian_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    m = _check_hermitian(m)
    # symmetrize so LAPACK sees an exactly Hermitian input
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def evolve_eig(eigvals: np.ndarray, eigvecs: np.ndarray, t: float, psi: np.ndarray) -> np.ndarray:
    """Apply exp(-i H t) to ``psi`` given the spectral decomposition of H."""
    coeffs = eigvecs.conj().T @ psi
    out = eigvecs @ (np.exp(-1j * eigvals * t) * coeffs)
    # exact in exact arithmetic; renormalize away round-off drift
    return out / np.linalg.norm(out)


def evolve(h: np.ndarray, t: float, psi: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = hermitian_eig(h)
    return evolve_eig(eigvals, eigvecs, t, np.asarray(psi, dtype=complex))


def expectation(m: np.ndarray, psi: np.ndarray, check: bool = True) -> float:
    """Real expectation value <psi|m|psi> of a Hermitian operator.

    With ``check=False`` the Hermiticity test is skipped, which is only safe
    for operators already validated by the caller.
    """
    if check:
        m = _check_hermitian(m)
    psi = np.asarray(psi, dtype=complex)
    value = np.vdot(psi, m @ psi)
    if abs(value.imag) > IMAG_TOL:
        raise ImaginaryResidue(f"imaginary part {value.imag:.3e} exceeds {IMAG_TOL:g}")
    return float(value.real)


@dataclass(frozen=True)
class SingularVector:
    vector: np.ndarray
    s_min: float
    degenerate: bool


def _sign_fix(v: np.ndarray) -> np.ndarray:
    for x in v:
        if abs(x) > 1e-12:
            return v if x > 0 else -v
    return v


def min_right_singular_vector(p: np.ndarray) -> SingularVector:
    """Unit vector minimizing ``||p v||``, from the eigenproblem of ``p.T @ p``.

    The vector is sign-normalized so that its first component larger than
    1e-12 in magnitude is positive.  ``degenerate`` is set when the two
    smallest singular values are closer than 1e-9 relative to the largest.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.shape[1] < 2:
        raise ValueError(f"need a 2-D matrix with at least 2 columns, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("matrix has non-finite entries")

    gram = p.T @ p
    lam, vecs = np.linalg.eigh(0.5 * (gram + gram.T))
    v = _sign_fix(vecs[:, 0])
    v = v / np.linalg.norm(v)

    # ||p v|| is more accurate than sqrt(lambda) for tiny singular values
    s_min = float(np.linalg.norm(p @ v))
    s_next = float(np.linalg.norm(p @ vecs[:, 1]))
    s_max = float(np.sqrt(max(lam[-1], 0.0)))
    degenerate = bool(s_next - s_min <= DEGENERACY_RTOL * s_max)
    return SingularVector(vector=v, s_min=s_min, degenerate=degenerate)
