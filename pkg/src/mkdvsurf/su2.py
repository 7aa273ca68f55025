"""Complex 2x2 matrix algebra on the Pauli basis and the su(2) <-> R^3 map.

All matrix-valued functions accept and return numpy arrays of shape
(..., 2, 2) with complex entries, so grids of matrices are handled by the
same code path as single matrices.  Vectors are arrays of shape (..., 3).

The identification used throughout the package is

    F = i * (F1*sigma1 + F2*sigma2 + F3*sigma3),

under which the su(2) inner product <X, Y> = -1/2 Re trace(XY) becomes the
Euclidean dot product of the component vectors.
"""
from __future__ import annotations

import numpy as np

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

_SIGMAS = (SIGMA1, SIGMA2, SIGMA3)


def pauli(k: int) -> np.ndarray:
    """Return the Pauli matrix sigma_k for k in {1, 2, 3}."""
    if k not in (1, 2, 3):
        raise ValueError(f"Pauli index must be 1, 2, or 3, got {k}")
    return _SIGMAS[k - 1].copy()


def trace(x: np.ndarray) -> np.ndarray:
    """Trace over the trailing 2x2 axes."""
    return x[..., 0, 0] + x[..., 1, 1]


def su2_inner(x: np.ndarray, y: np.ndarray, check: bool = False) -> np.ndarray:
    """Inner product <X, Y> = -1/2 Re trace(XY).

    With ``check=True``, raise if the imaginary part of trace(XY) exceeds
    1e-12, which flags arguments outside the real su(2) span.
    """
    t = trace(np.matmul(x, y))
    if check and np.max(np.abs(t.imag)) > 1e-12:
        raise ValueError("trace(XY) has a nonreal part; inputs are not both su(2)")
    return np.asarray(-0.5 * t.real)


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """[X, Y] = XY - YX."""
    return np.matmul(x, y) - np.matmul(y, x)


def su2_norm(x: np.ndarray) -> np.ndarray:
    """||X|| = sqrt(|<X, X>|)."""
    return np.sqrt(np.abs(su2_inner(x, x)))


def vec_to_su2(v: np.ndarray) -> np.ndarray:
    """Map a vector (..., 3) to F = i * sum_k v_k sigma_k."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (2, 2), dtype=complex)
    v1, v2, v3 = v[..., 0], v[..., 1], v[..., 2]
    out[..., 0, 0] = 1j * v3
    out[..., 1, 1] = -1j * v3
    out[..., 0, 1] = 1j * v1 + v2
    out[..., 1, 0] = 1j * v1 - v2
    return out


def su2_to_vec(f: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """Invert vec_to_su2, rejecting inputs that are not su(2) within atol.

    Membership means traceless and anti-Hermitian; both defects are measured
    entrywise against ``atol`` (absolute, since inputs come from closed-form
    evaluation rather than iteration).
    """
    f = np.asarray(f, dtype=complex)
    tr_defect = np.max(np.abs(trace(f)))
    ah_defect = np.max(np.abs(f + np.conj(np.swapaxes(f, -1, -2))))
    if tr_defect > atol or ah_defect > atol:
        raise ValueError(
            f"matrix is not su(2) within {atol}: "
            f"trace defect {tr_defect:.3e}, anti-Hermiticity defect {ah_defect:.3e}"
        )
    v1 = ((f[..., 0, 1] + f[..., 1, 0]) / 2j).real
    v2 = ((f[..., 0, 1] - f[..., 1, 0]) / 2).real
    v3 = (-1j * f[..., 0, 0]).real
    return np.stack([v1, v2, v3], axis=-1)


def is_su2(f: np.ndarray, atol: float = 1e-10) -> bool:
    """True when f is traceless and anti-Hermitian within atol."""
    f = np.asarray(f, dtype=complex)
    if np.max(np.abs(trace(f))) > atol:
        return False
    return bool(np.max(np.abs(f + np.conj(np.swapaxes(f, -1, -2)))) <= atol)
