"""Dense 3-order tensor primitives: rotation, matricization, mode-3 FFT, norms.

Conventions
-----------
A 3-order tensor with dimensions ``(n1, n2, n3)`` is a float64
:class:`numpy.ndarray` of shape ``(n1, n2, n3)``:

* frontal slice ``k``    -> ``t[:, :, k]``   (an ``n1 x n2`` matrix)
* mode-3 fiber ``(i, j)`` -> ``t[i, j, :]``   (a length-``n3`` vector)

The canonical linear layout, which fixes the column order of
:func:`matricize_mode3` and all file dumps, is column-major within each
frontal slice with slices stored contiguously: entry ``(i, j, k)`` sits at
linear index ``i + j*n1 + k*n1*n2``.

The mode-3 FFT is the unnormalized forward transform of each mode-3 fiber;
the inverse carries the ``1/n3`` factor (numpy's ``fft``/``ifft``
convention).  All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import numpy as np

from .errors import IfftNotReal, ShapeMismatch


def as_tensor3(a) -> np.ndarray:
    """Coerce ``a`` to a float64 3-order tensor, validating its order."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 3:
        raise ShapeMismatch(f"expected a 3-order tensor, got shape {arr.shape}")
    return arr


def frontal_slice(t: np.ndarray, k: int) -> np.ndarray:
    """Return the ``k``-th frontal slice (0-based) as an ``n1 x n2`` view."""
    return as_tensor3(t)[:, :, k]


def rotate(t: np.ndarray) -> np.ndarray:
    """One-step cyclic dimension shift: ``out[j, k, i] = t[i, j, k]``.

    An ``(N, N, M)`` tensor becomes ``(N, M, N)``; after rotation the mode-3
    fibers run along the first dimension of the input (for a stack of
    transition matrices, fiber ``(j, v)`` is column ``j`` of view ``v``).
    Applying rotate three times to a cube is the identity.
    """
    return np.ascontiguousarray(np.transpose(as_tensor3(t), (1, 2, 0)))


def fft_mode3(t: np.ndarray) -> np.ndarray:
    """Unnormalized DFT of every mode-3 fiber; returns a complex tensor."""
    return np.fft.fft(as_tensor3(t), axis=2)


def ifft_mode3(f: np.ndarray) -> np.ndarray:
    """Inverse of :func:`fft_mode3` (scaled by ``1/n3``), dropping the
    imaginary part only after checking it is negligible.

    Raises
    ------
    IfftNotReal
        If the maximum imaginary magnitude after inversion exceeds
        ``1e-8 * max|f|``.
    """
    arr = np.asarray(f, dtype=np.complex128)
    if arr.ndim != 3:
        raise ShapeMismatch(f"expected a 3-order tensor, got shape {arr.shape}")
    out = np.fft.ifft(arr, axis=2)
    bound = 1e-8 * (np.max(np.abs(arr)) if arr.size else 0.0)
    worst = np.max(np.abs(out.imag)) if arr.size else 0.0
    if worst > bound:
        raise IfftNotReal(
            f"imaginary residual {worst:.3e} exceeds {bound:.3e}; "
            "input lacks conjugate symmetry"
        )
    return np.ascontiguousarray(out.real)


def matricize_mode3(t: np.ndarray) -> np.ndarray:
    """Arrange mode-3 fibers as columns of an ``(n3, n1*n2)`` matrix.

    Column order is column-major over ``(i, j)``: fiber ``(i, j)`` lands in
    column ``i + j*n1``.
    """
    t = as_tensor3(t)
    n1, n2, n3 = t.shape
    return t.reshape(n1 * n2, n3, order="F").T.copy()


def fold_mode3(m: np.ndarray, dims: tuple[int, int, int]) -> np.ndarray:
    """Inverse of :func:`matricize_mode3` for the given ``(n1, n2, n3)``."""
    m = np.asarray(m, dtype=np.float64)
    n1, n2, n3 = dims
    if m.shape != (n3, n1 * n2):
        raise ShapeMismatch(
            f"matrix shape {m.shape} cannot fold into dims {dims}"
        )
    return m.T.reshape((n1, n2, n3), order="F").copy()


def bvec(t: np.ndarray) -> np.ndarray:
    """Stack frontal slices top to bottom into an ``(n1*n3, n2)`` matrix.

    Test oracle only; not used in any solver hot path.
    """
    t = as_tensor3(t)
    return np.concatenate([t[:, :, k] for k in range(t.shape[2])], axis=0)


def bcirc(t: np.ndarray) -> np.ndarray:
    """Block circulant matrix of the frontal slices, ``(n1*n3, n2*n3)``.

    Block column ``c`` holds slices ``(k - c) mod n3`` for row block ``k``,
    so column 0 is ``(A1; A2; ...; A_n3)`` and column 1 is
    ``(A_n3; A1; ...)``.  Test oracle only.
    """
    t = as_tensor3(t)
    n3 = t.shape[2]
    cols = [
        np.concatenate([t[:, :, (k - c) % n3] for k in range(n3)], axis=0)
        for c in range(n3)
    ]
    return np.concatenate(cols, axis=1)


def fro_norm(t: np.ndarray) -> float:
    """Frobenius norm: sqrt of the sum of squared entries."""
    return float(np.sqrt(np.sum(np.square(np.asarray(t, dtype=np.float64)))))


def l1_norm(t: np.ndarray) -> float:
    """Sum of absolute values of all entries."""
    return float(np.sum(np.abs(np.asarray(t, dtype=np.float64))))


def linf_norm(t: np.ndarray) -> float:
    """Maximum absolute entry."""
    arr = np.asarray(t, dtype=np.float64)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def l21_mode3(t: np.ndarray) -> float:
    """Sum over ``(i, j)`` of the Euclidean norms of the mode-3 fibers.

    Equals the matrix l2,1 norm (sum of column norms) of
    :func:`matricize_mode3`.
    """
    t = as_tensor3(t)
    return float(np.sum(np.sqrt(np.sum(t * t, axis=2))))


def norms(t: np.ndarray) -> dict:
    """All four tensor norms in one pass-friendly record."""
    t = as_tensor3(t)
    return {
        "fro": fro_norm(t),
        "l1": l1_norm(t),
        "linf": linf_norm(t),
        "l21_mode3": l21_mode3(t),
    }
