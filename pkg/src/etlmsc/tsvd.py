"""Tensor-tensor product algebra built on the mode-3 FFT.

The t-product of two tensors is computed slicewise in the Fourier domain
(equivalent to the block-circulant definition checked by the test oracles).
On top of it sit the tensor SVD, the tensor nuclear norm (sum of singular
values of every Fourier-domain frontal slice), and the tubal-shrinkage
proximal operator used by the low-rank solver.

Conjugate symmetry of the FFT of real input is exploited throughout: only
the first ``n3//2 + 1`` Fourier slices are decomposed, the rest follow by
conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch, SvdDidNotConverge
from .tensor_core import as_tensor3, fft_mode3, ifft_mode3


@dataclass(frozen=True)
class TSvdFactors:
    """Orthogonal-times-f-diagonal factorization ``a = u * s * transpose_t(v)``.

    ``u`` is ``n1 x n1 x n3``, ``s`` is ``n1 x n2 x n3`` with every frontal
    slice diagonal, ``v`` is ``n2 x n2 x n3``.  Fourier-slice singular values
    are real, nonnegative, and sorted nonincreasing within each slice.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


def identity_tensor(n: int, n3: int) -> np.ndarray:
    """Identity for the t-product: first frontal slice is I, the rest zero."""
    t = np.zeros((n, n, n3))
    t[:, :, 0] = np.eye(n)
    return t


def _rfft_weights(n3: int) -> np.ndarray:
    # multiplicity of each rfft slice among the n3 full-FFT slices
    w = np.full(n3 // 2 + 1, 2.0)
    w[0] = 1.0
    if n3 % 2 == 0:
        w[-1] = 1.0
    return w


def t_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """t-product of ``a`` (n1 x n2 x n3) and ``b`` (n2 x n4 x n3).

    Computed as slicewise matrix products in the Fourier domain; equals
    folding ``bcirc(a) @ bvec(b)``.
    """
    a = as_tensor3(a)
    b = as_tensor3(b)
    n1, n2, n3 = a.shape
    m2, n4, m3 = b.shape
    if n2 != m2 or n3 != m3:
        raise ShapeMismatch(f"cannot t-multiply {a.shape} by {b.shape}")
    af = np.fft.rfft(a, axis=2).transpose(2, 0, 1)
    bf = np.fft.rfft(b, axis=2).transpose(2, 0, 1)
    cf = af @ bf
    return np.fft.irfft(cf.transpose(1, 2, 0), n=n3, axis=2)


def transpose_t(a: np.ndarray) -> np.ndarray:
    """Tensor transpose: transpose each frontal slice, then reverse the
    order of the transposed slices 2 through n3."""
    a = as_tensor3(a)
    n3 = a.shape[2]
    out = np.empty((a.shape[1], a.shape[0], n3))
    out[:, :, 0] = a[:, :, 0].T
    if n3 > 1:
        out[:, :, 1:] = a[:, :, :0:-1].transpose(1, 0, 2)
    return out


def t_svd(a: np.ndarray) -> TSvdFactors:
    """Full t-SVD via per-slice complex SVDs of the Fourier-domain slices.

    SVDs run only on the first ``n3//2 + 1`` slices; the remaining slices
    are conjugate fills.  Reconstruction
    ``t_product(u, t_product(s, transpose_t(v)))`` matches ``a`` to
    floating-point accuracy.

    Raises
    ------
    SvdDidNotConverge
        If LAPACK fails on any slice.
    """
    a = as_tensor3(a)
    n1, n2, n3 = a.shape
    af = fft_mode3(a)
    uf = np.empty((n1, n1, n3), dtype=np.complex128)
    sf = np.zeros((n1, n2, n3), dtype=np.complex128)
    vf = np.empty((n2, n2, n3), dtype=np.complex128)
    diag = np.arange(min(n1, n2))
    half = n3 // 2 + 1
    try:
        for k in range(half):
            u, s, vh = np.linalg.svd(af[:, :, k], full_matrices=True)
            uf[:, :, k] = u
            sf[diag, diag, k] = s
            vf[:, :, k] = vh.conj().T
    except np.linalg.LinAlgError as exc:
        raise SvdDidNotConverge(f"SVD failed on Fourier slice: {exc}") from exc
    for k in range(half, n3):
        uf[:, :, k] = uf[:, :, n3 - k].conj()
        sf[:, :, k] = sf[:, :, n3 - k].conj()
        vf[:, :, k] = vf[:, :, n3 - k].conj()
    return TSvdFactors(ifft_mode3(uf), ifft_mode3(sf), ifft_mode3(vf))


def tnn(a: np.ndarray) -> float:
    """Tensor nuclear norm: sum of singular values of all Fourier slices."""
    a = as_tensor3(a)
    n3 = a.shape[2]
    af = np.fft.rfft(a, axis=2).transpose(2, 0, 1)
    try:
        s = np.linalg.svd(af, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SvdDidNotConverge(f"SVD failed on Fourier slice: {exc}") from exc
    return float(np.dot(_rfft_weights(n3), s.sum(axis=1)))


def tubal_shrink(a: np.ndarray, tau: float) -> np.ndarray:
    """Fourier-slicewise singular value soft-thresholding by ``tau``.

    Every singular value ``s`` of every Fourier-domain frontal slice maps to
    ``max(s - tau, 0)``.  Under the unnormalized-FFT Parseval identity this
    is the proximal map of ``(tau/n3) * tnn``: the result minimizes
    ``(tau/n3)*tnn(z) + 0.5*||z - a||_F^2``, so a solver wanting the prox of
    ``(1/mu)*tnn`` passes ``tau = n3/mu``.  The output is real by
    construction (the shrunk Fourier slices keep conjugate symmetry).
    """
    z, _ = tubal_shrink_with_norm(a, tau)
    return z


def tubal_shrink_with_norm(a: np.ndarray, tau: float) -> tuple[np.ndarray, float]:
    """:func:`tubal_shrink` plus the tensor nuclear norm of the result,
    which the shrinkage yields for free."""
    a = as_tensor3(a)
    if tau < 0:
        raise ValueError(f"shrinkage threshold must be >= 0, got {tau}")
    n3 = a.shape[2]
    af = np.fft.rfft(a, axis=2).transpose(2, 0, 1)
    try:
        u, s, vh = np.linalg.svd(af, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdDidNotConverge(f"SVD failed on Fourier slice: {exc}") from exc
    shrunk = np.maximum(s - tau, 0.0)
    zf = (u * shrunk[:, None, :]) @ vh
    z = np.fft.irfft(zf.transpose(1, 2, 0), n=n3, axis=2)
    norm = float(np.dot(_rfft_weights(n3), shrunk.sum(axis=1)))
    return z, norm
