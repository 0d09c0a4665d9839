"""Discrete Fourier transforms with a fixed sign and scale convention.

The forward transform is unnormalized,

    (F x)_k = sum_j x_j exp(-2*pi*i*j*k/n),

so that the eigenvalues of a circulant matrix are exactly the forward
transform of its first column (the unitary matrix U = F/sqrt(n) then
diagonalizes circulants as C = U* diag(Fc) U).  The inverse carries the
1/n factor.

Power-of-two lengths go through an iterative radix-2 butterfly scheme;
any other length falls back to the direct O(n^2) sum, which keeps the
API total (experiments only ever use powers of two).

All routines are pure: they accept arrays of shape (..., n) and
transform along the last axis, so batched use is free.
"""

import numpy as np

__all__ = [
    "dft_forward",
    "dft_inverse",
    "dft2_forward",
    "dft2_inverse",
    "is_power_of_two",
]


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _bit_reverse_indices(n: int) -> np.ndarray:
    """Bit-reversal permutation for a power-of-two length n."""
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def _fft_radix2(a: np.ndarray, sign: int) -> np.ndarray:
    """Iterative radix-2 transform along the last axis (length must be 2^p)."""
    n = a.shape[-1]
    out = a[..., _bit_reverse_indices(n)].astype(np.complex128)
    half = 1
    while half < n:
        step = 2 * half
        twiddle = np.exp(sign * 2j * np.pi * np.arange(half) / step)
        out = out.reshape(out.shape[:-1] + (n // step, step))
        even = out[..., :half]
        odd = out[..., half:] * twiddle
        out = np.concatenate((even + odd, even - odd), axis=-1)
        out = out.reshape(out.shape[:-2] + (n,))
        half = step
    return out


def _dft_direct(a: np.ndarray, sign: int) -> np.ndarray:
    n = a.shape[-1]
    j = np.arange(n)
    kernel = np.exp(sign * 2j * np.pi * np.outer(j, j) / n)
    return a.astype(np.complex128) @ kernel


def _transform(a: np.ndarray, sign: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.shape[-1] == 0:
        raise ValueError("transform length must be >= 1")
    if is_power_of_two(a.shape[-1]):
        return _fft_radix2(a, sign)
    return _dft_direct(a, sign)


def dft_forward(x) -> np.ndarray:
    """Unnormalized forward DFT along the last axis."""
    return _transform(x, -1)


def dft_inverse(y) -> np.ndarray:
    """Exact inverse of dft_forward (carries the 1/n factor)."""
    y = np.asarray(y, dtype=np.complex128)
    return _transform(y, +1) / y.shape[-1]


def dft2_forward(x) -> np.ndarray:
    """2D forward transform: 1D transforms along both of the last two axes."""
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim < 2:
        raise ValueError("dft2_forward expects at least a 2D array")
    out = _transform(x, -1)
    out = np.swapaxes(_transform(np.swapaxes(out, -1, -2), -1), -1, -2)
    return out


def dft2_inverse(y) -> np.ndarray:
    """Inverse of dft2_forward."""
    y = np.asarray(y, dtype=np.complex128)
    if y.ndim < 2:
        raise ValueError("dft2_inverse expects at least a 2D array")
    n, m = y.shape[-2], y.shape[-1]
    out = _transform(y, +1)
    out = np.swapaxes(_transform(np.swapaxes(out, -1, -2), +1), -1, -2)
    return out / (n * m)
