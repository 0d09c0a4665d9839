"""Generating functions and Hermitian Toeplitz matrices.

A Toeplitz matrix is stored by its defining coefficients a_k,
|k| <= n-1, with entry (p, q) = a_{p-q}.  Matrix-vector products go
through circulant embedding so the cost is O(n log n) instead of O(n^2).
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .dft import dft_forward, dft_inverse

__all__ = [
    "GeneratingFunction1D",
    "ToeplitzMatrix",
    "builtin_wiener_function",
    "coefficients_from_quadrature",
    "toeplitz_from_function",
    "toeplitz_adjoint",
    "toeplitz_matvec",
    "toeplitz_to_dense",
    "two_norm_estimate",
    "coefficients_to_csv",
    "coefficients_from_csv",
]


@dataclass(frozen=True)
class GeneratingFunction1D:
    """Provider of Fourier coefficients a_k of a periodic symbol.

    ``coeff(k)`` returns a_k for any integer k.  When ``hermitian`` is
    set the provider promises a_{-k} = conj(a_k) (spot-checked where it
    matters).  ``f_min``/``f_max`` are optional numerically estimated
    bounds of the symbol, used for diagnostics only.
    """

    coeff: Callable[[int], complex]
    hermitian: bool = True
    f_min: Optional[float] = None
    f_max: Optional[float] = None
    name: str = "custom"

    def coefficients(self, k_max: int) -> np.ndarray:
        """Array of a_k for k = -k_max..k_max (index k + k_max)."""
        return np.array([self.coeff(k) for k in range(-k_max, k_max + 1)],
                        dtype=np.complex128)


def _builtin_coeff(k: int) -> complex:
    # f(x) = 2 * sum_{k>=0} (sin kx + cos kx) / (1+k)^1.1
    if k == 0:
        return 2.0 + 0.0j
    w = (1.0 + abs(k)) ** 1.1
    return (1.0 - 1.0j) / w if k > 0 else (1.0 + 1.0j) / w


def _builtin_symbol_bounds(grid_size: int = 16384) -> tuple[float, float]:
    """Estimate min/max of the builtin symbol on a uniform grid.

    The symbol is evaluated from its truncated coefficient expansion via
    one inverse transform; with slowly decaying coefficients this is an
    estimate, which is all the diagnostics need.
    """
    k_max = grid_size // 2 - 1
    wrapped = np.zeros(grid_size, dtype=np.complex128)
    for k in range(-k_max, k_max + 1):
        wrapped[k % grid_size] += _builtin_coeff(k)
    # f(x_j) = sum_k a_k e^{i k x_j} on x_j = 2 pi j / N is N * idft of wrapped
    values = (dft_inverse(wrapped) * grid_size).real
    return float(values.min()), float(values.max())


_BUILTIN_BOUNDS: Optional[tuple[float, float]] = None


def builtin_wiener_function() -> GeneratingFunction1D:
    """The Wiener-class test symbol with a_0 = 2, a_k = (1-i)/(1+k)^1.1."""
    global _BUILTIN_BOUNDS
    if _BUILTIN_BOUNDS is None:
        _BUILTIN_BOUNDS = _builtin_symbol_bounds()
    fmin, fmax = _BUILTIN_BOUNDS
    return GeneratingFunction1D(coeff=_builtin_coeff, hermitian=True,
                                f_min=fmin, f_max=fmax, name="builtin1d")


def coefficients_from_quadrature(f: Callable[[float], float], k_max: int,
                                 grid_size: int) -> GeneratingFunction1D:
    """Fourier coefficients of a periodic f on [-pi, pi] by the trapezoidal rule.

    Requires grid_size >= 4 * k_max so the highest requested mode is well
    resolved.  The returned provider yields zero outside |k| <= k_max.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    if grid_size < max(4 * k_max, 1):
        raise ValueError("grid_size must be at least 4 * k_max")
    x = -np.pi + 2.0 * np.pi * np.arange(grid_size) / grid_size
    fx = np.array([f(float(xi)) for xi in x], dtype=np.complex128)
    table = {}
    for k in range(-k_max, k_max + 1):
        table[k] = np.mean(fx * np.exp(-1j * k * x))
    real_valued = bool(np.max(np.abs(fx.imag)) < 1e-13 * (1 + np.max(np.abs(fx.real))))

    def coeff(k: int) -> complex:
        return complex(table.get(k, 0.0))

    return GeneratingFunction1D(coeff=coeff, hermitian=real_valued,
                                name="quadrature")


@dataclass(frozen=True)
class ToeplitzMatrix:
    """Hermitian Toeplitz matrix stored by coefficients a_{-(n-1)}..a_{n-1}."""

    n: int
    coeffs: np.ndarray = field(repr=False)  # length 2n-1, index k + (n-1)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (2 * self.n - 1,):
            raise ValueError("coefficient array must have length 2n-1")
        object.__setattr__(self, "coeffs", c)
        c.setflags(write=False)

    def coeff(self, k: int) -> complex:
        """a_k for |k| <= n-1."""
        return complex(self.coeffs[k + self.n - 1])

    @property
    def is_hermitian(self) -> bool:
        return bool(np.allclose(self.coeffs[::-1].conj(), self.coeffs,
                                rtol=0, atol=1e-12 * (1 + np.abs(self.coeffs).max())))


def toeplitz_from_function(g: GeneratingFunction1D, n: int) -> ToeplitzMatrix:
    """Hermitian Toeplitz matrix of dimension n generated by g."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if not g.hermitian:
        raise ValueError("Hermitian Toeplitz matrix requested from a "
                         "non-hermitian coefficient provider")
    coeffs = np.zeros(2 * n - 1, dtype=np.complex128)
    for k in range(n):
        ak = complex(g.coeff(k))
        coeffs[k + n - 1] = ak
        coeffs[-k + n - 1] = np.conj(ak)
    if abs(coeffs[n - 1].imag) > 1e-12 * (1 + abs(coeffs[n - 1])):
        raise ValueError("a_0 must be real for a Hermitian matrix")
    coeffs[n - 1] = coeffs[n - 1].real
    return ToeplitzMatrix(n=n, coeffs=coeffs)


def toeplitz_adjoint(A: ToeplitzMatrix) -> ToeplitzMatrix:
    """A* as a Toeplitz matrix: coefficients b_k = conj(a_{-k})."""
    return ToeplitzMatrix(n=A.n, coeffs=np.conj(A.coeffs[::-1]))


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length() if n > 1 else 1


def _embedding_eigs(A: ToeplitzMatrix) -> np.ndarray:
    # Idempotent lazy cache on the (frozen) instance; benign under races.
    cached = getattr(A, "_embed_eigs", None)
    if cached is not None:
        return cached
    n = A.n
    N = _next_pow2(max(2 * n - 1, 1))
    col = np.zeros(N, dtype=np.complex128)
    for k in range(n):
        col[k] = A.coeff(k)
    for k in range(1, n):
        col[N - k] = A.coeff(-k)
    eigs = dft_forward(col)
    eigs.setflags(write=False)
    object.__setattr__(A, "_embed_eigs", eigs)
    return eigs


def toeplitz_matvec(A: ToeplitzMatrix, x: np.ndarray) -> np.ndarray:
    """A @ x through circulant embedding; accepts (..., n) batches."""
    x = np.asarray(x, dtype=np.complex128)
    n = A.n
    if x.shape[-1] != n:
        raise ValueError(f"dimension mismatch: operator is {n}, vector is {x.shape[-1]}")
    eigs = _embedding_eigs(A)
    N = eigs.shape[0]
    xpad = np.zeros(x.shape[:-1] + (N,), dtype=np.complex128)
    xpad[..., :n] = x
    y = dft_inverse(eigs * dft_forward(xpad))
    return y[..., :n]


def toeplitz_to_dense(A: ToeplitzMatrix) -> np.ndarray:
    """Materialize entries (p, q) = a_{p-q}."""
    n = A.n
    p, q = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return A.coeffs[(p - q) + n - 1].copy()


def two_norm_estimate(A: ToeplitzMatrix, iters: int = 100) -> float:
    """Power-iteration estimate of ||A||_2 with a deterministic start."""
    v = np.ones(A.n, dtype=np.complex128) / np.sqrt(A.n)
    norm = 0.0
    for _ in range(iters):
        w = toeplitz_matvec(A, v)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
    return norm


def coefficients_to_csv(g: GeneratingFunction1D, k_max: int, path) -> None:
    """Dump coefficients, one row per k: k, re(a_k), im(a_k)."""
    with open(path, "w") as fh:
        fh.write("k,re,im\n")
        for k in range(-k_max, k_max + 1):
            a = complex(g.coeff(k))
            fh.write(f"{k},{a.real:.17g},{a.imag:.17g}\n")


def coefficients_from_csv(path) -> GeneratingFunction1D:
    """Read a coefficient table written by coefficients_to_csv."""
    table: dict[int, complex] = {}
    with open(path) as fh:
        header = fh.readline()
        if not header.lower().startswith("k,"):
            raise ValueError("expected header 'k,re,im'")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            k_s, re_s, im_s = line.split(",")
            table[int(k_s)] = complex(float(re_s), float(im_s))
    hermitian = all(
        abs(table.get(-k, 0.0) - np.conj(v)) <= 1e-12 * (1 + abs(v))
        for k, v in table.items()
    )

    def coeff(k: int) -> complex:
        return table.get(k, 0.0 + 0.0j)

    return GeneratingFunction1D(coeff=coeff, hermitian=hermitian, name="coeff-file")
