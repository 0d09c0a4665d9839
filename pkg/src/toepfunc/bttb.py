"""Two-level structures: BTTB matrices and BCCB preconditioners.

A block Toeplitz matrix with Toeplitz blocks (BTTB) of block dimension
n and inner dimension m is stored by its coefficient table a^{(j)}_k,
|j| <= n-1, |k| <= m-1; the entry in block (r, s) at position (p, q) is
a^{(r-s)}_{p-q}.  Vectors are flattened with the inner index fastest
(block-row-major), matching ``reshape(n, m)``.

Its BCCB counterpart (block circulant with circulant blocks) is kept in
dual representation exactly like the 1D circulant: first column and the
eigenvalue grid, related by the 2D transform.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .dft import dft2_forward, dft2_inverse
from .matfunc import ScalarFunction

__all__ = [
    "GeneratingFunction2D",
    "BttbMatrix",
    "BccbMatrix",
    "SingularBccbError",
    "builtin_bttb_function",
    "bttb_from_function",
    "bttb_matvec",
    "bttb_to_dense",
    "bccb_matvec",
    "bccb_solve",
    "bccb_to_dense",
    "optimal_bccb_preconditioner",
    "abs_bccb",
    "bccb_function",
    "coefficients2d_to_csv",
    "coefficients2d_from_csv",
]

_SINGULAR_RTOL = 1e-14


class SingularBccbError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratingFunction2D:
    """Provider of 2D Fourier coefficients (j, k) -> a^{(j)}_k.

    j indexes the block (outer) level, k the within-block (inner) level.
    ``hermitian`` promises a^{(-j)}_{-k} = conj(a^{(j)}_k).
    """

    coeff: Callable[[int, int], complex]
    hermitian: bool = True
    name: str = "custom2d"


def _builtin2d_coeff(j: int, k: int) -> complex:
    return 1.0 / ((abs(j) + 1.0) ** 2.1 + (abs(k) + 1.0) ** 2.1)


def builtin_bttb_function() -> GeneratingFunction2D:
    """The test table a^{(j)}_k = 1 / ((|j|+1)^2.1 + (|k|+1)^2.1)."""
    return GeneratingFunction2D(coeff=_builtin2d_coeff, hermitian=True,
                                name="builtin2d")


@dataclass(frozen=True)
class BttbMatrix:
    """Hermitian BTTB matrix stored by its coefficient table.

    ``coeffs[j + n - 1, k + m - 1]`` holds a^{(j)}_k.
    """

    n: int
    m: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("dimensions must be >= 1")
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (2 * self.n - 1, 2 * self.m - 1):
            raise ValueError("coefficient table must be (2n-1) x (2m-1)")
        object.__setattr__(self, "coeffs", c)
        c.setflags(write=False)

    @property
    def size(self) -> int:
        return self.n * self.m

    def coeff(self, j: int, k: int) -> complex:
        return complex(self.coeffs[j + self.n - 1, k + self.m - 1])


def bttb_from_function(g: GeneratingFunction2D, n: int, m: int) -> BttbMatrix:
    """BTTB matrix of block dimension n and inner dimension m generated by g."""
    if not g.hermitian:
        raise ValueError("Hermitian BTTB matrix requested from a "
                         "non-hermitian coefficient provider")
    coeffs = np.zeros((2 * n - 1, 2 * m - 1), dtype=np.complex128)
    for j in range(-(n - 1), n):
        for k in range(-(m - 1), m):
            if j > 0 or (j == 0 and k >= 0):
                coeffs[j + n - 1, k + m - 1] = complex(g.coeff(j, k))
            else:
                coeffs[j + n - 1, k + m - 1] = np.conj(complex(g.coeff(-j, -k)))
    return BttbMatrix(n=n, m=m, coeffs=coeffs)


def bttb_to_dense(A: BttbMatrix) -> np.ndarray:
    """Materialize the nm x nm matrix with entries a^{(r-s)}_{p-q}."""
    n, m = A.n, A.m
    r = np.arange(n)
    p = np.arange(m)
    jdiff = (r[:, None] - r[None, :])            # (n, n)
    kdiff = (p[:, None] - p[None, :])            # (m, m)
    out = A.coeffs[np.ix_(jdiff.ravel() + n - 1, kdiff.ravel() + m - 1)]
    out = out.reshape(n, n, m, m).transpose(0, 2, 1, 3).reshape(n * m, n * m)
    return np.ascontiguousarray(out)


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length() if n > 1 else 1


def _embedding_eig_grid(A: BttbMatrix) -> np.ndarray:
    cached = getattr(A, "_embed_eigs", None)
    if cached is not None:
        return cached
    n, m = A.n, A.m
    N = _next_pow2(max(2 * n - 1, 1))
    M = _next_pow2(max(2 * m - 1, 1))
    grid = np.zeros((N, M), dtype=np.complex128)
    for j in range(-(n - 1), n):
        for k in range(-(m - 1), m):
            grid[j % N, k % M] = A.coeff(j, k)
    eigs = dft2_forward(grid)
    eigs.setflags(write=False)
    object.__setattr__(A, "_embed_eigs", eigs)
    return eigs


def bttb_matvec(A: BttbMatrix, x: np.ndarray) -> np.ndarray:
    """A @ x by two-level circulant embedding and 2D transforms."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (A.size,):
        raise ValueError(f"dimension mismatch: operator is {A.size}, "
                         f"vector is {x.shape}")
    eigs = _embedding_eig_grid(A)
    N, M = eigs.shape
    xpad = np.zeros((N, M), dtype=np.complex128)
    xpad[:A.n, :A.m] = x.reshape(A.n, A.m)
    y = dft2_inverse(eigs * dft2_forward(xpad))
    return y[:A.n, :A.m].ravel()


class BccbMatrix:
    """Immutable BCCB matrix in dual representation.

    The first column, reshaped (n, m) with the inner index fastest, and
    the eigenvalue grid are related by the 2D transform.
    """

    def __init__(self, n: int, m: int,
                 first_col: Optional[np.ndarray] = None,
                 eigs: Optional[np.ndarray] = None):
        if (first_col is None) == (eigs is None):
            raise ValueError("provide exactly one of first_col or eigs")
        self.n = n
        self.m = m
        if first_col is not None:
            col = np.asarray(first_col, dtype=np.complex128).reshape(n, m).copy()
            self._col_grid = col
            self._eig_grid = dft2_forward(col)
        else:
            self._eig_grid = np.asarray(eigs, dtype=np.complex128).reshape(n, m).copy()
            self._col_grid = dft2_inverse(self._eig_grid)
        self._col_grid.setflags(write=False)
        self._eig_grid.setflags(write=False)

    @property
    def size(self) -> int:
        return self.n * self.m

    @property
    def first_col(self) -> np.ndarray:
        return self._col_grid.ravel()

    @property
    def eigs(self) -> np.ndarray:
        return self._eig_grid.ravel()

    @property
    def eig_grid(self) -> np.ndarray:
        return self._eig_grid

    @property
    def is_hermitian(self) -> bool:
        scale = max(float(np.abs(self._eig_grid).max()), 1.0)
        return bool(np.abs(self._eig_grid.imag).max() <= 1e-10 * scale)

    @property
    def is_singular(self) -> bool:
        mags = np.abs(self._eig_grid)
        return bool(np.any(mags < _SINGULAR_RTOL * max(mags.max(), 1e-300)))


def bccb_matvec(C: BccbMatrix, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (C.size,):
        raise ValueError("dimension mismatch")
    X = x.reshape(C.n, C.m)
    return dft2_inverse(C.eig_grid * dft2_forward(X)).ravel()


def bccb_solve(C: BccbMatrix, b: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=np.complex128)
    if b.shape != (C.size,):
        raise ValueError("dimension mismatch")
    if C.is_singular:
        raise SingularBccbError("BCCB matrix is numerically singular")
    B = b.reshape(C.n, C.m)
    return dft2_inverse(dft2_forward(B) / C.eig_grid).ravel()


def bccb_to_dense(C: BccbMatrix) -> np.ndarray:
    n, m = C.n, C.m
    col = C._col_grid
    r = np.arange(n)
    p = np.arange(m)
    jdiff = (r[:, None] - r[None, :]) % n
    kdiff = (p[:, None] - p[None, :]) % m
    out = col[np.ix_(jdiff.ravel(), kdiff.ravel())]
    out = out.reshape(n, n, m, m).transpose(0, 2, 1, 3).reshape(n * m, n * m)
    return np.ascontiguousarray(out)


def optimal_bccb_preconditioner(A: BttbMatrix) -> BccbMatrix:
    """Frobenius-nearest BCCB matrix to A.

    The projection factors into the 1D optimal-circulant weighting
    applied independently at the block level (index j, modulus n) and
    within blocks (index k, modulus m).
    """
    n, m = A.n, A.m
    col = np.zeros((n, m), dtype=np.complex128)
    for j in range(n):
        for k in range(m):
            val = 0.0 + 0.0j
            for jj, wj in ((j, (n - j) / n), (j - n, j / n)):
                if wj == 0.0 or abs(jj) > n - 1:
                    continue
                for kk, wk in ((k, (m - k) / m), (k - m, k / m)):
                    if wk == 0.0 or abs(kk) > m - 1:
                        continue
                    val += wj * wk * A.coeff(jj, kk)
            col[j, k] = val
    return BccbMatrix(n=n, m=m, first_col=col)


def abs_bccb(C: BccbMatrix) -> BccbMatrix:
    """|C| = (C* C)^{1/2}: eigenvalues replaced by their magnitudes."""
    return BccbMatrix(C.n, C.m, eigs=np.abs(C.eig_grid).astype(np.complex128))


def bccb_function(C: BccbMatrix, h: ScalarFunction) -> BccbMatrix:
    """h(C): the scalar function applied to the eigenvalue grid."""
    h.check_domain(C.eigs)
    eigs = C.eig_grid
    if C.is_hermitian:
        eigs = eigs.real
    return BccbMatrix(C.n, C.m, eigs=np.asarray(h(eigs), dtype=np.complex128))


def coefficients2d_to_csv(g: GeneratingFunction2D, j_max: int, k_max: int,
                          path) -> None:
    """Dump coefficients, one row per (j, k): j, k, re, im."""
    with open(path, "w") as fh:
        fh.write("j,k,re,im\n")
        for j in range(-j_max, j_max + 1):
            for k in range(-k_max, k_max + 1):
                a = complex(g.coeff(j, k))
                fh.write(f"{j},{k},{a.real:.17g},{a.imag:.17g}\n")


def coefficients2d_from_csv(path) -> GeneratingFunction2D:
    """Read a coefficient table written by coefficients2d_to_csv."""
    table: dict[tuple[int, int], complex] = {}
    with open(path) as fh:
        header = fh.readline()
        if not header.lower().startswith("j,"):
            raise ValueError("expected header 'j,k,re,im'")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            j_s, k_s, re_s, im_s = line.split(",")
            table[(int(j_s), int(k_s))] = complex(float(re_s), float(im_s))
    hermitian = all(
        abs(table.get((-j, -k), 0.0) - np.conj(v)) <= 1e-12 * (1 + abs(v))
        for (j, k), v in table.items()
    )

    def coeff(j: int, k: int) -> complex:
        return table.get((j, k), 0.0 + 0.0j)

    return GeneratingFunction2D(coeff=coeff, hermitian=hermitian,
                                name="coeff-file2d")
