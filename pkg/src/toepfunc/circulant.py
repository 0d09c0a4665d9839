"""Circulant matrix algebra and the circulant preconditioner constructions.

A circulant matrix is kept in its dual representation: first column and
eigenvalue vector, related by eigs = dft_forward(first_col).  Both are
materialized eagerly at construction so instances are immutable and
freely shareable across threads.

The three preconditioners built from a Hermitian Toeplitz matrix A are

  * Strang:        copy the central diagonals of A into a circulant;
  * optimal:       the Frobenius-nearest circulant c(A);
  * superoptimal:  the minimizer of ||I - C^{-1} A||_F, computed as
                   c(A A*) c(A*)^{-1} in eigenvalue space.

Absolute-value variants replace every eigenvalue by its magnitude,
which equals the Hermitian square root (C* C)^{1/2}.
"""

from typing import Optional

import numpy as np

from .dft import dft_forward, dft_inverse
from .matfunc import ScalarFunction
from .toeplitz import ToeplitzMatrix, toeplitz_adjoint, toeplitz_matvec

__all__ = [
    "CirculantMatrix",
    "SingularCirculantError",
    "circulant_matvec",
    "circulant_solve",
    "circulant_to_dense",
    "strang_preconditioner",
    "optimal_preconditioner",
    "optimal_projection_dense",
    "superoptimal_preconditioner",
    "abs_circulant",
    "circulant_function",
]

# Eigenvalues below this fraction of the largest magnitude count as zero.
_SINGULAR_RTOL = 1e-14


class SingularCirculantError(ValueError):
    pass


class CirculantMatrix:
    """Immutable circulant matrix; construct from first column or eigenvalues."""

    def __init__(self, first_col: Optional[np.ndarray] = None,
                 eigs: Optional[np.ndarray] = None):
        if (first_col is None) == (eigs is None):
            raise ValueError("provide exactly one of first_col or eigs")
        if first_col is not None:
            self._first_col = np.asarray(first_col, dtype=np.complex128).copy()
            self._eigs = dft_forward(self._first_col)
        else:
            self._eigs = np.asarray(eigs, dtype=np.complex128).copy()
            self._first_col = dft_inverse(self._eigs)
        if self._first_col.ndim != 1 or self._first_col.shape[0] < 1:
            raise ValueError("circulant data must be a nonempty vector")
        self._first_col.setflags(write=False)
        self._eigs.setflags(write=False)

    @property
    def n(self) -> int:
        return self._first_col.shape[0]

    @property
    def first_col(self) -> np.ndarray:
        return self._first_col

    @property
    def eigs(self) -> np.ndarray:
        return self._eigs

    @property
    def is_hermitian(self) -> bool:
        scale = max(float(np.abs(self._eigs).max()), 1.0)
        return bool(np.abs(self._eigs.imag).max() <= 1e-10 * scale)

    @property
    def is_singular(self) -> bool:
        mags = np.abs(self._eigs)
        return bool(np.any(mags < _SINGULAR_RTOL * max(mags.max(), 1e-300)))


def circulant_matvec(C: CirculantMatrix, x: np.ndarray) -> np.ndarray:
    """C @ x via three transforms; accepts (..., n) batches."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[-1] != C.n:
        raise ValueError(f"dimension mismatch: operator is {C.n}, vector is {x.shape[-1]}")
    return dft_inverse(C.eigs * dft_forward(x))


def circulant_solve(C: CirculantMatrix, b: np.ndarray) -> np.ndarray:
    """Solve C x = b by eigenvalue division."""
    b = np.asarray(b, dtype=np.complex128)
    if b.shape[-1] != C.n:
        raise ValueError(f"dimension mismatch: operator is {C.n}, vector is {b.shape[-1]}")
    if C.is_singular:
        raise SingularCirculantError("circulant matrix is numerically singular")
    return dft_inverse(dft_forward(b) / C.eigs)


def circulant_to_dense(C: CirculantMatrix) -> np.ndarray:
    """Materialize entries (p, q) = c_{(p - q) mod n}."""
    n = C.n
    p, q = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return C.first_col[(p - q) % n].copy()


def strang_preconditioner(A: ToeplitzMatrix) -> CirculantMatrix:
    """Circulant copying the central diagonals of A.

    s_k = a_k for k < n/2, s_k = a_{k-n} for k > n/2; for even n the
    crossover entry is averaged, s_{n/2} = (a_{n/2} + a_{-n/2}) / 2,
    which keeps the result Hermitian.
    """
    n = A.n
    col = np.zeros(n, dtype=np.complex128)
    for k in range(n):
        if 2 * k < n:
            col[k] = A.coeff(k)
        elif 2 * k > n:
            col[k] = A.coeff(k - n)
        else:
            col[k] = 0.5 * (A.coeff(k) + A.coeff(k - n))
    return CirculantMatrix(first_col=col)


def optimal_preconditioner(A: ToeplitzMatrix) -> CirculantMatrix:
    """Frobenius-nearest circulant c(A): c_j = ((n-j) a_j + j a_{j-n}) / n."""
    n = A.n
    col = np.empty(n, dtype=np.complex128)
    col[0] = A.coeff(0)
    for j in range(1, n):
        col[j] = ((n - j) * A.coeff(j) + j * A.coeff(j - n)) / n
    return CirculantMatrix(first_col=col)


def optimal_projection_dense(B: np.ndarray) -> CirculantMatrix:
    """Frobenius projection of an arbitrary square matrix onto circulants.

    c_j is the mean of the wrapped j-th diagonal: the n entries with
    (row - col) congruent to j mod n.
    """
    B = np.asarray(B, dtype=np.complex128)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError("expected a square matrix")
    n = B.shape[0]
    rows = np.arange(n)
    col = np.empty(n, dtype=np.complex128)
    for j in range(n):
        col[j] = np.mean(B[rows, (rows - j) % n])
    return CirculantMatrix(first_col=col)


def superoptimal_preconditioner(A: ToeplitzMatrix) -> CirculantMatrix:
    """Minimizer of ||I - C^{-1} A||_F over circulants: c(A A*) c(A*)^{-1}.

    A A* is formed column by column through two fast Toeplitz products
    and projected by wrapped-diagonal averaging; the quotient is taken
    in eigenvalue space.
    """
    n = A.n
    Aadj = toeplitz_adjoint(A)
    # Batched over rows: row j of AH is A* e_j, row j of AAH is A A* e_j,
    # so AAH.T is A A*.
    AH = toeplitz_matvec(Aadj, np.eye(n, dtype=np.complex128))
    AAH = toeplitz_matvec(A, AH)
    num = optimal_projection_dense(AAH.T)
    den = optimal_preconditioner(Aadj)
    if den.is_singular:
        raise SingularCirculantError(
            "optimal preconditioner of A* is singular; superoptimal "
            "preconditioner is undefined")
    return CirculantMatrix(eigs=num.eigs / den.eigs)


def abs_circulant(C: CirculantMatrix) -> CirculantMatrix:
    """|C| = (C* C)^{1/2}: eigenvalues replaced by their magnitudes."""
    return CirculantMatrix(eigs=np.abs(C.eigs).astype(np.complex128))


def circulant_function(C: CirculantMatrix, h: ScalarFunction) -> CirculantMatrix:
    """h(C): the scalar function applied to the eigenvalues."""
    h.check_domain(C.eigs)
    eigs = C.eigs
    if C.is_hermitian:
        eigs = eigs.real
    return CirculantMatrix(eigs=np.asarray(h(eigs), dtype=np.complex128))
