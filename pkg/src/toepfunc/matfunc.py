"""Scalar functions, dense Hermitian eigendecompositions, and h(A).

h(A) for Hermitian A is evaluated through the eigendecomposition
A = V diag(w) V*, i.e. h(A) = V h(diag(w)) V*, symmetrized afterwards so
downstream solvers can rely on exact Hermitianness.  A truncated Taylor
sum with a computable remainder bound is kept alongside as an
independent route for cross-validation.
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

__all__ = [
    "ScalarFunction",
    "EXP",
    "COS",
    "SINH",
    "IDENTITY",
    "CUBIC",
    "polynomial_function",
    "taylor_function",
    "require_hermitian",
    "EigenDecomposition",
    "hermitian_eig",
    "matrix_function",
    "taylor_matrix_function",
    "DomainError",
]


class DomainError(ValueError):
    """An eigenvalue fell outside the declared domain of the scalar function."""


@dataclass(frozen=True)
class ScalarFunction:
    """A scalar function with derivative evaluators and an optional domain.

    ``deriv(order)`` returns a vectorized evaluator of the order-th
    derivative (order 0 is the function itself).  ``radius`` limits the
    domain to |z| < radius; None means entire plane.
    """

    name: str
    deriv: Callable[[int], Callable[[np.ndarray], np.ndarray]]
    radius: Optional[float] = None

    def __call__(self, z):
        return self.deriv(0)(np.asarray(z))

    def in_domain(self, z) -> bool:
        if self.radius is None:
            return True
        return bool(np.all(np.abs(z) < self.radius))

    def check_domain(self, z) -> None:
        if self.radius is None:
            return
        z = np.atleast_1d(np.asarray(z))
        bad = np.abs(z) >= self.radius
        if np.any(bad):
            worst = z[bad][np.argmax(np.abs(z[bad]))]
            raise DomainError(
                f"value {worst} lies outside the convergence radius "
                f"{self.radius} of {self.name}")

    def taylor_coeff(self, k: int) -> complex:
        """k-th Taylor coefficient around 0: f^(k)(0) / k!."""
        from math import factorial
        return complex(self.deriv(k)(np.asarray(0.0 + 0.0j))) / factorial(k)


def _cyclic_derivs(fns):
    period = len(fns)

    def deriv(order: int):
        return fns[order % period]

    return deriv


EXP = ScalarFunction("exp", lambda order: np.exp)
COS = ScalarFunction("cos", _cyclic_derivs(
    [np.cos, lambda z: -np.sin(z), lambda z: -np.cos(z), np.sin]))
SINH = ScalarFunction("sinh", _cyclic_derivs([np.sinh, np.cosh]))


def polynomial_function(coeffs: Sequence[complex], name: Optional[str] = None) -> ScalarFunction:
    """Polynomial sum_k coeffs[k] * z^k with exact termwise derivatives."""
    base = np.asarray(coeffs, dtype=np.complex128)

    def deriv(order: int):
        c = base.copy()
        for _ in range(order):
            c = c[1:] * np.arange(1, len(c))
        if len(c) == 0:
            c = np.zeros(1, dtype=np.complex128)

        def evaluate(z):
            z = np.asarray(z, dtype=np.complex128)
            out = np.zeros_like(z)
            for ck in c[::-1]:
                out = out * z + ck
            return out

        return evaluate

    return ScalarFunction(name or f"poly{len(base) - 1}", deriv)


IDENTITY = polynomial_function([0.0, 1.0], name="identity")
CUBIC = polynomial_function([1.0, 1.0, 1.0, 1.0], name="cubic")


def taylor_function(coeffs: Sequence[complex], radius: float,
                    name: str = "taylor") -> ScalarFunction:
    """Truncated Taylor series sum_k a_k z^k with declared radius of convergence."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    poly = polynomial_function(coeffs, name=name)
    return ScalarFunction(name, poly.deriv, radius=radius)


def require_hermitian(A: np.ndarray) -> np.ndarray:
    """Validate an n x n Hermitian array and return it as complex128."""
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    scale = np.linalg.norm(A, "fro")
    if np.linalg.norm(A - A.conj().T, "fro") > 1e-12 * max(scale, 1.0):
        raise ValueError("matrix is not Hermitian to working tolerance")
    return A


class EigenDecomposition(NamedTuple):
    values: np.ndarray    # real, ascending
    vectors: np.ndarray   # unitary, columns are eigenvectors


def hermitian_eig(A: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, values ascending."""
    A = require_hermitian(A)
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as err:
        raise RuntimeError(f"Hermitian eigensolver failed to converge: {err}")
    return EigenDecomposition(values=w, vectors=V)


def matrix_function(A: np.ndarray, h: ScalarFunction) -> np.ndarray:
    """h(A) = V h(diag(w)) V* for Hermitian A; output symmetrized."""
    w, V = hermitian_eig(A)
    if h.radius is not None:
        bad = np.abs(w) >= h.radius
        if np.any(bad):
            raise DomainError(
                f"eigenvalue {w[bad][0]} of the argument lies outside the "
                f"convergence radius {h.radius} of {h.name}")
    hw = np.asarray(h(w.astype(np.complex128)))
    X = (V * hw) @ V.conj().T
    return 0.5 * (X + X.conj().T)


def taylor_matrix_function(A: np.ndarray, h: ScalarFunction,
                           K: int) -> tuple[np.ndarray, float]:
    """Degree-(K-1) Taylor partial sum of h(A) and a remainder bound.

    The bound is (1/K!) * max over the spectrum and t in [0, 1] of
    |lambda|^K |h^(K)(t * lambda)|, which dominates ||h(A) - partial||_2
    for Hermitian A.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    A = require_hermitian(A)
    w = np.linalg.eigvalsh(A)
    rho = float(np.max(np.abs(w))) if len(w) else 0.0
    if h.radius is not None and rho >= h.radius:
        raise DomainError(
            f"spectral radius {rho} is not below the convergence radius "
            f"{h.radius} of {h.name}")
    n = A.shape[0]
    coeffs = [h.taylor_coeff(k) for k in range(K)]
    S = np.zeros((n, n), dtype=np.complex128)
    for ck in coeffs[::-1]:
        S = A @ S + ck * np.eye(n)
    S = 0.5 * (S + S.conj().T)

    from math import factorial
    t = np.linspace(0.0, 1.0, 101)
    dK = h.deriv(K)
    bound = 0.0
    for lam in w:
        vals = np.abs(dK(t * lam))
        bound = max(bound, abs(lam) ** K * float(np.max(vals)))
    bound /= factorial(K)
    return S, bound
