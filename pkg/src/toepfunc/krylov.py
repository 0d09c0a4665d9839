"""Preconditioned CG, MINRES, and full GMRES over operator contracts.

Conventions, fixed so iteration counts are reproducible:

  * initial guess is always the zero vector;
  * CG and MINRES test the TRUE (unpreconditioned) relative residual
    ||b - A x|| / ||b|| every iteration;
  * GMRES is unrestarted, left-preconditioned, and tests the
    preconditioned residual relative to ||M^{-1} b|| (the report also
    records the final true relative residual);
  * the iteration count is the first iteration at which the test passes.
"""

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "LinearOperator",
    "Preconditioner",
    "SolveReport",
    "IndefiniteOperatorError",
    "cg",
    "minres",
    "gmres",
    "REPORT_CSV_HEADER",
]

REPORT_CSV_HEADER = "method,preconditioner,n,m,iterations,converged,final_relres,seconds"


class IndefiniteOperatorError(RuntimeError):
    """CG hit nonpositive curvature: the operator or preconditioner is not HPD."""


class LinearOperator:
    """Square linear operator given by its dimension and an apply callback."""

    def __init__(self, n: int, matvec: Callable[[np.ndarray], np.ndarray]):
        self.n = n
        self._matvec = matvec

    @classmethod
    def from_dense(cls, A: np.ndarray) -> "LinearOperator":
        A = np.asarray(A, dtype=np.complex128)
        return cls(A.shape[0], lambda x: A @ x)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self._matvec(x)


class Preconditioner:
    """Preconditioner given by an apply-inverse callback.

    ``hpd`` declares that M is Hermitian positive definite (required for
    CG and MINRES).
    """

    def __init__(self, n: int, solve: Callable[[np.ndarray], np.ndarray],
                 hpd: bool = False, name: str = "custom"):
        self.n = n
        self._solve = solve
        self.hpd = hpd
        self.name = name

    def solve(self, x: np.ndarray) -> np.ndarray:
        return self._solve(x)


@dataclass
class SolveReport:
    """One solver run: one row of an iteration-count table."""

    method: str
    preconditioner: str
    n: int
    iterations: int
    residuals: list = field(default_factory=list, repr=False)
    converged: bool = False
    final_relres: float = np.nan
    seconds: float = 0.0
    m: Optional[int] = None
    true_final_relres: Optional[float] = None
    solution: Optional[np.ndarray] = field(default=None, repr=False)

    def csv_row(self) -> str:
        m = self.m if self.m is not None else ""
        return (f"{self.method},{self.preconditioner},{self.n},{m},"
                f"{self.iterations},{int(self.converged)},"
                f"{self.final_relres:.6e},{self.seconds:.4f}")


def _vdot(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.vdot(a, b))


def cg(A: LinearOperator, M: Optional[Preconditioner], b: np.ndarray,
       tol: float = 1e-7, maxit: Optional[int] = None) -> SolveReport:
    """Preconditioned conjugate gradients for HPD A (and HPD M)."""
    if M is not None and not M.hpd:
        raise ValueError("CG requires a Hermitian positive definite preconditioner")
    b = np.asarray(b, dtype=np.complex128)
    n = A.n
    if maxit is None:
        maxit = 10 * n
    nb = float(np.linalg.norm(b))
    if nb == 0.0:
        raise ValueError("right-hand side must be nonzero")
    t0 = time.perf_counter()
    x = np.zeros(n, dtype=np.complex128)
    r = b.copy()
    residuals = []
    rz_old = None
    p = None
    it = 0
    converged = False
    for it in range(1, maxit + 1):
        z = M.solve(r) if M is not None else r
        rz = _vdot(r, z).real
        if M is not None and rz <= 0.0:
            raise IndefiniteOperatorError(
                "preconditioner produced a nonpositive inner product")
        if p is None:
            p = z.copy()
        else:
            p = z + (rz / rz_old) * p
        Ap = A.apply(p)
        pAp = _vdot(p, Ap).real
        if pAp <= 0.0:
            raise IndefiniteOperatorError(
                "operator produced nonpositive curvature; CG requires HPD")
        alpha = rz / pAp
        x = x + alpha * p
        r = r - alpha * Ap
        relres = float(np.linalg.norm(r)) / nb
        residuals.append(relres)
        if relres < tol:
            converged = True
            break
        rz_old = rz
    seconds = time.perf_counter() - t0
    true_rel = float(np.linalg.norm(b - A.apply(x))) / nb
    return SolveReport(method="cg",
                       preconditioner=M.name if M is not None else "none",
                       n=n, iterations=it, residuals=residuals,
                       converged=converged, final_relres=residuals[-1],
                       seconds=seconds, true_final_relres=true_rel,
                       solution=x)


def minres(A: LinearOperator, M: Optional[Preconditioner], b: np.ndarray,
           tol: float = 1e-7, maxit: Optional[int] = None) -> SolveReport:
    """Preconditioned MINRES for Hermitian (possibly indefinite) A.

    Lanczos with M-inner products; the convergence test is on the true
    relative residual, evaluated explicitly each iteration.
    """
    if M is not None and not M.hpd:
        raise ValueError("MINRES requires a Hermitian positive definite preconditioner")
    b = np.asarray(b, dtype=np.complex128)
    n = A.n
    if maxit is None:
        maxit = 10 * n
    nb = float(np.linalg.norm(b))
    if nb == 0.0:
        raise ValueError("right-hand side must be nonzero")
    t0 = time.perf_counter()
    x = np.zeros(n, dtype=np.complex128)

    r1 = b.copy()
    y = M.solve(r1) if M is not None else r1
    beta1_sq = _vdot(r1, y).real
    if beta1_sq <= 0.0:
        raise IndefiniteOperatorError("preconditioner is not positive definite on b")
    beta1 = np.sqrt(beta1_sq)

    oldb = 0.0
    beta = beta1
    dbar = 0.0
    epsln = 0.0
    phibar = beta1
    cs = -1.0
    sn = 0.0
    w = np.zeros(n, dtype=np.complex128)
    w2 = np.zeros(n, dtype=np.complex128)
    r2 = r1
    residuals = []
    it = 0
    converged = False
    tiny = np.finfo(float).tiny
    for it in range(1, maxit + 1):
        v = y / beta
        y = A.apply(v)
        if it >= 2:
            y = y - (beta / oldb) * r1
        alfa = _vdot(v, y).real
        y = y - (alfa / beta) * r2
        r1 = r2
        r2 = y
        y = M.solve(r2) if M is not None else r2
        oldb = beta
        beta_sq = _vdot(r2, y).real
        if beta_sq < 0.0:
            raise IndefiniteOperatorError("preconditioner lost positive definiteness")
        beta = np.sqrt(beta_sq)

        oldeps = epsln
        delta = cs * dbar + sn * alfa
        gbar = sn * dbar - cs * alfa
        epsln = sn * beta
        dbar = -cs * beta
        gamma = max(np.hypot(gbar, beta), tiny)
        cs = gbar / gamma
        sn = beta / gamma
        phi = cs * phibar
        phibar = sn * phibar

        w1 = w2
        w2 = w
        w = (v - oldeps * w1 - delta * w2) / gamma
        x = x + phi * w

        relres = float(np.linalg.norm(b - A.apply(x))) / nb
        residuals.append(relres)
        if relres < tol:
            converged = True
            break
        if beta <= 1e-14 * beta1:
            # invariant subspace reached; the current x is the solution
            converged = relres < tol
            break
    seconds = time.perf_counter() - t0
    return SolveReport(method="minres",
                       preconditioner=M.name if M is not None else "none",
                       n=n, iterations=it, residuals=residuals,
                       converged=converged, final_relres=residuals[-1],
                       seconds=seconds, true_final_relres=residuals[-1],
                       solution=x)


def gmres(A: LinearOperator, M: Optional[Preconditioner], b: np.ndarray,
          tol: float = 1e-7, maxit: Optional[int] = None) -> SolveReport:
    """Full (unrestarted) left-preconditioned GMRES with MGS Arnoldi."""
    b = np.asarray(b, dtype=np.complex128)
    n = A.n
    if maxit is None:
        maxit = min(10 * n, n)
    maxit = min(maxit, n)
    nb = float(np.linalg.norm(b))
    if nb == 0.0:
        raise ValueError("right-hand side must be nonzero")
    t0 = time.perf_counter()

    r0 = M.solve(b) if M is not None else b
    nb_pre = float(np.linalg.norm(r0))
    if nb_pre == 0.0:
        raise ValueError("preconditioned right-hand side is zero")

    Q = np.zeros((maxit + 1, n), dtype=np.complex128)
    Q[0] = r0 / nb_pre
    H = np.zeros((maxit + 1, maxit), dtype=np.complex128)
    cs = np.zeros(maxit, dtype=np.complex128)
    sn = np.zeros(maxit, dtype=np.complex128)
    g = np.zeros(maxit + 1, dtype=np.complex128)
    g[0] = nb_pre

    residuals = []
    it = 0
    converged = False
    breakdown = False
    for k in range(maxit):
        it = k + 1
        wv = A.apply(Q[k])
        if M is not None:
            wv = M.solve(wv)
        for i in range(k + 1):
            H[i, k] = np.vdot(Q[i], wv)
            wv = wv - H[i, k] * Q[i]
        hnext = float(np.linalg.norm(wv))
        H[k + 1, k] = hnext
        if hnext > 1e-14 * nb_pre:
            Q[k + 1] = wv / hnext
        else:
            breakdown = True
        # apply stored Givens rotations, then generate a new one
        for i in range(k):
            temp = cs[i] * H[i, k] + sn[i] * H[i + 1, k]
            H[i + 1, k] = -np.conj(sn[i]) * H[i, k] + np.conj(cs[i]) * H[i + 1, k]
            H[i, k] = temp
        # new Givens rotation zeroing H[k+1, k] (real c, complex s)
        denom = np.hypot(abs(H[k, k]), abs(H[k + 1, k]))
        if denom == 0.0:
            cs[k], sn[k] = 1.0, 0.0
        elif abs(H[k, k]) == 0.0:
            cs[k], sn[k] = 0.0, 1.0
        else:
            cs[k] = abs(H[k, k]) / denom
            sn[k] = (H[k, k] / abs(H[k, k])) * np.conj(H[k + 1, k]) / denom
        temp = cs[k] * H[k, k] + sn[k] * H[k + 1, k]
        H[k + 1, k] = -np.conj(sn[k]) * H[k, k] + np.conj(cs[k]) * H[k + 1, k]
        H[k, k] = temp
        g[k + 1] = -np.conj(sn[k]) * g[k]
        g[k] = cs[k] * g[k]
        relres = abs(g[k + 1]) / nb_pre
        residuals.append(relres)
        if relres < tol or breakdown:
            converged = relres < tol or breakdown
            break
    # solve the triangular system and assemble x
    k = it
    yk = np.linalg.solve(H[:k, :k], g[:k]) if k > 0 else np.zeros(0)
    x = Q[:k].T @ yk
    seconds = time.perf_counter() - t0
    true_rel = float(np.linalg.norm(b - A.apply(x))) / nb
    return SolveReport(method="gmres",
                       preconditioner=M.name if M is not None else "none",
                       n=n, iterations=it, residuals=residuals,
                       converged=converged, final_relres=residuals[-1],
                       seconds=seconds, true_final_relres=true_rel,
                       solution=x)
