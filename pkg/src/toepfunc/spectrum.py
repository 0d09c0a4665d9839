"""Eigenvalue clustering diagnostics for preconditioned operators.

The preconditioned spectrum is computed from the Hermitian similarity
transform M^{-1/2} h(A) M^{-1/2} (same eigenvalues as M^{-1} h(A)),
where M^{+-1/2} comes from the circulant/BCCB eigenvalues.  A cluster
report counts eigenvalues outside both the epsilon-ball around +1 and
the one around -1.
"""

import os
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .bttb import BccbMatrix, bccb_to_dense
from .circulant import CirculantMatrix, circulant_to_dense
from .matfunc import hermitian_eig, require_hermitian

__all__ = [
    "ClusterReport",
    "preconditioned_spectrum",
    "cluster_count",
    "make_cluster_report",
    "write_reports_csv",
    "write_eigenvalues_csv",
    "plot_spectrum_svg",
    "REPORT_CSV_HEADER",
]

REPORT_CSV_HEADER = "n,m,function,preconditioner,epsilon,outliers,min_eig,max_eig"


@dataclass
class ClusterReport:
    """Clustering diagnostics for one preconditioned operator."""

    n: int
    function: str
    preconditioner: str
    epsilon: float
    eigenvalues: np.ndarray = field(repr=False)
    outlier_count: int = 0
    min_eig: float = np.nan
    max_eig: float = np.nan
    m: Optional[int] = None

    def csv_row(self) -> str:
        m = self.m if self.m is not None else ""
        return (f"{self.n},{m},{self.function},{self.preconditioner},"
                f"{self.epsilon},{self.outlier_count},"
                f"{self.min_eig:.10e},{self.max_eig:.10e}")


def _inv_sqrt_dense(M: Union[CirculantMatrix, BccbMatrix, None]) -> Optional[np.ndarray]:
    if M is None:
        return None
    eigs = M.eigs
    scale = max(float(np.abs(eigs).max()), 1.0)
    if np.abs(eigs.imag).max() > 1e-10 * scale or np.any(eigs.real <= 0):
        raise ValueError("preconditioner must be Hermitian positive definite")
    inv_sqrt = (eigs.real ** -0.5).astype(np.complex128)
    if isinstance(M, CirculantMatrix):
        return circulant_to_dense(CirculantMatrix(eigs=inv_sqrt))
    return bccb_to_dense(BccbMatrix(M.n, M.m, eigs=inv_sqrt))


def preconditioned_spectrum(hA: np.ndarray,
                            M: Union[CirculantMatrix, BccbMatrix, None]) -> np.ndarray:
    """Ascending eigenvalues of M^{-1/2} hA M^{-1/2} (equal to those of M^{-1} hA)."""
    hA = require_hermitian(hA)
    Mi = _inv_sqrt_dense(M)
    if Mi is None:
        H = hA
    else:
        if Mi.shape != hA.shape:
            raise ValueError("dimension mismatch between operator and preconditioner")
        H = Mi @ hA @ Mi
        H = 0.5 * (H + H.conj().T)
    w, _ = hermitian_eig(H)
    return w


def cluster_count(eigs: np.ndarray, epsilon: float) -> int:
    """Number of eigenvalues outside both epsilon-balls around +1 and -1."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    eigs = np.asarray(eigs, dtype=float)
    outside = (np.abs(eigs - 1.0) > epsilon) & (np.abs(eigs + 1.0) > epsilon)
    return int(np.count_nonzero(outside))


def make_cluster_report(eigs: np.ndarray, epsilon: float, *, n: int,
                        function: str, preconditioner: str,
                        m: Optional[int] = None) -> ClusterReport:
    eigs = np.sort(np.asarray(eigs, dtype=float))
    return ClusterReport(
        n=n, m=m, function=function, preconditioner=preconditioner,
        epsilon=epsilon, eigenvalues=eigs,
        outlier_count=cluster_count(eigs, epsilon),
        min_eig=float(eigs.min()), max_eig=float(eigs.max()))


def write_reports_csv(reports: Sequence[ClusterReport], path) -> None:
    with open(path, "w") as fh:
        fh.write(REPORT_CSV_HEADER + "\n")
        for rep in reports:
            fh.write(rep.csv_row() + "\n")


def write_eigenvalues_csv(report: ClusterReport, path) -> None:
    """One eigenvalue per row: index, value."""
    with open(path, "w") as fh:
        fh.write("index,value\n")
        for i, v in enumerate(report.eigenvalues):
            fh.write(f"{i},{v:.17g}\n")


def plot_spectrum_svg(report: ClusterReport, path) -> None:
    """Scatter plot of eigenvalue index vs value, written as SVG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.arange(len(report.eigenvalues)), report.eigenvalues,
            linestyle="none", marker="o", markersize=3)
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    label = f"n={report.n}" if report.m is None else f"(n,m)=({report.n},{report.m})"
    ax.set_title(f"{report.function}, precond {report.preconditioner}, {label}")
    fig.tight_layout()
    root, ext = os.path.splitext(str(path))
    if ext.lower() != ".svg":
        path = root + ".svg"
    fig.savefig(path, format="svg")
    plt.close(fig)
