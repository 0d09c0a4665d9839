"""Circulant preconditioning for functions of Hermitian Toeplitz matrices.

Builds Hermitian Toeplitz / block-Toeplitz matrices from generating
functions, computes analytic matrix functions h(A), constructs Strang,
optimal, and superoptimal circulant (and optimal BCCB) preconditioners
and their absolute-value variants, and solves the resulting systems
with preconditioned CG, MINRES, and GMRES.
"""

from .bttb import (BccbMatrix, BttbMatrix, GeneratingFunction2D, abs_bccb,
                   bccb_function, bccb_matvec, bccb_solve, bccb_to_dense,
                   bttb_from_function, bttb_matvec, bttb_to_dense,
                   builtin_bttb_function, optimal_bccb_preconditioner)
from .circulant import (CirculantMatrix, SingularCirculantError, abs_circulant,
                        circulant_function, circulant_matvec, circulant_solve,
                        circulant_to_dense, optimal_preconditioner,
                        optimal_projection_dense, strang_preconditioner,
                        superoptimal_preconditioner)
from .dft import dft2_forward, dft2_inverse, dft_forward, dft_inverse
from .experiments import (ExperimentConfig, bench_table, clustering_trend,
                          run_solve, run_spectrum)
from .krylov import (IndefiniteOperatorError, LinearOperator, Preconditioner,
                     SolveReport, cg, gmres, minres)
from .matfunc import (COS, CUBIC, EXP, IDENTITY, SINH, DomainError,
                      EigenDecomposition, ScalarFunction, hermitian_eig,
                      matrix_function, polynomial_function, taylor_function,
                      taylor_matrix_function)
from .spectrum import (ClusterReport, cluster_count, make_cluster_report,
                       preconditioned_spectrum)
from .toeplitz import (GeneratingFunction1D, ToeplitzMatrix,
                       builtin_wiener_function, coefficients_from_quadrature,
                       toeplitz_from_function, toeplitz_matvec,
                       toeplitz_to_dense)

__version__ = "0.1.0"
