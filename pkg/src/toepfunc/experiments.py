"""Experiment configuration and the pipelines behind the CLI.

Everything here is deterministic: the system matrix h(A) is formed
densely once per (function, generator, size), the preconditioner is
built from the structured matrix, and the chosen Krylov method runs
with the all-ones right-hand side and zero initial guess.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import bttb as bt
from . import circulant as ci
from .krylov import LinearOperator, Preconditioner, SolveReport, cg, gmres, minres
from .matfunc import COS, CUBIC, EXP, IDENTITY, SINH, ScalarFunction, matrix_function, taylor_function
from .spectrum import ClusterReport, make_cluster_report, preconditioned_spectrum
from .toeplitz import (ToeplitzMatrix, builtin_wiener_function,
                       coefficients_from_csv, toeplitz_from_function,
                       toeplitz_to_dense)

__all__ = [
    "ExperimentConfig",
    "ConfigError",
    "parse_function",
    "validate_config",
    "run_solve",
    "run_spectrum",
    "clustering_trend",
    "bench_table",
    "TABLE_SIZES_1D",
    "TABLE_SIZES_2D",
    "PRECONDITIONERS_1D",
    "PRECONDITIONERS_2D",
]

TABLE_SIZES_1D = (128, 256, 512, 1024)
TABLE_SIZES_2D = ((16, 8), (16, 16), (32, 16), (32, 32))

_NAMED_FUNCTIONS = {
    "exp": EXP,
    "cos": COS,
    "sinh": SINH,
    "cubic": CUBIC,
    "identity": IDENTITY,
}

PRECONDITIONERS_1D = ("none", "strang", "optimal", "superoptimal",
                      "strang-abs", "optimal-abs", "superoptimal-abs")
PRECONDITIONERS_2D = ("none", "bccb-optimal", "bccb-optimal-abs")

# functions for which h(A) is HPD when A is HPD (CG-eligible)
_HPD_FUNCTIONS = {"exp", "sinh", "cubic", "identity"}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    """One solver run: function, generator, size, preconditioner, method."""

    func: str = "exp"
    generator: str = "builtin1d"
    n: int = 128
    m: Optional[int] = None
    precond: str = "none"
    method: str = "cg"
    tol: float = 1e-7
    maxit: Optional[int] = None
    coeff_file: Optional[str] = None

    @property
    def is_2d(self) -> bool:
        return self.generator == "builtin2d" or self.m is not None


def parse_function(spec: str) -> ScalarFunction:
    """Resolve a function id: a named function or ``taylor:PATH``.

    A Taylor file holds a ``radius=R`` line followed by ``k,re,im`` rows.
    """
    if spec in _NAMED_FUNCTIONS:
        return _NAMED_FUNCTIONS[spec]
    if spec.startswith("taylor:"):
        path = spec.split(":", 1)[1]
        radius = None
        table: dict[int, complex] = {}
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.lower().startswith("k,"):
                    continue
                if line.startswith("radius="):
                    radius = float(line.split("=", 1)[1])
                    continue
                k_s, re_s, im_s = line.split(",")
                table[int(k_s)] = complex(float(re_s), float(im_s))
        if radius is None:
            raise ConfigError(f"taylor file {path} is missing a 'radius=' line")
        kmax = max(table) if table else 0
        coeffs = [table.get(k, 0.0) for k in range(kmax + 1)]
        return taylor_function(coeffs, radius)
    raise ConfigError(
        f"unknown function {spec!r}; expected one of "
        f"{sorted(_NAMED_FUNCTIONS)} or taylor:PATH")


def validate_config(config: ExperimentConfig) -> None:
    """Raise ConfigError with an actionable message on any invalid combination."""
    if config.method not in ("cg", "minres", "gmres"):
        raise ConfigError(f"unknown method {config.method!r}")
    if config.generator not in ("builtin1d", "builtin2d", "coeff-file"):
        raise ConfigError(f"unknown generator {config.generator!r}")
    if config.generator == "coeff-file" and not config.coeff_file:
        raise ConfigError("generator 'coeff-file' requires --coeff-file")
    base_func = config.func.split(":", 1)[0]
    if base_func not in _NAMED_FUNCTIONS and base_func != "taylor":
        raise ConfigError(f"unknown function {config.func!r}")
    if config.n < 1 or (config.m is not None and config.m < 1):
        raise ConfigError("dimensions must be >= 1")
    if config.is_2d:
        if config.generator == "builtin1d":
            raise ConfigError("an inner dimension m was given with a 1D generator")
        if config.m is None:
            raise ConfigError("2D experiments need --m")
        if config.precond not in PRECONDITIONERS_2D:
            raise ConfigError(
                f"preconditioner {config.precond!r} is not valid for 2D systems; "
                f"choose from {PRECONDITIONERS_2D}")
    else:
        if config.precond not in PRECONDITIONERS_1D:
            raise ConfigError(
                f"preconditioner {config.precond!r} is not valid for 1D systems; "
                f"choose from {PRECONDITIONERS_1D}")
    if config.method == "cg" and base_func not in _HPD_FUNCTIONS:
        raise ConfigError(
            f"cg requires h(A) Hermitian positive definite; {config.func!r} "
            f"is indefinite on this problem class, use minres instead")
    if config.tol <= 0:
        raise ConfigError("tolerance must be positive")


def _generating_function_1d(config: ExperimentConfig):
    if config.generator == "builtin1d":
        return builtin_wiener_function()
    if config.generator == "coeff-file":
        return coefficients_from_csv(config.coeff_file)
    raise ConfigError(f"generator {config.generator!r} is not 1D")


def _generating_function_2d(config: ExperimentConfig):
    if config.generator == "builtin2d":
        return bt.builtin_bttb_function()
    if config.generator == "coeff-file":
        return bt.coefficients2d_from_csv(config.coeff_file)
    raise ConfigError(f"generator {config.generator!r} is not 2D")


# Dense h(A) is the expensive piece; cache it per (function, generator, size).
_SYSTEM_CACHE: dict[tuple, np.ndarray] = {}


def _dense_system_1d(config: ExperimentConfig, h: ScalarFunction) -> tuple[ToeplitzMatrix, np.ndarray]:
    g = _generating_function_1d(config)
    A = toeplitz_from_function(g, config.n)
    key = ("1d", config.func, config.generator, config.coeff_file, config.n)
    hA = _SYSTEM_CACHE.get(key)
    if hA is None:
        hA = matrix_function(toeplitz_to_dense(A), h)
        _SYSTEM_CACHE[key] = hA
    return A, hA


def _dense_system_2d(config: ExperimentConfig, h: ScalarFunction) -> tuple[bt.BttbMatrix, np.ndarray]:
    g = _generating_function_2d(config)
    A = bt.bttb_from_function(g, config.n, config.m)
    key = ("2d", config.func, config.generator, config.coeff_file, config.n, config.m)
    hA = _SYSTEM_CACHE.get(key)
    if hA is None:
        hA = matrix_function(bt.bttb_to_dense(A), h)
        _SYSTEM_CACHE[key] = hA
    return A, hA


def _base_circulant_1d(A: ToeplitzMatrix, precond: str) -> ci.CirculantMatrix:
    base = precond.removesuffix("-abs")
    if base == "strang":
        return ci.strang_preconditioner(A)
    if base == "optimal":
        return ci.optimal_preconditioner(A)
    if base == "superoptimal":
        return ci.superoptimal_preconditioner(A)
    raise ConfigError(f"unknown preconditioner {precond!r}")


def build_preconditioner_1d(A: ToeplitzMatrix, precond: str,
                            h: ScalarFunction) -> tuple[Optional[Preconditioner],
                                                        Optional[ci.CirculantMatrix]]:
    """(Preconditioner for the solver, the circulant h-or-|h| matrix)."""
    if precond == "none":
        return None, None
    C = ci.circulant_function(_base_circulant_1d(A, precond), h)
    if precond.endswith("-abs"):
        C = ci.abs_circulant(C)
    hpd = bool(C.is_hermitian and not C.is_singular and np.all(C.eigs.real > 0))
    M = Preconditioner(A.n, lambda x: ci.circulant_solve(C, x), hpd=hpd,
                       name=precond)
    return M, C


def build_preconditioner_2d(A: bt.BttbMatrix, precond: str,
                            h: ScalarFunction) -> tuple[Optional[Preconditioner],
                                                        Optional[bt.BccbMatrix]]:
    if precond == "none":
        return None, None
    C = bt.bccb_function(bt.optimal_bccb_preconditioner(A), h)
    if precond.endswith("-abs"):
        C = bt.abs_bccb(C)
    hpd = bool(C.is_hermitian and not C.is_singular and np.all(C.eigs.real > 0))
    M = Preconditioner(A.size, lambda x: bt.bccb_solve(C, x), hpd=hpd,
                       name=precond)
    return M, C


_SOLVERS = {"cg": cg, "minres": minres, "gmres": gmres}


def run_solve(config: ExperimentConfig) -> SolveReport:
    """Build the system per the config and run the chosen Krylov method."""
    validate_config(config)
    h = parse_function(config.func)
    if config.is_2d:
        A2, hA = _dense_system_2d(config, h)
        M, _ = build_preconditioner_2d(A2, config.precond, h)
        size = A2.size
    else:
        A1, hA = _dense_system_1d(config, h)
        M, _ = build_preconditioner_1d(A1, config.precond, h)
        size = A1.n
    op = LinearOperator.from_dense(hA)
    b = np.ones(size, dtype=np.complex128)
    report = _SOLVERS[config.method](op, M, b, tol=config.tol, maxit=config.maxit)
    report.n = config.n
    report.m = config.m
    return report


def run_spectrum(config: ExperimentConfig, epsilon: float = 0.1) -> ClusterReport:
    """Cluster report for the configured (function, preconditioner, size)."""
    validate_config(config)
    h = parse_function(config.func)
    if config.is_2d:
        A2, hA = _dense_system_2d(config, h)
        _, C = build_preconditioner_2d(A2, config.precond, h)
    else:
        A1, hA = _dense_system_1d(config, h)
        _, C = build_preconditioner_1d(A1, config.precond, h)
    eigs = preconditioned_spectrum(hA, C)
    return make_cluster_report(eigs, epsilon, n=config.n, m=config.m,
                               function=config.func,
                               preconditioner=config.precond)


def clustering_trend(func: str, precond: str, sizes: Sequence,
                     epsilon: float = 0.1,
                     generator: Optional[str] = None) -> list[ClusterReport]:
    """One cluster report per size (1D sizes are ints, 2D sizes (n, m) pairs)."""
    reports = []
    for size in sizes:
        if isinstance(size, (tuple, list)):
            n, m = size
            config = ExperimentConfig(func=func, generator=generator or "builtin2d",
                                      n=n, m=m, precond=precond, method="minres")
        else:
            config = ExperimentConfig(func=func, generator=generator or "builtin1d",
                                      n=size, precond=precond, method="minres")
        reports.append(run_spectrum(config, epsilon=epsilon))
    return reports


# (caption, function, part-(a) method with abs preconditioners, sizes)
_TABLE_SPECS = {
    1: ("exp", "cg"),
    2: ("cos", "minres"),
    3: ("sinh", "cg"),
    4: ("cubic", "cg"),
}


def bench_table(table_id: int, tol: float = 1e-7) -> list[SolveReport]:
    """Run every cell of one of the five iteration-count tables.

    Tables 1-4: part (a) is CG or MINRES with no preconditioner and the
    absolute-value superoptimal/Strang variants; part (b) is GMRES with
    no preconditioner and the plain (non-absolute) variants.  Table 5 is
    the 2D system with the optimal BCCB variants.
    """
    reports: list[SolveReport] = []
    if table_id in _TABLE_SPECS:
        func, method_a = _TABLE_SPECS[table_id]
        for n in TABLE_SIZES_1D:
            for precond in ("none", "superoptimal-abs", "strang-abs"):
                reports.append(run_solve(ExperimentConfig(
                    func=func, n=n, precond=precond, method=method_a, tol=tol)))
            for precond in ("none", "superoptimal", "strang"):
                reports.append(run_solve(ExperimentConfig(
                    func=func, n=n, precond=precond, method="gmres", tol=tol)))
    elif table_id == 5:
        for n, m in TABLE_SIZES_2D:
            for precond in ("none", "bccb-optimal-abs"):
                reports.append(run_solve(ExperimentConfig(
                    func="exp", generator="builtin2d", n=n, m=m,
                    precond=precond, method="minres", tol=tol)))
            for precond in ("none", "bccb-optimal"):
                reports.append(run_solve(ExperimentConfig(
                    func="exp", generator="builtin2d", n=n, m=m,
                    precond=precond, method="gmres", tol=tol)))
    else:
        raise ConfigError(f"unknown table id {table_id}; expected 1-5")
    return reports
