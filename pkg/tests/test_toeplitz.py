"""Toeplitz construction, coefficients, and fast matvec vs dense oracles."""

import numpy as np
import pytest

from toepfunc.toeplitz import (GeneratingFunction1D, ToeplitzMatrix,
                               builtin_wiener_function,
                               coefficients_from_csv,
                               coefficients_from_quadrature,
                               coefficients_to_csv, toeplitz_from_function,
                               toeplitz_matvec, toeplitz_to_dense,
                               two_norm_estimate)

RNG = np.random.default_rng(20240812)


def random_hermitian_toeplitz(n, rng=RNG):
    pos = rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1) \
        if n > 1 else np.zeros(0)
    a0 = rng.standard_normal()
    coeffs = np.concatenate([np.conj(pos[::-1]), [a0], pos])
    return ToeplitzMatrix(n=n, coeffs=coeffs)


def tridiagonal_function():
    table = {0: 2.0, 1: -1.0, -1: -1.0}
    return GeneratingFunction1D(coeff=lambda k: table.get(k, 0.0),
                                hermitian=True, name="laplace1d")


# --- builtin generating function ------------------------------------------

def test_builtin_a0():
    g = builtin_wiener_function()
    assert g.coeff(0) == 2.0


def test_builtin_a1_closed_form():
    g = builtin_wiener_function()
    assert abs(g.coeff(1) - (1.0 - 1.0j) / 2.0 ** 1.1) < 1e-15


def test_builtin_hermitian_symmetry():
    g = builtin_wiener_function()
    assert g.hermitian
    for k in (1, 2, 3, 17):
        assert g.coeff(-k) == np.conj(g.coeff(k))


def test_builtin_wiener_summability():
    # absolute summability proxy: the tail of sum |a_k| is already tiny
    g = builtin_wiener_function()
    tail = sum(abs(g.coeff(k)) for k in range(2000, 4000))
    assert tail < 0.05 * sum(abs(g.coeff(k)) for k in range(0, 2000))


# --- quadrature -----------------------------------------------------------

def test_quadrature_constant_function():
    g = coefficients_from_quadrature(lambda x: np.ones_like(x), 4, 64)
    assert abs(g.coeff(0) - 1.0) < 1e-12
    for k in (1, 2, -3, 4):
        assert abs(g.coeff(k)) < 1e-12


def test_quadrature_pure_cosine():
    g = coefficients_from_quadrature(lambda x: 2.0 * np.cos(x), 3, 256)
    assert abs(g.coeff(1) - 1.0) < 1e-10
    assert abs(g.coeff(-1) - 1.0) < 1e-10
    for k in (0, 2, 3):
        if k != 1:
            assert abs(g.coeff(k)) < 1e-10


def test_quadrature_recovers_builtin_coefficients():
    exact = builtin_wiener_function()
    kmax = 8
    terms = 2000
    k = np.arange(terms)
    w = (1.0 + k) ** -1.1

    def f(x):
        # partial sum of the builtin symbol; 2000 terms keep aliasing below 1e-8
        return float(2.0 * np.sum(w * (np.sin(k * x) + np.cos(k * x))))

    g = coefficients_from_quadrature(f, kmax, 4096)
    for k in range(-kmax, kmax + 1):
        assert abs(g.coeff(k) - exact.coeff(k)) < 1e-8


def test_quadrature_rejects_negative_kmax():
    with pytest.raises(ValueError):
        coefficients_from_quadrature(lambda x: np.ones_like(x), -1, 64)


# --- matrix construction --------------------------------------------------

def test_tridiagonal_dense():
    A = toeplitz_from_function(tridiagonal_function(), 4)
    expected = np.array([[2, -1, 0, 0],
                         [-1, 2, -1, 0],
                         [0, -1, 2, -1],
                         [0, 0, -1, 2]], dtype=complex)
    np.testing.assert_allclose(toeplitz_to_dense(A), expected, atol=0)


def test_builtin_n2_dense():
    A = toeplitz_from_function(builtin_wiener_function(), 2)
    a1 = (1.0 - 1.0j) / 2.0 ** 1.1
    expected = np.array([[2.0, np.conj(a1)], [a1, 2.0]])
    np.testing.assert_allclose(toeplitz_to_dense(A), expected, atol=1e-15)


def test_n1_dense_is_a0():
    A = toeplitz_from_function(builtin_wiener_function(), 1)
    np.testing.assert_allclose(toeplitz_to_dense(A), [[2.0]], atol=0)


def test_rejects_non_hermitian_provider():
    g = GeneratingFunction1D(coeff=lambda k: float(k), hermitian=False)
    with pytest.raises(ValueError):
        toeplitz_from_function(g, 4)


@pytest.mark.parametrize("n", [2, 5, 16])
def test_dense_is_exactly_hermitian_and_toeplitz(n):
    A = random_hermitian_toeplitz(n)
    D = toeplitz_to_dense(A)
    assert np.linalg.norm(D - D.conj().T) == 0.0
    # constant along diagonals
    assert np.all(D[:-1, :-1] == D[1:, 1:])


# --- fast matvec ----------------------------------------------------------

def test_matvec_identity():
    A = ToeplitzMatrix(n=4, coeffs=np.array([0, 0, 0, 1, 0, 0, 0], dtype=complex))
    x = RNG.standard_normal(4) + 1j * RNG.standard_normal(4)
    np.testing.assert_allclose(toeplitz_matvec(A, x), x, atol=1e-13)


def test_matvec_tridiagonal_row_sums():
    A = toeplitz_from_function(tridiagonal_function(), 4)
    y = toeplitz_matvec(A, np.ones(4))
    np.testing.assert_allclose(y, [1, 0, 0, 1], atol=1e-13)


@pytest.mark.parametrize("n", [1, 2, 7, 33, 64, 257])
def test_matvec_matches_dense(n):
    A = random_hermitian_toeplitz(n)
    D = toeplitz_to_dense(A)
    x = RNG.standard_normal(n) + 1j * RNG.standard_normal(n)
    y = toeplitz_matvec(A, x)
    ref = D @ x
    assert np.linalg.norm(y - ref) <= 1e-11 * max(np.linalg.norm(ref), 1.0)


def test_matvec_dimension_mismatch():
    A = random_hermitian_toeplitz(5)
    with pytest.raises(ValueError):
        toeplitz_matvec(A, np.ones(4))


def test_norm_estimate_bounded_by_symbol_max():
    g = builtin_wiener_function()
    for n in (64, 256):
        A = toeplitz_from_function(g, n)
        assert two_norm_estimate(A) <= g.f_max + 1e-6


# --- CSV round trip -------------------------------------------------------

def test_coefficient_csv_roundtrip(tmp_path):
    g = builtin_wiener_function()
    path = tmp_path / "coeffs.csv"
    coefficients_to_csv(g, 12, path)
    g2 = coefficients_from_csv(path)
    assert g2.hermitian
    for k in range(-12, 13):
        assert abs(g2.coeff(k) - g.coeff(k)) < 1e-14
