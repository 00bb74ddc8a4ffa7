import numpy as np
import pytest

from rankfill.errors import ShapeMismatchError
from rankfill.image_core import (
    build_denominator,
    d1,
    d2,
    div_adjoint,
    grad,
    reshape_bands,
    spectral_solve,
    split_bands,
)


def test_d1_wraparound_row():
    out = d1(np.array([[1.0, 2.0, 4.0]]))
    assert np.array_equal(out, [[1.0, 2.0, -3.0]])


def test_d2_wraparound_column():
    out = d2(np.array([[1.0], [2.0], [4.0]]))
    assert np.array_equal(out, [[1.0], [2.0], [-3.0]])


def test_differences_of_constant_vanish():
    c = np.full((5, 7), 3.25)
    assert np.all(d1(c) == 0.0)
    assert np.all(d2(c) == 0.0)


def test_single_pixel_self_wraps():
    one = np.array([[4.0]])
    assert d1(one) == 0.0
    assert d2(one) == 0.0
    assert np.all(grad(one) == 0.0)


def test_d2_is_transposed_d1():
    u = np.arange(20, dtype=float).reshape(4, 5) ** 1.5
    assert np.allclose(d2(u.T), d1(u).T)


def test_grad_of_column_ramp():
    u = np.tile(np.arange(6.0), (4, 1))
    g = grad(u)
    assert np.allclose(g[0][:, :-1], 1.0)
    assert np.allclose(g[0][:, -1], 1.0 - 6)
    assert np.allclose(g[1], 0.0)


def test_div_adjoint_of_zero_field():
    assert np.all(div_adjoint(np.zeros((2, 3, 4))) == 0.0)


@pytest.mark.parametrize("shape", [(3, 3), (5, 4), (8, 8)])
def test_adjointness_identity(shape, rng):
    for _ in range(100):
        u = rng.standard_normal(shape)
        m = rng.standard_normal((2,) + shape)
        lhs = np.sum(grad(u) * m)
        rhs = np.sum(u * div_adjoint(m))
        bound = 1e-12 * np.linalg.norm(u) * np.linalg.norm(m)
        assert abs(lhs - rhs) <= max(bound, 1e-14)


def test_div_adjoint_of_grad_is_periodic_laplacian(rng):
    u = rng.standard_normal((6, 9))
    lap = div_adjoint(grad(u))
    expected = (
        4.0 * u
        - np.roll(u, 1, axis=0)
        - np.roll(u, -1, axis=0)
        - np.roll(u, 1, axis=1)
        - np.roll(u, -1, axis=1)
    )
    assert np.allclose(lap, expected)


def test_difference_columns_and_rows_telescope(rng):
    u = rng.standard_normal((7, 5))
    assert np.allclose(d1(u).sum(axis=1), 0.0)
    assert np.allclose(d2(u).sum(axis=0), 0.0)


def test_denominator_zero_frequency_and_corner():
    den = build_denominator(2, 2, lam=1.0, beta1=1.0)
    assert den[0, 0] == 1.0
    assert den[1, 1] == pytest.approx(9.0)  # 1 + 4 + 4


def test_denominator_lower_bound(rng):
    lam = 0.7
    den = build_denominator(9, 13, lam=lam, beta1=2.0)
    assert np.all(den >= lam)


def test_denominator_rejects_empty():
    with pytest.raises(ValueError):
        build_denominator(0, 4, 1.0, 1.0)


def test_fourier_eigenvalue_of_row_shift():
    # applying d2 to a DFT basis column scales it by exp(2i*pi*k/n) - 1
    n = 8
    for k in range(n):
        v = np.exp(2j * np.pi * k * np.arange(n) / n)
        col = np.real(v)[:, None], np.imag(v)[:, None]
        out = d2(col[0]) + 1j * d2(col[1])
        eig = np.exp(2j * np.pi * k / n) - 1.0
        assert np.allclose(out[:, 0], eig * v, atol=1e-12)
        assert abs(abs(eig) ** 2 - 4.0 * np.sin(np.pi * k / n) ** 2) <= 1e-12


def test_spectral_solve_constant():
    lam = 2.5
    den = build_denominator(4, 4, lam, 1.3)
    r = np.full((4, 4), lam * 0.8)
    assert np.allclose(spectral_solve(r, den), 0.8)


def test_spectral_solve_single_pixel():
    den = build_denominator(1, 1, 2.0, 1.0)
    assert np.allclose(spectral_solve(np.array([[6.0]]), den), [[3.0]])


def test_spectral_solve_residual_oracle(rng):
    # residual measured through the difference operators, independent of FFT
    for _ in range(50):
        n1, n2 = rng.integers(2, 65, size=2)
        lam, beta1 = rng.uniform(0.1, 10.0, size=2)
        r = rng.standard_normal((n1, n2))
        u = spectral_solve(r, build_denominator(n1, n2, lam, beta1))
        residual = lam * u + beta1 * div_adjoint(grad(u)) - r
        assert np.linalg.norm(residual) <= 1e-10 * np.linalg.norm(r)


def test_spectral_solve_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        spectral_solve(np.zeros((3, 3)), build_denominator(4, 4, 1.0, 1.0))


def test_reshape_bands_round_trip(rng):
    stack = rng.random((3, 2, 2))
    flat = reshape_bands(stack)
    assert flat.shape == (2, 6)
    assert np.array_equal(split_bands(flat, 3), stack)


def test_reshape_bands_full_size():
    stack = np.zeros((3, 256, 256))
    assert reshape_bands(stack).shape == (256, 768)


def test_reshape_single_band_unchanged(rng):
    band = rng.random((4, 5))
    assert np.array_equal(reshape_bands([band]), band)


def test_reshape_rejects_bad_stacks():
    with pytest.raises(ValueError):
        reshape_bands([])
    with pytest.raises(ShapeMismatchError):
        reshape_bands([np.zeros((2, 2)), np.zeros((3, 2))])
