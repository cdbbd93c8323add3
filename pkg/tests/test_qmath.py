"""Closed-form root finding: principal square root, cubic, and 4x4 eigenvalues."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entdyn.qmath import (
    CubicRealCoeffs,
    csqrt_principal,
    eig4,
    solve_cubic,
)

finite_complex = st.complex_numbers(
    max_magnitude=1e8, allow_nan=False, allow_infinity=False
)
coeff = st.floats(
    min_value=-100.0, max_value=100.0, allow_nan=False, allow_infinity=False
)


def test_csqrt_real_positive():
    assert csqrt_principal(4.0 + 0.0j) == 2.0 + 0.0j


def test_csqrt_branch_convention():
    assert csqrt_principal(-1.0 + 0.0j) == 1.0j


def test_csqrt_negative_real_from_rate_combination():
    # (lambda)^2 - 2*gamma*lambda at gamma=1, lambda=0.1 is -0.19.
    w = csqrt_principal(-0.19 + 0.0j)
    assert abs(w - 1j * math.sqrt(0.19)) < 1e-15


def test_csqrt_negative_zero_imag_stays_on_upper_cut():
    w = csqrt_principal(complex(-4.0, -0.0))
    assert w == 2.0j


@given(finite_complex)
def test_csqrt_squares_back(z):
    w = csqrt_principal(z)
    assert abs(w * w - z) <= 1e-12 * max(1.0, abs(z))
    assert w.real >= 0.0
    if w.real == 0.0:
        assert w.imag >= 0.0


@given(finite_complex)
def test_csqrt_conjugation(z):
    if z.imag == 0.0:
        return
    assert csqrt_principal(z.conjugate()) == csqrt_principal(z).conjugate()


def test_cubic_factored_form():
    result = solve_cubic(CubicRealCoeffs(a2=0.0, a1=-1.0, a0=0.0))
    assert not result.degenerate
    roots = sorted(result.roots, key=lambda u: (u.real, u.imag))
    for got, want in zip(roots, (-1.0, 0.0, 1.0)):
        assert abs(got - want) < 1e-12


def test_cubic_trapped_mode_coefficients():
    # lambda1=50, lambda2=5, equal coupling strengths: one marginal root at 0,
    # the rest from the quadratic s^2 + 55 s + 272.5 by the usual formula.
    result = solve_cubic(CubicRealCoeffs(a2=55.0, a1=272.5, a0=0.0))
    assert not result.degenerate
    roots = sorted(result.roots, key=lambda u: (u.real, u.imag))
    disc = math.sqrt(55.0**2 - 4.0 * 272.5)
    assert abs(roots[0] - (-55.0 - disc) / 2.0) < 1e-12
    assert abs(roots[1] - (-55.0 + disc) / 2.0) < 1e-12
    assert roots[2] == 0.0
    assert roots[0].real < 0.0 and roots[1].real < 0.0


def test_cubic_cube_roots_of_eight():
    result = solve_cubic(CubicRealCoeffs(a2=0.0, a1=0.0, a0=-8.0))
    roots = sorted(result.roots, key=lambda u: (u.real, u.imag))
    s3 = math.sqrt(3.0)
    assert abs(roots[0] - complex(-1.0, -s3)) < 1e-12
    assert abs(roots[1] - complex(-1.0, s3)) < 1e-12
    assert abs(roots[2] - 2.0) < 1e-12


@pytest.mark.parametrize(
    "coeffs,flag",
    [
        (CubicRealCoeffs(0.0, -1.0, 0.0), False),
        # (s-1)^2 (s-2)
        (CubicRealCoeffs(-4.0, 5.0, -2.0), True),
        # (s+1)^3
        (CubicRealCoeffs(3.0, 3.0, 1.0), True),
    ],
)
def test_cubic_degenerate_flag(coeffs, flag):
    assert solve_cubic(coeffs).degenerate is flag


@given(coeff, coeff, coeff)
def test_cubic_residual_bound(a2, a1, a0):
    """Each returned root satisfies the polynomial to the stated tolerance."""
    cubic = CubicRealCoeffs(a2=a2, a1=a1, a0=a0)
    for u in solve_cubic(cubic).roots:
        residual = abs(u**3 + a2 * u**2 + a1 * u + a0)
        assert residual <= 1e-10 * max(1.0, abs(u)) ** 3


@given(coeff, coeff, coeff)
def test_cubic_vieta(a2, a1, a0):
    roots = solve_cubic(CubicRealCoeffs(a2=a2, a1=a1, a0=a0)).roots
    u1, u2, u3 = roots
    umax = max(1.0, max(abs(u) for u in roots))
    assert abs((u1 + u2 + u3) + a2) <= 1e-8 * max(umax, abs(a2))
    assert abs((u1 * u2 + u1 * u3 + u2 * u3) - a1) <= 1e-8 * max(umax**2, abs(a1), 1.0)
    assert abs(u1 * u2 * u3 + a0) <= 1e-8 * max(umax**3, abs(a0), 1.0)


@given(coeff, coeff, coeff)
def test_cubic_conjugation_closure(a2, a1, a0):
    """Real coefficients: the root multiset is closed under conjugation."""
    roots = list(solve_cubic(CubicRealCoeffs(a2=a2, a1=a1, a0=a0)).roots)
    umax = max(1.0, max(abs(u) for u in roots))
    for u in roots:
        assert any(abs(v - u.conjugate()) <= 1e-12 * umax for v in roots)


def test_eig4_identity():
    eigs = eig4(np.eye(4, dtype=complex))
    assert all(abs(e - 1.0) < 1e-10 for e in eigs)


def test_eig4_diagonal():
    eigs = eig4(np.diag([1.0, 2.0, 3.0, 4.0]).astype(complex))
    for got, want in zip(eigs, (1.0, 2.0, 3.0, 4.0)):
        assert abs(got - want) < 1e-9


def test_eig4_bell_projector_spin_flip_product():
    """Rank-1 projector times its own spin flip: spectrum {1, 0, 0, 0}."""
    rho = np.zeros((4, 4), dtype=complex)
    for i in (0, 3):
        for j in (0, 3):
            rho[i, j] = 0.5
    sy2 = np.zeros((4, 4))
    sy2[0, 3] = sy2[3, 0] = -1.0
    sy2[1, 2] = sy2[2, 1] = 1.0
    rho_tilde = sy2 @ rho.conj() @ sy2
    eigs = eig4(rho @ rho_tilde)
    ordered = sorted(eigs, key=lambda e: e.real)
    assert all(abs(e) < 1e-8 for e in ordered[:3])
    assert abs(ordered[3] - 1.0) < 1e-8


def test_eig4_jordan_block_quadruple_root():
    m = np.diag([1.0, 1.0, 1.0], k=1).astype(complex) + 2.0 * np.eye(4)
    eigs = eig4(m)
    assert all(abs(e - 2.0) < 1e-6 for e in eigs)


def test_eig4_random_hermitian_against_numpy():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = a + a.conj().T
        scale = max(1.0, np.linalg.norm(m))
        eigs = eig4(m)
        assert all(abs(e.imag) <= 1e-8 * scale for e in eigs)
        want = np.sort(np.linalg.eigvalsh(m))
        got = np.sort([e.real for e in eigs])
        assert np.max(np.abs(got - want)) <= 1e-8 * scale
        assert abs(sum(eigs) - np.trace(m)) <= 1e-8 * scale
        assert abs(np.prod(eigs) - np.linalg.det(m)) <= 1e-8 * scale**4


def test_eig4_random_complex_against_numpy():
    rng = np.random.default_rng(11)
    for _ in range(50):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        scale = max(1.0, np.linalg.norm(m))
        got = list(eig4(m))
        for want in np.linalg.eigvals(m):
            best = min(got, key=lambda e: abs(e - want))
            assert abs(best - want) <= 1e-7 * scale
            got.remove(best)


@pytest.mark.parametrize(
    "bad",
    [
        np.eye(3, dtype=complex),
        np.full((4, 4), np.nan, dtype=complex),
    ],
)
def test_eig4_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        eig4(bad)
