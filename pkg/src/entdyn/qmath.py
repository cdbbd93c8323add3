"""Closed-form polynomial and small-matrix eigenvalue routines.

Everything in this module is plain floating point on python complex
scalars and 4x4 numpy arrays; nothing here knows about physics. Closed
forms (Cardano, Ferrari) give cheap root seeds but lose digits near
root collisions, so every seed gets a Newton polish on the original
polynomial. Tolerances are hybrid absolute-relative, tol * max(1, scale),
because callers feed in rates spanning several orders of magnitude.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

_THIRD = 1.0 / 3.0
_OMEGA = complex(-0.5, 0.5 * math.sqrt(3.0))  # primitive cube root of unity

# two roots closer than this, relative to the largest root, count as repeated
DEGENERATE_REL_TOL = 1e-8


class ConvergenceFailure(ArithmeticError):
    """Newton polishing failed to reach the requested residual."""


def csqrt_principal(z) -> complex:
    """Square root with Re >= 0, and Im >= 0 on the Re = 0 ray.

    The second rule fixes the sign on the branch cut, so conjugate
    inputs map to conjugate-or-equal outputs and downstream partial
    fraction coefficients are reproducible.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"csqrt_principal needs a finite argument, got {z!r}")
    w = cmath.sqrt(z)
    if w.real < 0.0 or (w.real == 0.0 and w.imag < 0.0):
        w = -w
    return w


@dataclass(frozen=True)
class CubicRealCoeffs:
    """Monic cubic s^3 + a2 s^2 + a1 s + a0 with real coefficients."""

    a2: float
    a1: float
    a0: float

    def __post_init__(self):
        for name in ("a2", "a1", "a0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"cubic coefficient {name} must be finite")

    def __call__(self, s: complex) -> complex:
        return ((s + self.a2) * s + self.a1) * s + self.a0

    def derivative(self, s: complex) -> complex:
        return (3.0 * s + 2.0 * self.a2) * s + self.a1


@dataclass(frozen=True)
class CubicRoots:
    """Root triple of a real cubic, sorted by (real, imag).

    ``degenerate`` flags a near-collision (gap below DEGENERATE_REL_TOL
    relative to the largest root); callers forming partial fractions
    must then switch to a confluent expansion instead of dividing by
    root differences.
    """

    roots: tuple[complex, complex, complex]
    degenerate: bool


def solve_cubic(c: CubicRealCoeffs) -> CubicRoots:
    """All three roots of a real monic cubic.

    Three-real-root cases go through the trigonometric form, the rest
    through Cardano with the cancellation-safe cube-root choice; each
    seed then takes a single Newton step. Real coefficients keep the
    returned multiset closed under conjugation.
    """
    a, b, d = c.a2, c.a1, c.a0
    q = (a * a - 3.0 * b) / 9.0
    r = (2.0 * a ** 3 - 9.0 * a * b + 27.0 * d) / 54.0
    shift = a / 3.0
    q3 = q ** 3
    if d == 0.0:
        # s factors out exactly; a marginal root must stay exactly 0.
        seeds = [complex(0.0), *_quad_roots(complex(a), complex(b))]
    elif r * r < q3:
        # three distinct real roots
        theta = math.acos(max(-1.0, min(1.0, r / math.sqrt(q3))))
        m = -2.0 * math.sqrt(q)
        seeds = [
            complex(m * math.cos(theta / 3.0) - shift),
            complex(m * math.cos((theta + 2.0 * math.pi) / 3.0) - shift),
            complex(m * math.cos((theta - 2.0 * math.pi) / 3.0) - shift),
        ]
    else:
        mag = (abs(r) + math.sqrt(max(0.0, r * r - q3))) ** _THIRD
        big = -math.copysign(mag, r)
        small = q / big if big != 0.0 else 0.0
        y = big + small
        re_pair = -0.5 * y - shift
        im_pair = 0.5 * math.sqrt(3.0) * (big - small)
        seeds = [
            complex(y - shift),
            complex(re_pair, im_pair),
            complex(re_pair, -im_pair),
        ]

    roots = []
    for u in seeds:
        du = c.derivative(u)
        if du != 0.0:
            u = u - c(u) / du
        roots.append(u)
    roots.sort(key=lambda z: (z.real, z.imag))

    scale = max(max(abs(u) for u in roots), 1e-300)
    gap = min(
        abs(roots[0] - roots[1]),
        abs(roots[0] - roots[2]),
        abs(roots[1] - roots[2]),
    )
    return CubicRoots(tuple(roots), gap < DEGENERATE_REL_TOL * scale)


def _char_poly_4(m: np.ndarray) -> tuple[complex, complex, complex, complex]:
    """Coefficients (c3, c2, c1, c0) of det(sI - m) = s^4 + c3 s^3 + c2 s^2 + c1 s + c0.

    Faddeev-LeVerrier recursion, four 4x4 products total.
    """
    ident = np.eye(4, dtype=complex)
    c3 = -complex(np.trace(m))
    m2 = m @ (m + c3 * ident)
    c2 = -complex(np.trace(m2)) / 2.0
    m3 = m @ (m2 + c2 * ident)
    c1 = -complex(np.trace(m3)) / 3.0
    m4 = m @ (m3 + c1 * ident)
    c0 = -complex(np.trace(m4)) / 4.0
    return c3, c2, c1, c0


def _quad_roots(b: complex, c: complex) -> tuple[complex, complex]:
    # y^2 + b y + c, cancellation-safe
    disc = cmath.sqrt(b * b - 4.0 * c)
    if (b.conjugate() * disc).real < 0.0:
        disc = -disc
    y1 = -0.5 * (b + disc)
    y2 = c / y1 if y1 != 0.0 else -0.5 * (b - disc)
    return y1, y2


def _cubic_roots_complex(a: complex, b: complex, c: complex):
    # z^3 + a z^2 + b z + c with complex coefficients (resolvent use only)
    p = b - a * a / 3.0
    q = c + a * (2.0 * a * a - 9.0 * b) / 27.0
    shift = a / 3.0
    if p == 0.0 and q == 0.0:
        z = -shift
        return (z, z, z)
    disc = cmath.sqrt(0.25 * q * q + p ** 3 / 27.0)
    t = -0.5 * q + disc
    t_alt = -0.5 * q - disc
    if abs(t) < abs(t_alt):
        t = t_alt
    u = t ** _THIRD
    v = -p / (3.0 * u)
    w2 = _OMEGA * _OMEGA
    return (
        u + v - shift,
        _OMEGA * u + w2 * v - shift,
        w2 * u + _OMEGA * v - shift,
    )


def _quartic_seeds(c3: complex, c2: complex, c1: complex, c0: complex):
    """Ferrari seeds for s^4 + c3 s^3 + c2 s^2 + c1 s + c0 (complex coefficients)."""
    b2 = c3 * c3
    p = c2 - 0.375 * b2
    q = c1 - 0.5 * c3 * c2 + 0.125 * b2 * c3
    r = c0 - 0.25 * c3 * c1 + b2 * c2 / 16.0 - 3.0 * b2 * b2 / 256.0
    shift = 0.25 * c3

    # resolvent in U = u^2 where the depressed quartic splits as
    # (y^2 + u y + v)(y^2 - u y + w)
    resolvent = _cubic_roots_complex(2.0 * p, p * p - 4.0 * r, -q * q)
    big = max(resolvent, key=abs)
    if abs(big) == 0.0:
        # p = q = r = 0: quadruple root of the depressed quartic
        ys = (0j, 0j, 0j, 0j)
    else:
        u = cmath.sqrt(big)
        qu = q / u
        v = 0.5 * (p + big - qu)
        w = 0.5 * (p + big + qu)
        y1, y2 = _quad_roots(u, v)
        y3, y4 = _quad_roots(-u, w)
        ys = (y1, y2, y3, y4)
    return tuple(y - shift for y in ys)


def _eval_quartic(s: complex, coeffs) -> complex:
    c3, c2, c1, c0 = coeffs
    return (((s + c3) * s + c2) * s + c1) * s + c0


def _polish_quartic(s: complex, coeffs, tol: float) -> complex:
    c3, c2, c1, _ = coeffs
    for _ in range(50):
        residual = _eval_quartic(s, coeffs)
        if abs(residual) <= tol:
            return s
        slope = ((4.0 * s + 3.0 * c3) * s + 2.0 * c2) * s + c1
        if slope == 0.0:
            break
        s = s - residual / slope
    if abs(_eval_quartic(s, coeffs)) <= tol:
        return s
    raise ConvergenceFailure(
        f"eigenvalue polish stalled at residual {abs(_eval_quartic(s, coeffs)):.3e}"
        f" (tolerance {tol:.3e})"
    )


def eig4(m) -> np.ndarray:
    """Eigenvalues of a finite 4x4 complex matrix, sorted by (real, imag).

    Route: Faddeev-LeVerrier characteristic polynomial, Ferrari closed
    form for seeds, Newton polish until |p(eig)| <= 1e-8 * max(1, ||m||_F)^4.
    Raises ConvergenceFailure if a seed cannot be polished to tolerance
    within 50 steps.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"eig4 expects a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("eig4 requires finite matrix entries")
    coeffs = _char_poly_4(m)
    norm = math.sqrt(float(np.sum(np.abs(m) ** 2)))
    tol = 1e-8 * max(1.0, norm) ** 4
    eigs = [_polish_quartic(s, coeffs, tol) for s in _quartic_seeds(*coeffs)]
    eigs.sort(key=lambda z: (z.real, z.imag))
    return np.array(eigs, dtype=complex)
