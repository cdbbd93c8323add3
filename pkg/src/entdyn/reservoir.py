"""Spectral models for a damped qubit and the exact survival amplitude.

Two reservoir spectra are supported, both centred near the qubit
transition: a Lorentzian line offset by ``delta`` (lossy cavity mode)
and a broad Lorentzian background minus a narrower Lorentzian dip
(non-ideal band gap). Frequencies enter only as offsets from the qubit
transition, and every rate and time is a dimensionless multiple of the
chosen unit rate (gamma for the cavity model, gamma1 for the band-gap
model).

The excited-state survival amplitude q(t) solves

    dq/dt = - integral_0^t f(t - t') q(t') dt',   q(0) = 1,

with f the reservoir memory kernel. Both spectra give rational Laplace
transforms, so q(t) is a short sum of exponentials found by partial
fractions; a repeated denominator root switches the expansion to its
confluent form with t * exp terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .qmath import CubicRealCoeffs, csqrt_principal, solve_cubic

# tolerance on |Re(root)| below which a denominator root counts as undamped
MARGINAL_REL_TOL = 1e-9


class InvalidModel(ValueError):
    """Spectral-model parameters violate a positivity constraint."""


def _require_finite(value: float, name: str) -> None:
    if not math.isfinite(value):
        raise InvalidModel(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class DetunedLorentzian:
    """Lorentzian spectral line of strength ``gamma`` and width ``lam``.

    ``delta`` is the offset of the line centre from the qubit
    transition. gamma < lam/2 gives monotonic (weak-coupling) decay at
    zero offset, gamma > lam/2 oscillatory (strong-coupling) decay;
    the labels lose meaning once delta != 0.
    """

    gamma: float
    lam: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "lam", "delta"):
            _require_finite(getattr(self, name), name)
        if self.gamma <= 0.0:
            raise InvalidModel(f"gamma > 0 violated (gamma = {self.gamma})")
        if self.lam <= 0.0:
            raise InvalidModel(f"lambda > 0 violated (lambda = {self.lam})")


@dataclass(frozen=True)
class BandGapDip:
    """Lorentzian background minus a narrower Lorentzian dip.

    Weights gamma1, gamma2 and widths lam1, lam2 must keep the spectral
    density nonnegative everywhere, which is exactly the pair of
    conditions gamma1*lam1^2 >= gamma2*lam2^2 (far wings) and
    gamma1 >= gamma2 (dip centre). gamma1 = gamma2 closes the gap
    completely and the qubit retains excitation forever.
    """

    gamma1: float
    gamma2: float
    lam1: float
    lam2: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "lam1", "lam2"):
            value = getattr(self, name)
            _require_finite(value, name)
            if value < 0.0:
                raise InvalidModel(f"{name} >= 0 violated ({name} = {value})")
        if not self.gamma1 * self.lam1 ** 2 >= self.gamma2 * self.lam2 ** 2:
            raise InvalidModel(
                "gamma1*lambda1^2 > gamma2*lambda2^2 violated "
                "(spectral density would go negative far from the dip)"
            )
        if not self.gamma1 >= self.gamma2:
            raise InvalidModel(
                "gamma1 >= gamma2 violated "
                "(spectral density would go negative at the dip centre)"
            )


SpectralModel = Union[DetunedLorentzian, BandGapDip]


@dataclass(frozen=True)
class DerivedRates:
    """Composite rates of the band-gap model.

    ``big_lambda`` is the net kernel weight at zero delay,
    f(0) = (gamma1*lam1 - gamma2*lam2)/2. ``gamma_d`` is the residual
    golden-rule decay rate set by the spectral weight left at the dip
    centre, (gamma1 - gamma2)/2; zero means a perfect gap.
    """

    big_lambda: float
    gamma_d: float


def derived_rates(model: BandGapDip) -> DerivedRates:
    return DerivedRates(
        big_lambda=0.5 * (model.gamma1 * model.lam1 - model.gamma2 * model.lam2),
        gamma_d=0.5 * (model.gamma1 - model.gamma2),
    )


def spectral_density(model: SpectralModel, detuning):
    """Reservoir spectral weight at frequency offset ``detuning`` from the qubit line."""
    x = np.asarray(detuning, dtype=float)
    if isinstance(model, DetunedLorentzian):
        out = (
            model.gamma
            * model.lam ** 2
            / (2.0 * np.pi * ((x + model.delta) ** 2 + model.lam ** 2))
        )
    elif isinstance(model, BandGapDip):
        out = (
            model.gamma1 * model.lam1 ** 2 / (x ** 2 + model.lam1 ** 2)
            - model.gamma2 * model.lam2 ** 2 / (x ** 2 + model.lam2 ** 2)
        ) / (2.0 * np.pi)
    else:
        raise TypeError(f"unsupported spectral model {type(model).__name__}")
    return float(out) if np.ndim(detuning) == 0 else out


def kernel(model: SpectralModel, tau):
    """Memory kernel f(tau), tau >= 0: correlation function of the reservoir.

    Fourier transform of the spectral density taken relative to the
    qubit frequency, hence complex for a detuned line.
    """
    t = np.asarray(tau, dtype=float)
    if isinstance(model, DetunedLorentzian):
        out = 0.5 * model.gamma * model.lam * np.exp(-(model.lam - 1j * model.delta) * t)
    elif isinstance(model, BandGapDip):
        out = 0.5 * (
            model.gamma1 * model.lam1 * np.exp(-model.lam1 * t)
            - model.gamma2 * model.lam2 * np.exp(-model.lam2 * t)
        ) + 0j
    else:
        raise TypeError(f"unsupported spectral model {type(model).__name__}")
    return complex(out) if np.ndim(tau) == 0 else out


def _sinhc(x: np.ndarray) -> np.ndarray:
    # sinh(x)/x; series below 1e-4 where the direct quotient loses digits
    out = np.empty_like(x)
    small = np.abs(x) < 1e-4
    xs = x[small]
    out[small] = 1.0 + xs * xs / 6.0
    xl = x[~small]
    out[~small] = np.sinh(xl) / xl
    return out


def amplitude_lorentzian(model: DetunedLorentzian, t):
    """Survival amplitude q(t) for the detuned Lorentzian line, t >= 0.

    Closed form q = e^{-wt/2} [cosh(dt/2) + (w/d) sinh(dt/2)] with
    w = lam - i*delta and d = sqrt(w^2 - 2*gamma*lam), evaluated on two
    branches: for |dt/2| < 1/2 the cosh plus (wt/2)*sinhc(dt/2) form,
    exact in the limit d -> 0; otherwise a split into the two
    exponentials exp((+-d - w)t/2), whose real parts are never
    positive, so strong damping at large t cannot overflow. The value
    is invariant under d -> -d, making the square-root branch choice
    immaterial.
    """
    tt = np.asarray(t, dtype=float)
    scalar = tt.ndim == 0
    tt = np.atleast_1d(tt).astype(float)
    w = complex(model.lam, -model.delta)
    d = csqrt_principal(w * w - 2.0 * model.gamma * model.lam)
    x = 0.5 * d * tt
    out = np.empty(tt.shape, dtype=complex)
    small = np.abs(x) < 0.5
    if small.any():
        xs = x[small]
        ts = tt[small]
        out[small] = np.exp(-0.5 * w * ts) * (np.cosh(xs) + 0.5 * w * ts * _sinhc(xs))
    large = ~small
    if large.any():
        xl = x[large]
        tl = tt[large]
        ratio = w / d  # |d| >= 1/t on this branch, the ratio stays moderate
        out[large] = 0.5 * (
            (1.0 + ratio) * np.exp(xl - 0.5 * w * tl)
            + (1.0 - ratio) * np.exp(-(xl + 0.5 * w * tl))
        )
    return complex(out[0]) if scalar else out


def _pbg_cubic(model: BandGapDip) -> CubicRealCoeffs:
    # denominator of the Laplace-domain amplitude, monic cubic in s
    rates = derived_rates(model)
    lam_sum = model.lam1 + model.lam2
    lam_prod = model.lam1 * model.lam2
    return CubicRealCoeffs(
        a2=lam_sum,
        a1=lam_prod + rates.big_lambda,
        a0=lam_prod * rates.gamma_d,
    )


def _pbg_exponential_terms(model: BandGapDip):
    """Partial-fraction expansion of q(t) as tuples (coef, rate, power).

    Each term contributes coef * t^power * exp(rate * t). Generic
    denominators give three simple poles; near-repeated roots (flagged
    by solve_cubic) switch to the confluent expansion, which is what
    keeps the perfect-trapping corner gamma1 = gamma2, lam1 = lam2
    (q identically 1) finite.
    """
    lam_sum = model.lam1 + model.lam2
    lam_prod = model.lam1 * model.lam2

    def numer(s: complex) -> complex:
        return (s + model.lam1) * (s + model.lam2)

    def numer_prime(s: complex) -> complex:
        return 2.0 * s + lam_sum

    solution = solve_cubic(_pbg_cubic(model))
    u1, u2, u3 = solution.roots
    if not solution.degenerate:
        terms = []
        for i, ui in enumerate(solution.roots):
            denom = 1.0 + 0j
            for j, uj in enumerate(solution.roots):
                if j != i:
                    denom *= ui - uj
            terms.append((numer(ui) / denom, ui, 0))
        return tuple(terms)

    scale = max(abs(u1), abs(u2), abs(u3), 1e-300)
    gaps = [
        (abs(u1 - u2), u1, u2, u3),
        (abs(u1 - u3), u1, u3, u2),
        (abs(u2 - u3), u2, u3, u1),
    ]
    gaps.sort(key=lambda item: item[0])
    if gaps[-1][0] < 1e-8 * scale:
        # all three collided: q_bar = N(s)/(s-u)^3
        u = (u1 + u2 + u3) / 3.0
        return ((1.0 + 0j, u, 0), (numer_prime(u), u, 1), (0.5 * numer(u), u, 2))
    _, a, b, single = gaps[0]
    u = 0.5 * (a + b)
    du = u - single
    return (
        ((numer_prime(u) * du - numer(u)) / (du * du), u, 0),
        (numer(u) / du, u, 1),
        (numer(single) / (du * du), single, 0),
    )


def _eval_exponential_terms(terms, t):
    tt = np.asarray(t, dtype=float)
    scalar = tt.ndim == 0
    tt = np.atleast_1d(tt).astype(float)
    out = np.zeros(tt.shape, dtype=complex)
    for coef, rate, power in terms:
        contrib = coef * np.exp(rate * tt)
        if power:
            contrib = contrib * tt ** power
        out += contrib
    return complex(out[0]) if scalar else out


def amplitude_pbg(model: BandGapDip, t):
    """Survival amplitude q(t) for the band-gap-dip spectrum, t >= 0."""
    return _eval_exponential_terms(_pbg_exponential_terms(model), t)


def asymptotic_amplitude(model: BandGapDip) -> float:
    """|q(t -> infinity)|: modulus of the undamped part of the expansion.

    Nonzero exactly when the denominator keeps a root on the imaginary
    axis, which for valid parameters happens only at s = 0 when
    gamma1 = gamma2 (perfect gap). Repeated roots are never marginal
    here, so t * exp terms need no special casing.
    """
    terms = _pbg_exponential_terms(model)
    scale = max(1.0, max(abs(rate) for _, rate, _ in terms))
    tol = MARGINAL_REL_TOL * scale
    total = 0j
    for coef, rate, power in terms:
        if power == 0 and abs(rate.real) <= tol:
            total += coef
    return abs(total)


class AmplitudeFn:
    """Reusable evaluator for the survival amplitude q(t).

    Analytic instances wrap a spectral model and cache the branch data
    (discriminant root for the Lorentzian, partial-fraction terms for
    the band-gap dip). Grid-backed instances wrap any object with
    ``times`` and ``values`` arrays, for example the output of the
    Volterra solver, and interpolate linearly. Instances are immutable
    after construction.
    """

    def __init__(self, model: SpectralModel):
        self.model = model
        self._grid_times = None
        self._grid_values = None
        if isinstance(model, DetunedLorentzian):
            self._terms = None
        elif isinstance(model, BandGapDip):
            self._terms = _pbg_exponential_terms(model)
        else:
            raise TypeError(f"unsupported spectral model {type(model).__name__}")
        q0 = self(0.0)
        if abs(q0 - 1.0) > 1e-12:
            raise InvalidModel(f"amplitude normalisation broken: q(0) = {q0!r}")

    @classmethod
    def from_grid(cls, grid) -> "AmplitudeFn":
        """Wrap a sampled amplitude (object with .times and .values)."""
        self = object.__new__(cls)
        self.model = None
        self._terms = None
        self._grid_times = np.asarray(grid.times, dtype=float)
        self._grid_values = np.asarray(grid.values, dtype=complex)
        if abs(self._grid_values[0] - 1.0) > 1e-12:
            raise InvalidModel(
                f"amplitude normalisation broken: q(0) = {self._grid_values[0]!r}"
            )
        return self

    def __call__(self, t):
        if self._grid_times is not None:
            real = np.interp(t, self._grid_times, self._grid_values.real)
            imag = np.interp(t, self._grid_times, self._grid_values.imag)
            out = real + 1j * imag
            return complex(out) if np.ndim(t) == 0 else out
        if isinstance(self.model, DetunedLorentzian):
            return amplitude_lorentzian(self.model, t)
        return _eval_exponential_terms(self._terms, t)
