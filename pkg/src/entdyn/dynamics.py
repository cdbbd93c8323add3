"""Exact reduced dynamics of one and two independently damped qubits.

A single qubit in a zero-temperature structured reservoir evolves, for
any reservoir, by one complex number: the excited-state survival
amplitude q(t). Populations scale by |q|^2, coherences by q. Two
noninteracting qubits in independent reservoirs evolve by the tensor
product of two such maps, and that product keeps X-shaped states
(nonzero entries on the diagonal and antidiagonal only) X-shaped, so
the two-qubit state is carried as six numbers instead of sixteen.

Two-qubit basis order throughout: |1> = both excited, |2> = first
excited, |3> = second excited, |4> = both ground.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

# slop allowed on |q| before the amplitude is rejected as unphysical
AMP_TOL = 1e-9
TRACE_TOL = 1e-12
DIAG_TOL = 1e-12
COHERENCE_TOL = 1e-10


class NonPhysicalAmplitude(ValueError):
    """|q| exceeds 1 beyond numerical slop."""


def _admit_amplitude(q) -> complex:
    """Validate |q| <= 1 + AMP_TOL and pull roundoff excess back to the circle.

    Amplitudes a hair outside the unit disc (closed-form roundoff)
    are rescaled to unit modulus; without the pullback the evolved
    states would violate their own positivity tolerances.
    """
    q = complex(q)
    mod = abs(q)
    if not (math.isfinite(q.real) and math.isfinite(q.imag)):
        raise NonPhysicalAmplitude(f"amplitude must be finite, got {q!r}")
    if mod > 1.0 + AMP_TOL:
        raise NonPhysicalAmplitude(f"|q| = {mod!r} exceeds 1 beyond tolerance")
    if mod > 1.0:
        q /= mod
    return q


@dataclass(frozen=True)
class SingleQubitState:
    """Reduced state of one qubit: populations and the single coherence."""

    rho11: float
    rho00: float
    rho10: complex

    def __post_init__(self):
        if abs(self.rho11 + self.rho00 - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {self.rho11 + self.rho00!r} != 1")
        if not (-DIAG_TOL <= self.rho11 <= 1.0 + DIAG_TOL):
            raise ValueError(f"rho11 = {self.rho11!r} outside [0, 1]")
        if not (-DIAG_TOL <= self.rho00 <= 1.0 + DIAG_TOL):
            raise ValueError(f"rho00 = {self.rho00!r} outside [0, 1]")
        if abs(self.rho10) ** 2 > self.rho11 * self.rho00 + TRACE_TOL:
            raise ValueError("coherence violates positivity")


@dataclass(frozen=True)
class BellLikeInit:
    """One-parameter entangled initial state.

    family "phi" superposes the single-excitation states |10> and |01>
    with weights alpha and beta = sqrt(1 - alpha^2); family "psi"
    superposes |00> (weight alpha) and |11> (weight beta). ``delta``
    is the relative phase in radians. alpha = 1/sqrt(2) gives the
    maximally entangled members.
    """

    family: str
    alpha: float
    delta: float = 0.0

    def __post_init__(self):
        if self.family not in ("phi", "psi"):
            raise ValueError(f"family must be 'phi' or 'psi', got {self.family!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha = {self.alpha!r} outside [0, 1]")
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")

    @property
    def beta(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.alpha * self.alpha))


@dataclass(frozen=True)
class XState:
    """Two-qubit X-shaped density matrix.

    d1..d4 are the diagonal entries in the basis order of the module
    docstring; ad14 connects |11><00|, ad23 connects |10><01|.
    """

    d1: float
    d2: float
    d3: float
    d4: float
    ad14: complex
    ad23: complex

    def __post_init__(self):
        total = self.d1 + self.d2 + self.d3 + self.d4
        if abs(total - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {total!r} != 1")
        for name in ("d1", "d2", "d3", "d4"):
            if getattr(self, name) < -DIAG_TOL:
                raise ValueError(f"{name} = {getattr(self, name)!r} negative")
        if abs(self.ad14) ** 2 > self.d1 * self.d4 + COHERENCE_TOL:
            raise ValueError("|ad14|^2 exceeds d1*d4, X block not positive")
        if abs(self.ad23) ** 2 > self.d2 * self.d3 + COHERENCE_TOL:
            raise ValueError("|ad23|^2 exceeds d2*d3, X block not positive")


def evolve_single(initial: SingleQubitState, q) -> SingleQubitState:
    """Exact single-qubit map: populations by |q|^2, coherence by q."""
    q = _admit_amplitude(q)
    survive = abs(q) ** 2
    return SingleQubitState(
        rho11=initial.rho11 * survive,
        rho00=initial.rho00 + initial.rho11 * (1.0 - survive),
        rho10=initial.rho10 * q,
    )


def lift_two_qubit(initial: XState, qa, qb) -> XState:
    """Product of two independent single-qubit maps on an X state.

    qa acts on the first qubit, qb on the second. The map is the
    tensor square of evolve_single written on the six X coordinates;
    composing lifts multiplies the amplitudes (semigroup in q).
    """
    qa = _admit_amplitude(qa)
    qb = _admit_amplitude(qb)
    pa = abs(qa) ** 2
    pb = abs(qb) ** 2
    la = 1.0 - pa
    lb = 1.0 - pb
    return XState(
        d1=initial.d1 * pa * pb,
        d2=pa * (initial.d2 + initial.d1 * lb),
        d3=pb * (initial.d3 + initial.d1 * la),
        d4=initial.d4 + initial.d2 * la + initial.d3 * lb + initial.d1 * la * lb,
        ad14=initial.ad14 * qa * qb,
        ad23=initial.ad23 * qa * qb.conjugate(),
    )


def bell_like_state(init: BellLikeInit) -> XState:
    """X-state coordinates of a Bell-like initial state."""
    a = init.alpha
    b = init.beta
    coherence = a * b * cmath.exp(-1j * init.delta)
    if init.family == "phi":
        return XState(d1=0.0, d2=a * a, d3=b * b, d4=0.0, ad14=0j, ad23=coherence)
    return XState(d1=b * b, d2=0.0, d3=0.0, d4=a * a, ad14=coherence, ad23=0j)


def to_dense(x: XState) -> np.ndarray:
    """4x4 complex density matrix in the module's basis order."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = x.d1
    rho[1, 1] = x.d2
    rho[2, 2] = x.d3
    rho[3, 3] = x.d4
    rho[0, 3] = x.ad14
    rho[3, 0] = np.conj(x.ad14)
    rho[1, 2] = x.ad23
    rho[2, 1] = np.conj(x.ad23)
    return rho
