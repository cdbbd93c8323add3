"""Exact entanglement dynamics of two qubits in structured reservoirs.

The package computes the reduced dynamics of two noninteracting qubits, each
coupled to its own zero-temperature reservoir, for two spectral densities: a
detuned Lorentzian cavity line and a Lorentzian line with a Lorentzian dip
(a nonperfect band-gap profile).  The single-qubit survival amplitude is
available both in closed form (``reservoir``) and from a direct
integro-differential solver (``volterra``); the two routes check each other.
Two-qubit states, concurrence, and trajectory events live in ``dynamics``
and ``entanglement``; the command-line interface in ``cli``.

All rates and times are dimensionless, in units of the dominant decay rate.
"""

from .dynamics import (
    BellLikeInit,
    NonPhysicalAmplitude,
    SingleQubitState,
    XState,
    bell_like_state,
    evolve_single,
    lift_two_qubit,
    to_dense,
)
from .entanglement import (
    ConcurrenceSample,
    GridTooCoarse,
    NotAState,
    Trajectory,
    analyze,
    compute_trajectory,
    concurrence_wootters,
    concurrence_x,
)
from .qmath import ConvergenceFailure, CubicRealCoeffs, csqrt_principal, eig4, solve_cubic
from .reservoir import (
    AmplitudeFn,
    BandGapDip,
    DetunedLorentzian,
    InvalidModel,
    asymptotic_amplitude,
    kernel,
    spectral_density,
)
from .volterra import GridAmplitude, SolverConfig, StepTooLarge, solve

__all__ = [
    "AmplitudeFn",
    "BandGapDip",
    "BellLikeInit",
    "ConcurrenceSample",
    "ConvergenceFailure",
    "CubicRealCoeffs",
    "DetunedLorentzian",
    "GridAmplitude",
    "GridTooCoarse",
    "InvalidModel",
    "NonPhysicalAmplitude",
    "NotAState",
    "SingleQubitState",
    "SolverConfig",
    "StepTooLarge",
    "Trajectory",
    "XState",
    "analyze",
    "asymptotic_amplitude",
    "bell_like_state",
    "compute_trajectory",
    "concurrence_wootters",
    "concurrence_x",
    "csqrt_principal",
    "eig4",
    "evolve_single",
    "kernel",
    "lift_two_qubit",
    "solve",
    "solve_cubic",
    "spectral_density",
    "to_dense",
]

__version__ = "0.1.0"
