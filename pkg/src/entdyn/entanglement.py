"""Concurrence of two independently damped qubits and trajectory event analysis.

For X-form initial states evolved by local amplitude-damping channels the
concurrence stays in closed form: two branch quantities K1 and K2 built from
the initial matrix elements and the survival amplitude q(t), with
C = 2 max(0, K1, K2).  ``concurrence_x`` evaluates that closed form;
``concurrence_wootters`` is the general-purpose cross-check for an arbitrary
two-qubit density matrix via the spin-flip construction, sharing no code with
the X-state path beyond the quartic eigensolver.

``compute_trajectory`` samples the closed form on a time grid and
``analyze`` extracts the entanglement events: sudden-death time, revival
(death, rebirth) pairs, and a late-time trapping plateau.  Event detection
uses a hysteresis band (dead below ``EPS_DEAD``, alive again only above
``EPS_ALIVE``) because the analytic concurrence is exactly zero on dead
intervals while the floating-point samples are not.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .dynamics import AMP_TOL, NonPhysicalAmplitude, XState, _admit_amplitude
from .qmath import eig4

EPS_DEAD = 1e-9
EPS_ALIVE = 1e-6
REFINE_TOL = 1e-6
MIN_RUN_SAMPLES = 3
PLATEAU_STD_MAX = 1e-4
# Floor below which a flat tail is fully decayed, not trapped.
PLATEAU_MIN = 1e-3

_WOOTTERS_TOL = 1e-9
_EIG_NEG_TOL = 1e-10
_EIG_IMAG_TOL = 1e-6

# Spin-flip conjugation matrix sigma_y (x) sigma_y; real antidiagonal.
_SPIN_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


class NotAState(ValueError):
    """Matrix handed to the concurrence oracle is not a density matrix."""


class GridTooCoarse(RuntimeError):
    """A concurrence excursion spans fewer samples than events need."""


@dataclass(frozen=True)
class ConcurrenceSample:
    """Concurrence branches and their maximum at a single time."""

    t: float
    k1: float
    k2: float
    c: float

    def __post_init__(self) -> None:
        for name in ("t", "k1", "k2", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not -1e-12 <= self.c <= 1.0 + 1e-9:
            raise ValueError("c outside [0, 1]")
        if abs(self.c - max(0.0, 2.0 * self.k1, 2.0 * self.k2)) > 1e-12:
            raise ValueError("c inconsistent with branch values")


@dataclass(frozen=True)
class Trajectory:
    """Sampled concurrence trajectory with optional event annotations.

    ``times``, ``amplitudes``, ``k1``, ``k2`` and ``c`` are equal-length
    arrays; the event fields stay at their defaults until ``analyze`` fills
    them.  Revivals are (death time, rebirth time) pairs with rebirth formally
    later than its death.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    c: np.ndarray
    esd_time: Optional[float] = None
    revivals: Tuple[Tuple[float, float], ...] = ()
    plateau: Optional[float] = None

    def __post_init__(self) -> None:
        n = self.times.shape[0]
        if self.times.ndim != 1 or n < 2:
            raise ValueError("need a 1-D grid with at least two samples")
        for name in ("amplitudes", "k1", "k2", "c"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} shape does not match times")
        if not np.all(np.diff(self.times) > 0.0):
            raise ValueError("times must be strictly increasing")
        if np.any(self.c < -1e-12) or np.any(self.c > 1.0 + 1e-9):
            raise ValueError("concurrence outside [0, 1]")
        for death, rebirth in self.revivals:
            if not rebirth > death:
                raise ValueError("rebirth must be later than its death")

    def __len__(self) -> int:
        return int(self.times.shape[0])

    def sample(self, i: int) -> ConcurrenceSample:
        return ConcurrenceSample(
            t=float(self.times[i]),
            k1=float(self.k1[i]),
            k2=float(self.k2[i]),
            c=float(self.c[i]),
        )


def _branches(initial: XState, abs_q2: np.ndarray):
    """Vectorized K1, K2 for one initial X state; abs_q2 is |q(t)|^2."""
    p = abs_q2
    loss = np.clip(1.0 - p, 0.0, None)
    a14 = abs(initial.ad14)
    a23 = abs(initial.ad23)
    # Radicands are nonnegative for valid states; clip guards float noise.
    rad1 = initial.d1 * (
        initial.d4
        + initial.d1 * loss * loss
        + (initial.d2 + initial.d3) * loss
    )
    rad2 = (initial.d2 + initial.d1 * loss) * (initial.d3 + initial.d1 * loss)
    k1 = p * (a23 - np.sqrt(np.clip(rad1, 0.0, None)))
    k2 = p * (a14 - np.sqrt(np.clip(rad2, 0.0, None)))
    return k1, k2


def concurrence_x(initial: XState, q: complex, t: float = 0.0) -> ConcurrenceSample:
    """Closed-form concurrence of an X state evolved with amplitude q per qubit.

    Parameters
    ----------
    initial:
        Two-qubit X state at time zero.
    q:
        Survival amplitude shared by both qubits, |q| <= 1 + 1e-9.
    t:
        Time label attached to the returned sample; not used in the formula.

    Returns
    -------
    ConcurrenceSample
        Branch values K1, K2 and C = 2 max(0, K1, K2).
    """
    q = _admit_amplitude(complex(q))
    p = abs(q) ** 2
    k1, k2 = _branches(initial, np.asarray(p))
    k1 = float(k1)
    k2 = float(k2)
    c = 2.0 * max(0.0, k1, k2)
    return ConcurrenceSample(t=float(t), k1=k1, k2=k2, c=min(c, 1.0 + 1e-9))


def concurrence_wootters(rho: np.ndarray) -> float:
    """Concurrence of an arbitrary two-qubit density matrix.

    Uses the spin-flip construction: the eigenvalues r_i (descending) of
    rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y) give
    C = max(0, sqrt(r1) - sqrt(r2) - sqrt(r3) - sqrt(r4)).

    Raises
    ------
    NotAState
        If rho is not Hermitian, unit-trace and positive semidefinite to
        1e-9, or if the spin-flipped product has spectrum incompatible with
        a physical state.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise NotAState("expected a 4x4 density matrix")
    if not np.all(np.isfinite(rho.view(float))):
        raise NotAState("density matrix entries must be finite")
    if np.max(np.abs(rho - rho.conj().T)) > _WOOTTERS_TOL:
        raise NotAState("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > _WOOTTERS_TOL:
        raise NotAState("density matrix trace is not 1")
    rho_eigs = eig4(rho)
    if min(e.real for e in rho_eigs) < -_WOOTTERS_TOL:
        raise NotAState("density matrix is not positive semidefinite")

    flipped = _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP
    eigs = eig4(rho @ flipped)
    values = []
    for e in eigs:
        if abs(e.imag) > _EIG_IMAG_TOL or e.real < -_EIG_NEG_TOL:
            raise NotAState("spin-flip product has nonphysical spectrum")
        values.append(max(e.real, 0.0))
    values.sort(reverse=True)
    roots = [math.sqrt(v) for v in values]
    c = roots[0] - roots[1] - roots[2] - roots[3]
    return min(max(c, 0.0), 1.0)


def _amplitude_samples(
    amplitude: Callable[[np.ndarray], np.ndarray], times: np.ndarray
) -> np.ndarray:
    try:
        values = np.asarray(amplitude(times), dtype=complex)
    except (TypeError, ValueError):
        values = np.array([complex(amplitude(float(t))) for t in times])
    if values.shape != times.shape:
        raise ValueError("amplitude function returned a mismatched shape")
    if not np.all(np.isfinite(values.view(float))):
        raise ValueError("amplitude samples must be finite")
    return values


def compute_trajectory(
    amplitude: Callable[[np.ndarray], np.ndarray],
    initial: XState,
    times: Sequence[float],
) -> Trajectory:
    """Sample the closed-form concurrence on a time grid.

    ``amplitude`` maps an array of times to complex survival amplitudes;
    both qubits share the same reservoir.  Event fields of the returned
    trajectory are unset; pass the result to ``analyze``.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.shape[0] < 2:
        raise ValueError("need a 1-D grid with at least two samples")
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    if not np.all(np.diff(times) > 0.0):
        raise ValueError("times must be strictly increasing")

    values = _amplitude_samples(amplitude, times)
    abs_q = np.abs(values)
    if np.any(abs_q > 1.0 + AMP_TOL):
        raise NonPhysicalAmplitude(
            f"|q| = {float(abs_q.max()):.6g} exceeds 1 beyond tolerance"
        )
    over = abs_q > 1.0
    if np.any(over):
        values = values.copy()
        values[over] /= abs_q[over]
        abs_q = np.abs(values)

    k1, k2 = _branches(initial, abs_q**2)
    c = 2.0 * np.maximum(0.0, np.maximum(k1, k2))
    c = np.minimum(c, 1.0 + 1e-9)
    return Trajectory(times=times, amplitudes=values, k1=k1, k2=k2, c=c)


def _bisect(
    predicate: Callable[[float], bool], lo: float, hi: float, tol: float
) -> float:
    """Shrink [lo, hi] with predicate False at lo, True at hi; return midpoint."""
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _interp_concurrence(traj: Trajectory) -> Callable[[float], float]:
    times = traj.times
    c = traj.c

    def c_of_t(t: float) -> float:
        return float(np.interp(t, times, c))

    return c_of_t


def analyze(
    traj: Trajectory,
    c_of_t: Optional[Callable[[float], float]] = None,
) -> Trajectory:
    """Extract death, revival and plateau events from a sampled trajectory.

    Parameters
    ----------
    traj:
        Output of ``compute_trajectory`` on a uniform grid.
    c_of_t:
        Continuous concurrence evaluator used to refine event times by
        bisection to ``REFINE_TOL``.  Pass the closed-form evaluator when one
        is available; the default interpolates the stored samples, which
        certifies events only to grid resolution.

    Returns
    -------
    Trajectory
        Copy of ``traj`` with ``esd_time``, ``revivals`` and ``plateau`` set.

    Raises
    ------
    GridTooCoarse
        If any complete excursion (a dead or alive interval with transitions
        on both sides) covers fewer than ``MIN_RUN_SAMPLES`` samples.
    """
    times = traj.times
    steps = np.diff(times)
    h = float(steps[0])
    if np.max(np.abs(steps - h)) > 1e-6 * h:
        raise ValueError("analyze requires a uniform grid")
    if c_of_t is None:
        c_of_t = _interp_concurrence(traj)

    c = traj.c
    n = times.shape[0]

    # Hysteresis state machine: once dead, alive again only above EPS_ALIVE.
    alive = bool(c[0] >= EPS_DEAD)
    transitions = []  # (index of first sample in the new state, new state)
    for i in range(1, n):
        if alive and c[i] < EPS_DEAD:
            alive = False
            transitions.append((i, False))
        elif not alive and c[i] > EPS_ALIVE:
            alive = True
            transitions.append((i, True))

    # Complete excursions (transitions on both sides) need enough samples
    # for their events to be trustworthy; first and last runs touch the
    # grid edges and are exempt.
    boundaries = [0] + [i for i, _ in transitions] + [n]
    for k in range(1, len(boundaries) - 2):
        run = boundaries[k + 1] - boundaries[k]
        if run < MIN_RUN_SAMPLES:
            raise GridTooCoarse(
                f"excursion of {run} samples starting at t = "
                f"{times[boundaries[k]]:.6g}; refine the grid"
            )

    esd_time: Optional[float] = None
    revivals = []
    last_death: Optional[float] = None
    for idx, new_state in transitions:
        lo = float(times[idx - 1])
        hi = float(times[idx])
        if not new_state:
            t_event = _bisect(lambda t: c_of_t(t) < EPS_DEAD, lo, hi, REFINE_TOL)
            if esd_time is None:
                esd_time = t_event
            last_death = t_event
        else:
            t_event = _bisect(lambda t: c_of_t(t) > EPS_ALIVE, lo, hi, REFINE_TOL)
            if last_death is not None:
                revivals.append((last_death, t_event))

    tail = c[-max(2, n // 10):]
    plateau: Optional[float] = None
    if float(np.std(tail)) < PLATEAU_STD_MAX:
        mean = float(np.mean(tail))
        if mean > PLATEAU_MIN:
            plateau = mean

    return dataclasses.replace(
        traj,
        esd_time=esd_time,
        revivals=tuple(revivals),
        plateau=plateau,
    )
