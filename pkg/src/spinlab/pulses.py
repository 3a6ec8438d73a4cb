"""Time-domain simulation of hard and simultaneous line-selective soft pulses.

Everything is expressed in the frame rotating at the transmitter, which sits
on the R chemical shift.  Hamiltonians are in rad/s and built from the
half-Pauli spin operators of :mod:`spinlab.algebra`.

Soft pulses are integrated as a product of piecewise-constant propagators
sampled at the midpoint of each time step.  Each selected line ``(i, j)`` of
the target multiplet contributes an RF component rotating at that line's
frequency; all components share one envelope and are phase-aligned at the
start of the pulse, so in the frame of any given line its own component is
a static field along the pulse phase.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import erf

from .algebra import (
    conjugate,
    fidelity,
    matrix_exponential,
    spin_operator,
    total_spin_operator,
    unitarity_error,
)
from .oracle import INPUTS, BooleanFunction, experimental_unitary

SPIN_NAMES = ("I", "S", "R")
DEFAULT_OFFSETS_HZ = (250.0, 165.8, 0.0)
DEFAULT_J_HZ = (
    (0.0, -10.1, 11.3),
    (-10.1, 0.0, 4.3),
    (11.3, 4.3, 0.0),
)
DEFAULT_DT = 50e-6
DEFAULT_DURATION = 0.65
SHAPES = ("gaussian", "rectangular", "sine-bell", "triangular")
UNITARITY_LIMIT = 1e-6


@dataclass(frozen=True)
class SpinSystem:
    """Three coupled spins I, S, R.

    ``offsets_hz`` are chemical shifts relative to the transmitter and
    ``j_hz`` is the symmetric coupling matrix.  ``coupling`` selects the
    secular (``"weak"``, Iz Sz only) or full scalar (``"strong"``) form.
    """

    offsets_hz: tuple[float, float, float] = DEFAULT_OFFSETS_HZ
    j_hz: tuple[tuple[float, float, float], ...] = DEFAULT_J_HZ
    coupling: str = "strong"
    spectrometer_mhz: float = 400.0

    def __post_init__(self):
        offsets = tuple(float(x) for x in self.offsets_hz)
        j = tuple(tuple(float(x) for x in row) for row in self.j_hz)
        if len(offsets) != 3 or len(j) != 3 or any(len(row) != 3 for row in j):
            raise ValueError("a spin system needs three offsets and a 3x3 coupling matrix")
        arr = np.array(j)
        if not np.allclose(arr, arr.T, atol=0, rtol=0):
            raise ValueError("coupling matrix must be symmetric")
        if np.any(np.diag(arr) != 0):
            raise ValueError("coupling matrix must have a zero diagonal")
        if self.coupling not in ("weak", "strong"):
            raise ValueError(f"coupling must be 'weak' or 'strong', got {self.coupling!r}")
        object.__setattr__(self, "offsets_hz", offsets)
        object.__setattr__(self, "j_hz", j)

    n = 3

    @classmethod
    def default(cls) -> "SpinSystem":
        """Strongly coupled system with the published couplings."""
        return cls()

    @classmethod
    def idealized(cls, offsets_hz: Sequence[float] = (0.0, 0.0, 0.0)) -> "SpinSystem":
        """Weak coupling, ``J_IS = 0``; I and S on resonance unless given."""
        j = np.array(DEFAULT_J_HZ)
        j[0, 1] = j[1, 0] = 0.0
        return cls(tuple(offsets_hz), tuple(map(tuple, j)), "weak")

    @classmethod
    def weak_limit(cls) -> "SpinSystem":
        """Default shifts and couplings under the secular (weak) coupling model.

        This is the idealized system for spectrum-level checks: the I/S flip-flop
        term is gone, but all three couplings keep the multiplets resolved.
        """
        return cls(coupling="weak")

    def replace(self, **changes) -> "SpinSystem":
        return replace(self, **changes)

    def with_coupling(self, a: int, b: int, value: float) -> "SpinSystem":
        j = np.array(self.j_hz)
        j[a - 1, b - 1] = j[b - 1, a - 1] = value
        return replace(self, j_hz=tuple(map(tuple, j)))

    def j(self, a: int, b: int) -> float:
        return self.j_hz[a - 1][b - 1]

    def strong_coupling_ratio(self, a: int = 1, b: int = 2) -> float:
        """``|J_ab / (delta_a - delta_b)|``; infinite for equal shifts."""
        diff = self.offsets_hz[a - 1] - self.offsets_hz[b - 1]
        return math.inf if diff == 0 else abs(self.j(a, b) / diff)


def free_hamiltonian(system: SpinSystem) -> np.ndarray:
    """Chemical shift plus scalar coupling Hamiltonian in rad/s."""
    n = system.n
    h = np.zeros((2**n, 2**n), dtype=complex)
    for s in range(1, n + 1):
        h += system.offsets_hz[s - 1] * spin_operator(s, "z", n)
    axes = ("z",) if system.coupling == "weak" else ("x", "y", "z")
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            jab = system.j(a, b)
            if jab == 0:
                continue
            for ax in axes:
                h += jab * spin_operator(a, ax, n) @ spin_operator(b, ax, n)
    return 2 * math.pi * h


@functools.lru_cache(maxsize=32)
def labeled_eigenbasis(system: SpinSystem) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of the free Hamiltonian, column ``k``
    being the eigenstate that best overlaps product state ``|k>``."""
    h = free_hamiltonian(system)
    if system.coupling == "weak":
        energies = np.diag(h).real.copy()
        vectors = np.eye(len(energies), dtype=complex)
    else:
        w, v = np.linalg.eigh(h)
        rows, cols = linear_sum_assignment(-np.abs(v) ** 2)
        order = cols[np.argsort(rows)]
        energies, vectors = w[order], v[:, order]
        # fix each eigenvector's phase so its dominant component is real positive
        lead = vectors[np.arange(len(energies)), np.arange(len(energies))]
        vectors = vectors * (np.abs(lead) / lead)
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return energies, vectors


def _line_pairs(spin: int, n: int = 3) -> dict[tuple[int, int], tuple[int, int]]:
    """Map the states of the other two spins to the basis-index pair of a line."""
    others = [s for s in range(1, n + 1) if s != spin]
    pairs = {}
    for i, j in INPUTS:
        bits = {others[0]: i, others[1]: j}
        up = sum(bits.get(s, 0) << (n - s) for s in range(1, n + 1))
        down = up | (1 << (n - spin))
        pairs[(i, j)] = (up, down)
    return pairs


def transition_frequencies(
    system: SpinSystem, spin: int = 3, exact: bool = False
) -> dict[tuple[int, int], float]:
    """Frequencies (Hz) of the four lines of one spin's multiplet.

    Keys are the states ``(i, j)`` of the other two spins in index order,
    with state 0 meaning m = +1/2.  The first-order values are
    ``delta + m_a J_a + m_b J_b``; with ``exact=True`` they are taken from the
    labelled eigenvalues of the free Hamiltonian instead.
    """
    if not 1 <= spin <= system.n:
        raise ValueError(f"spin index {spin} out of range")
    pairs = _line_pairs(spin, system.n)
    if exact:
        energies, _ = labeled_eigenbasis(system)
        return {k: float(energies[a] - energies[b]) / (2 * math.pi) for k, (a, b) in pairs.items()}
    others = [s for s in range(1, system.n + 1) if s != spin]
    out = {}
    for i, j in INPUTS:
        m = (0.5 - i, 0.5 - j)
        out[(i, j)] = (
            system.offsets_hz[spin - 1]
            + m[0] * system.j(spin, others[0])
            + m[1] * system.j(spin, others[1])
        )
    return out


def max_frequency(system: SpinSystem) -> float:
    """Largest single-quantum frequency magnitude in the rotating frame (Hz)."""
    return max(
        abs(v)
        for s in range(1, system.n + 1)
        for v in transition_frequencies(system, s, exact=True).values()
    )


def envelope(shape: str, t: np.ndarray, duration: float, truncation: float = 0.01) -> np.ndarray:
    """Unit-peak pulse envelope on ``0 <= t <= duration``.

    The Gaussian is centred at ``duration/2`` and falls to ``truncation`` of
    its peak at either end.
    """
    t = np.asarray(t, dtype=float)
    x = t / duration
    if shape == "gaussian":
        if not 0 < truncation < 1:
            raise ValueError("gaussian truncation must lie in (0, 1)")
        sigma = 0.5 / math.sqrt(2 * math.log(1 / truncation))
        out = np.exp(-((x - 0.5) ** 2) / (2 * sigma**2))
    elif shape == "rectangular":
        out = np.ones_like(x)
    elif shape == "sine-bell":
        out = np.sin(math.pi * x)
    elif shape == "triangular":
        out = 1 - np.abs(2 * x - 1)
    else:
        raise ValueError(f"unknown pulse shape {shape!r}; expected one of {SHAPES}")
    return np.where((x >= 0) & (x <= 1), out, 0.0)


def envelope_area(shape: str, duration: float, truncation: float = 0.01) -> float:
    """Exact integral of :func:`envelope` over the pulse."""
    if shape == "gaussian":
        sigma = 0.5 / math.sqrt(2 * math.log(1 / truncation))
        return duration * sigma * math.sqrt(2 * math.pi) * erf(0.5 / (sigma * math.sqrt(2)))
    if shape == "rectangular":
        return duration
    if shape == "sine-bell":
        return 2 * duration / math.pi
    if shape == "triangular":
        return duration / 2
    raise ValueError(f"unknown pulse shape {shape!r}")


@dataclass(frozen=True)
class HardPulse:
    """Instantaneous rotation ``exp(-i theta (Fx cos phi + Fy sin phi))``.

    ``spins=None`` acts on every spin; a tuple restricts the rotation to
    those spins (a multiplet-selective pulse).
    """

    flip_angle: float = math.pi / 2
    phase: float = math.pi / 2
    spins: tuple[int, ...] | None = None

    def propagator(self, n: int = 3) -> np.ndarray:
        fx = total_spin_operator("x", n, self.spins)
        fy = total_spin_operator("y", n, self.spins)
        gen = math.cos(self.phase) * fx + math.sin(self.phase) * fy
        return matrix_exponential(gen, self.flip_angle)


@dataclass(frozen=True)
class SoftPulse:
    """Shaped pulse applied simultaneously to selected lines of one multiplet.

    The default phase of pi makes a pi pulse on line ``(i, j)`` act as
    ``+i * Pauli-X`` on that transition, matching the oracle's experimental
    blocks.  ``lines=()`` is free evolution for ``duration``.

    ``frame_time`` is how long the line frames have been running when the
    pulse starts; a pulse that follows another one keeps phase continuity
    in every line frame by setting it to the earlier pulse's duration.
    """

    lines: tuple[tuple[int, int], ...] = ()
    flip_angle: float = math.pi
    phase: float = math.pi
    shape: str = "gaussian"
    duration: float = DEFAULT_DURATION
    truncation: float = 0.01
    target_spin: int = 3
    frame_time: float = 0.0

    def __post_init__(self):
        lines = tuple(tuple(int(b) for b in line) for line in self.lines)
        for line in lines:
            if line not in INPUTS:
                raise ValueError(f"line {line} is not one of {INPUTS}")
        if len(set(lines)) != len(lines):
            raise ValueError("a line may only be selected once")
        if self.shape not in SHAPES:
            raise ValueError(f"unknown pulse shape {self.shape!r}")
        if self.duration <= 0:
            raise ValueError("pulse duration must be positive")
        object.__setattr__(self, "lines", lines)

    def amplitude(self, t: np.ndarray) -> np.ndarray:
        """RF amplitude omega_1(t) in rad/s, calibrated to ``flip_angle``."""
        area = envelope_area(self.shape, self.duration, self.truncation)
        return self.flip_angle * envelope(self.shape, t, self.duration, self.truncation) / area

    def pattern(self) -> str:
        """Lines in (0,0),(0,1),(1,0),(1,1) order as e.g. ``[0, pi, pi, 0]``."""
        return "[" + ", ".join("pi" if line in self.lines else "0" for line in INPUTS) + "]"


@dataclass(frozen=True)
class Delay:
    duration: float


Event = Union[HardPulse, SoftPulse, Delay, tuple]


def _as_components(pulses: SoftPulse | Iterable[SoftPulse]) -> list[SoftPulse]:
    comps = [pulses] if isinstance(pulses, SoftPulse) else list(pulses)
    if comps:
        first = comps[0]
        for p in comps[1:]:
            if p.duration != first.duration:
                raise ValueError("simultaneous soft pulses must share one duration")
            if p.target_spin != first.target_spin:
                raise ValueError("simultaneous soft pulses must target the same spin")
    return comps


def rf_field(
    t: np.ndarray, pulses: SoftPulse | Iterable[SoftPulse], system: SpinSystem
) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of the target spin's Fx and Fy at times ``t`` (rad/s).

    Line ``l`` contributes ``w1(t) [cos(2 pi nu_l t + phi), sin(2 pi nu_l t + phi)]``
    with ``nu_l`` the exact line frequency, so every line's phase is the same
    at ``t = 0``.
    """
    t = np.asarray(t, dtype=float)
    ax = np.zeros_like(t)
    ay = np.zeros_like(t)
    for p in _as_components(pulses):
        if not p.lines:
            continue
        freqs = transition_frequencies(system, p.target_spin, exact=True)
        w1 = p.amplitude(t)
        for line in p.lines:
            ph = 2 * math.pi * freqs[line] * (t + p.frame_time) + p.phase
            ax += w1 * np.cos(ph)
            ay += w1 * np.sin(ph)
    return ax, ay


def _time_ordered_product(us: np.ndarray) -> np.ndarray:
    """``us[-1] @ ... @ us[0]`` by pairwise reduction."""
    eye = np.eye(us.shape[-1], dtype=complex)
    while len(us) > 1:
        if len(us) % 2:
            us = np.concatenate([us, eye[None]])
        us = us[1::2] @ us[0::2]
    return us[0] if len(us) else eye


def soft_pulse_propagator(
    system: SpinSystem, pulses: SoftPulse | Iterable[SoftPulse], dt: float = DEFAULT_DT
) -> np.ndarray:
    """Propagator over a soft-pulse interval, midpoint-sampled in steps of ``dt``."""
    comps = _as_components(pulses)
    if not comps:
        raise ValueError("no soft pulse given")
    duration = comps[0].duration
    h0 = free_hamiltonian(system)
    if not any(p.lines for p in comps):
        return matrix_exponential(h0, duration)
    steps = max(1, math.ceil(duration / dt - 1e-9))
    step = duration / steps
    t = (np.arange(steps) + 0.5) * step
    ax, ay = rf_field(t, comps, system)
    spin = comps[0].target_spin
    fx = spin_operator(spin, "x", system.n)
    fy = spin_operator(spin, "y", system.n)
    h = h0[None] + ax[:, None, None] * fx + ay[:, None, None] * fy
    w, v = np.linalg.eigh(h)
    us = np.einsum("kij,kj,klj->kil", v, np.exp(-1j * w * step), v.conj())
    return _time_ordered_product(us)


def interaction_frame(u: np.ndarray, system: SpinSystem, duration: float) -> np.ndarray:
    """Remove free evolution: ``exp(+i H0 T) U``."""
    return matrix_exponential(free_hamiltonian(system), -duration) @ u


def thermal_state(n: int = 3) -> np.ndarray:
    return total_spin_operator("z", n)


@dataclass
class SimulationResult:
    rho: np.ndarray
    propagator: np.ndarray
    elapsed: float
    frame: str = "rotating frame at the transmitter"
    history: list = field(default_factory=list)


def check_time_step(system: SpinSystem, dt: float) -> None:
    nu = max_frequency(system)
    if nu == 0:
        return
    limit = 1 / (20 * nu)
    if dt > limit * (1 + 1e-12):
        raise ValueError(f"time step {dt:g} s too coarse; need dt <= {limit:.3g} s")


def simulate(
    system: SpinSystem,
    schedule: Sequence[Event],
    dt: float = DEFAULT_DT,
    rho0: np.ndarray | None = None,
) -> SimulationResult:
    """Run a pulse schedule from the thermal state ``Iz + Sz + Rz``.

    Events are :class:`HardPulse`, :class:`SoftPulse`, :class:`Delay`, or a
    tuple of soft pulses applied together.
    """
    if dt <= 0:
        raise ValueError("time step must be positive")
    if any(not isinstance(ev, (HardPulse, Delay)) for ev in schedule):
        check_time_step(system, dt)
    n = system.n
    rho = thermal_state(n) if rho0 is None else np.asarray(rho0, dtype=complex)
    u = np.eye(2**n, dtype=complex)
    elapsed = 0.0
    history = []
    for ev in schedule:
        if isinstance(ev, HardPulse):
            step = ev.propagator(n)
        elif isinstance(ev, Delay):
            step = matrix_exponential(free_hamiltonian(system), ev.duration)
            elapsed += ev.duration
        elif isinstance(ev, (SoftPulse, tuple, list)):
            comps = _as_components(ev)
            step = soft_pulse_propagator(system, comps, dt)
            elapsed += comps[0].duration
        else:
            raise TypeError(f"unsupported schedule event {ev!r}")
        u = step @ u
        history.append((ev, elapsed))
    err = unitarity_error(u)
    if err > UNITARITY_LIMIT:
        raise RuntimeError(f"propagator lost unitarity ({err:.2e})")
    return SimulationResult(conjugate(u, rho), u, elapsed, history=history)


def restore_pulse(pulse: SoftPulse | None = None) -> SoftPulse:
    """Soft pi/2 on all four lines of the multiplet, 90 degrees from ``pulse``'s
    phase and phase-continuous with its line frames."""
    pulse = pulse or SoftPulse()
    return replace(
        pulse,
        lines=INPUTS,
        flip_angle=math.pi / 2,
        phase=pulse.phase + math.pi / 2,
        frame_time=pulse.frame_time + pulse.duration,
    )


def experiment_schedule(
    f: BooleanFunction, pulse: SoftPulse | None = None, restore: bool = False
) -> list[Event]:
    """Hard pi/2 about y, then soft pi pulses on every line with ``f(i, j) = 1``.

    ``restore`` appends :func:`restore_pulse`.
    """
    pulse = pulse or SoftPulse()
    lines = tuple(line for line in INPUTS if f(*line))
    schedule = [HardPulse(math.pi / 2, math.pi / 2), replace(pulse, lines=lines)]
    if restore:
        schedule.append(restore_pulse(pulse))
    return schedule


def effective_oracle(
    f: BooleanFunction,
    system: SpinSystem | None = None,
    pulse: SoftPulse | None = None,
    dt: float = DEFAULT_DT,
) -> np.ndarray:
    """Soft-pulse propagator for ``f`` with free evolution removed."""
    system = system or SpinSystem.idealized()
    pulse = pulse or SoftPulse()
    soft = replace(pulse, lines=tuple(line for line in INPUTS if f(*line)))
    u = soft_pulse_propagator(system, soft, dt)
    return interaction_frame(u, system, soft.duration)


def oracle_fidelity(
    f: BooleanFunction,
    system: SpinSystem | None = None,
    pulse: SoftPulse | None = None,
    dt: float = DEFAULT_DT,
) -> float:
    """Fidelity of :func:`effective_oracle` against the experimental unitary."""
    return fidelity(experimental_unitary(f), effective_oracle(f, system, pulse, dt))


def line_coherences(rho: np.ndarray, system: SpinSystem, spin: int = 3) -> dict[tuple[int, int], complex]:
    """Single-quantum coherence of each line, read in the labelled eigenbasis."""
    _, vectors = labeled_eigenbasis(system)
    r = vectors.conj().T @ rho @ vectors
    return {k: complex(r[a, b]) for k, (a, b) in _line_pairs(spin, system.n).items()}


def single_quantum_magnitude(rho: np.ndarray, system: SpinSystem, spin: int = 3) -> float:
    return float(sum(abs(c) for c in line_coherences(rho, system, spin).values()))


def refocusing_check(
    f: BooleanFunction,
    system: SpinSystem | None = None,
    pulse: SoftPulse | None = None,
    dt: float = DEFAULT_DT,
) -> float:
    """R single-quantum magnitude after the schedule, relative to just after
    the hard pulse (1.0 means fully refocused)."""
    system = system or SpinSystem.default()
    schedule = experiment_schedule(f, pulse)
    excited = simulate(system, schedule[:1], dt).rho
    final = simulate(system, schedule, dt).rho
    return single_quantum_magnitude(final, system) / single_quantum_magnitude(excited, system)


@dataclass
class SelectivityReport:
    """Per pulsed line: inversion of the target and worst transfer on any other line."""

    inversion: dict[tuple[int, int], float]
    leakage: dict[tuple[int, int], float]

    @property
    def min_inversion(self) -> float:
        return min(self.inversion.values())

    @property
    def max_leakage(self) -> float:
        return max(self.leakage.values())


def selectivity(
    system: SpinSystem | None = None, pulse: SoftPulse | None = None, dt: float = DEFAULT_DT
) -> SelectivityReport:
    """Apply a single-line pulse to each R line in turn.

    Transfer on a line is the population moved across that transition, i.e.
    the fractional change of its z polarization divided by two; 1.0 is a
    complete inversion.
    """
    system = system or SpinSystem.idealized()
    pulse = pulse or SoftPulse()
    pairs = _line_pairs(pulse.target_spin, system.n)
    inversion, leakage = {}, {}
    for line in INPUTS:
        u = soft_pulse_propagator(system, replace(pulse, lines=(line,)), dt)
        transfer = {k: abs(u[b, a]) ** 2 for k, (a, b) in pairs.items()}
        inversion[line] = transfer[line]
        leakage[line] = max(v for k, v in transfer.items() if k != line)
    return SelectivityReport(inversion, leakage)
