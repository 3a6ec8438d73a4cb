"""FIDs, absolute-value spectra, multiplet integrals and the percentage readout."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .algebra import total_spin_operator
from .ideal import decide, observable_signature, thermal_output
from .oracle import BooleanFunction, FunctionClass, PAPER_FUNCTIONS, classify
from .pulses import (
    DEFAULT_DT,
    SPIN_NAMES,
    SoftPulse,
    SpinSystem,
    experiment_schedule,
    labeled_eigenbasis,
    simulate,
)

APODIZATIONS = ("none", "pseudo-echo")


class MultipletOverlapError(ValueError):
    """Integration windows of two multiplets overlap."""


@dataclass(frozen=True)
class AcquisitionParams:
    """Detection settings.

    ``t2`` applies to R coherences during the soft pulse (refocused), ``t2_star``
    to everything that precesses freely, including the whole acquisition.
    ``relaxation=False`` drops the decay before acquisition but keeps the
    acquisition linewidth.
    """

    dwell: float = 1e-3
    points: int = 4096
    t2: float = 2.0
    t2_star: float = 0.3
    apodization: str = "none"
    relaxation: bool = True

    def __post_init__(self):
        if self.dwell <= 0:
            raise ValueError("dwell time must be positive")
        if self.points < 2 or self.points & (self.points - 1):
            raise ValueError(f"points must be a power of two, got {self.points}")
        if not self.t2 >= self.t2_star > 0:
            raise ValueError("need t2 >= t2_star > 0")
        if self.apodization not in APODIZATIONS:
            raise ValueError(f"apodization must be one of {APODIZATIONS}")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.points) * self.dwell

    @property
    def linewidth(self) -> float:
        """Full width at half height of a line, Hz."""
        return 1 / (math.pi * self.t2_star)


@dataclass
class Spectrum:
    freqs: np.ndarray
    magnitude: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def resolution(self) -> float:
        return float(self.freqs[1] - self.freqs[0])


def _flipped_spins(a: int, b: int, n: int) -> set[int]:
    diff = a ^ b
    return {s for s in range(1, n + 1) if diff >> (n - s) & 1}


def apply_relaxation(
    rho: np.ndarray, system: SpinSystem, duration: float, acq: AcquisitionParams
) -> np.ndarray:
    """Phenomenological decay of single-quantum coherences before acquisition.

    R coherences, refocused by the soft pulses, are scaled by
    ``exp(-duration / t2)``; I and S coherences, which precess freely, by
    ``exp(-duration / t2_star)``.  Other elements are left alone.
    """
    if not acq.relaxation or duration == 0:
        return rho
    n = system.n
    _, v = labeled_eigenbasis(system)
    r = v.conj().T @ rho @ v
    factors = {s: math.exp(-duration / (acq.t2 if s == n else acq.t2_star)) for s in range(1, n + 1)}
    scale = np.ones(r.shape)
    for a in range(2**n):
        for b in range(2**n):
            flipped = _flipped_spins(a, b, n)
            if len(flipped) == 1:
                scale[a, b] = factors[flipped.pop()]
    return v @ (r * scale) @ v.conj().T


def fid(rho: np.ndarray, system: SpinSystem, acq: AcquisitionParams) -> np.ndarray:
    """Quadrature signal ``tr(F+ rho(t)) exp(-t / t2_star)`` under free evolution."""
    n = system.n
    energies, v = labeled_eigenbasis(system)
    f_plus = total_spin_operator("x", n) + 1j * total_spin_operator("y", n)
    r = v.conj().T @ rho @ v
    fp = v.conj().T @ f_plus @ v
    amp = fp.T * r  # amp[a, b] = F+[b, a] rho[a, b]
    omega = energies[None, :] - energies[:, None]  # -(E_a - E_b)
    mask = np.abs(amp) > 1e-14
    t = acq.times
    if not mask.any():
        return np.zeros_like(t, dtype=complex)
    signal = np.exp(1j * np.outer(t, omega[mask])) @ amp[mask]
    return signal * np.exp(-t / acq.t2_star)


def pseudo_echo_weights(acq: AcquisitionParams) -> np.ndarray:
    """Cancel the exponential decay and impose a Gaussian centred at 2 T2*."""
    t = acq.times
    centre = 2 * acq.t2_star
    return np.exp(t / acq.t2_star - ((t - centre) / acq.t2_star) ** 2)


def spectrum(signal: np.ndarray, acq: AcquisitionParams, label: str = "") -> Spectrum:
    """Absolute-value spectrum (unnormalized DFT, zero frequency centred).

    With no apodization ``sum(|S|**2) == points * sum(|fid|**2)``.
    """
    signal = np.asarray(signal, dtype=complex)
    if acq.apodization == "pseudo-echo":
        signal = signal * pseudo_echo_weights(acq)
    spec = np.fft.fftshift(np.fft.fft(signal))
    freqs = np.fft.fftshift(np.fft.fftfreq(len(signal), acq.dwell))
    return Spectrum(freqs, np.abs(spec), label, {"apodization": acq.apodization})


def multiplet_windows(system: SpinSystem, acq: AcquisitionParams) -> dict[int, tuple[float, float]]:
    """Integration window per spin; raises if any two overlap."""
    windows = {}
    for s in range(1, system.n + 1):
        half = sum(abs(system.j(s, t)) for t in range(1, system.n + 1) if t != s) / 2
        half += 4 * acq.linewidth
        centre = system.offsets_hz[s - 1]
        windows[s] = (centre - half, centre + half)
    spins = sorted(windows, key=lambda s: windows[s][0])
    for a, b in zip(spins, spins[1:]):
        if windows[a][1] >= windows[b][0]:
            raise MultipletOverlapError(
                f"{SPIN_NAMES[a - 1]} window {windows[a][0]:.2f}..{windows[a][1]:.2f} Hz overlaps "
                f"{SPIN_NAMES[b - 1]} window {windows[b][0]:.2f}..{windows[b][1]:.2f} Hz"
            )
    nyquist = 1 / (2 * acq.dwell)
    for s, (lo, hi) in windows.items():
        if lo < -nyquist or hi > nyquist:
            raise ValueError(f"{SPIN_NAMES[s - 1]} multiplet lies outside the +-{nyquist:g} Hz spectral window")
    return windows


def integrate_multiplet(sp: Spectrum, spin: int, system: SpinSystem, acq: AcquisitionParams) -> float:
    lo, hi = multiplet_windows(system, acq)[spin]
    inside = (sp.freqs >= lo) & (sp.freqs <= hi)
    return float(sp.magnitude[inside].sum() * sp.resolution)


def integrate_all(sp: Spectrum, system: SpinSystem, acq: AcquisitionParams) -> dict[str, float]:
    return {SPIN_NAMES[s - 1]: integrate_multiplet(sp, s, system, acq) for s in range(1, system.n + 1)}


@dataclass
class ExperimentResult:
    function: BooleanFunction
    rho: np.ndarray
    spectrum: Spectrum
    integrals: dict[str, float]
    restored: bool = False


def run_experiment(
    f: BooleanFunction,
    system: SpinSystem | None = None,
    pulse: SoftPulse | None = None,
    acq: AcquisitionParams | None = None,
    dt: float = DEFAULT_DT,
    restore: bool = False,
) -> ExperimentResult:
    """Simulate one function's experiment through to integrated multiplets.

    With ``restore=True`` a multiplet-selective soft pi/2 follows the soft
    pulses.  Relaxation is charged for the evaluation interval only.
    """
    system = system or SpinSystem.default()
    pulse = pulse or SoftPulse()
    acq = acq or AcquisitionParams()
    multiplet_windows(system, acq)
    result = simulate(system, experiment_schedule(f, pulse, restore), dt)
    rho = apply_relaxation(result.rho, system, pulse.duration, acq)
    sp = spectrum(fid(rho, system, acq), acq, label=f.name)
    return ExperimentResult(f, rho, sp, integrate_all(sp, system, acq), restore)


def run_suite(
    functions: Sequence[BooleanFunction] | None = None,
    jobs: int | None = None,
    **kwargs,
) -> list[ExperimentResult]:
    """Run several experiments concurrently; results keep the input order."""
    functions = list(functions or PAPER_FUNCTIONS.values())
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda f: run_experiment(f, **kwargs), functions))


@dataclass
class ReportRow:
    function: str
    percent: dict[str, float]
    decision: FunctionClass
    truth: FunctionClass

    @property
    def correct(self) -> bool:
        return self.decision is self.truth


@dataclass
class PercentReport:
    rows: list[ReportRow]
    reference: str
    threshold: float

    def row(self, label: str) -> ReportRow:
        for r in self.rows:
            if r.function == label:
                return r
        raise KeyError(label)

    @property
    def all_correct(self) -> bool:
        return all(r.correct for r in self.rows)

    def format(self) -> str:
        lines = [f"{'f':<6}{'I %':>8}{'S %':>8}{'R %':>8}  decision   truth"]
        for r in self.rows:
            p = r.percent
            lines.append(
                f"{r.function:<6}{p['I']:8.1f}{p['S']:8.1f}{p['R']:8.1f}  {r.decision.value:<9}  {r.truth.value}"
            )
        return "\n".join(lines)


def percent_report(runs: Sequence[ExperimentResult], threshold: float = 0.5) -> PercentReport:
    """Integrals as percentages of the f1 run (or the first run if f1 is absent)."""
    if not runs:
        raise ValueError("no runs to report")
    ref = next((r for r in runs if r.function.label == "f1"), runs[0])
    rows = []
    for r in runs:
        pct = {k: 100 * r.integrals[k] / ref.integrals[k] for k in SPIN_NAMES}
        sig = tuple(pct[k] / 100 for k in SPIN_NAMES)
        rows.append(ReportRow(r.function.name, pct, decide(sig, threshold), classify(r.function)))
    return PercentReport(rows, ref.function.name, threshold)


@dataclass
class RestoreResult:
    function: str
    reference: dict[str, float]
    before: dict[str, float]
    after: dict[str, float]
    suppressed: tuple[str, ...]
    spectra: dict[str, Spectrum] = field(default_factory=dict)

    @property
    def recovery(self) -> dict[str, float]:
        return {k: self.after[k] / self.before[k] if self.before[k] else math.inf for k in self.suppressed}


def suppressed_spins(f: BooleanFunction) -> tuple[str, ...]:
    """Spins whose in-phase signal the line-selective pulses convert away."""
    sig = observable_signature(thermal_output(f, "experimental"))
    return tuple(name for name, m in zip(SPIN_NAMES[:2], sig[:2]) if m < 0.5)


def restore_experiment(
    f: BooleanFunction,
    system: SpinSystem | None = None,
    pulse: SoftPulse | None = None,
    acq: AcquisitionParams | None = None,
    dt: float = DEFAULT_DT,
) -> RestoreResult:
    """Compare integrals with and without a closing multiplet-selective pi/2."""
    if classify(f) is not FunctionClass.BALANCED:
        raise ValueError(f"{classify(f).value} function has no suppressed lines ({f.name})")
    kwargs = dict(system=system, pulse=pulse, acq=acq, dt=dt)
    ref = run_experiment(PAPER_FUNCTIONS["f1"], **kwargs)
    before = run_experiment(f, **kwargs)
    after = run_experiment(f, restore=True, **kwargs)
    return RestoreResult(
        f.name,
        ref.integrals,
        before.integrals,
        after.integrals,
        suppressed_spins(f),
        {"before": before.spectrum, "after": after.spectrum},
    )


def write_spectrum_csv(path: str | Path, sp: Spectrum) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["frequency_hz", "magnitude"])
        for nu, mag in zip(sp.freqs, sp.magnitude):
            w.writerow([f"{nu:.6f}", f"{mag:.9e}"])


def write_report_csv(path: str | Path, report: PercentReport) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function", "I_pct", "S_pct", "R_pct", "decision"])
        for r in report.rows:
            p = r.percent
            w.writerow([r.function, f"{p['I']:.3f}", f"{p['S']:.3f}", f"{p['R']:.3f}", r.decision.value])
