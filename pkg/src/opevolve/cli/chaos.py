"""Symmetric packet released at the apex of an inverted oscillator."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from ..oracle import PotentialGrid, split_step_evolve
from ..wavefield import WaveFunction, build_grid, make_gaussian, observables
from .scenario import density_csv


@dataclass
class ChaosReport:
    """Outcome of :func:`chaos_demo`.

    ``bimodal_onset`` is the first sample time at which the density has
    maxima on both sides of a local minimum at q = 0, or None if that never
    happens within the run. ``truncated`` is set when the packet reached the
    box edge and the run stopped early.
    """

    times: list
    left_mass: list
    right_mass: list
    parity_asymmetry: list
    var_q: list
    var_q_closed_form: list
    peak_counts: list
    bimodal_onset: float | None
    truncated: bool
    density: dict = field(default_factory=dict)
    flags: tuple = ()

    @property
    def max_parity_asymmetry(self) -> float:
        return max(self.parity_asymmetry)

    def summary(self) -> dict:
        return {
            "bimodal_onset": self.bimodal_onset,
            "final_left_mass": self.left_mass[-1],
            "final_right_mass": self.right_mass[-1],
            "max_parity_asymmetry": self.max_parity_asymmetry,
            "max_peaks": max(self.peak_counts),
            "truncated": self.truncated,
            "flags": list(self.flags),
        }


def side_masses(psi: WaveFunction) -> tuple[float, float]:
    """Probability on q < 0 and q > 0; a sample at exactly 0 is split evenly."""
    q = psi.grid.q
    dens = np.abs(psi.amplitudes) ** 2 * psi.grid.dq
    zero = float(np.sum(dens[q == 0]))
    return float(np.sum(dens[q < 0])) + 0.5 * zero, float(np.sum(dens[q > 0])) + 0.5 * zero


def is_bimodal(psi: WaveFunction, prominence: float = 1e-3) -> tuple[bool, int]:
    """Two maxima on opposite sides of a local minimum at q = 0."""
    q = psi.grid.q
    dens = np.abs(psi.amplitudes) ** 2
    peaks, _ = find_peaks(dens, prominence=prominence * dens.max())
    if len(peaks) < 2:
        return False, len(peaks)
    left = peaks[q[peaks] < 0]
    right = peaks[q[peaks] > 0]
    if not len(left) or not len(right):
        return False, len(peaks)
    lo, hi = left[-1], right[0]
    dip = lo + int(np.argmin(dens[lo:hi + 1]))
    return bool(abs(q[dip]) <= 2 * psi.grid.dq), len(peaks)


def chaos_demo(lam: float = 1.0, width: float = 0.5, t_max: float = 3.0, samples: int = 30, *,
               m: float = 1.0, hbar: float = 1.0, n_points: int = 16384, half_width: float = 120.0,
               dt: float = 1e-3, quartic: float = 0.0, keep_density: bool = False) -> ChaosReport:
    """Evolve a centered Gaussian under V = -m lam² q²/2 + quartic q⁴.

    The default ``quartic = 0`` is the pure inverted oscillator. A positive
    value confines the packet and turns the apex into the top of a double
    well. ``var_q_closed_form`` is the free-moment result of the pure
    inverted oscillator (cosh/sinh flow of a packet with zero covariance);
    it only applies when ``quartic`` is zero.
    """
    if not (lam > 0 and width > 0 and t_max > 0 and samples >= 1):
        raise ValueError("lam, width, t_max must be positive and samples >= 1")
    grid = build_grid(n_points, -half_width, half_width)
    psi = make_gaussian(grid, 0.0, width, 0.0, hbar)
    V = PotentialGrid(grid, -0.5 * m * lam**2 * grid.q**2 + quartic * grid.q**4)
    times = list(np.linspace(0.0, t_max, samples + 1))
    obs0 = observables(psi)

    report = ChaosReport([], [], [], [], [], [], [], None, False)
    flags = []
    current, t_prev = psi, 0.0
    for i, t in enumerate(times):
        if t > t_prev:
            steps = max(1, int(np.ceil((t - t_prev) / dt - 1e-9)))
            current = split_step_evolve(current, V, t - t_prev, steps, m)
        t_prev = t
        if current.edge_mass() > 1e-10:
            report.truncated = True
            flags.append("boundary_reached")
            break
        left, right = side_masses(current)
        bimodal, npk = is_bimodal(current)
        o = observables(current)
        ch, sh = np.cosh(lam * t), np.sinh(lam * t)
        closed = obs0.var_q * ch**2 + obs0.var_p / (m * lam) ** 2 * sh**2
        report.times.append(float(t))
        report.left_mass.append(left)
        report.right_mass.append(right)
        report.parity_asymmetry.append(abs(right - left))
        report.var_q.append(o.var_q)
        report.var_q_closed_form.append(float(closed))
        report.peak_counts.append(npk)
        if bimodal and report.bimodal_onset is None:
            report.bimodal_onset = float(t)
        if keep_density:
            report.density[i] = density_csv(current)
    report.flags = tuple(flags)
    return report

