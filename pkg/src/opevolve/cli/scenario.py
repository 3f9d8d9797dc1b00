"""Running a validated scenario and writing its artifacts."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__
from ..errata import describe as describe_errata
from ..oracle import PotentialGrid, split_step_evolve
from ..opalgebra.hamiltonians import HamiltonianKind, HamiltonianSpec
from ..propagators import (
    DispersionRelation,
    PolynomialState,
    evolve_by_operator_series,
    evolve_constant_force_fourier,
    evolve_free_fourier,
    evolve_harmonic_fourier,
    evolve_polynomial_state,
)
from ..wavefield import (
    Grid1D,
    Representation,
    WaveFunction,
    build_grid,
    compare,
    make_gaussian,
    observables,
    to_momentum,
    to_position,
)
from .config import ScenarioConfig

DENSITY_COLUMNS = ("q", "re_psi", "im_psi", "density")
OBSERVABLE_COLUMNS = ("method", "t", "norm", "mean_q", "mean_p", "var_q", "var_p")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class MethodRun:
    label: str
    states: list
    flags: tuple = ()


@dataclass
class RunArtifacts:
    """Everything a run produced, already rendered to text where it is written out.

    ``density`` maps ``(method, index)`` to CSV text; ``observables`` and
    ``comparison`` are the CSV and JSON documents (``comparison`` is None
    for single-method runs).
    """

    times: list
    runs: list
    density: dict = field(default_factory=dict)
    observables: str = ""
    comparison: dict | None = None
    metadata: dict = field(default_factory=dict)

    def summary_lines(self) -> list[str]:
        lines = []
        for i, t in enumerate(self.times):
            parts = [f"t={fmt(t)}"]
            for run in self.runs:
                obs = observables(run.states[i])
                parts.append(f"{run.label}: norm={obs.norm:.12f} mean_q={obs.mean_q:.9f}")
            if self.comparison is not None:
                row = self.comparison["per_time"][i]
                parts.append(f"l2={row['l2']:.3e} fidelity={row['fidelity']:.12f}")
            lines.append("  ".join(parts))
        return lines

    def write(self, config: ScenarioConfig) -> list[Path]:
        written = []
        for out in config.outputs:
            path = Path(out.path)
            if out.kind == "density_csv":
                path.mkdir(parents=True, exist_ok=True)
                for (label, i), text in sorted(self.density.items()):
                    target = path / f"density_{label}_{i:04d}.csv"
                    target.write_text(text)
                    written.append(target)
                continue
            path.parent.mkdir(parents=True, exist_ok=True)
            if out.kind == "observables_csv":
                path.write_text(self.observables)
            elif out.kind == "comparison_json":
                path.write_text(_dump_json(self.comparison))
            else:
                path.write_text(_dump_json(self.metadata))
            written.append(path)
        return written


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def initial_state(config: ScenarioConfig, grid: Grid1D):
    """Grid WaveFunction, or PolynomialState for polynomial initial states."""
    s = config.initial_state
    if s.type == "polynomial":
        return PolynomialState(tuple(s.coefficients), config.hbar, config.hamiltonian.mass)
    psi = make_gaussian(grid, s.center, s.width, s.k0, config.hbar)
    if s.type == "plane_wave_packet" and s.one_sided:
        phi = to_momentum(psi.amplitudes, grid)
        phi = np.where(grid.k > 0, phi, 0.0)
        psi = psi.with_amplitudes(to_position(phi, grid)).normalized()
    return psi


def _dispersion(method, H: HamiltonianSpec) -> DispersionRelation:
    d = method.dispersion
    m = float(H.mass)
    if d is None or d.kind == "nonrelativistic":
        return DispersionRelation.nonrelativistic(m)
    if d.kind == "massless":
        return DispersionRelation.massless(d.c)
    return DispersionRelation.relativistic(m, d.c, d.include_rest_energy)


def _closed_form(method, psi, H: HamiltonianSpec, t: float, grid: Grid1D) -> WaveFunction:
    kind = H.kind
    m = float(H.mass)
    if method.name == "fourier":
        if kind is HamiltonianKind.FREE:
            return evolve_free_fourier(psi, t, _dispersion(method, H))
        if kind is HamiltonianKind.CONSTANT_FORCE:
            return evolve_constant_force_fourier(psi, t, float(H.force), m)
        return evolve_harmonic_fourier(psi, t, float(H.omega), m)
    if method.name == "polynomial":
        res = evolve_polynomial_state(psi, H, t, window=method.window, tol=method.tol,
                                      resummed=method.resummed)
        values, cut = res.evaluate_windowed(grid.q)
        return WaveFunction(grid, values, Representation.POSITION, H.hbar, res.flags + cut)
    return evolve_by_operator_series(psi, H, t, method.order, grid)


def _oracle_run(method, psi: WaveFunction, H: HamiltonianSpec, times) -> list:
    # steps are spread over [0, t_last] in proportion to each interval
    V = PotentialGrid.from_hamiltonian(psi.grid, H)
    m = float(H.kinetic_mass())
    t_last = times[-1]
    states = []
    current, t_prev = psi, 0.0
    for t in times:
        span = t - t_prev
        if span > 0:
            steps = max(1, round(method.steps * span / t_last))
            current = split_step_evolve(current, V, span, steps, m)
        states.append(current)
        t_prev = t
    return states


def density_csv(psi: WaveFunction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DENSITY_COLUMNS)
    amps = psi.amplitudes
    for q, a in zip(psi.grid.q, amps):
        w.writerow((fmt(q), fmt(a.real), fmt(a.imag), fmt(abs(a) ** 2)))
    return buf.getvalue()


def _observables_csv(runs, times) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(OBSERVABLE_COLUMNS)
    for run in runs:
        for t, psi in zip(times, run.states):
            o = observables(psi)
            w.writerow((run.label, fmt(t), fmt(o.norm), fmt(o.mean_q), fmt(o.mean_p),
                        fmt(o.var_q), fmt(o.var_p)))
    return buf.getvalue()


def execute_scenario(config: ScenarioConfig) -> RunArtifacts:
    """Run every method at every time and assemble the artifacts.

    Closed-form methods evolve each time point from the initial state; the
    oracle steps sequentially from one time point to the next.
    """
    g = config.grid
    grid = build_grid(g.n_points, g.q_min, g.q_max)
    H = config.hamiltonian.to_spec(config.hbar)
    psi0 = initial_state(config, grid)
    times = list(config.times)

    runs = []
    for method in config.methods:
        if method.name == "oracle":
            states = _oracle_run(method, psi0, H, times)
        else:
            states = [_closed_form(method, psi0, H, t, grid) for t in times]
        flags = tuple(sorted({f for s in states for f in s.flags}))
        runs.append(MethodRun(method.label, states, flags))

    density = {}
    if any(o.kind == "density_csv" for o in config.outputs):
        for run in runs:
            for i, psi in enumerate(run.states):
                density[(run.label, i)] = density_csv(psi)

    comparison = None
    if len(runs) == 2:
        a, b = runs
        per_time = []
        for t, x, y in zip(times, a.states, b.states):
            r = compare(x, y)
            per_time.append({"t": t, "l2": r.l2_distance, "fidelity": r.fidelity,
                             "max_pointwise": r.max_pointwise})
        comparison = {
            "method_a": a.label,
            "method_b": b.label,
            "per_time": per_time,
            "max_l2": max(row["l2"] for row in per_time),
            "min_fidelity": min(row["fidelity"] for row in per_time),
        }

    all_flags = sorted({f for run in runs for f in run.flags})
    metadata = {
        "tool": "opevolve",
        "version": __version__,
        "config": config.model_dump(mode="json"),
        "hamiltonian": H.describe(),
        "flags": {run.label: list(run.flags) for run in runs},
        "errata": describe_errata(all_flags),
    }
    return RunArtifacts(times, runs, density, _observables_csv(runs, times), comparison, metadata)
