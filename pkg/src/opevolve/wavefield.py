"""Wavefunctions sampled on a uniform periodic 1D grid.

Positions are ``q_j = q_min + j*dq`` for ``j = 0..n-1`` (``q_max`` itself is
the periodic image of ``q_min``). Momentum amplitudes are stored on the
ascending wavenumber grid ``k_j = (j - n/2)*dk`` with ``dk = 2*pi/(n*dq)``,
using the unitary transform

    phi(k) = (2*pi)**-0.5 * integral psi(q) exp(-i*k*q) dq

so that both representations carry the same L2 norm.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

# Mass allowed outside the box for a constructed packet.
TAIL_TOLERANCE = 1e-10
# Fraction of the box on each side treated as "edge" for leakage checks.
EDGE_FRACTION = 1.0 / 32.0


class Representation(enum.Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


@dataclass(frozen=True)
class Grid1D:
    n_points: int
    q_min: float
    q_max: float

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 8, got {n!r}")
        if not self.q_max > self.q_min:
            raise ValueError(f"degenerate interval [{self.q_min}, {self.q_max}]")

    @property
    def length(self) -> float:
        return self.q_max - self.q_min

    @property
    def dq(self) -> float:
        return self.length / self.n_points

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / (self.n_points * self.dq)

    @property
    def q(self) -> np.ndarray:
        return self.q_min + self.dq * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        return self.dk * (np.arange(self.n_points) - self.n_points // 2)

    @property
    def k_max(self) -> float:
        return self.dk * (self.n_points // 2)

    def edge_mask(self, fraction: float = EDGE_FRACTION) -> np.ndarray:
        m = max(1, int(round(self.n_points * fraction)))
        mask = np.zeros(self.n_points, dtype=bool)
        mask[:m] = True
        mask[-m:] = True
        return mask

    def interior_mask(self, q_lo: float, q_hi: float) -> np.ndarray:
        q = self.q
        return (q >= q_lo) & (q <= q_hi)


def build_grid(n_points: int, q_min: float, q_max: float) -> Grid1D:
    return Grid1D(int(n_points), float(q_min), float(q_max))


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex samples of a state together with the grid they live on.

    ``flags`` carries non-fatal diagnostics raised by whatever produced the
    state (for instance ``"boundary_leakage"``).
    """

    grid: Grid1D
    amplitudes: np.ndarray
    representation: Representation = Representation.POSITION
    hbar: float = 1.0
    flags: tuple = field(default=())

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n_points,):
            raise ValueError(
                f"amplitude length {amps.shape} does not match grid size {self.grid.n_points}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("wavefunction amplitudes must be finite")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "flags", tuple(self.flags))

    @property
    def measure(self) -> float:
        if self.representation is Representation.POSITION:
            return self.grid.dq
        return self.grid.dk

    @property
    def coordinates(self) -> np.ndarray:
        if self.representation is Representation.POSITION:
            return self.grid.q
        return self.grid.k

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * self.measure))

    def with_amplitudes(self, amplitudes, flags=()) -> WaveFunction:
        return WaveFunction(
            self.grid, amplitudes, self.representation, self.hbar, tuple(self.flags) + tuple(flags)
        )

    def normalized(self) -> WaveFunction:
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize a zero state")
        return self.with_amplitudes(self.amplitudes / n)

    def edge_mass(self) -> float:
        """Probability sitting in the outer strips of the position box."""
        psi = self if self.representation is Representation.POSITION else fourier_transform(self)
        dens = np.abs(psi.amplitudes) ** 2 * self.grid.dq
        return float(np.sum(dens[self.grid.edge_mask()]))


def _leakage_flags(psi: WaveFunction, threshold: float = 1e-6) -> tuple:
    total = psi.norm() ** 2
    if total > 0 and psi.edge_mass() > threshold * total:
        return ("boundary_leakage",)
    return ()


def make_gaussian(grid: Grid1D, center: float = 0.0, width: float = 1.0,
                  k0: float = 0.0, hbar: float = 1.0) -> WaveFunction:
    """Normalized packet ``exp(-(q-center)**2/(2*width**2)) * exp(i*k0*q)``.

    With this convention ``var_q = width**2/2`` and ``mean_p = hbar*k0``.
    Raises ``ValueError`` if more than ``TAIL_TOLERANCE`` of the density
    would fall outside the box.
    """
    if not width > 0:
        raise ValueError("width must be positive")
    if not (grid.q_min <= center - 5 * width and center + 5 * width <= grid.q_max):
        raise ValueError("packet center +/- 5*width must lie inside the grid")
    # |psi|^2 is a normal density with sigma = width/sqrt(2)
    tail = 0.5 * (erfc((grid.q_max - center) / width) + erfc((center - grid.q_min) / width))
    if tail > TAIL_TOLERANCE:
        raise ValueError(f"packet leaks outside the domain (tail mass {tail:.3g})")
    q = grid.q
    amps = np.exp(-((q - center) ** 2) / (2.0 * width**2) + 1j * k0 * q)
    return WaveFunction(grid, amps, Representation.POSITION, hbar).normalized()


def fourier_transform(psi: WaveFunction, direction: str | None = None) -> WaveFunction:
    """Switch between position and momentum representation.

    ``direction`` may be ``"forward"`` (position to momentum) or
    ``"inverse"``; when given it must agree with the current representation.
    """
    grid = psi.grid
    src = psi.representation
    if direction is not None:
        want = {"forward": Representation.POSITION, "inverse": Representation.MOMENTUM}.get(direction)
        if want is None:
            raise ValueError(f"unknown direction {direction!r}")
        if want is not src:
            raise ValueError(f"{direction} transform needs a {want.value} representation, got {src.value}")
    if src is Representation.POSITION:
        amps = to_momentum(psi.amplitudes, grid)
        rep = Representation.MOMENTUM
    else:
        amps = to_position(psi.amplitudes, grid)
        rep = Representation.POSITION
    return WaveFunction(grid, amps, rep, psi.hbar, psi.flags)


def to_momentum(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    k = grid.k
    spec = np.fft.fftshift(np.fft.fft(values))
    return spec * np.exp(-1j * k * grid.q_min) * (grid.dq / np.sqrt(2.0 * np.pi))


def to_position(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    k = grid.k
    shifted = np.fft.ifftshift(values * np.exp(1j * k * grid.q_min))
    return np.fft.ifft(shifted) * (grid.n_points * grid.dk / np.sqrt(2.0 * np.pi))


def momentum_multiply(values: np.ndarray, grid: Grid1D, factor: np.ndarray) -> np.ndarray:
    """Apply a diagonal momentum-space multiplier to position samples."""
    kf = np.fft.ifftshift(factor)
    return np.fft.ifft(kf * np.fft.fft(values))


def position_state(psi: WaveFunction) -> WaveFunction:
    if psi.representation is Representation.POSITION:
        return psi
    return fourier_transform(psi)


@dataclass(frozen=True)
class ObservableReport:
    norm: float
    mean_q: float
    mean_p: float
    var_q: float
    var_p: float

    def uncertainty_product(self) -> float:
        return self.var_q * self.var_p


def observables(psi: WaveFunction) -> ObservableReport:
    """Norm, means and variances of position and momentum.

    Position moments are Riemann sums of ``q*|psi(q)|**2``; momentum moments
    use ``hbar*k`` weighted by the momentum density. ``norm`` is the squared
    L2 norm (total probability).
    """
    pos = position_state(psi)
    grid = psi.grid
    dens_q = np.abs(pos.amplitudes) ** 2
    total = float(np.sum(dens_q) * grid.dq)
    if not total > 0:
        raise ValueError("observables of a zero-norm state are undefined")
    q = grid.q
    mean_q = float(np.sum(q * dens_q) * grid.dq / total)
    var_q = float(np.sum((q - mean_q) ** 2 * dens_q) * grid.dq / total)

    phi = to_momentum(pos.amplitudes, grid)
    dens_k = np.abs(phi) ** 2
    p = psi.hbar * grid.k
    total_k = float(np.sum(dens_k) * grid.dk)
    mean_p = float(np.sum(p * dens_k) * grid.dk / total_k)
    var_p = float(np.sum((p - mean_p) ** 2 * dens_k) * grid.dk / total_k)
    return ObservableReport(total, mean_q, mean_p, max(var_q, 0.0), max(var_p, 0.0))


@dataclass(frozen=True)
class ComparisonReport:
    """Distance between two states on the same grid.

    ``l2_distance`` is phase sensitive; ``fidelity`` = |<a|b>|/(|a||b|)
    ignores a global phase, so ``psi`` and ``exp(i*theta)*psi`` have
    fidelity 1 but a nonzero distance.
    """

    l2_distance: float
    fidelity: float
    max_pointwise: float


def compare(a: WaveFunction, b: WaveFunction, mask: np.ndarray | None = None) -> ComparisonReport:
    if a.grid != b.grid:
        raise ValueError("cannot compare states on different grids")
    if a.representation is not b.representation:
        raise ValueError("cannot compare states in different representations")
    x, y = a.amplitudes, b.amplitudes
    if mask is not None:
        x, y = x[mask], y[mask]
    dx = a.measure
    diff = x - y
    l2 = float(np.sqrt(np.sum(np.abs(diff) ** 2) * dx))
    na = np.sqrt(np.sum(np.abs(x) ** 2) * dx)
    nb = np.sqrt(np.sum(np.abs(y) ** 2) * dx)
    if na == 0 or nb == 0:
        fid = 1.0 if na == nb else 0.0
    else:
        fid = float(abs(np.vdot(x, y) * dx) / (na * nb))
    maxp = float(np.max(np.abs(diff))) if diff.size else 0.0
    return ComparisonReport(l2, fid, maxp)


def smooth_plateau(q: np.ndarray, radius: float, edge: float) -> np.ndarray:
    """C-infinity window equal to 1 on |q| <= radius and 0 beyond radius+edge."""
    x = (np.abs(q) - radius) / edge
    out = np.ones_like(q, dtype=float)
    mid = (x > 0) & (x < 1)
    out[x >= 1] = 0.0
    xm = x[mid]
    f = np.exp(-1.0 / xm)
    g = np.exp(-1.0 / (1.0 - xm))
    out[mid] = g / (f + g)
    return out
