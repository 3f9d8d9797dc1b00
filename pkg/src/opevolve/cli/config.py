"""Scenario configuration: a JSON document validated before any compute."""
from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..opalgebra.hamiltonians import HamiltonianKind, HamiltonianSpec
from ..opalgebra.polynomial import OperatorPolynomial


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CustomTerm(_Strict):
    """One normal-ordered monomial ``coefficient * q^a p^b``."""

    a: int = Field(ge=0)
    b: int = Field(ge=0)
    coefficient: float


class HamiltonianConfig(_Strict):
    kind: Literal["free", "constant_force", "harmonic", "inverted_harmonic", "custom"]
    mass: float = Field(1.0, gt=0)
    force: float = 0.0
    omega: float = 0.0
    lam: float = 0.0
    custom: list[CustomTerm] | None = None

    @model_validator(mode="after")
    def _parameters(self):
        if self.kind == "harmonic" and not self.omega > 0:
            raise ValueError("harmonic needs omega > 0")
        if self.kind == "inverted_harmonic" and not self.lam > 0:
            raise ValueError("inverted_harmonic needs lam > 0")
        if self.kind == "custom" and not self.custom:
            raise ValueError("custom needs a non-empty list of terms")
        if self.kind != "custom" and self.custom:
            raise ValueError("custom terms are only allowed with kind 'custom'")
        if self.kind == "custom":
            self.to_spec(1.0)
        return self

    def to_spec(self, hbar: float) -> HamiltonianSpec:
        kind = HamiltonianKind(self.kind)
        if kind is HamiltonianKind.CUSTOM:
            poly = OperatorPolynomial({(t.a, t.b, 0): t.coefficient for t in self.custom})
            return HamiltonianSpec.custom_polynomial(poly, hbar=hbar)
        return HamiltonianSpec(kind, mass=self.mass, force=self.force, omega=self.omega,
                               lam=self.lam, hbar=hbar)


class GaussianState(_Strict):
    type: Literal["gaussian"]
    center: float = 0.0
    width: float = Field(1.0, gt=0)
    k0: float = 0.0


class PolynomialInitial(_Strict):
    type: Literal["polynomial"]
    coefficients: list[float] = Field(min_length=1)


class PlaneWavePacket(_Strict):
    """Gaussian-enveloped carrier; ``one_sided`` removes all k < 0 content."""

    type: Literal["plane_wave_packet"]
    center: float = 0.0
    width: float = Field(2.0, gt=0)
    k0: float = 5.0
    one_sided: bool = True


InitialState = Annotated[Union[GaussianState, PolynomialInitial, PlaneWavePacket],
                         Field(discriminator="type")]


class DispersionConfig(_Strict):
    kind: Literal["nonrelativistic", "relativistic", "massless"] = "nonrelativistic"
    c: float = Field(1.0, gt=0)
    include_rest_energy: bool = True


class FourierMethod(_Strict):
    name: Literal["fourier"]
    dispersion: DispersionConfig | None = None

    @property
    def label(self) -> str:
        return "fourier"


class PolynomialMethod(_Strict):
    """``resummed`` only affects harmonic H, where it replaces the truncated series."""

    name: Literal["polynomial"]
    window: tuple[float, float] = (-4.0, 4.0)
    tol: float = Field(1e-10, gt=0)
    resummed: bool = False

    @field_validator("window")
    @classmethod
    def _window(cls, v):
        if not v[1] > v[0]:
            raise ValueError("window must be (low, high) with high > low")
        return v

    @property
    def label(self) -> str:
        return "polynomial_resummed" if self.resummed else "polynomial"


class OperatorSeriesMethod(_Strict):
    name: Literal["operator_series"]
    order: int = Field(ge=0, le=32)

    @property
    def label(self) -> str:
        return f"operator_series{self.order}"


class OracleMethod(_Strict):
    name: Literal["oracle"]
    steps: int = Field(4096, ge=1)

    @property
    def label(self) -> str:
        return f"oracle{self.steps}"


Method = Annotated[Union[FourierMethod, PolynomialMethod, OperatorSeriesMethod, OracleMethod],
                   Field(discriminator="name")]


class GridConfig(_Strict):
    n_points: int = Field(1024, ge=8)
    q_min: float = -30.0
    q_max: float = 30.0

    @model_validator(mode="after")
    def _shape(self):
        n = self.n_points
        if n & (n - 1):
            raise ValueError("n_points must be a power of two")
        if not self.q_max > self.q_min:
            raise ValueError("q_max must exceed q_min")
        return self


class OutputSpec(_Strict):
    kind: Literal["density_csv", "observables_csv", "comparison_json", "metadata_json"]
    path: str


class ScenarioConfig(_Strict):
    """Complete, self-describing run description.

    ``methods`` holds one or two methods; with two, the comparison is the
    first against the second at every time.
    """

    hamiltonian: HamiltonianConfig
    initial_state: InitialState
    methods: list[Method] = Field(min_length=1, max_length=2)
    grid: GridConfig = GridConfig()
    times: list[float] = Field(min_length=1)
    hbar: float = Field(1.0, gt=0)
    outputs: list[OutputSpec] = []

    @field_validator("times")
    @classmethod
    def _ascending(cls, v):
        if any(t < 0 for t in v):
            raise ValueError("times must be nonnegative")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("times must be strictly ascending")
        return v

    @model_validator(mode="after")
    def _compatibility(self):
        kind = self.hamiltonian.kind
        poly_state = self.initial_state.type == "polynomial"
        for i, m in enumerate(self.methods):
            where = f"methods.{i}"
            if m.name == "polynomial":
                if kind not in ("free", "constant_force", "harmonic"):
                    raise ValueError(f"{where}: polynomial method needs a free, constant_force or harmonic H")
                if not poly_state:
                    raise ValueError(f"{where}: polynomial method needs a polynomial initial state")
            elif m.name == "fourier":
                if kind not in ("free", "constant_force", "harmonic"):
                    raise ValueError(f"{where}: fourier method needs a free, constant_force or harmonic H")
                if m.dispersion is not None and kind != "free":
                    raise ValueError(f"{where}: a dispersion relation only applies to free evolution")
                if poly_state:
                    raise ValueError(f"{where}: fourier method needs a grid initial state")
            elif m.name == "oracle":
                if poly_state:
                    raise ValueError(f"{where}: oracle method needs a grid initial state")
                if kind == "custom" and any(t.b and (t.a, t.b) != (0, 2) for t in self.hamiltonian.custom):
                    raise ValueError(f"{where}: oracle method needs H = p²/2m + V(q)")
            elif m.name == "operator_series":
                if not poly_state and kind in ("custom",):
                    raise ValueError(f"{where}: operator series on a grid state needs a quadratic H")
        if len(self.methods) == 2 and self.methods[0].label == self.methods[1].label:
            raise ValueError("methods: the two methods must differ")
        if any(o.kind == "comparison_json" for o in self.outputs) and len(self.methods) != 2:
            raise ValueError("outputs: comparison_json needs exactly two methods")
        return self
