"""System parameters for the two-drive membrane-in-the-middle model.

All rates, detunings and drive amplitudes share one unit, normally the
cavity-1 damping rate, so ``kappa1 = 1`` is the canonical choice. Nothing
in the engine assumes it, which keeps absolute-unit runs
(and the 1<->2 swap, which moves ``kappa1``) exact.

Mode ordering used by every vector and matrix in the package::

    0: a1    1: a1^dag    2: b    3: b^dag    4: a2    5: a2^dag
"""
from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, NegativeAmplitude, NonPositiveRate, ZeroDetuning

A1, A1D, B, BD, A2, A2D = range(6)
MODE_LABELS = ("a1", "a1^dag", "b", "b^dag", "a2", "a2^dag")
# index of the adjoint partner of each mode
CONJ = (1, 0, 3, 2, 5, 4)

CONFIG_KEYS = (
    "kappa1", "kappa2", "gm", "omega_m", "gamma_m",
    "delta1", "delta2", "E1", "E2", "J", "n_th",
)

WEAK_COUPLING_LIMIT = 1e-2


@dataclass(frozen=True)
class DerivedQuantities:
    Gamma_m: float
    J_E1: float
    J_E2: float
    cavity_freq_gap: float
    strong_coupling_warning: bool


@dataclass(frozen=True)
class SystemParams:
    kappa1: float = 1.0
    kappa2: float = 1.0
    gm: float = 1e-5
    omega_m: float = 100.0
    gamma_m: float = 1e-3
    delta1: float = 100.0
    delta2: float = 100.0
    E1: float = 0.0
    E2: float = 0.0
    J: float = 0.0
    n_th: float = 100.0

    @property
    def derived(self) -> DerivedQuantities:
        ratio = self.gm / self.omega_m
        return DerivedQuantities(
            Gamma_m=self.gamma_m / self.kappa1,
            J_E1=ratio * self.E1 / self.kappa1,
            J_E2=ratio * self.E2 / self.kappa1,
            cavity_freq_gap=self.delta2 - self.delta1,
            strong_coupling_warning=ratio > WEAK_COUPLING_LIMIT,
        )

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


def validate(params: SystemParams) -> SystemParams:
    """Check a parameter set and return it.

    Raises
    ------
    NonPositiveRate
        If a damping rate or ``omega_m`` is not strictly positive.
    ZeroDetuning
        If either detuning vanishes (the frame displacement divides by it).
    NegativeAmplitude
        If a drive amplitude, ``gm``, ``J`` or ``n_th`` is negative.
    """
    for name in ("kappa1", "kappa2", "omega_m", "gamma_m"):
        value = getattr(params, name)
        if not math.isfinite(value) or value <= 0:
            raise NonPositiveRate(f"{name} must be > 0, got {value!r}")
    for name in ("delta1", "delta2"):
        value = getattr(params, name)
        if not math.isfinite(value) or value == 0:
            raise ZeroDetuning(f"{name} must be nonzero, got {value!r}")
    for name in ("E1", "E2", "gm", "J", "n_th"):
        value = getattr(params, name)
        if not math.isfinite(value) or value < 0:
            raise NegativeAmplitude(f"{name} must be >= 0, got {value!r}")
    if params.derived.strong_coupling_warning:
        warnings.warn(
            f"gm/omega_m = {params.gm / params.omega_m:.3g} exceeds "
            f"{WEAK_COUPLING_LIMIT:g}; the dropped nonlinear term may matter",
            stacklevel=2,
        )
    return params


def swap12(params: SystemParams) -> SystemParams:
    """Exchange the roles of the two cavities (kappa, E and detuning)."""
    return params.replace(
        kappa1=params.kappa2, kappa2=params.kappa1,
        E1=params.E2, E2=params.E1,
        delta1=params.delta2, delta2=params.delta1,
    )


def from_effective(
    J_E1: float,
    J_E2: float | None = None,
    *,
    kappa2: float = 1.0,
    omega_m: float = 100.0,
    gm: float = 1e-5,
    gamma_m: float = 1e-3,
    J: float = 0.0,
    n_th: float = 100.0,
    delta1: float | None = None,
    delta2: float | None = None,
) -> SystemParams:
    """Parameters in kappa1 = 1 units from effective drive intensities.

    The drive amplitudes are ``E_j = J_Ej * omega_m / gm``; detunings default
    to the red sideband ``delta_j = omega_m``.
    """
    if J_E2 is None:
        J_E2 = J_E1
    return validate(SystemParams(
        kappa1=1.0, kappa2=kappa2, gm=gm, omega_m=omega_m, gamma_m=gamma_m,
        delta1=omega_m if delta1 is None else delta1,
        delta2=omega_m if delta2 is None else delta2,
        E1=J_E1 * omega_m / gm, E2=J_E2 * omega_m / gm,
        J=J, n_th=n_th,
    ))


def single_cavity(params: SystemParams) -> SystemParams:
    """The one-cavity baseline: cavity 2 undriven and decoupled."""
    return params.replace(E2=0.0, J=0.0)


def load_config(path: str | Path) -> SystemParams:
    """Read a ``key=value`` config file.

    Blank lines and ``#`` comments are ignored. Keys must come from
    ``CONFIG_KEYS``; missing keys take the ``SystemParams`` defaults.
    """
    values: dict[str, float] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = float(value)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: {key} is not a number: {value!r}") from None
    return validate(SystemParams(**values))


def dump_config(params: SystemParams) -> str:
    return "".join(f"{k}={getattr(params, k)!r}\n" for k in CONFIG_KEYS)
