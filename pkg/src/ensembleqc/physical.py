"""Raw physical parameters of the two-node system and the derived effective
couplings of the dispersive model.

Units and conventions
---------------------
All frequencies, couplings and detunings are angular (rad/s) and hbar is
absorbed into the units, so every derived coupling is itself a rad/s
quantity.  Spatial phase factors are set to unity (nodes small compared with
the mode wavelength); couplings may still be complex.  Each node's atoms are
reduced to one effective two-level amplitude (symmetric single-excitation
collective state); individual atoms are never represented.

Node frequencies ``omega_1`` and ``omega_2`` are the effective post-
transformation values and may be given relative to any common rotating
reference, so zero or negative values are legitimate.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, fields

import numpy as np


class DispersiveRegimeWarning(UserWarning):
    """A coupling-to-detuning ratio is too large for the perturbative model."""


def _is_finite_number(x) -> bool:
    return bool(np.isfinite(complex(x).real) and np.isfinite(complex(x).imag))


@dataclass(frozen=True)
class PhysicalParams:
    """Raw constants of the two-node system.

    ``n_atoms_*`` are the node atom counts; ``g_sigma_*`` couple each node to
    the shared cavity mode and ``g_pi_*`` to that node's microcavity mode
    (complex values allowed).  ``omega_0`` is the bare atomic working
    frequency, ``omega_1``/``omega_2`` the effective node frequencies, and
    ``omega_sigma``/``omega_pi_*`` the mode frequencies.  The four detunings
    are stored explicitly because the model treats them as independent knobs;
    :func:`detunings_from_frequencies` derives the conventional values.
    """

    n_atoms_1: int
    n_atoms_2: int
    g_sigma_1: complex
    g_sigma_2: complex
    g_pi_1: complex
    g_pi_2: complex
    omega_0: float
    omega_1: float
    omega_2: float
    omega_sigma: float
    omega_pi_1: float
    omega_pi_2: float
    delta_sigma_1: float
    delta_sigma_2: float
    delta_pi_1: float
    delta_pi_2: float

    def __post_init__(self) -> None:
        for name in ("n_atoms_1", "n_atoms_2"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
        for f in fields(self):
            if f.name.startswith("n_atoms"):
                continue
            if not _is_finite_number(getattr(self, f.name)):
                raise ValueError(f"{f.name} must be finite")
        for name in ("delta_sigma_1", "delta_sigma_2", "delta_pi_1", "delta_pi_2"):
            if getattr(self, name) == 0.0:
                raise ValueError(f"{name} must be nonzero (it divides a coupling)")

    def dispersive_ratios(self) -> dict[str, float]:
        """|g|/|Delta| for each of the four coupling channels."""
        return {
            "sigma_1": abs(self.g_sigma_1) / abs(self.delta_sigma_1),
            "sigma_2": abs(self.g_sigma_2) / abs(self.delta_sigma_2),
            "pi_1": abs(self.g_pi_1) / abs(self.delta_pi_1),
            "pi_2": abs(self.g_pi_2) / abs(self.delta_pi_2),
        }

    def is_dispersive(self, threshold: float = 0.1) -> bool:
        return all(r < threshold for r in self.dispersive_ratios().values())

    def to_json(self) -> str:
        """Flat JSON object keyed by the field names."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, complex):
                out[f.name] = value.real if value.imag == 0.0 else [value.real, value.imag]
            else:
                out[f.name] = value
        return json.dumps(out, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PhysicalParams":
        raw = json.loads(text)
        kwargs = {}
        for f in fields(cls):
            if f.name not in raw:
                raise ValueError(f"missing field {f.name!r}")
            value = raw[f.name]
            if isinstance(value, list):
                value = complex(value[0], value[1])
            if f.name.startswith("n_atoms"):
                value = int(value)
            kwargs[f.name] = value
        return cls(**kwargs)


def detunings_from_frequencies(
    omega_0: float, omega_sigma: float, omega_pi_1: float, omega_pi_2: float
) -> tuple[float, float, float, float]:
    """Detunings (sigma_1, sigma_2, pi_1, pi_2) as atom minus mode frequency,
    with both nodes sharing the working frequency ``omega_0``."""
    ds = omega_0 - omega_sigma
    return ds, ds, omega_0 - omega_pi_1, omega_0 - omega_pi_2


@dataclass(frozen=True)
class DerivedCouplings:
    """Effective quantities of the two-node exchange model.

    ``omega_cap_sigma`` is the cavity-mediated inter-node exchange rate,
    ``omega_m_x`` the intra-node shifts |g|^2/Delta, and ``s_coupling`` the
    collectively enhanced swap rate ``sqrt(N1 N2) * omega_cap_sigma``.  The
    sector frequencies (functions of the microcavity photon number
    ``n in {0, 1}``) are exposed as methods.
    """

    omega_cap_sigma: complex
    omega_1_sigma: float
    omega_1_pi: float
    omega_2_sigma: float
    omega_2_pi: float
    s_coupling: complex
    n_atoms_1: int
    n_atoms_2: int
    omega_1: float
    omega_2: float

    @staticmethod
    def _check_sector(n: int) -> int:
        if n not in (0, 1):
            raise ValueError(f"photon sector must be 0 or 1, got {n!r}")
        return n

    def varpi_1(self, n: int) -> float:
        """Frequency of the node-1-excited component in sector ``n``."""
        n = self._check_sector(n)
        return (
            (self.n_atoms_1 / 2 - 1) * (self.omega_1 + 2 * n * self.omega_1_pi)
            + (self.n_atoms_2 / 2) * self.omega_2
            - self.n_atoms_1 * (self.omega_1_sigma + self.omega_1_pi)
        )

    def varpi_2(self, n: int) -> float:
        """Frequency of the node-2-excited component in sector ``n``."""
        n = self._check_sector(n)
        return (
            (self.n_atoms_1 / 2) * (self.omega_1 + 2 * n * self.omega_1_pi)
            + (self.n_atoms_2 / 2 - 1) * self.omega_2
            - self.n_atoms_2 * (self.omega_2_sigma + self.omega_2_pi)
        )

    def varpi_mean(self, n: int) -> float:
        return 0.5 * (self.varpi_1(n) + self.varpi_2(n))

    def resonance_residual(self) -> float:
        """Signed residual of the swap resonance condition
        ``omega_2 - omega_1 + N2*Omega_2^(sigma) - N1*(Omega_1^(sigma) +
        Omega_1^(pi))``; zero makes the photon-free sectors degenerate."""
        return (
            self.omega_2
            - self.omega_1
            + self.n_atoms_2 * self.omega_2_sigma
            - self.n_atoms_1 * (self.omega_1_sigma + self.omega_1_pi)
        )

    def varpi_split(self, n: int) -> float:
        """Half the sector frequency difference, (varpi_1 - varpi_2)/2.

        Computed from the resonance residual rather than by subtracting the
        two sector frequencies: the collective terms in those are larger by a
        factor ~N and would cancel catastrophically in floating point.
        """
        n = self._check_sector(n)
        return (
            0.5 * (self.resonance_residual() + self.n_atoms_2 * self.omega_2_pi)
            - n * self.omega_1_pi
        )

    def detuning_split(self, n: int) -> float:
        """Photon-induced half-splitting ``n * Omega_1^(pi)`` of the
        blockade bookkeeping (equals ``|varpi_split(n)|`` on resonance with
        an uncoupled second microcavity)."""
        n = self._check_sector(n)
        return n * self.omega_1_pi

    def kappa(self, n: int) -> float:
        """Generalized swap rate ``sqrt(n^2 Omega_1^(pi)^2 + |S|^2)``."""
        n = self._check_sector(n)
        return float(np.hypot(n * self.omega_1_pi, abs(self.s_coupling)))


def derive_couplings(
    params: PhysicalParams, dispersive_threshold: float = 0.1
) -> DerivedCouplings:
    """Compute all effective couplings from the raw parameters.

    A violation of the dispersive-regime check |g| < threshold*|Delta| is
    reported as a :class:`DispersiveRegimeWarning`, not an error: the model
    formulas still evaluate, they just lose perturbative accuracy.
    """
    ratios = params.dispersive_ratios()
    bad = {k: v for k, v in ratios.items() if v >= dispersive_threshold}
    if bad:
        listing = ", ".join(f"{k}={v:.3g}" for k, v in sorted(bad.items()))
        warnings.warn(
            f"dispersive regime violated (|g/Delta| >= {dispersive_threshold:g}): {listing}",
            DispersiveRegimeWarning,
            stacklevel=2,
        )
    omega_cap_sigma = (
        params.g_sigma_1
        * np.conj(params.g_sigma_2)
        / 2.0
        * (1.0 / params.delta_sigma_1 + 1.0 / params.delta_sigma_2)
    )
    s_coupling = np.sqrt(params.n_atoms_1 * params.n_atoms_2) * omega_cap_sigma
    return DerivedCouplings(
        omega_cap_sigma=complex(omega_cap_sigma),
        omega_1_sigma=abs(params.g_sigma_1) ** 2 / params.delta_sigma_1,
        omega_1_pi=abs(params.g_pi_1) ** 2 / params.delta_pi_1,
        omega_2_sigma=abs(params.g_sigma_2) ** 2 / params.delta_sigma_2,
        omega_2_pi=abs(params.g_pi_2) ** 2 / params.delta_pi_2,
        s_coupling=complex(s_coupling),
        n_atoms_1=int(params.n_atoms_1),
        n_atoms_2=int(params.n_atoms_2),
        omega_1=float(params.omega_1),
        omega_2=float(params.omega_2),
    )


def check_resonance_condition(
    params: PhysicalParams, couplings: DerivedCouplings
) -> float:
    """Signed residual of the swap resonance condition, rad/s.

    Zero means the two node-excited components are degenerate in the
    photon-free sector so excitation transfer is complete.  The couplings
    must have been derived from ``params``.
    """
    derived_check = (
        couplings.n_atoms_1 == params.n_atoms_1
        and couplings.n_atoms_2 == params.n_atoms_2
        and couplings.omega_1 == params.omega_1
        and couplings.omega_2 == params.omega_2
        and couplings.omega_1_sigma == abs(params.g_sigma_1) ** 2 / params.delta_sigma_1
    )
    if not derived_check:
        raise ValueError("couplings were not derived from these parameters")
    return couplings.resonance_residual()


def check_interference_condition(params: PhysicalParams) -> tuple[float, float]:
    """Per-node residuals ``Delta_m^(sigma) + Delta_m^(pi_m)``.

    Zero residuals certify that the inter-mode coupling cancels by
    destructive interference, which is what confines the dynamics to fixed
    photon sectors.
    """
    return (
        params.delta_sigma_1 + params.delta_pi_1,
        params.delta_sigma_2 + params.delta_pi_2,
    )


def effective_hamiltonian(couplings: DerivedCouplings, n: int) -> np.ndarray:
    """Hermitian 2x2 generator M(n) of the sector dynamics dc/dt = i M(n) c.

    Built as mean +/- split on the diagonal with the swap coupling -S off
    the diagonal; the split uses the numerically stable form.
    """
    m = couplings.varpi_mean(n)
    d = couplings.varpi_split(n)
    s = couplings.s_coupling
    return np.array([[m + d, -s], [-np.conj(s), m - d]], dtype=complex)
