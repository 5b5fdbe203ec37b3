"""Ready-made parameter sets satisfying the operating conditions.

Every preset satisfies, by construction:

* the interference condition ``Delta_m^(sigma) = -Delta_m^(pi_m)`` (photon
  sectors stay decoupled),
* the swap resonance condition, by solving for the second node frequency,
* ``g_pi_2 = 0``: the second microcavity never holds a photon and leaving it
  uncoupled removes its intra-node shift, which is what makes the resonance
  condition equivalent to exact sector degeneracy.

Node frequencies are relative to a common rotating reference, so omega_1
defaults to 0.
"""

from __future__ import annotations

import numpy as np

from .decoherence import DecoherenceParams
from .physical import PhysicalParams

SQRT3 = float(np.sqrt(3.0))


def blockade_tuned_params(
    ratio: float,
    s_coupling: float = 1.0,
    n_atoms_1: int = 4,
    n_atoms_2: int | None = None,
    omega_1: float = 0.0,
    dispersive_margin: float = 200.0,
) -> PhysicalParams:
    """Parameter set with swap rate ``|S| = s_coupling`` and blockade ratio
    ``|Omega_1^(pi)| / |S| = ratio``.

    ``dispersive_margin`` sets the shared detuning as a multiple of the
    largest coupling scale so all |g/Delta| ratios stay well below 0.1.
    """
    if ratio < 0.0:
        raise ValueError("ratio must be nonnegative")
    if s_coupling <= 0.0:
        raise ValueError("s_coupling must be positive")
    n1 = int(n_atoms_1)
    n2 = int(n_atoms_2) if n_atoms_2 is not None else n1
    root_n = np.sqrt(n1 * n2)
    delta = dispersive_margin * max(1.0, ratio) * s_coupling
    g_sigma = np.sqrt(s_coupling * delta / root_n)
    g_pi_1 = np.sqrt(ratio * s_coupling * delta)
    omega_1_sigma = g_sigma**2 / delta
    omega_1_pi = -ratio * s_coupling  # negative detuning flips the sign
    # Resonance: omega_2 = omega_1 + N1 (O1s + O1p) - N2 O2s.
    omega_2 = omega_1 + n1 * (omega_1_sigma + omega_1_pi) - n2 * omega_1_sigma
    omega_0 = 1000.0 * s_coupling
    return PhysicalParams(
        n_atoms_1=n1,
        n_atoms_2=n2,
        g_sigma_1=float(g_sigma),
        g_sigma_2=float(g_sigma),
        g_pi_1=float(g_pi_1),
        g_pi_2=0.0,
        omega_0=omega_0,
        omega_1=float(omega_1),
        omega_2=float(omega_2),
        omega_sigma=omega_0 - delta,
        omega_pi_1=omega_0 + delta,
        omega_pi_2=omega_0 + delta,
        delta_sigma_1=float(delta),
        delta_sigma_2=float(delta),
        delta_pi_1=float(-delta),
        delta_pi_2=float(-delta),
    )


def perfect_blockade_params(**kwargs) -> PhysicalParams:
    """Blockade-tuned set at the sqrt(3) operating point, where one photon
    freezes the swap exactly at the gate time."""
    return blockade_tuned_params(SQRT3, **kwargs)


def reference_params() -> PhysicalParams:
    """Headline operating point: 10^4-atom nodes, MHz-scale shared-cavity
    coupling, and a ~10 ns full swap.

    ``g_sigma = 1e6 rad/s`` with a shared detuning of ``2e8/pi`` gives an
    exchange rate of about 1.571e4 rad/s, a collectively enhanced swap rate
    ``|S| = 1.571e8 rad/s``, and a gate time of exactly 1e-8 s.  The pi-mode
    coupling is set by the sqrt(3) blockade tuning; at this operating point
    it sits outside the dispersive window (|g/Delta| ~ 2), which
    derive_couplings reports as a warning.
    """
    n = 10_000
    g_sigma = 1.0e6
    delta = 2.0e8 / np.pi
    omega_sigma_rate = g_sigma**2 / delta  # per-pair exchange rate
    s_coupling = n * omega_sigma_rate
    g_pi_1 = np.sqrt(SQRT3 * s_coupling * delta)
    omega_1_pi = -SQRT3 * s_coupling
    omega_1 = 0.0
    omega_2 = omega_1 + n * (omega_sigma_rate + omega_1_pi) - n * omega_sigma_rate
    omega_0 = 2.5e15
    return PhysicalParams(
        n_atoms_1=n,
        n_atoms_2=n,
        g_sigma_1=g_sigma,
        g_sigma_2=g_sigma,
        g_pi_1=float(g_pi_1),
        g_pi_2=0.0,
        omega_0=omega_0,
        omega_1=omega_1,
        omega_2=float(omega_2),
        omega_sigma=omega_0 - delta,
        omega_pi_1=omega_0 + delta,
        omega_pi_2=omega_0 + delta,
        delta_sigma_1=float(delta),
        delta_sigma_2=float(delta),
        delta_pi_1=float(-delta),
        delta_pi_2=float(-delta),
    )


def reference_decoherence() -> DecoherenceParams:
    """Relaxation rates spending half the fault-tolerance budget at the
    reference gate time of 1e-8 s."""
    delta = 2.0e8 / np.pi
    t = 1.0e-8
    gamma_atomic = 2.5e-5 / (2.0 * t)
    gamma_cavity = 2.5e-5 * 2.0 * delta / np.pi
    return DecoherenceParams(
        gamma_atomic=gamma_atomic, gamma_cavity=gamma_cavity, delta=delta
    )


def rescale_pi_coupling(params: PhysicalParams, ratio: float) -> PhysicalParams:
    """Retarget the first microcavity coupling to a new blockade ratio.

    Rescales ``g_pi_1`` so ``|Omega_1^(pi)| / |S| = ratio`` and re-solves the
    second node frequency so the swap resonance keeps holding (the shift
    enters the resonance condition through the node-1 collective term).
    """
    if ratio < 0.0:
        raise ValueError("ratio must be nonnegative")
    omega_cap = (
        params.g_sigma_1
        * np.conj(params.g_sigma_2)
        / 2.0
        * (1.0 / params.delta_sigma_1 + 1.0 / params.delta_sigma_2)
    )
    s = abs(np.sqrt(params.n_atoms_1 * params.n_atoms_2) * omega_cap)
    if s == 0.0:
        raise ValueError("swap coupling S is zero; blockade ratio undefined")
    g_pi_1 = np.sqrt(ratio * s * abs(params.delta_pi_1))
    omega_1_sigma = abs(params.g_sigma_1) ** 2 / params.delta_sigma_1
    omega_2_sigma = abs(params.g_sigma_2) ** 2 / params.delta_sigma_2
    omega_1_pi = g_pi_1**2 / params.delta_pi_1
    omega_2 = (
        params.omega_1
        + params.n_atoms_1 * (omega_1_sigma + omega_1_pi)
        - params.n_atoms_2 * omega_2_sigma
    )
    return PhysicalParams(
        n_atoms_1=params.n_atoms_1,
        n_atoms_2=params.n_atoms_2,
        g_sigma_1=params.g_sigma_1,
        g_sigma_2=params.g_sigma_2,
        g_pi_1=float(g_pi_1),
        g_pi_2=params.g_pi_2,
        omega_0=params.omega_0,
        omega_1=params.omega_1,
        omega_2=float(omega_2),
        omega_sigma=params.omega_sigma,
        omega_pi_1=params.omega_pi_1,
        omega_pi_2=params.omega_pi_2,
        delta_sigma_1=params.delta_sigma_1,
        delta_sigma_2=params.delta_sigma_2,
        delta_pi_1=params.delta_pi_1,
        delta_pi_2=params.delta_pi_2,
    )
