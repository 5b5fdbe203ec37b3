import dataclasses

import numpy as np
import pytest

from ensembleqc import presets
from ensembleqc.physical import (
    DispersiveRegimeWarning,
    PhysicalParams,
    check_interference_condition,
    check_resonance_condition,
    derive_couplings,
    detunings_from_frequencies,
    effective_hamiltonian,
)
from helpers import random_resonant_params


def make_params(**overrides) -> PhysicalParams:
    base = dict(
        n_atoms_1=4,
        n_atoms_2=4,
        g_sigma_1=1.0,
        g_sigma_2=1.0,
        g_pi_1=2.0,
        g_pi_2=0.0,
        omega_0=1000.0,
        omega_1=0.0,
        omega_2=-5.0,
        omega_sigma=950.0,
        omega_pi_1=1050.0,
        omega_pi_2=1050.0,
        delta_sigma_1=50.0,
        delta_sigma_2=50.0,
        delta_pi_1=-50.0,
        delta_pi_2=-50.0,
    )
    base.update(overrides)
    return PhysicalParams(**base)


class TestParamsValidation:
    def test_zero_detuning_rejected(self):
        with pytest.raises(ValueError, match="delta_pi_1"):
            make_params(delta_pi_1=0.0)

    def test_atom_counts_must_be_positive_integers(self):
        with pytest.raises(ValueError, match="n_atoms_1"):
            make_params(n_atoms_1=0)
        with pytest.raises(ValueError, match="n_atoms_2"):
            make_params(n_atoms_2=2.5)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            make_params(omega_1=np.inf)

    def test_json_round_trip(self):
        params = make_params(g_sigma_1=1.0 + 0.25j)
        recovered = PhysicalParams.from_json(params.to_json())
        assert recovered == params

    def test_detunings_from_frequencies(self):
        ds1, ds2, dp1, dp2 = detunings_from_frequencies(1000.0, 950.0, 1050.0, 1100.0)
        assert (ds1, ds2, dp1, dp2) == (50.0, 50.0, -50.0, -100.0)


class TestDeriveCouplings:
    def test_coupling_off_forces_zero(self):
        couplings = derive_couplings(make_params(g_sigma_1=0.0, g_pi_1=0.0))
        assert couplings.omega_cap_sigma == 0.0
        assert couplings.s_coupling == 0.0
        assert couplings.kappa(0) == 0.0

    def test_sqrt3_tuning_gives_kappa_two_s(self):
        couplings = derive_couplings(presets.perfect_blockade_params())
        s = abs(couplings.s_coupling)
        assert abs(couplings.kappa(1) - 2.0 * s) < 1e-12 * s
        assert couplings.kappa(0) == s

    def test_shift_signs_follow_detunings(self):
        couplings = derive_couplings(make_params())
        assert couplings.omega_1_sigma > 0  # positive detuning
        assert couplings.omega_1_pi < 0  # negative detuning
        assert couplings.omega_2_pi == 0.0  # uncoupled mode

    def test_scale_consistency_is_exact(self):
        params = make_params(g_pi_2=0.5)
        scaled = dataclasses.replace(
            params,
            g_sigma_1=2.0 * params.g_sigma_1,
            g_sigma_2=2.0 * params.g_sigma_2,
            g_pi_1=2.0 * params.g_pi_1,
            g_pi_2=2.0 * params.g_pi_2,
        )
        a, b = derive_couplings(params), derive_couplings(scaled)
        # powers of two keep float multiplication exact
        assert b.omega_cap_sigma == 4.0 * a.omega_cap_sigma
        assert b.omega_1_sigma == 4.0 * a.omega_1_sigma
        assert b.omega_1_pi == 4.0 * a.omega_1_pi
        assert b.omega_2_sigma == 4.0 * a.omega_2_sigma
        assert b.omega_2_pi == 4.0 * a.omega_2_pi
        assert b.s_coupling == 4.0 * a.s_coupling

    def test_dispersive_violation_warns_not_raises(self):
        bad = make_params(g_pi_1=40.0)  # |g/Delta| = 0.8
        with pytest.warns(DispersiveRegimeWarning, match="pi_1"):
            derive_couplings(bad)

    def test_compliant_set_is_silent(self):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            derive_couplings(presets.blockade_tuned_params(1.0))

    def test_kappa_rejects_bad_sector(self):
        couplings = derive_couplings(make_params())
        with pytest.raises(ValueError, match="sector"):
            couplings.kappa(2)


class TestReferenceScale:
    def test_detuning_magnitude_from_timing_inversion(self):
        # Oracle: invert t = pi Delta / (2 N g^2) at t = 1e-8 s.
        n, g, t = 10_000, 1.0e6, 1.0e-8
        delta_expected = 2.0 * n * g**2 * t / np.pi
        params = presets.reference_params()
        assert abs(params.delta_sigma_1 - delta_expected) < 1e-3
        assert 1e7 < params.delta_sigma_1 < 1e8  # ~6e7 rad/s
        with pytest.warns(DispersiveRegimeWarning):
            couplings = derive_couplings(params)
        t_back = np.pi / (2.0 * n * abs(couplings.omega_cap_sigma))
        assert abs(t_back - t) < 1e-12 * t

    def test_sigma_channel_is_dispersive(self):
        ratios = presets.reference_params().dispersive_ratios()
        assert ratios["sigma_1"] < 0.1 and ratios["sigma_2"] < 0.1


class TestResonanceCondition:
    def test_symmetric_construction_has_zero_residual(self):
        # omega_1 = omega_2 and N1*(O1s + O1p) = N2*O2s: with the pi coupling
        # off and equal sigma channels the condition holds identically.
        params = make_params(g_pi_1=0.0, omega_2=0.0)
        couplings = derive_couplings(params)
        assert check_resonance_condition(params, couplings) == 0.0

    def test_exact_cancellation(self):
        # Engineer omega_2 - omega_1 = 1 against N2 O2s - N1 O1 = -1.
        params = make_params(g_pi_1=0.0, omega_2=1.0)
        couplings = derive_couplings(params)
        n1o1 = params.n_atoms_1 * couplings.omega_1_sigma
        n2o2 = params.n_atoms_2 * couplings.omega_2_sigma
        assert n2o2 - n1o1 == 0.0  # symmetric sigma channels
        shifted = dataclasses.replace(params, omega_1=params.omega_1 + 1.0, omega_2=params.omega_2)
        couplings = derive_couplings(shifted)
        # omega_2 - omega_1 = 0, sigma terms cancel, residual 0 by symmetry
        residual = check_resonance_condition(shifted, couplings)
        assert residual == 0.0

    def test_violation_reports_signed_residual(self):
        params = presets.blockade_tuned_params(1.0)
        bumped = dataclasses.replace(params, omega_2=params.omega_2 + 3.5)
        couplings = derive_couplings(bumped)
        assert abs(check_resonance_condition(bumped, couplings) - 3.5) < 1e-12

    def test_mismatched_couplings_rejected(self):
        params = make_params()
        other = derive_couplings(make_params(omega_2=17.0))
        with pytest.raises(ValueError, match="not derived"):
            check_resonance_condition(params, other)

    def test_presets_satisfy_condition(self):
        rng = np.random.default_rng(21)
        for _ in range(25):
            params = random_resonant_params(rng)
            couplings = derive_couplings(params)
            scale = abs(couplings.s_coupling)
            assert abs(couplings.resonance_residual()) < 1e-10 * scale


class TestInterferenceCondition:
    def test_exact_cancellation(self):
        r1, r2 = check_interference_condition(
            make_params(delta_sigma_1=5e7, delta_pi_1=-5e7)
        )
        assert r1 == 0.0

    def test_arithmetic_residual(self):
        r1, _ = check_interference_condition(
            make_params(delta_sigma_1=5e7, delta_pi_1=-4e7)
        )
        assert r1 == 1e7

    def test_both_nodes_satisfied(self):
        residuals = check_interference_condition(presets.blockade_tuned_params(2.0))
        assert residuals == (0.0, 0.0)


class TestEffectiveHamiltonian:
    def test_hermitian(self):
        params = make_params(g_sigma_1=0.8 + 0.3j)
        couplings = derive_couplings(params)
        for n in (0, 1):
            h = effective_hamiltonian(couplings, n)
            scale = np.max(np.abs(h))
            assert np.max(np.abs(h - h.conj().T)) < 1e-12 * scale

    def test_decoupled_when_s_is_zero(self):
        couplings = derive_couplings(make_params(g_sigma_1=0.0))
        h = effective_hamiltonian(couplings, 0)
        assert h[0, 1] == 0.0 and h[1, 0] == 0.0

    def test_eigen_splitting_matches_kappa(self):
        # Oracle: numpy eigendecomposition of the generator.
        rng = np.random.default_rng(5)
        for _ in range(25):
            params = random_resonant_params(rng)
            couplings = derive_couplings(params)
            for n in (0, 1):
                h = effective_hamiltonian(couplings, n)
                h = h - np.eye(2) * np.trace(h) / 2.0
                lo, hi = np.linalg.eigvalsh(h)
                assert abs((hi - lo) / 2.0 - couplings.kappa(n)) < 1e-10 * max(
                    couplings.kappa(n), 1.0
                )

    def test_splitting_values_on_resonance(self):
        # n = 0 resonant: splitting 2|S|; n = 1 at sqrt(3): splitting 4|S|.
        couplings = derive_couplings(presets.perfect_blockade_params())
        s = abs(couplings.s_coupling)
        h0 = effective_hamiltonian(couplings, 0)
        h0 -= np.eye(2) * np.trace(h0) / 2.0
        lo, hi = np.linalg.eigvalsh(h0)
        assert abs((hi - lo) - 2.0 * s) < 1e-10
        h1 = effective_hamiltonian(couplings, 1)
        h1 -= np.eye(2) * np.trace(h1) / 2.0
        lo, hi = np.linalg.eigvalsh(h1)
        assert abs((hi - lo) - 4.0 * s) < 1e-10

    def test_stable_split_matches_direct_difference(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            couplings = derive_couplings(random_resonant_params(rng))
            for n in (0, 1):
                direct = 0.5 * (couplings.varpi_1(n) - couplings.varpi_2(n))
                assert abs(couplings.varpi_split(n) - direct) < 1e-9
