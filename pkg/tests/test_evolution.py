import numpy as np
import pytest

from twospin import (
    SpinParams,
    TwoSpinState,
    aa_breakdown,
    aa_phase,
    adiabatic_cycle,
    adiabatic_phases,
    evolve_exact,
    evolve_stepped,
    exact_propagator,
    h_rotating_frame,
    numeric_dynamical_phase,
    tilde_eigensystem,
)

from support import circ_dist, random_general, random_state, random_symmetric

P111 = SpinParams.symmetric(1.0, 1.0, 1.0, 0.1)


class TestExactPropagator:
    def test_identity_at_zero(self):
        assert np.allclose(exact_propagator(P111, 0.0).matrix, np.eye(4), atol=1e-14)

    def test_negative_rotation_full_period(self):
        p = P111.replace(omega1=-0.1)
        system = tilde_eigensystem(p)
        final = evolve_exact(p, system.state(2), p.period).final_state
        assert 1.0 - abs(system.state(2).overlap(final)) <= 1e-12

    def test_full_period_is_rotating_frame_exponential(self):
        tau = P111.period
        vals, vecs = np.linalg.eigh(h_rotating_frame(P111).matrix)
        expected = (vecs * np.exp(-1j * vals * tau)) @ vecs.conj().T
        assert np.abs(exact_propagator(P111, tau).matrix - expected).max() <= 1e-12

    def test_unitary_tag(self):
        rng = np.random.default_rng(50)
        for _ in range(20):
            p = random_general(rng)
            op = exact_propagator(p, float(rng.uniform(0.0, 30.0)))
            assert op.kind == "unitary"

    def test_diagonal_case_phase(self):
        p = SpinParams.symmetric(0.9, 0.0, 1.0, 0.2)
        ud = TwoSpinState.basis_state("ud")
        for t in (0.3, 2.0, 17.0):
            final = evolve_exact(p, ud, t).final_state
            assert np.abs(final.amplitudes - np.exp(1j * p.J * t / 2.0) * ud.amplitudes).max() <= 1e-12


class TestEvolveExact:
    def test_singlet_cycle_phase(self):
        rng = np.random.default_rng(51)
        for _ in range(10):
            p = random_symmetric(rng, 0.1, 1.5)
            singlet = TwoSpinState.singlet()
            final = evolve_exact(p, singlet, p.period).final_state
            expected = np.exp(1j * p.J * p.period / 2.0) * singlet.amplitudes
            assert np.abs(final.amplitudes - expected).max() <= 1e-12

    def test_cycling_states_return_with_total_phase(self):
        rng = np.random.default_rng(52)
        for _ in range(15):
            p = random_symmetric(rng, 0.2, 1.5)
            system = tilde_eigensystem(p)
            for n in (1, 2, 3, 4):
                start = system.state(n)
                final = evolve_exact(p, start, p.period).final_state
                overlap = start.overlap(final)
                assert 1.0 - abs(overlap) <= 1e-12
                assert circ_dist(np.angle(overlap), -system.energy(n) * p.period) <= 1e-10

    def test_intermediate_time_amplitude_pattern(self):
        p = SpinParams.symmetric(1.1, 1.0, 1.0, 0.1)
        system = tilde_eigensystem(p)
        t = p.period / 3.0
        for n in (1, 2, 3):
            amps0 = system.state(n).amplitudes
            modulated = amps0 * np.exp(-1j * system.energy(n) * t)
            modulated = modulated * np.array(
                [np.exp(-1j * p.omega1 * t), 1.0, 1.0, np.exp(1j * p.omega1 * t)]
            )
            final = evolve_exact(p, system.state(n), t).final_state
            assert np.abs(final.amplitudes - modulated).max() <= 1e-10
            # cross-check against the stepped oracle
            stepped = evolve_stepped(p, system.state(n), t, 4000).final_state
            assert np.abs(final.amplitudes - stepped.amplitudes).max() <= 1e-8

    def test_final_state_is_propagator_times_initial(self):
        rng = np.random.default_rng(53)
        p = random_general(rng)
        psi = random_state(rng)
        res = evolve_exact(p, psi, 3.3)
        assert np.abs(res.final_state.amplitudes - res.propagator.matrix @ psi.amplitudes).max() <= 1e-15

    def test_norm_conservation_along_trajectory(self):
        rng = np.random.default_rng(54)
        p = random_general(rng)
        psi = random_state(rng)
        for t in np.linspace(0.0, 2.0 * p.period, 9):
            final = evolve_exact(p, psi, float(t)).final_state
            assert abs(final.norm - 1.0) <= 1e-12


class TestEvolveStepped:
    def test_diagonal_phase(self):
        p = SpinParams.symmetric(1.0, 0.0, 1.0, 0.3)
        uu = TwoSpinState.basis_state("uu")
        t = 4.0
        res = evolve_stepped(p, uu, t, 4000)
        expected = np.exp(-1j * (p.omega0 + p.J / 2.0) * t) * uu.amplitudes
        assert np.abs(res.final_state.amplitudes - expected).max() <= 1e-10

    def test_matches_exact_at_high_resolution(self):
        psi = TwoSpinState.normalized([0.2, -0.4 + 0.1j, 0.8, 0.3j])
        exact = evolve_exact(P111, psi, P111.period).final_state
        stepped = evolve_stepped(P111, psi, P111.period, 10000).final_state
        assert np.linalg.norm(exact.amplitudes - stepped.amplitudes) <= 1e-8

    def test_fourth_order_convergence(self):
        psi = TwoSpinState.normalized([0.2, -0.4 + 0.1j, 0.8, 0.3j])
        exact = evolve_exact(P111, psi, P111.period).final_state.amplitudes
        err_coarse = np.linalg.norm(
            exact - evolve_stepped(P111, psi, P111.period, 1000).final_state.amplitudes
        )
        err_fine = np.linalg.norm(
            exact - evolve_stepped(P111, psi, P111.period, 2000).final_state.amplitudes
        )
        assert err_coarse / err_fine >= 12.0

    def test_unitarity_defect_at_recommended_resolution(self):
        res = evolve_stepped(P111, TwoSpinState.basis_state("uu"), P111.period, 10000)
        u = res.propagator.matrix
        assert np.abs(u.conj().T @ u - np.eye(4)).max() <= 1e-9
        assert res.propagator.kind == "general"
        assert res.step_count == 10000 and res.method == "stepped"

    def test_refuses_insufficient_budget(self):
        with pytest.raises(ValueError, match="step budget"):
            evolve_stepped(P111, TwoSpinState.basis_state("uu"), P111.period, 50)

    def test_rejects_nonpositive_steps(self):
        with pytest.raises(ValueError):
            evolve_stepped(P111, TwoSpinState.basis_state("uu"), 1.0, 0)

    def test_agreement_unequal_couplings(self):
        rng = np.random.default_rng(55)
        for _ in range(3):
            p = random_general(rng)
            psi = random_state(rng)
            exact = evolve_exact(p, psi, p.period).final_state
            stepped = evolve_stepped(p, psi, p.period, 10000).final_state
            assert np.linalg.norm(exact.amplitudes - stepped.amplitudes) <= 1e-7

    def test_final_state_is_propagator_product(self):
        rng = np.random.default_rng(57)
        p = random_general(rng)
        psi = random_state(rng)
        res = evolve_stepped(p, psi, 2.0, 600)
        assert np.abs(res.final_state.amplitudes - res.propagator.matrix @ psi.amplitudes).max() <= 1e-15

    def test_coarse_resolution_state_allowed(self):
        # a legal coarse run dissipates norm noticeably but must still return
        p = SpinParams.symmetric(1.0, 1.0, 1.0, 0.1)
        res = evolve_stepped(p, TwoSpinState.basis_state("uu"), p.period, 200)
        assert 0.9 < res.final_state.norm < 1.0


class TestAdiabaticCycle:
    def test_singlet_exact_at_any_speed(self):
        for omega1 in (0.05, 0.5, 5.0):
            p = P111.replace(omega1=omega1)
            res = adiabatic_cycle(p, 4)
            assert abs(res.fidelity - 1.0) <= 1e-12
            assert circ_dist(res.total_phase, (p.J / 2.0) * p.period) <= 1e-10

    def test_phase_error_shrinks_with_omega1(self):
        target = adiabatic_phases(P111, 1)
        devs = []
        for omega1 in (0.1, 0.05, 0.025):
            p = P111.replace(omega1=omega1)
            res = adiabatic_cycle(p, 1)
            want = adiabatic_phases(p, 1).total
            devs.append(circ_dist(res.total_phase, want))
        assert devs[0] > devs[1] > devs[2]
        assert target.geometric == adiabatic_phases(P111.replace(omega1=0.05), 1).geometric

    def test_fast_rotation_reports_low_fidelity(self):
        p = P111.replace(omega1=20.0)
        res = adiabatic_cycle(p, 1)
        assert res.fidelity < 1.0

    def test_stepped_variant(self):
        res = adiabatic_cycle(P111, 4, steps=2000)
        assert abs(res.fidelity - 1.0) <= 1e-9

    def test_requires_rotation(self):
        with pytest.raises(ValueError):
            adiabatic_cycle(SpinParams.symmetric(1.0, 1.0, 1.0), 1)


class TestNumericDynamicalPhase:
    def test_singlet_constant_energy(self):
        p = P111
        val = numeric_dynamical_phase(p, TwoSpinState.singlet(), p.period, 500)
        assert val == pytest.approx((p.J / 2.0) * p.period, abs=1e-9)

    def test_known_value_cycling_path(self):
        p = SpinParams.symmetric(1.1, 1.0, 1.0, 0.1)
        start = tilde_eigensystem(p).state(1)
        val = numeric_dynamical_phase(p, start, p.period, 2000)
        assert val == pytest.approx(-115.23936938891194, abs=1e-6)

    def test_diagonal_case(self):
        p = SpinParams.symmetric(0.7, 0.0, 1.1, 0.2)
        dd = TwoSpinState.basis_state("dd")
        t = 5.0
        val = numeric_dynamical_phase(p, dd, t, 500)
        assert val == pytest.approx(-(-p.omega0 + p.J / 2.0) * t, abs=1e-9)

    def test_split_consistency(self):
        rng = np.random.default_rng(56)
        for _ in range(10):
            p = random_symmetric(rng, 0.3, 1.5)
            system = tilde_eigensystem(p)
            for n in (1, 2, 3, 4):
                dyn = numeric_dynamical_phase(p, system.state(n), p.period, 2000)
                assert dyn + aa_phase(p, n) == pytest.approx(-system.energy(n) * p.period, abs=1e-6)
                assert dyn == pytest.approx(aa_breakdown(p, n).dynamical, abs=1e-6)

    def test_requires_enough_steps(self):
        with pytest.raises(ValueError):
            numeric_dynamical_phase(P111, TwoSpinState.singlet(), 1.0, 50)
