import cmath
import math

import numpy as np
import pytest

from oscnet import (ContractViolation, SubcubeSplit, complete_bound,
                    crosstalk_angle, crosstalk_sin2_from_evolution,
                    find_resonances, hypercube_bound,
                    pair_fidelity_from_amplitude, phase_correction,
                    transfer_time)
from oscnet.fidelity import channel_leakage


class TestAmplitudeFidelity:
    def test_perfect(self):
        assert pair_fidelity_from_amplitude(1.0 + 0j).fidelity == 1.0

    def test_no_transfer(self):
        pf = pair_fidelity_from_amplitude(0j)
        assert pf.fidelity == 0.25

    def test_partial_with_phase(self):
        alpha = 0.9 * cmath.exp(1j * math.pi / 3)
        pf = pair_fidelity_from_amplitude(alpha)
        assert pf.fidelity == pytest.approx(0.9025, abs=1e-12)
        assert pf.correction_phase == pytest.approx((2 * math.pi - math.pi / 3) % (2 * math.pi))
        assert pf.method == "amplitude"

    def test_rejects_superunitary(self):
        with pytest.raises(ValueError):
            pair_fidelity_from_amplitude(1.0 + 1e-6 + 0j)
        # within the documented slack, clamps instead
        assert pair_fidelity_from_amplitude(1.0 + 1e-12 + 0j).fidelity == 1.0


class TestHypercubeBound:
    def test_no_channels(self):
        assert hypercube_bound(0, 0.5) == 1.0

    def test_worst_case_value(self):
        assert hypercube_bound(2, 0.1, sin2_crosstalk=1.0) == pytest.approx(0.97, abs=1e-15)

    def test_resonant_angle_gives_one(self):
        eta_star = find_resonances(1, (0.1, 1.0), 1)[0]
        assert hypercube_bound(1, eta_star, use_evolution_angle=True) == pytest.approx(1.0, abs=1e-12)

    def test_clamped_to_unit_interval(self):
        assert hypercube_bound(3, 1.5, sin2_crosstalk=1.0) == 0.0

    def test_monotone_nonincreasing_worst_case(self):
        grid = np.linspace(1e-3, 0.55, 200)
        vals = [hypercube_bound(2, e, sin2_crosstalk=1.0) for e in grid]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_default_uses_documented_angle(self):
        eta = 0.37
        expected = 1 - 1.5 * eta ** 2 * math.sin(crosstalk_angle(eta)) ** 2
        assert hypercube_bound(1, eta) == pytest.approx(expected, abs=1e-15)


class TestCompleteBound:
    def test_eta_01(self):
        val = complete_bound(0.1)
        assert val == pytest.approx(1 - math.pi ** 2 / 200, abs=1e-15)
        assert val == pytest.approx(0.950652, abs=1e-6)

    def test_eta_to_zero(self):
        assert complete_bound(1e-9) == pytest.approx(1.0, abs=1e-12)

    def test_near_collapse(self):
        val = complete_bound(0.45)
        assert val == pytest.approx(1 - 0.5 * math.pi ** 2 * 0.2025, abs=1e-15)
        assert 0 < val < 1e-3

    def test_clamp(self):
        assert complete_bound(0.5) == 0.0


class TestResonances:
    def test_postconditions(self):
        roots = find_resonances(1, (0.05, 1.0), 6)
        assert roots == sorted(roots, reverse=True)
        for eta in roots:
            assert channel_leakage(eta) <= 1e-10

    def test_match_accumulated_angle_zeros(self):
        # zeros of sin((pi/2)*sqrt(1 + eta^-2)) sit at eta = 1/sqrt(4k^2-1)
        roots = find_resonances(2, (0.05, 1.0), 6)
        expected = [1 / math.sqrt(4 * k * k - 1) for k in range(1, 7)]
        assert np.allclose(roots, expected, atol=1e-12)

    def test_printed_formula_roots_differ_by_pi_over_2(self):
        # the dimensionless angle's own zeros land elsewhere; the ratio of
        # accumulated to dimensionless angle is the transfer window pi/2
        eta = find_resonances(1, (0.5, 1.0), 1)[0]
        accumulated = math.pi / 2 * crosstalk_angle(eta)
        assert accumulated == pytest.approx(math.pi, abs=1e-12)
        assert math.sin(crosstalk_angle(eta)) ** 2 > 0.5  # printed form is far from zero here

    def test_empty_range_result(self):
        assert find_resonances(1, (0.6, 1.0), 3) == []

    def test_range_validation(self):
        with pytest.raises(ValueError):
            find_resonances(1, (0.0, 1.0), 1)
        with pytest.raises(ValueError):
            find_resonances(1, (0.5, 0.1), 1)
        with pytest.raises(ValueError):
            find_resonances(0, (0.1, 1.0), 1)

    def test_count_limits_output(self):
        assert len(find_resonances(1, (0.05, 1.0), 2)) == 2


class TestCrosstalkAngle:
    def test_sin2_from_evolution_matches_closed_form(self):
        for eta in (0.07, 0.21, 0.8):
            angle = 0.5 * math.pi * math.sqrt(1 + eta ** -2)
            assert crosstalk_sin2_from_evolution(eta) == pytest.approx(
                math.sin(angle) ** 2, abs=1e-12)

    def test_requires_positive_eta(self):
        with pytest.raises(ValueError):
            crosstalk_angle(0.0)


class TestPhaseCorrection:
    def test_single_bit(self):
        split = SubcubeSplit(d=1, channel_bits=frozenset(), delta_omega=0.0, omega0=1.0)
        phi = phase_correction(split, 0, 1, transfer_time(1.0))
        assert phi == pytest.approx(math.pi / 2, abs=1e-12)

    def test_three_bits(self):
        split = SubcubeSplit(d=3, channel_bits=frozenset(), delta_omega=0.0, omega0=1.0)
        phi = phase_correction(split, 0, 7, transfer_time(1.0))
        assert phi == pytest.approx(3 * math.pi / 2, abs=1e-9)

    def test_fast_equals_dense(self):
        from oscnet import evolve_modes, program_subcube_split, transfer_amplitude
        split = SubcubeSplit.from_eta(3, (1,), eta=0.3)
        t = transfer_time(1.0)
        phi_fast = phase_correction(split, 2, 2 ^ split.transfer_mask, t)
        alpha = transfer_amplitude(evolve_modes(program_subcube_split(split), t),
                                   2, 2 ^ split.transfer_mask)
        phi_dense = (-math.atan2(alpha.imag, alpha.real)) % (2 * math.pi)
        assert abs(phi_fast - phi_dense) <= 1e-9

    def test_non_antipodal_rejected(self):
        split = SubcubeSplit(d=2, channel_bits=frozenset({0}), delta_omega=4.0, omega0=1.0)
        with pytest.raises(ContractViolation):
            phase_correction(split, 0, 1, 1.0)
