import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from hrnsim.geometry import IrsScenario
from hrnsim.linkbudget import (ALL_SERIES, HYBRID_ICSI, HYBRID_SCSI, IRS_NEAR_RELAY_ICSI,
                               IRS_NEAR_RELAY_SCSI, IRS_NEAR_SOURCE_SCSI, RELAY, Csi,
                               FrameParams, InfeasibleFrameError, Scheme, SchemeConfig,
                               SystemParams, achievable_rate, dbm_to_watts, energy_efficiency,
                               overhead_fraction, power_report, power_split, required_power,
                               total_power, watts_to_dbm)
from hrnsim.rbd import EffectiveGains

SYS = SystemParams()
positive = st.floats(1e-12, 1e6)


def gains_for(cfg, b1, b2=None):
    return EffectiveGains(b1, b2 if b2 is not None else b1) if cfg.two_phase else EffectiveGains(b1)


class TestSchemeConfig:
    def test_relay_ignores_csi_and_scenario(self):
        a = SchemeConfig(Scheme.RELAY, Csi.STATISTICAL, IrsScenario.NEAR_SOURCE)
        assert a == RELAY
        assert a.csi_label == "none"

    def test_labels(self):
        assert [s.label for s in ALL_SERIES] == [
            "relay", "irs_near_relay/icsi", "irs_near_relay/scsi", "irs_near_source/icsi",
            "irs_near_source/scsi", "hybrid/icsi", "hybrid/scsi"]

    def test_parse_aliases(self):
        assert Scheme.parse("HRN") is Scheme.HYBRID
        assert Csi.parse("sCSI") is Csi.STATISTICAL


class TestUnits:
    def test_dbm_roundtrip(self):
        assert dbm_to_watts(30.0) == pytest.approx(1.0)
        assert watts_to_dbm(1.0) == pytest.approx(30.0)
        assert SYS.noise_power == pytest.approx(10 ** (-13.7))


class TestOverhead:
    def test_irs_icsi_golden(self):
        assert overhead_fraction(IRS_NEAR_RELAY_ICSI, FrameParams(1000), 256) == 0.488

    def test_hybrid_icsi_golden(self):
        assert overhead_fraction(HYBRID_ICSI, FrameParams(1000), 256) == 0.2435

    def test_relay(self):
        assert overhead_fraction(RELAY, FrameParams(10_000), 144) == pytest.approx(0.49995)

    def test_scsi_ignores_m(self):
        for m in (1, 256, 10_000):
            assert overhead_fraction(IRS_NEAR_RELAY_SCSI, FrameParams(1000), m) == 0.999
            assert overhead_fraction(HYBRID_SCSI, FrameParams(1000), m) == 0.4995

    def test_hybrid_infeasible_frame(self):
        with pytest.raises(InfeasibleFrameError):
            overhead_fraction(HYBRID_ICSI, FrameParams(500), 256)

    def test_explicit_guard(self):
        eta = overhead_fraction(IRS_NEAR_RELAY_ICSI, FrameParams(1000, pilots=2, guard=10), 100)
        assert eta == pytest.approx((1000 - 200 - 10) / 1000)

    @given(st.integers(1, 10_000), st.integers(1, 4), st.integers(1, 400))
    def test_orderings(self, tau_c, pilots, m):
        f = FrameParams(tau_c + pilots * (m + 1) + m, pilots=pilots)
        irs_s = overhead_fraction(IRS_NEAR_RELAY_SCSI, f, m)
        relay = overhead_fraction(RELAY, f, m)
        assert irs_s > relay == overhead_fraction(HYBRID_SCSI, f, m)
        assert overhead_fraction(HYBRID_ICSI, f, m) < overhead_fraction(IRS_NEAR_RELAY_ICSI, f, m)

    @pytest.mark.parametrize("kwargs", [dict(coherence=0), dict(coherence=10, pilots=0),
                                        dict(coherence=10, guard=-1)])
    def test_frame_validation(self, kwargs):
        with pytest.raises(ValueError):
            FrameParams(**kwargs)


class TestRateAndPower:
    def test_zero_power_zero_rate(self):
        assert achievable_rate(RELAY, 0.5, EffectiveGains(1.0, 2.0), 0.0, 1.0) == 0.0

    def test_symmetric_hops_collapse(self):
        r = achievable_rate(RELAY, 0.4, EffectiveGains(3.0, 3.0), 2.0, 1.5)
        assert r == pytest.approx(0.4 * math.log2(1 + 2.0 * 3.0 / 1.5))

    def test_harmonic_example(self):
        r = achievable_rate(HYBRID_SCSI, 0.5, EffectiveGains(2.0, 2.0), 1.0, 1.0)
        assert r == pytest.approx(0.5 * math.log2(1 + 2.0))

    def test_asymmetric_hops(self):
        b1, b2, p, s = 1.0, 3.0, 2.0, 0.5
        r = achievable_rate(RELAY, 1.0, EffectiveGains(b1, b2), p, s)
        assert r == pytest.approx(math.log2(1 + 2 * p * b1 * b2 / ((b1 + b2) * s)))

    def test_dead_hop_gives_zero_rate_and_infinite_power(self):
        g = EffectiveGains(0.0, 1.0)
        assert achievable_rate(RELAY, 0.5, g, 10.0, 1.0) == 0.0
        assert required_power(RELAY, 0.5, g, 1.0, 1.0) == math.inf
        assert required_power(IRS_NEAR_RELAY_ICSI, 0.5, EffectiveGains(0.0), 1.0, 1.0) == math.inf

    def test_irs_unit_example(self):
        assert required_power(IRS_NEAR_RELAY_SCSI, 1.0, EffectiveGains(1.0), 1.0, 1.0) == 1.0

    def test_small_threshold_limit(self):
        assert required_power(RELAY, 0.5, EffectiveGains(1.0, 1.0), 1e-12, 1.0) < 1e-11

    def test_symmetric_relay_power(self):
        p = required_power(RELAY, 0.5, EffectiveGains(4.0, 4.0), 3.0, 2.0)
        assert p == pytest.approx((2 ** 6 - 1) * 2.0 / 4.0)

    def test_hop_count_mismatch(self):
        with pytest.raises(ValueError):
            required_power(RELAY, 0.5, EffectiveGains(1.0), 1.0, 1.0)
        with pytest.raises(ValueError):
            achievable_rate(IRS_NEAR_RELAY_SCSI, 0.5, EffectiveGains(1.0, 1.0), 1.0, 1.0)

    @settings(max_examples=300)
    @given(st.sampled_from(ALL_SERIES), positive, positive, st.floats(0.01, 1.0),
           st.floats(0.01, 20.0))
    def test_round_trip(self, cfg, b1, b2, eta, rate):
        g = gains_for(cfg, b1, b2)
        p = required_power(cfg, eta, g, rate, SYS.noise_power)
        assume(math.isfinite(p))
        assert achievable_rate(cfg, eta, g, p, SYS.noise_power) == pytest.approx(rate, rel=1e-9)

    @given(st.sampled_from(ALL_SERIES), positive, positive, st.floats(0.05, 1.0),
           st.floats(0.01, 10.0), st.floats(1.01, 2.0))
    def test_monotonicity(self, cfg, b1, b2, eta, rate, k):
        g = gains_for(cfg, b1, b2)
        p = required_power(cfg, eta, g, rate, 1.0)
        assert required_power(cfg, eta, g, rate * k, 1.0) > p
        assert required_power(cfg, eta, gains_for(cfg, b1 * k, b2), rate, 1.0) < p
        if cfg.two_phase:
            assert required_power(cfg, eta, EffectiveGains(b1, b2 * k), rate, 1.0) < p

    def test_power_split(self):
        p1, p2 = power_split(EffectiveGains(3.0, 1.0), 2.0)
        assert (p1, p2) == pytest.approx((1.0, 3.0))
        assert p1 * 3.0 == pytest.approx(p2 * 1.0)
        assert power_split(EffectiveGains(2.0, 2.0), 5.0) == pytest.approx((5.0, 5.0))


class TestTotalPowerAndEE:
    def test_relay_hardware_only(self):
        assert total_power(RELAY, 0.0, 144, SYS) == pytest.approx(0.2)

    def test_irs_scsi(self):
        assert total_power(IRS_NEAR_RELAY_SCSI, 0.0, 144, SYS) == pytest.approx(0.344)

    def test_irs_icsi(self):
        assert total_power(IRS_NEAR_RELAY_ICSI, 0.0, 144, SYS) == pytest.approx(1.064)

    def test_hybrid(self):
        assert total_power(HYBRID_ICSI, 0.0, 100, SYS) == pytest.approx(0.2 + 100 * 0.006)
        assert total_power(HYBRID_SCSI, 0.0, 100, SYS) == pytest.approx(0.2 + 100 * 0.001)

    def test_amplifier_efficiency(self):
        assert total_power(RELAY, 1.0, 1, SYS) == pytest.approx(2.2)

    @given(st.sampled_from([Scheme.IRS, Scheme.HYBRID]), st.floats(0, 10), st.integers(1, 400),
           st.just(0.0) | st.floats(1e-6, 0.1))
    def test_scsi_never_costs_more(self, scheme, p, m, p_dyn):
        sys_ = SystemParams(p_dynamic=p_dyn)
        i = total_power(SchemeConfig(scheme, Csi.INSTANTANEOUS), p, m, sys_)
        s = total_power(SchemeConfig(scheme, Csi.STATISTICAL), p, m, sys_)
        assert s <= i
        assert (s == i) == (p_dyn == 0.0)

    def test_ee_examples(self):
        assert energy_efficiency(3.0, 1.0, 1e7) == pytest.approx(3e7)
        assert energy_efficiency(3.0, 2.0, 1e7) == pytest.approx(1.5e7)
        assert energy_efficiency(0.0, 1.0, 1e7) == 0.0
        with pytest.raises(ValueError):
            energy_efficiency(1.0, 0.0, 1e7)

    @given(st.floats(0, 20), st.floats(1e-3, 1e3))
    def test_ee_identity(self, rate, total):
        assert energy_efficiency(rate, total, SYS.bandwidth) * total / SYS.bandwidth == \
            pytest.approx(rate, rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("kwargs", [dict(amplifier_efficiency=0.0), dict(noise_power=0.0),
                                        dict(bandwidth=-1.0), dict(p_relay=-1e-3),
                                        dict(amplitude=1.5), dict(amplifier_efficiency=1.2)])
    def test_system_validation(self, kwargs):
        with pytest.raises(ValueError):
            SystemParams(**kwargs)


class TestPowerReport:
    def test_feasible(self):
        r = power_report(IRS_NEAR_SOURCE_SCSI, FrameParams(1000), EffectiveGains(1e-10), 64,
                         3.0, SYS)
        assert r.feasible
        eta = 0.999
        assert r.required_tx_power == pytest.approx((2 ** (3 / eta) - 1) * SYS.noise_power / 1e-10)
        assert r.energy_efficiency == pytest.approx(3.0 * 1e7 / r.total_power)

    def test_infeasible_frame_is_flagged_not_raised(self):
        r = power_report(HYBRID_ICSI, FrameParams(500), EffectiveGains(1.0, 1.0), 256, 3.0, SYS)
        assert not r.feasible and r.required_tx_power == math.inf and r.energy_efficiency == 0.0

    def test_zero_gain_is_flagged(self):
        r = power_report(RELAY, FrameParams(1000), EffectiveGains(0.0, 1.0), 1, 3.0, SYS)
        assert not r.feasible
