import cmath
import math
from dataclasses import replace

import numpy as np
import pytest

from closed_form import general_amplitudes, zero_delay_amplitudes
from veil.algebra import inner_product
from veil.elements import ObjectSpec
from veil.errors import AllCrystalsDead, InvalidTransmissivity, UnknownParameter
from veil.network import (
    NetworkConfig,
    branch_states,
    build_network,
    output_state,
    propagate_pump,
    random_config,
)

S = math.sqrt(0.5)


def names(form):
    return {m.name: a for m, a in form.items()}


def max_diff(a, b):
    keys = set(a) | set(b)
    return max(abs(a.get(k, 0) - b.get(k, 0)) for k in keys)


class TestBuild:
    def test_default(self, default_config):
        net = build_network(default_config)
        assert len(net.modes) == 11

    def test_third_crystal_off(self):
        net = build_network(NetworkConfig(gammas=(1, 1, 0)))
        assert net.crystals[2] is None

    def test_bad_object(self):
        with pytest.raises(InvalidTransmissivity):
            build_network(NetworkConfig(object1=ObjectSpec(1.5)))

    def test_unknown_parameter(self, default_config):
        with pytest.raises(UnknownParameter):
            default_config.with_param("T3", 0.5)

    def test_with_param_routes(self, default_config):
        c = default_config.with_param("phi3", 0.4).with_param("gamma2", 0.2).with_param("T1", 0.3)
        assert c.delays == (0, 0, 0.4) and c.gammas == (1, 0.2, 1) and c.object1.T == 0.3


class TestPropagate:
    def test_third_crystal(self, default_config):
        b = propagate_pump(build_network(default_config), 3)
        assert names(b.signal) == pytest.approx({"B": S, "C": 1j * S})
        assert names(b.idler) == {"I": 1}

    def test_first_crystal_transparent(self, default_config):
        b = propagate_pump(build_network(default_config), 1)
        assert names(b.signal) == pytest.approx({"A": 1j * S, "B": 0.5j, "C": 0.5}, abs=1e-15)
        assert names(b.idler) == {"I": 1}

    def test_first_crystal_opaque_object(self):
        b = propagate_pump(build_network(NetworkConfig(object1=ObjectSpec(0.0))), 1)
        assert names(b.idler) == {"v1": 1j}

    def test_first_crystal_general_delays(self):
        cfg = NetworkConfig(
            object1=ObjectSpec(0.6, 0.7), object2=ObjectSpec(0.8, 1.1), delays=(0.3, 0.5, 0.9)
        )
        b = propagate_pump(build_network(cfg), 1)
        Ta, Ra, Tb, Rb = S, 1j * S, S, 1j * S
        e = lambda x: cmath.exp(1j * x)
        assert names(b.signal) == pytest.approx(
            {"A": Ra * e(0.3), "B": Ta * Rb * e(0.8), "C": Ta * Tb * e(0.8)}, abs=1e-15
        )
        R1, R2 = cfg.object1.R, cfg.object2.R
        assert names(b.idler) == pytest.approx(
            {"I": 0.6 * e(0.7) * 0.8 * e(1.1), "v2": 0.6 * e(0.7) * R2, "v1": R1}, abs=1e-15
        )

    def test_second_crystal_general_delays(self):
        cfg = NetworkConfig(object2=ObjectSpec(0.8, 1.1), delays=(0.3, 0.5, 0.9))
        b = propagate_pump(build_network(cfg), 2)
        e = lambda x: cmath.exp(1j * x)
        assert names(b.signal) == pytest.approx(
            {"A": S * e(0.9), "B": -0.5 * e(1.4), "C": 0.5j * e(1.4)}, abs=1e-15
        )
        assert names(b.idler) == pytest.approx({"I": 0.8 * e(1.1), "v2": cfg.object2.R}, abs=1e-15)

    @pytest.mark.parametrize("seed", range(200))
    def test_branch_forms_unit_norm(self, seed):
        net = build_network(random_config(np.random.default_rng(seed)))
        for k in (1, 2, 3):
            b = propagate_pump(net, k)
            assert b.signal.norm_squared == pytest.approx(1, abs=1e-12)
            assert b.idler.norm_squared == pytest.approx(1, abs=1e-12)


class TestOutputState:
    def test_default_amplitudes(self, default_config):
        amps = output_state(build_network(default_config)).by_name()
        assert amps[("A", "I")] == pytest.approx((1 + 1j) / math.sqrt(6), abs=1e-15)
        assert abs(amps[("A", "I")]) ** 2 == pytest.approx(1 / 3, abs=1e-15)
        assert abs(amps[("B", "I")]) ** 2 == pytest.approx((1 - S) / 3, abs=1e-15)
        assert abs(amps[("C", "I")]) ** 2 == pytest.approx((1 + S) / 3, abs=1e-15)
        assert abs(amps[("C", "I")]) ** 2 == pytest.approx(0.5690355937288492, abs=1e-12)

    def test_fringe_zero(self):
        cfg = NetworkConfig(gammas=(1, 1, 0), object1=ObjectSpec(1.0, math.pi / 2))
        assert ("A", "I") not in output_state(build_network(cfg)).by_name()

    def test_opaque_object1_two_crystals(self):
        cfg = NetworkConfig(gammas=(1, 1, 0), object1=ObjectSpec(0.0))
        amps = output_state(build_network(cfg)).by_name()
        # only crystal 2 reaches (A, I)
        assert amps[("A", "I")] == pytest.approx(S / math.sqrt(2), abs=1e-15)
        assert abs(amps[("A", "v1")]) ** 2 == pytest.approx(0.5 / 2, abs=1e-15)

    def test_dead(self):
        with pytest.raises(AllCrystalsDead):
            output_state(build_network(NetworkConfig(gammas=(0, 0, 0))))

    def test_unnormalized(self, default_config):
        net = build_network(default_config)
        assert output_state(net, normalized=False).norm_squared == pytest.approx(3)

    @pytest.mark.parametrize("seed", range(50))
    def test_matches_closed_form(self, seed):
        cfg = random_config(np.random.default_rng(seed))
        got = output_state(build_network(cfg)).by_name()
        assert max_diff(got, general_amplitudes(cfg)) <= 1e-12
        flat = replace(cfg, delays=(0.0, 0.0, 0.0))
        assert max_diff(output_state(build_network(flat)).by_name(), zero_delay_amplitudes(flat)) <= 1e-12

    @pytest.mark.parametrize("seed", range(200))
    def test_unitarity_and_orthogonality(self, seed):
        net = build_network(random_config(np.random.default_rng(1000 + seed)))
        assert output_state(net).norm_squared == pytest.approx(1, abs=1e-12)
        b = branch_states(net)
        for m in range(3):
            for n in range(m + 1, 3):
                assert abs(inner_product(b[m], b[n])) <= 1e-12

    @pytest.mark.parametrize("seed", range(20))
    def test_common_delay_shift_only_rephases_A_row(self, seed):
        rng = np.random.default_rng(seed)
        cfg = random_config(rng)
        delta = rng.uniform(0, 2 * math.pi)
        d1, d2, d3 = cfg.delays
        shifted = replace(cfg, delays=(d1 + delta, d2, d3 + delta))
        a = output_state(build_network(cfg)).by_name()
        b = output_state(build_network(shifted)).by_name()
        row = [k for k in a if k[0] == "A"]
        assert set(row) == {k for k in b if k[0] == "A"}
        phases = []
        for k in row:
            assert abs(a[k]) == pytest.approx(abs(b[k]), abs=1e-12)
            if abs(a[k]) > 1e-6:
                phases.append(b[k] / a[k])
        for p in phases:
            assert abs(p - phases[0]) <= 1e-12 / min(abs(a[k]) for k in row if abs(a[k]) > 1e-6) * 10
