import math
from dataclasses import dataclass

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobnuc.characters import (ConstantTail, MultiplicitySpectrum, TailRule,
                               bw_nuclearity_bound, character, character_log,
                               l2_nuclearity_norm, load_spectrum,
                               log_ellipticity_fit, net_log_trace,
                               split_distance, tail_from_dict)
from mobnuc.errors import (DivergentSpectrum, InsufficientGrid,
                           NonPositiveParameter, NotCompactInclusion,
                           ParameterOutOfRange)
from mobnuc.geometry import Interval


@dataclass(frozen=True)
class GeometricTail(TailRule):
    """Deliberately divergent: multiplicities 3^j."""

    def mult(self, j):
        return 3 ** j

    def to_dict(self):
        return {"name": "geometric"}


SINGLE = MultiplicitySpectrum.single(1.0)


class TestCharacter:
    def test_single_weight_log_two(self):
        assert character(SINGLE, math.log(2.0)) == pytest.approx(1.0, rel=1e-14)

    def test_decay_at_large_s(self):
        assert character(SINGLE, 50.0) <= 1e-20

    def test_two_weights_closed_form(self):
        spec = MultiplicitySpectrum({1.0: 1, 2.0: 1})
        expect = (math.exp(-1) + math.exp(-2)) / (1 - math.exp(-1))
        assert character(spec, 1.0) == pytest.approx(expect, rel=1e-14)

    def test_brute_force_ladder_sum(self):
        # direct summation over the first 10^3 rungs of each ladder
        spec = MultiplicitySpectrum({0.7: 2, 2.3: 3})
        s = 0.9
        brute = sum(m * math.exp(-s * (w + n))
                    for w, m in spec.entries for n in range(1000))
        assert character(spec, s) == pytest.approx(brute, rel=1e-12)

    def test_empty_spectrum(self):
        assert character(MultiplicitySpectrum.empty(), 1.0) == 0.0

    def test_tail_rule_against_explicit_sum(self):
        tail = ConstantTail(first_weight=2.0, multiplicity=3)
        spec = MultiplicitySpectrum({}, tail)
        s = 1.3
        expect = 3 * math.exp(-2 * s) / (1 - math.exp(-s)) ** 2
        assert character(spec, s) == pytest.approx(expect, rel=1e-12)

    def test_divergent_tail_rejected(self):
        spec = MultiplicitySpectrum({}, GeometricTail(first_weight=1.0))
        with pytest.raises(DivergentSpectrum):
            character(spec, 5.0)

    def test_rejects_nonpositive_s(self):
        with pytest.raises(NonPositiveParameter):
            character(SINGLE, 0.0)

    def test_rejects_bad_weights(self):
        with pytest.raises(NonPositiveParameter):
            MultiplicitySpectrum({-1.0: 1})
        with pytest.raises(ValueError):
            MultiplicitySpectrum({1.0: -2})

    @given(st.floats(0.05, 5.0), st.floats(0.01, 2.0))
    @settings(max_examples=60, deadline=None)
    def test_strictly_decreasing(self, s, ds):
        assert character(SINGLE, s + ds) < character(SINGLE, s)

    def test_log_matches_linear_scale(self):
        spec = MultiplicitySpectrum({1.0: 2, 3.5: 4})
        for s in (0.3, 1.0, 4.0):
            assert character_log(spec, s) == pytest.approx(
                math.log(character(spec, s)), rel=1e-12)


class TestNuclearityNorm:
    def test_quarter_exponent_is_character_at_distance(self):
        I, _, _ = _sym_sub(1.0)
        val = l2_nuclearity_norm(SINGLE, Interval.upper_semicircle(), I, 0.25)
        assert val == pytest.approx(math.exp(-1) / (1 - math.exp(-1)), rel=1e-10)
        assert val == pytest.approx(0.581977, abs=1e-6)

    def test_vanishing_exponent_diverges(self):
        I, _, _ = _sym_sub(1.0)
        assert l2_nuclearity_norm(SINGLE, Interval.upper_semicircle(), I, 1e-300) >= 1e298
        assert math.isinf(
            l2_nuclearity_norm(SINGLE, Interval.upper_semicircle(), I, 5e-324))

    def test_exponent_ratio_against_closed_forms(self):
        # ell' = 1 inclusion: sin(2 pi lam) in {1, 1/2} at lam = 1/4, 1/12
        inner = Interval.from_line(1.0, 2.0)
        outer = Interval.upper_semicircle()
        from mobnuc.geometry import second_inner_distance
        ellp = second_inner_distance(outer, inner)
        for lam in (0.25, 1.0 / 12.0):
            s = 2 * math.asinh(math.sin(2 * math.pi * lam) * ellp)
            expect = math.exp(-s) / (1 - math.exp(-s))
            assert l2_nuclearity_norm(SINGLE, outer, inner, lam) == pytest.approx(
                expect, rel=1e-12)

    def test_exponent_range(self):
        I, _, _ = _sym_sub(1.0)
        with pytest.raises(ParameterOutOfRange):
            l2_nuclearity_norm(SINGLE, Interval.upper_semicircle(), I, 0.5)

    def test_submultiplicative_on_nested_triples(self):
        rng = np.random.default_rng(31337)
        for _ in range(50):
            pts = np.sort(rng.uniform(0.1, 30.0, 6))
            if np.min(np.diff(pts)) < 1e-2:
                continue
            I3 = Interval.from_line(pts[0], pts[5])
            I2 = Interval.from_line(pts[1], pts[4])
            I1 = Interval.from_line(pts[2], pts[3])
            for k in (1.0, 2.0, 5.0):
                spec = MultiplicitySpectrum.single(k)
                t31 = l2_nuclearity_norm(spec, I3, I1, 0.25)
                t32 = l2_nuclearity_norm(spec, I3, I2, 0.25)
                t21 = l2_nuclearity_norm(spec, I2, I1, 0.25)
                assert t31 <= t32 * t21 * (1 + 1e-10)

    def test_kth_root_converges_to_exp_minus_ell(self):
        # (t_k)^{1/k} = e^{-ell} (1-e^{-ell})^{-1/k}: deviation decays like
        # |log(1 - e^{-ell})| e^{-ell} / k
        for ell in (0.5, 1.0, 2.0):
            devs = []
            for k in (10 ** 2, 10 ** 3, 10 ** 4):
                logt = -ell * k - math.log1p(-math.exp(-ell))
                devs.append(abs(math.exp(logt / k) - math.exp(-ell)))
            assert devs[0] > devs[1] > devs[2]
            predicted = abs(math.log1p(-math.exp(-ell))) * math.exp(-ell) / 10 ** 4
            assert devs[2] == pytest.approx(predicted, rel=1e-3)


def _sym_sub(s):
    from mobnuc.geometry import symmetric_subinterval
    return symmetric_subinterval(s)


class TestBoundChain:
    def test_closed_form_value(self):
        # ell' = 1, lam = 1/8: s = 2 asinh(sin(pi/4))
        outer = Interval.upper_semicircle()
        inner = Interval.from_line(1.0, 2.0)
        with pytest.raises(ParameterOutOfRange):
            bw_nuclearity_bound(SINGLE, outer, inner, 0.125)  # d_I infinite
        outer = Interval.from_line(0.25, 40.0)
        from mobnuc.geometry import second_inner_distance
        ellp = second_inner_distance(outer, inner)
        rep = bw_nuclearity_bound(SINGLE, outer, inner, 0.125)
        s = 2 * math.asinh(math.sin(0.25 * math.pi) * ellp)
        assert rep.s_effective == pytest.approx(s, rel=1e-12)
        assert rep.bw_bound == pytest.approx(
            math.exp(-s) / (1 - math.exp(-s)), rel=1e-12)

    def test_small_lambda_linearization(self):
        outer = Interval.from_line(0.0, 4.0)
        inner = Interval.from_line(1.0, 2.0)
        for lam in (1e-5, 1e-4):
            rep = bw_nuclearity_bound(SINGLE, outer, inner, lam)
            assert rep.bw_time / rep.linearized_time == pytest.approx(1.0, rel=1e-3)
            assert rep.s_effective / rep.s_linearized == pytest.approx(1.0, rel=1e-3)

    def test_monotone_chain(self):
        rep = bw_nuclearity_bound(SINGLE, Interval.from_line(0.0, 4.0),
                                  Interval.from_line(1.0, 2.0), 0.1)
        for step in rep.steps:
            v = step.get("value", step.get("upper_bound"))
            assert v <= rep.bw_bound * (1 + 1e-12)

    def test_degenerate_inclusion_rejected(self):
        with pytest.raises(NotCompactInclusion):
            bw_nuclearity_bound(SINGLE, Interval.from_line(0.0, 4.0),
                                Interval.from_line(0.0, 4.0), 0.1)

    def test_dilation_covariance(self):
        # scaling both intervals by c and evaluating at time a equals the
        # unscaled report at time a/c
        outer = Interval.from_line(0.5, 2.5)
        inner = Interval.from_line(1.0, 2.0)
        c, a = 4.0, 0.8
        outer_c = Interval.from_line(0.5 * c, 2.5 * c)
        inner_c = Interval.from_line(1.0 * c, 2.0 * c)
        rep1 = bw_nuclearity_bound(SINGLE, outer_c, inner_c, 0.1, time=a)
        rep2 = bw_nuclearity_bound(SINGLE, outer, inner, 0.1, time=a / c)
        # ell' is recomputed through a different normalizer, so agreement
        # is to rounding, not bit-for-bit
        assert rep1.estimate["value"] == pytest.approx(rep2.estimate["value"], rel=1e-12)
        assert rep1.bw_bound == pytest.approx(rep2.bw_bound, rel=1e-12)

    def test_dilation_covariance_generic_scale(self):
        outer = Interval.from_line(0.5, 2.5)
        inner = Interval.from_line(1.0, 2.0)
        c, a = 3.0, 0.8
        rep1 = bw_nuclearity_bound(
            SINGLE, Interval.from_line(0.5 * c, 2.5 * c),
            Interval.from_line(1.0 * c, 2.0 * c), 0.1, time=a)
        rep2 = bw_nuclearity_bound(SINGLE, outer, inner, 0.1, time=a / c)
        assert rep1.estimate["value"] == pytest.approx(rep2.estimate["value"], rel=1e-12)


class TestSplitDistance:
    def test_short_distance(self):
        cert = split_distance(SINGLE, 0.1)
        assert cert.threshold == 0.1
        assert cert.trace_norm == pytest.approx(9.508, abs=1e-3)

    def test_unit_norm_at_log_two(self):
        assert split_distance(SINGLE, math.log(2.0)).trace_norm == pytest.approx(
            1.0, rel=1e-14)

    def test_empty_spectrum_always_split(self):
        cert = split_distance(MultiplicitySpectrum.empty(), 1e-6)
        assert cert.trace_norm == 0.0

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveParameter):
            split_distance(SINGLE, 0.0)


class TestNetTrace:
    def test_single_weight_matches_direct_product(self):
        # log prod_n (1 - e^{-s(1+n)})^{-1}
        s = 0.5
        direct = -sum(math.log1p(-math.exp(-s * (1 + n))) for n in range(200))
        assert net_log_trace(SINGLE, s) == pytest.approx(direct, rel=1e-12)

    def test_free_field_matches_cumulative_sum(self):
        from mobnuc.branching import free_field_spectrum
        spec = free_field_spectrum(3)
        s = 0.7
        direct = -sum((m ** 2) * math.log1p(-math.exp(-s * m))
                      for m in range(1, 300))
        assert net_log_trace(spec, s) == pytest.approx(direct, rel=1e-12)

    def test_small_s_single_weight_is_planar_density(self):
        # -sum log(1 - e^{-sn}) -> pi^2/(6s)
        s = 1e-4
        assert net_log_trace(SINGLE, s) * s == pytest.approx(
            math.pi ** 2 / 6.0, rel=1e-3)

    def test_euler_transform_route(self):
        # independent route: expanding -log(1 - e^{-sE}) in powers gives
        # log Tr_net = sum_j character(j s) / j (the one-particle
        # eigenvalue sum with cumulative multiplicities IS the character)
        from mobnuc.branching import free_field_spectrum
        for spec, s in ((SINGLE, 0.9), (free_field_spectrum(3), 0.8)):
            euler = sum(character(spec, j * s) / j for j in range(1, 120))
            assert net_log_trace(spec, s) == pytest.approx(euler, rel=1e-10)


class TestLogEllipticityFit:
    GRID = list(np.geomspace(1e-3, 1e-2, 9))

    def test_free_field_d3(self):
        from mobnuc.branching import free_field_spectrum
        fit = log_ellipticity_fit(free_field_spectrum(3), self.GRID)
        assert abs(fit.alpha - 3.0) / 3.0 <= 0.05
        assert fit.kms_criterion_met
        assert "KMS" in fit.statement

    def test_single_weight_is_unit_exponent(self):
        # a single irreducible summand second-quantizes to log Tr ~ c/s:
        # growth exponent 1, the rational-model value
        fit = log_ellipticity_fit(SINGLE, self.GRID)
        assert abs(fit.alpha - 1.0) <= 0.1
        assert fit.kms_criterion_met

    def test_needs_five_points(self):
        with pytest.raises(InsufficientGrid):
            log_ellipticity_fit(SINGLE, [0.01, 0.02, 0.05, 0.07])

    def test_grid_domain(self):
        with pytest.raises(InsufficientGrid):
            log_ellipticity_fit(SINGLE, [0.1, 0.2, 0.5, 0.7, 1.5])


class TestSpectrumIO:
    def test_round_trip(self, tmp_path):
        spec = MultiplicitySpectrum({1.0: 1, 2.5: 3})
        path = tmp_path / "spec.json"
        import json
        path.write_text(json.dumps(spec.to_dict()))
        loaded = load_spectrum(path)
        assert loaded.entries == spec.entries

    def test_bare_list_form(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text('[{"weight": 1, "multiplicity": 2}]')
        assert load_spectrum(path).entries == ((1.0, 2),)

    def test_tail_rule_form(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text('{"entries": [], "tail_rule": {"name": "free_field", "d": 3}}')
        spec = load_spectrum(path)
        assert spec.tail is not None
        assert spec.tail.mult(2) == 5

    def test_constant_tail_round_trip(self):
        tail = tail_from_dict({"name": "constant", "first_weight": 2.0,
                               "multiplicity": 7})
        assert tail.mult(11) == 7
        assert tail_from_dict(tail.to_dict()) == tail

    def test_unknown_rule_rejected(self):
        with pytest.raises(ValueError):
            tail_from_dict({"name": "mystery"})
