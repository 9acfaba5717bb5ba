import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twosubspace import seqmodel as sm
from twosubspace.seqmodel import CONTINUUM, DiagonalSpec, Finite, SymTerm
from twosubspace.selftest import random_compact_spec

INV_N = DiagonalSpec.single(p=-1)
INV_N_LOG = DiagonalSpec.single(a=1, p=-1, b=1, q=-1)


def brute_values(spec, count):
    """Every diagonal value for n <= count, straight from the formula plus overrides."""
    out = []
    for i, t in enumerate(spec.branches):
        vals = {n: t.c * (n + t.a) ** t.p * math.log(n + t.b) ** t.q for n in range(1, count + 1)}
        for j, n, v in spec.overrides:
            if j == i and n <= count:
                vals[n] = v
        out.extend(vals.values())
    return np.array(out)


specs = st.integers(0, 2**31).map(lambda s: random_compact_spec(np.random.default_rng(s)))


class TestTerms:
    def test_eval_examples(self):
        assert sm.eval_term(SymTerm(1, 0, -1, 1, 0), 4) == 0.25
        assert math.isclose(sm.eval_term(SymTerm(1, 1, -1, 1, -1), 1), 1 / (2 * math.log(2)))
        assert sm.eval_term(SymTerm(1, 0, 2, 1, 0), 3) == 9

    @pytest.mark.parametrize("kw", [dict(c=0), dict(c=-1), dict(a=-1), dict(b=0.5),
                                    dict(p=math.nan)])
    def test_invalid_terms(self, kw):
        base = dict(c=1, a=0, p=-1, b=1, q=0)
        with pytest.raises(ValueError):
            SymTerm(**{**base, **kw})

    def test_directions(self):
        assert SymTerm(p=-1).direction == -1
        assert SymTerm(c=2).direction == 0
        assert SymTerm(p=2).direction == 1
        assert SymTerm(p=0, q=-1).direction == -1

    def test_non_monotone_head(self):
        # n^-0.3 log(n+1)^2 rises before it decays
        spec = DiagonalSpec.single(p=-0.3, q=2)
        n0 = spec.branch_n0(0)
        assert 100 < n0 < 10_000
        vals = brute_values(spec, 50_000)
        assert vals[-1] < 4.6
        # windows above the value at n = 50000 only see indices the brute force covers
        for alpha, beta in [(4.6, 5.0), (5.0, 100.0), (6.0, 6.5)]:
            assert sm.counting(spec, alpha, beta) == np.sum((vals >= alpha) & (vals <= beta))

    def test_positivity_on_catalogue(self):
        from twosubspace.config import bundled
        for s in bundled().systems:
            if s.is_diagonal:
                spec = s.spec()
                for i in range(len(spec.branches)):
                    assert np.all(spec.branch_values(i, 10_000) > 0)


class TestCardinal:
    def test_arithmetic(self):
        assert Finite(1) + 2 == Finite(3)
        assert Finite(1) + CONTINUUM == CONTINUUM
        assert CONTINUUM + 5 == CONTINUUM

    def test_parse(self):
        assert sm.CardinalDim.parse("continuum") == CONTINUUM
        assert sm.CardinalDim.parse(3) == Finite(3)
        with pytest.raises(ValueError):
            Finite(-1)


class TestSchatten:
    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.0])
    def test_power_exact(self, s):
        assert sm.sh_exponent(DiagonalSpec.single(p=-s)) == 1 / s

    def test_log_corrected(self):
        assert sm.sh_exponent(INV_N_LOG) == 1.0
        assert abs(sm.sh_exponent_numeric(INV_N_LOG) - 1.0) <= 0.01

    def test_non_schatten(self):
        assert sm.sh_exponent(DiagonalSpec.single(c=2)) == math.inf
        assert sm.sh_exponent(DiagonalSpec(interval_parts=((2, 3),))) == math.inf

    def test_membership(self):
        assert not sm.schatten_member(INV_N, 1)
        assert sm.schatten_member(INV_N, 2)
        assert not sm.schatten_member(INV_N_LOG, 1)
        assert sm.schatten_member(INV_N_LOG, 1.01)
        # (log n)^-2 / n is summable at alpha = 1
        assert sm.schatten_member(DiagonalSpec.single(a=1, p=-1, q=-2), 1)

    def test_log_integral_oracle(self):
        # int_2^X dx / (x log x) = log log X - log log 2 is unbounded in X
        grow = [math.log(math.log(x)) - math.log(math.log(2)) for x in (1e10, 1e100, 1e300)]
        assert grow == sorted(grow) and grow[-1] > 6
        assert not sm._tail_converges(INV_N_LOG.branches[0], 1.0, 1.0)

    @settings(max_examples=40, deadline=None)
    @given(specs)
    def test_exponent_consistency(self, spec):
        s = sm.sh_exponent(spec)
        assert sm.schatten_member(spec, s + 0.1)
        assert not sm.schatten_member(spec, max(s - 0.1, s / 2))

    def test_numeric_oracle_on_powers(self):
        for p in (-0.5, -1.0, -3.0):
            spec = DiagonalSpec.single(p=p)
            assert abs(sm.sh_exponent_numeric(spec) - sm.sh_exponent(spec)) <= 0.01


class TestMu:
    def test_single(self):
        np.testing.assert_allclose(sm.mu_sequence(INV_N, 3), [1, 1 / 2, 1 / 3])

    def test_doubled(self):
        spec = DiagonalSpec(branches=(SymTerm(p=-1), SymTerm(p=-1)))
        np.testing.assert_allclose(sm.mu_sequence(spec, 4), [1, 1, 0.5, 0.5])

    def test_two_powers_brute_merge(self):
        spec = DiagonalSpec(branches=(SymTerm(p=-2), SymTerm(p=-3)))
        np.testing.assert_allclose(sm.mu_sequence(spec, 4), [1, 1, 0.25, 0.125])
        oracle = np.sort(brute_values(spec, 100))[::-1][:100]
        np.testing.assert_allclose(sm.mu_sequence(spec, 100), oracle)

    def test_non_compact(self):
        with pytest.raises(ValueError):
            sm.mu_sequence(DiagonalSpec.single(c=2), 3)
        with pytest.raises(ValueError):
            sm.mu_sequence(DiagonalSpec(branches=(SymTerm(p=-1),), interval_parts=((1, 2),)), 3)

    def test_shift_ignored(self):
        np.testing.assert_array_equal(sm.mu_sequence(INV_N, 10),
                                      sm.mu_sequence(INV_N.__class__(INV_N.branches,
                                                                     shift_offset=1), 10))

    @settings(max_examples=30, deadline=None)
    @given(specs)
    def test_merge_oracle(self, spec):
        mu = sm.mu_sequence(spec, 1000)
        assert np.all(np.diff(mu) <= 0)
        per = [sm.mu_sequence(DiagonalSpec(branches=(t,), overrides=tuple(
            (0, n, v) for j, n, v in spec.overrides if j == i)), 1000)
            for i, t in enumerate(spec.branches)]
        np.testing.assert_array_equal(mu, np.sort(np.concatenate(per))[::-1][:1000])


class TestCounting:
    def test_examples(self):
        assert sm.counting(INV_N, 0.25, 0.5) == 3
        assert sm.counting(DiagonalSpec(interval_parts=((2, 3),)), 2.5, 2.6) == math.inf
        assert sm.counting(DiagonalSpec.single(p=2), 4, 16) == 3

    def test_point_interval(self):
        spec = DiagonalSpec(interval_parts=((2, 2),))
        assert sm.counting(spec, 2, 2) == math.inf
        assert sm.counting(spec, 2.5, 3) == 0

    def test_bad_window(self):
        with pytest.raises(ValueError):
            sm.counting(INV_N, 0.5, 0.25)

    def test_huge_count(self):
        n = sm.counting(INV_N, 1e-300, 1.0)
        assert 0.99e300 <= n <= 1.01e300

    @settings(max_examples=40, deadline=None)
    @given(specs, st.floats(0.01, 0.9), st.floats(0.01, 0.9), st.floats(1.0, 3.0))
    def test_monotone(self, spec, x, y, grow):
        alpha, beta = sorted((x, y))
        base = sm.counting(spec, alpha, beta)
        assert sm.counting(spec, alpha / grow, beta * grow) >= base

    @settings(max_examples=30, deadline=None)
    @given(specs, st.integers(0, 2**31))
    def test_matches_mu(self, spec, seed):
        rng = np.random.default_rng(seed)
        mu = sm.mu_sequence(spec, 3000)
        for _ in range(20):
            alpha, beta = np.sort(rng.uniform(mu[-1], mu[0] * 1.1, 2))
            if alpha <= mu[-1]:
                continue
            assert sm.counting(spec, alpha, beta) == np.sum((mu >= alpha) & (mu <= beta))

    def test_profile(self):
        prof = sm.SpectralProfile(INV_N)
        assert prof(0.25, 0.5) == 3


class TestPredicates:
    def test_range_closed(self):
        assert sm.range_closed(DiagonalSpec.single(c=2))
        assert not sm.range_closed(INV_N)
        assert sm.range_closed(DiagonalSpec.single(p=2))
        assert sm.range_closed(DiagonalSpec(interval_parts=((2, 3),)))

    def test_domain_total(self):
        assert sm.domain_total(INV_N)
        assert not sm.domain_total(DiagonalSpec.single(p=2))
        assert sm.domain_total(DiagonalSpec.single(c=2))

    def test_cokernel(self):
        assert sm.cokernel_dim(INV_N) == Finite(0)
        assert sm.cokernel_dim(DiagonalSpec.single(p=-1, shift_offset=1)) == Finite(1)
        assert sm.cokernel_dim(INV_N.with_kernel("continuum")) == CONTINUUM


class TestSpecHandling:
    def test_round_trip(self):
        spec = DiagonalSpec(branches=(SymTerm(p=-1), SymTerm(c=2)), overrides=((0, 3, 0.7),),
                            shift_offset=1, kernel_dim=2, interval_parts=((1, 2),))
        assert DiagonalSpec.from_dict(spec.as_dict()) == spec

    def test_unknown_field(self):
        with pytest.raises(ValueError):
            DiagonalSpec.from_dict({"branches": [], "weird": 1})

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            DiagonalSpec()

    def test_override_checks(self):
        with pytest.raises(ValueError):
            DiagonalSpec(branches=(SymTerm(p=-1),), overrides=((1, 2, 0.5),))
        with pytest.raises(ValueError):
            DiagonalSpec(branches=(SymTerm(p=-1),), overrides=((0, 2, 0.0),))

    def test_direct_sum(self):
        s = sm.direct_sum(DiagonalSpec.single(p=2), DiagonalSpec.single(p=-2, shift_offset=1))
        assert len(s.branches) == 2 and s.shift_offset == 1
        assert s.compact_part().branches == (SymTerm(p=-2),)

    def test_truncation(self):
        m = sm.truncate_matrix(DiagonalSpec.single(p=-1, shift_offset=1), 4)
        assert m.shape == (5, 4)
        np.testing.assert_allclose(np.diag(m, -1), [1, 1 / 2, 1 / 3, 1 / 4])
        m2 = sm.truncate_matrix(sm.direct_sum(DiagonalSpec.single(p=2),
                                              DiagonalSpec.single(p=-2)), 4)
        np.testing.assert_allclose(np.diag(m2), [1, 1, 4, 0.25])
