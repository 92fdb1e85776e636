import random
from fractions import Fraction

import pytest

from gradedlie import linalg
from gradedlie.algebra import cotangent
from gradedlie.cochain import complex_cache
from gradedlie.errors import RangeError, TailDegreeViolationError
from gradedlie.hodge import identity_metric, random_diagonal_metric
from gradedlie.normalization import (
    FormalCurvature,
    GaugeCorrection,
    apply_gauge_to_curvature,
    curvature_update,
    fixed_injection_tail,
    gauge_leading,
    max_curvature_degree,
    normalization_engine,
    random_curvature,
    random_gauge,
    uniqueness_probe,
)
from gradedlie.registry import registry_get

Q = Fraction


class TestTypes:
    def test_rejects_nonpositive_degree(self):
        g = registry_get("heis3")
        cache = complex_cache(g)
        with pytest.raises(RangeError):
            FormalCurvature.make(g, {0: [Q(1)] * cache.dim(2, 0)})

    def test_rejects_beyond_support(self):
        g = registry_get("heis3")
        with pytest.raises(RangeError):
            FormalCurvature.make(g, {max_curvature_degree(g) + 1: []})

    def test_zero_components_dropped(self):
        g = registry_get("heis3")
        cache = complex_cache(g)
        K = FormalCurvature.make(g, {1: [Q(0)] * cache.dim(2, 1)})
        assert K.is_zero()


class TestCurvatureUpdate:
    def test_zero_move_no_tail_keeps_K(self):
        rng = random.Random(1)
        g = registry_get("heis3")
        K = random_curvature(g, rng)
        cache = complex_cache(g)
        K2 = curvature_update(K, 1, [Q(0)] * cache.dim(1, 1))
        assert K2 == K

    def test_only_target_slot_changes(self):
        rng = random.Random(2)
        g = registry_get("heis3")
        cache = complex_cache(g)
        K = random_curvature(g, rng)
        m = 1
        phi = [Q(rng.randint(-2, 2)) for _ in range(cache.dim(1, m))]
        K2 = curvature_update(K, m, phi)
        for d in cache.degrees_with_support(2):
            if d < 1:
                continue
            if d == m:
                want = linalg.vadd(K.component(d), cache.differential(1, m).apply(phi))
                assert K2.component(d) == want
            else:
                assert K2.component(d) == K.component(d)

    def test_tail_shifts_higher_slot(self):
        rng = random.Random(3)
        g = registry_get("heis3")
        cache = complex_cache(g)
        K = random_curvature(g, rng)
        m = 1
        phi = [Q(1)] * cache.dim(1, m)
        tail = fixed_injection_tail(1, Q(1, 2))
        K2 = curvature_update(K, m, phi, tail)
        assert K2.component(2) == tuple(Q(3, 2) * x for x in K.component(2))
        for d in cache.degrees_with_support(2):
            if d > 2:
                assert K2.component(d) == K.component(d)

    def test_tail_degree_violation(self):
        g = registry_get("heis3")
        cache = complex_cache(g)

        def bad_tail(m, phi, K):
            return {m: tuple([Q(1)] * cache.dim(2, m))}

        K = FormalCurvature.make(g, {})
        with pytest.raises(TailDegreeViolationError):
            curvature_update(K, 1, [Q(1)] * cache.dim(1, 1), bad_tail)


class TestNormalize:
    @pytest.mark.parametrize("name", ["heis3", "sl2-graded", "so2-V2", "nonab-g0"])
    def test_postcondition_and_idempotence(self, name):
        rng = random.Random(5)
        g = registry_get(name)
        metric = random_diagonal_metric(g, rng)
        eng = normalization_engine(g, metric)
        for _ in range(5):
            K = random_curvature(g, rng)
            Kn, gauge, trace = eng.normalize(K)
            assert eng.is_normal(Kn)
            Kn2, gauge2, _ = eng.normalize(Kn)
            assert Kn2 == Kn and gauge2.is_zero()

    def test_already_normal_untouched(self):
        rng = random.Random(7)
        g = registry_get("so2-V2")
        eng = normalization_engine(g, identity_metric(g))
        K = random_curvature(g, rng)
        Kn, _, _ = eng.normalize(K)
        Kn2, gauge, _ = eng.normalize(Kn)
        assert Kn2 == Kn and gauge.is_zero()

    def test_exact_input_is_flattened(self):
        rng = random.Random(9)
        g = registry_get("heis3")
        eng = normalization_engine(g, identity_metric(g))
        phi = random_gauge(g, rng)
        K = apply_gauge_to_curvature(FormalCurvature.make(g, {}), phi)
        Kn, _, _ = eng.normalize(K)
        # d(phi) is purely exact slotwise, so everything is removed
        assert Kn.is_zero()

    def test_tail_free_projection_characterization(self):
        rng = random.Random(11)
        g = registry_get("nonab-g0")
        eng = normalization_engine(g, random_diagonal_metric(g, rng))
        for _ in range(5):
            K = random_curvature(g, rng)
            Kn, _, _ = eng.normalize(K)
            for m, coords in K.components:
                assert Kn.component(m) == tuple(eng.coclosed_projector(m).apply(coords))

    def test_exact_perturbation_invariance(self):
        rng = random.Random(13)
        g = registry_get("so2-V2")
        eng = normalization_engine(g, random_diagonal_metric(g, rng))
        K = random_curvature(g, rng)
        base, _, _ = eng.normalize(K)
        for _ in range(5):
            phi = random_gauge(g, rng)
            out, _, _ = eng.normalize(apply_gauge_to_curvature(K, phi))
            assert out == base

    def test_with_random_tails_terminates_normal(self):
        rng = random.Random(17)
        g = registry_get("heis3")
        eng = normalization_engine(g, random_diagonal_metric(g, rng))
        for shift in (1, 2):
            tail = fixed_injection_tail(shift, Q(1, 3))
            for _ in range(3):
                K = random_curvature(g, rng)
                Kn, _, trace = eng.normalize(K, tail)
                assert eng.is_normal(Kn)
                assert len(trace) <= max_curvature_degree(g)

    def test_minimal_norm_preimage_orthogonal_to_kernel(self):
        rng = random.Random(19)
        g = registry_get("heis3")
        eng = normalization_engine(g, random_diagonal_metric(g, rng))
        cache = complex_cache(g)
        m = 1
        phi = [Q(rng.randint(-3, 3)) for _ in range(cache.dim(1, m))]
        e = cache.differential(1, m).apply(phi)
        x = eng.minimal_norm_preimage(m, tuple(eng.exact_projector(m).apply(e)))
        ker = linalg.kernel_basis(cache.differential(1, m))
        gram = eng.ctx.induced_gram(1, m)
        for v in ker.basis:
            assert linalg.gram_product(gram, x, v) == 0
        assert cache.differential(1, m).apply(x) == tuple(e)


class TestGaugeLeading:
    def test_zero_psi_identity(self):
        rng = random.Random(23)
        g = registry_get("heis3")
        phi = random_gauge(g, rng)
        assert gauge_leading(phi, {}) == phi

    def test_exact_phi_cancelled(self):
        g = registry_get("sl2-graded")
        cache = complex_cache(g)
        psi = {1: tuple([Q(2)])}  # C^0_1 = span{e}
        dpsi = cache.differential(0, 1).apply(psi[1])
        phi = GaugeCorrection.make(g, {1: dpsi})
        out = gauge_leading(phi, psi)
        assert all(x == 0 for x in out.component(1))

    def test_sl2_hand_computation(self):
        g = registry_get("sl2-graded")
        phi = GaugeCorrection.make(g, {1: (Q(5),)})
        out = gauge_leading(phi, {1: (Q(1),)})
        # d(e)(f) = [f, e] = -h, so the C^1_1 slot moves by +1
        assert out.component(1) == (Q(6),)


class TestUniquenessProbe:
    def test_invariance_and_h1_report(self):
        rng = random.Random(29)
        g = registry_get("so2-V2")
        K = random_curvature(g, rng)
        rep = uniqueness_probe(K, identity_metric(g), 4, rng)
        assert rep.all_equal
        assert rep.h1_vanishes

    def test_nonab_cotangent_hypothesis_fails(self):
        from gradedlie.admissible import cotangent_standard_metric

        rng = random.Random(31)
        g = registry_get("nonab-g0")
        h, metric, _, _ = cotangent_standard_metric(g, identity_metric(g))
        K = random_curvature(h, rng)
        rep = uniqueness_probe(K, metric, 2, rng)
        assert rep.all_equal  # exact-linear invariance still holds
        assert not rep.h1_vanishes
        dims = dict(rep.h1_dims)
        assert dims[1] == 6
