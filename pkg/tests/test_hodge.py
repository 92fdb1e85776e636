import random
from fractions import Fraction

import pytest

from gradedlie import linalg
from gradedlie.algebra import cotangent
from gradedlie.cochain import complex_cache
from gradedlie.errors import NotPositiveDefiniteError
from gradedlie.hodge import (
    AdaptedMetric,
    diagonal_metric,
    identity_metric,
    induced_gram,
    induced_gram_pairing_oracle,
    metric_context,
    random_block_metric,
    random_diagonal_metric,
)
from gradedlie.linalg import Matrix, Subspace
from gradedlie.registry import registry_get

Q = Fraction


def small_corpus():
    return [registry_get(n) for n in ["heis3", "sl2-graded", "so2-V2", "nonab-g0"]] + [
        cotangent(registry_get("so2-V2"))
    ]


class TestAdaptedMetric:
    def test_rejects_indefinite_block(self):
        g = registry_get("sl2-graded")
        with pytest.raises(NotPositiveDefiniteError):
            AdaptedMetric(
                g,
                {
                    -1: Matrix.diagonal([-1]),
                    0: Matrix.identity(1),
                    1: Matrix.identity(1),
                },
            )

    def test_full_gram_block_diagonal(self):
        g = registry_get("heis3")
        m = identity_metric(g)
        assert m.full_gram() == Matrix.identity(4)


class TestInducedGram:
    def test_identity_metric_gives_identity_gram(self):
        for g in small_corpus():
            ctx = metric_context(g, identity_metric(g))
            for k in (0, 1, 2):
                for j in ctx.cache.degrees_with_support(k):
                    n = ctx.cache.dim(k, j)
                    assert ctx.induced_gram(k, j) == Matrix.identity(n)

    def test_dual_scaling_on_sl2(self):
        # scaling the h_-1 block by 4 scales the Gram of f* (x) h by 1/4
        g = registry_get("sl2-graded")
        m = diagonal_metric(g, [4, 1, 1])
        gram = induced_gram(g, m, 1, 1)
        assert gram[(0, 0)] == Q(1, 4)

    def test_pairing_determinant_oracle_nondiagonal(self):
        rng = random.Random(8)
        g = registry_get("heis3")
        for _ in range(3):
            m = random_block_metric(g, rng)
            for (k, j) in [(1, 1), (1, 2), (2, 2), (2, 3)]:
                assert induced_gram(g, m, k, j) == induced_gram_pairing_oracle(g, m, k, j)

    def test_positive_definite(self):
        rng = random.Random(18)
        g = registry_get("heis3")
        m = random_block_metric(g, rng)
        for (k, j) in [(1, 1), (2, 2)]:
            assert linalg.is_positive_definite(induced_gram(g, m, k, j))


class TestCodifferential:
    def test_zero_differential_gives_zero_codifferential(self):
        g = registry_get("sl2-graded")
        ctx = metric_context(g, identity_metric(g))
        # C^2 vanishes for sl2, so the C^1 -> C^2 block is zero both ways
        for j in ctx.cache.degrees_with_support(2):
            pytest.fail("sl2 should have no C^2 blocks")
        assert ctx.codifferential(1, 1).is_zero()

    def test_sl2_adjoint_value(self):
        g = registry_get("sl2-graded")
        ctx = metric_context(g, identity_metric(g))
        m = ctx.codifferential(0, 1)
        assert m.rows == 1 and m.cols == 1 and m[(0, 0)] == -1

    def test_codifferential_squares_to_zero(self):
        rng = random.Random(23)
        for g in small_corpus():
            m = random_diagonal_metric(g, rng)
            ctx = metric_context(g, m)
            for j in ctx.cache.degrees_with_support(2):
                a = ctx.codifferential(0, j) @ ctx.codifferential(1, j)
                assert a.is_zero(), (g.name, j)

    def test_adjointness_identity(self):
        rng = random.Random(29)
        for g in small_corpus():
            for m in [identity_metric(g), random_diagonal_metric(g, rng)]:
                ctx = metric_context(g, m)
                for k in (0, 1, 2):
                    for j in ctx.cache.degrees_with_support(k):
                        d = ctx.cache.differential(k, j)
                        gk = ctx.induced_gram(k, j)
                        gk1 = ctx.induced_gram(k + 1, j)
                        ds = ctx.codifferential(k, j)
                        # <d a, b> = <a, d* b> as the matrix identity d^T G_{k+1} = G_k d*
                        assert d.transpose() @ gk1 == gk @ ds

    def test_two_path_equality_randomized(self):
        rng = random.Random(31)
        for g in small_corpus():
            metrics = [identity_metric(g)]
            metrics += [random_diagonal_metric(g, rng) for _ in range(2)]
            if g.dim <= 6:
                metrics.append(random_block_metric(g, rng))
            for m in metrics:
                ctx = metric_context(g, m)
                for k in (0, 1, 2):
                    for j in ctx.cache.degrees_with_support(k + 1):
                        assert ctx.codifferential(k, j) == ctx.codifferential_explicit(k, j), (
                            g.name,
                            k,
                            j,
                        )

    def test_explicit_k0_single_term(self):
        # d*(alpha (x) V) = (ad_{alpha-flat})^*(V): one term on C^1 -> C^0
        rng = random.Random(37)
        g = registry_get("nonab-g0")
        m = random_diagonal_metric(g, rng)
        ctx = metric_context(g, m)
        for j in ctx.cache.degrees_with_support(1):
            assert ctx.codifferential_explicit(0, j) == ctx.codifferential(0, j)

    def test_degenerate_trivial_action_gives_zero(self):
        # non-fundamental fixture: abelian h_- with h_0 acting as zero; both
        # structural sums vanish on the 1-forms (validation bypassed)
        from gradedlie.algebra import GradedLieAlgebra

        g = GradedLieAlgebra("inert", [-1, -1, 0], {}, labels=["u", "v", "A"])
        ctx = metric_context(g, identity_metric(g))
        for j in ctx.cache.degrees_with_support(1):
            assert ctx.codifferential_explicit(0, j).is_zero()
            assert ctx.codifferential(0, j).is_zero()


class TestHodge:
    def test_isolated_block_fully_harmonic(self):
        # sl2 C^1 blocks with no C^0 source and no C^2 target are harmonic
        g = registry_get("sl2-graded")
        ctx = metric_context(g, identity_metric(g))
        hs = ctx.hodge(1, 2)  # C^0_2 = 0 and C^2 = 0
        assert hs.dims() == (hs.block_dim, 0, 0)

    def test_sl2_c1_1_exact(self):
        g = registry_get("sl2-graded")
        ctx = metric_context(g, identity_metric(g))
        hs = ctx.hodge(1, 1)
        assert hs.block_dim == 1
        assert hs.dims() == (0, 0, 1)

    def test_completeness_and_orthogonality(self):
        rng = random.Random(41)
        for g in small_corpus():
            m = random_diagonal_metric(g, rng)
            ctx = metric_context(g, m)
            for k in (0, 1, 2):
                for j in ctx.cache.degrees_with_support(k):
                    hs = ctx.hodge(k, j)
                    assert sum(hs.dims()) == hs.block_dim, (g.name, k, j)
                    parts = [hs.harmonic, hs.coexact, hs.exact]
                    for a in range(3):
                        for b in range(a + 1, 3):
                            s1, s2 = parts[a], parts[b]
                            if s1.dim and s2.dim:
                                cross = s1.matrix().transpose() @ hs.gram @ s2.matrix()
                                assert cross.is_zero(), (g.name, k, j, a, b)

    def test_harmonic_is_ker_d_cap_ker_dstar(self):
        rng = random.Random(43)
        g = cotangent(registry_get("nonab-g0"))
        ctx = metric_context(g, random_diagonal_metric(g, rng))
        for k in (1, 2):
            for j in ctx.cache.degrees_with_support(k):
                hs = ctx.hodge(k, j)
                kd = linalg.kernel_basis(ctx.cache.differential(k, j))
                kds = linalg.kernel_basis(ctx.codifferential(k - 1, j))
                # intersection via stacked kernel
                stacked = linalg.vstack(ctx.cache.differential(k, j), ctx.codifferential(k - 1, j))
                inter = linalg.kernel_basis(stacked)
                assert hs.harmonic.same_as(inter), (g.name, k, j)
                for v in hs.harmonic.basis:
                    assert kd.contains(v) and kds.contains(v)

    def test_projectors_sum_to_identity(self):
        rng = random.Random(47)
        g = registry_get("so2-V2")
        ctx = metric_context(g, random_diagonal_metric(g, rng))
        for j in ctx.cache.degrees_with_support(1):
            hs = ctx.hodge(1, j)
            ph, pc, pe = hs.projectors()
            assert ph + pc + pe == Matrix.identity(hs.block_dim)
            for p in (ph, pc, pe):
                assert p @ p == p


class TestCohomologyDim:
    def test_sl2_values(self):
        g = registry_get("sl2-graded")
        ctx = metric_context(g, identity_metric(g))
        assert ctx.cohomology_dim(1, 1) == 0
        # C^0_2 = h_2 = 0 cannot surject onto the 1-dim C^1_2, so this is 1
        assert ctx.cohomology_dim(1, 2) == 1

    def test_nonab_cotangent_h1_positive(self):
        from gradedlie.admissible import cotangent_standard_metric

        g = registry_get("nonab-g0")
        h, metric, _, _ = cotangent_standard_metric(g, identity_metric(g))
        ctx = metric_context(h, metric)
        assert ctx.cohomology_dim(1, 1) > 0

    def test_isolated_block_dim(self):
        g = registry_get("sl2-graded")
        ctx = metric_context(g, identity_metric(g))
        assert ctx.cohomology_dim(1, 2) == ctx.cache.dim(1, 2)

    def test_metric_independence(self):
        rng = random.Random(53)
        for g in [registry_get("heis3"), cotangent(registry_get("so2-V2"))]:
            metrics = [identity_metric(g)] + [random_diagonal_metric(g, rng) for _ in range(2)]
            for k in (1, 2):
                for j in complex_cache(g).degrees_with_support(k):
                    dims = {metric_context(g, m).cohomology_dim(k, j) for m in metrics}
                    assert len(dims) == 1, (g.name, k, j)
