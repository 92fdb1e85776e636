import math
import random
from fractions import Fraction

import pytest

from gradedlie.algebra import cotangent
from gradedlie.cochain import Cochain, complex_cache
from gradedlie.ctg_cohomology import (
    _g_cache,
    _gstar_cache,
    adunat_report,
    contraction_matrix,
    depth_one_h1_dims,
    g_closed_kernel,
    invariant_forms,
    mu_star_complement,
    mu_star_rank,
    s_space,
    skew_prolongation,
    sym_prolongation,
    zb_spaces,
)
from gradedlie.errors import RangeError
from gradedlie.linalg import vec
from gradedlie.registry import gl_action, nonab_action, registry_get, so2_action

Q = Fraction


class TestSSpace:
    def test_so2_matches_sym_prolongation(self):
        g = registry_get("so2-V2")
        s = s_space(g)
        p = sym_prolongation(so2_action())
        assert s.ambient_dim == p.ambient_dim
        assert s.same_as(p)

    def test_nonab_matches_sym_prolongation(self):
        g = registry_get("nonab-g0")
        assert s_space(g).same_as(sym_prolongation(nonab_action()))
        assert s_space(g).dim == 3

    def test_heis3_l2_kernel_zero(self):
        assert g_closed_kernel(registry_get("heis3"), 2).dim == 0

    def test_l_geq_2_kernels_vanish(self):
        for name in ["heis3", "so2-V2", "nonab-g0", "free-nilp-2-3"]:
            g = registry_get(name)
            for l in range(2, g.depth + 2):
                assert g_closed_kernel(g, l).dim == 0, (name, l)


class TestZB:
    def test_z1_full_space(self):
        g = registry_get("so2-V2")
        z, b = zb_spaces(g, 1)
        assert z.dim == 2  # dim V * dim g0
        assert b.dim == mu_star_rank(so2_action()) == 2

    def test_nonab_z1_b1(self):
        g = registry_get("nonab-g0")
        z, b = zb_spaces(g, 1)
        assert z.dim == 4
        assert b.dim == 1
        assert mu_star_rank(nonab_action()) == 1

    def test_b_subset_z_everywhere(self):
        for name in ["heis3", "so2-V2", "nonab-g0", "free-nilp-2-3"]:
            g = registry_get(name)
            for l in range(1, g.depth + 2):
                z, b = zb_spaces(g, l)  # containment asserted inside
                assert b.dim <= z.dim

    def test_range_error(self):
        g = registry_get("so2-V2")
        with pytest.raises(RangeError):
            zb_spaces(g, 0)
        with pytest.raises(RangeError):
            zb_spaces(g, g.depth + 2)


class TestAdunat:
    def test_two_paths_agree_on_corpus(self):
        for name in ["so2-V2", "nonab-g0", "heis3"]:
            rep = adunat_report(registry_get(name))
            assert rep.all_agree, str(rep)

    def test_so2_values(self):
        rep = adunat_report(registry_get("so2-V2"))
        by_l = {r.l: r for r in rep.rows}
        assert by_l[1].general == 0
        assert by_l[2].general == 3  # 1 + 2 from the invariant-form solver
        assert by_l[3].general == 0

    def test_nonab_h1_positive(self):
        rep = adunat_report(registry_get("nonab-g0"))
        by_l = {r.l: r for r in rep.rows}
        assert by_l[1].general == 6
        assert by_l[1].dim_s == 3 and by_l[1].dim_z == 4 and by_l[1].dim_b == 1

    def test_depth_one_l_geq_3_trivial(self):
        for name in ["so2-V2", "nonab-g0"]:
            rep = adunat_report(registry_get(name))
            for r in rep.rows:
                if r.l >= 3:
                    assert r.general == 0 and r.closed_form == 0

    def test_free_nilp_agreement(self):
        rep = adunat_report(registry_get("free-nilp-2-3"))
        assert rep.all_agree, str(rep)


class TestDecompDeriv:
    def test_h_differential_splits_by_value_projection(self):
        rng = random.Random(3)
        for name in ["heis3", "so2-V2", "nonab-g0"]:
            g = registry_get(name)
            h = cotangent(g)
            hc = complex_cache(h)
            gc = _g_cache(g)
            sc = _gstar_cache(g)
            n = g.dim
            for j in hc.degrees_with_support(1):
                dim_h = hc.dim(1, j)
                coords = [Q(rng.randint(-3, 3)) for _ in range(dim_h)]
                out = hc.differential(1, j).apply(vec(coords))
                # split input coefficients by value range
                gin = [Q(0)] * gc.dim(1, j)
                sin_ = [Q(0)] * sc.dim(1, j)
                gpos = {el: p for p, el in enumerate(gc.basis(1, j))}
                spos = {el: p for p, el in enumerate(sc.basis(1, j))}
                for c, el in zip(coords, hc.basis(1, j)):
                    if el.value < n:
                        gin[gpos[type(el)(el.args, el.value)]] = c
                    else:
                        sin_[spos[type(el)(el.args, el.value - n)]] = c
                gout = gc.differential(1, j).apply(vec(gin))
                sout = sc.differential(1, j).apply(vec(sin_))
                # reassemble and compare
                want = [Q(0)] * hc.dim(2, j)
                hpos = {el: p for p, el in enumerate(hc.basis(2, j))}
                for c, el in zip(gout, gc.basis(2, j)):
                    want[hpos[type(el)(el.args, el.value)]] += c
                for c, el in zip(sout, sc.basis(2, j)):
                    want[hpos[type(el)(el.args, el.value + n)]] += c
                assert list(out) == want, (name, j)


class TestDepthOneStructural:
    def test_gl_full_prolongations(self):
        for n in (2, 3):
            act = gl_action(n)
            assert skew_prolongation(act).dim == n * math.comb(n, 2)
            assert sym_prolongation(act).dim == n * math.comb(n + 1, 2)

    def test_zero_g0(self):
        # no action directions: spaces over an empty g0 are zero
        assert skew_prolongation([]).dim == 0

    def test_invariant_forms_trivial_action_counts(self):
        from gradedlie.linalg import Matrix

        n = 3
        zero = [Matrix.zero(n, n)]
        lam, sym = invariant_forms(zero)
        assert lam == math.comb(n, 2)
        assert sym == n * (n + 1) // 2

    def test_invariant_forms_gl(self):
        assert invariant_forms(gl_action(2)) == (0, 0)

    def test_invariant_forms_so2(self):
        assert invariant_forms(so2_action()) == (1, 2)

    def test_h1_formula_so2(self):
        g = registry_get("so2-V2")
        rep = adunat_report(g)
        by_l = {r.l: r for r in rep.rows}
        h11, h12 = depth_one_h1_dims(so2_action())
        assert by_l[1].general == h11
        assert by_l[2].general == h12

    def test_h11_formula_nonab(self):
        g = registry_get("nonab-g0")
        rep = adunat_report(g)
        by_l = {r.l: r for r in rep.rows}
        act = nonab_action()
        assert by_l[1].general == sym_prolongation(act).dim + 2 * 2 - mu_star_rank(act)

    def test_mu_star_complement(self):
        act = nonab_action()
        comp = mu_star_complement(act)
        c = contraction_matrix(act)
        assert comp.dim == c.cols - mu_star_rank(act)
        for v in comp.basis:
            assert all(x == 0 for x in c.apply(v))
