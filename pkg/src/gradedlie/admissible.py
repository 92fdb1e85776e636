"""Admissibility of adapted metrics, and the cotangent/semisimple model metrics.

A metric is admissible when the codifferentials commute with the action of
the non-negative part q = h_0 + h_+.  Everything here is checked
infinitesimally (q acts through ad), which is faithful for connected groups:

* ``check_admissible`` tests the two derived bracket identities for the
  metric adjoints of ad_A, A in q;
* ``check_equivariance_direct`` independently tests that the codifferential
  matrices commute with the induced q-action on cochains;
* ``cotangent_standard_metric`` builds the duality metric B(., theta .) on
  t*(g), ``btheta_metric`` its semisimple analogue from the Killing form;
* ``check_theta_condition`` tests the closed-form bracket identity that
  characterizes admissibility of the cotangent standard metric, and
  ``consecinta_diagnostics`` audits its structural consequences.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from gradedlie import linalg
from gradedlie.algebra import GradedLieAlgebra, cotangent, require_valid
from gradedlie.cochain import WedgeBasisElement, _insert_sorted, complex_cache
from gradedlie.errors import (
    DegenerateKillingError,
    InternalInconsistencyError,
    InvolutionError,
    NotAdaptedError,
    NotPositiveDefiniteError,
    RangeError,
)
from gradedlie.hodge import AdaptedMetric, MetricContext, metric_context
from gradedlie.linalg import Matrix, Vector, ZERO, inverse, vec, zero_vec


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    # (condition tag, A label, Z label, W label, lhs, rhs) for the first
    # failing identity, in lexicographic (A, Z, W) order; None if admissible.
    witness: Optional[tuple] = None

    def __str__(self):
        if self.admissible:
            return "admissible: true"
        tag, a, z, w, lhs, rhs = self.witness
        return f"admissible: false ({tag} fails at A={a}, Z={z}, W={w}: {lhs} != {rhs})"


@dataclass(frozen=True)
class Involution:
    """A linear involution with theta(h_i) = h_{-i} blockwise."""

    matrix: Matrix

    def validate(self, g: GradedLieAlgebra):
        n = g.dim
        if self.matrix.rows != n or self.matrix.cols != n:
            raise InvolutionError("involution size != algebra dim")
        if self.matrix @ self.matrix != Matrix.identity(n):
            raise InvolutionError("theta^2 != identity")
        for (i, j), v in self.matrix.entries.items():
            if v != 0 and g.degrees[i] != -g.degrees[j]:
                raise InvolutionError(
                    f"theta does not map degree {g.degrees[j]} to {-g.degrees[j]}"
                )


@dataclass(frozen=True)
class NeutralForm:
    """Symmetric invariant bilinear form; nondegeneracy is reported."""

    matrix: Matrix
    nondegenerate: bool

    def value(self, x, y) -> Fraction:
        return linalg.gram_product(self.matrix, x, y)


def q_indices(g: GradedLieAlgebra) -> tuple[int, ...]:
    return tuple(i for i, d in enumerate(g.degrees) if d >= 0)


def _neg_compression(g: GradedLieAlgebra, m: Matrix) -> Matrix:
    neg = list(g.negative_indices)
    return m.submatrix(neg, neg)


def _scatter_neg(g: GradedLieAlgebra, v) -> Vector:
    out = [ZERO] * g.dim
    for p, a in enumerate(g.negative_indices):
        out[a] = v[p]
    return tuple(out)


def _gather_neg(g: GradedLieAlgebra, x) -> Vector:
    return tuple(x[a] for a in g.negative_indices)


def _project_neg(g: GradedLieAlgebra, x) -> Vector:
    neg = set(g.negative_indices)
    return tuple(v if i in neg else ZERO for i, v in enumerate(x))


def check_admissible(g: GradedLieAlgebra, metric: AdaptedMetric) -> AdmissibilityVerdict:
    """Infinitesimal admissibility criterion.

    For every basis A of q, Z of h_-, W of h:
        (ad_A)*[Z, W] = [(ad_A^-)* Z, W] + [Z, (ad_A)* W]
    and for every basis A of q and Z, W of h_-:
        (ad_A^-)*([Z, W]_-) = [(ad_A^-)* Z, W]_- + [Z, (ad_A^-)* W]_-
    where * is the metric adjoint (full Gram on h, h_- Gram for the
    compressed action ad_A^-) and _- the h_- component.
    """
    require_valid(g, require_fundamental=True)
    ctx = metric_context(g, metric)
    gram = ctx.gram_h
    gram_inv = ctx.gram_h_inv
    gneg = ctx.gram_neg
    gneg_inv = ctx.gram_neg_inv
    neg = g.negative_indices

    for a in q_indices(g):
        ad_a = g.ad_basis_matrix(a)
        ad_star = gram_inv @ ad_a.transpose() @ gram
        adn_star = gneg_inv @ _neg_compression(g, ad_a).transpose() @ gneg
        astar_neg = {z: _scatter_neg(g, adn_star.column(p)) for p, z in enumerate(neg)}
        for z in neg:
            ez = g.basis_element(z)
            az = astar_neg[z]
            for w in range(g.dim):
                ew = g.basis_element(w)
                lhs = ad_star.apply(g.bracket(ez, ew))
                rhs = linalg.vadd(g.bracket(az, ew), g.bracket(ez, ad_star.column(w)))
                if lhs != rhs:
                    return AdmissibilityVerdict(
                        False,
                        ("ad-star", g.labels[a], g.labels[z], g.labels[w], lhs, rhs),
                    )
        for z in neg:
            ez = g.basis_element(z)
            az = astar_neg[z]
            for w in neg:
                ew = g.basis_element(w)
                aw = astar_neg[w]
                lhs_neg = adn_star.apply(_gather_neg(g, g.bracket(ez, ew)))
                lhs = _scatter_neg(g, lhs_neg)
                rhs = linalg.vadd(
                    _project_neg(g, g.bracket(az, ew)), _project_neg(g, g.bracket(ez, aw))
                )
                if lhs != rhs:
                    return AdmissibilityVerdict(
                        False,
                        ("ad-star-neg", g.labels[a], g.labels[z], g.labels[w], lhs, rhs),
                    )
    return AdmissibilityVerdict(True)


def cochain_action_matrix(ctx_or_g, k: int, j: int, a: int) -> Matrix:
    """Infinitesimal action of basis direction A = e_a of q on C^k_j:
    value side acts by ad_A, each argument slot by -(ad_A^-); maps
    C^k_j -> C^k_{j + deg A}."""
    g = ctx_or_g.g if isinstance(ctx_or_g, MetricContext) else ctx_or_g
    cache = complex_cache(g)
    da = g.degrees[a]
    dom = cache.basis(k, j)
    cod_index = cache.basis_index(k, j + da)
    ad_a = g.ad_basis_matrix(a)
    adn = _neg_compression(g, ad_a)
    neg = g.negative_indices
    pos = {x: p for p, x in enumerate(neg)}
    ents: dict = {}
    for col, el in enumerate(dom):
        for u in range(g.dim):
            c = ad_a[(u, el.value)]
            if c == 0:
                continue
            row = cod_index.get(WedgeBasisElement(el.args, u))
            if row is not None:
                key = (row, col)
                ents[key] = ents.get(key, ZERO) + c
        # argument slots: phi picks the e_w component of (ad_A^-) e_x, so an
        # input multi-index containing w feeds outputs with w replaced by x;
        # the replacement sits at slot t, hence the extra (-1)^t with the
        # insertion sign
        for t, w in enumerate(el.args):
            rest = el.args[:t] + el.args[t + 1 :]
            for x in neg:
                c = adn[(pos[w], pos[x])]
                if c == 0 or x in rest:
                    continue
                merged, sgn = _insert_sorted(rest, x)
                if t % 2:
                    sgn = -sgn
                row = cod_index.get(WedgeBasisElement(merged, el.value))
                if row is None:
                    continue
                key = (row, col)
                ents[key] = ents.get(key, ZERO) - c * sgn
    return Matrix(len(cod_index), len(dom), ents)


def check_equivariance_direct(g: GradedLieAlgebra, metric: AdaptedMetric, k: int) -> bool:
    """Directly verify that d*: C^{k+1} -> C^k commutes with the
    infinitesimal q-action on cochains; the independent oracle for
    ``check_admissible``."""
    if k not in (0, 1):
        raise RangeError("equivariance check supported for k in {0, 1}")
    ctx = metric_context(g, metric)
    cache = ctx.cache
    for a in q_indices(g):
        da = g.degrees[a]
        for j in cache.degrees_with_support(k + 1):
            codiff_j = ctx.codifferential(k, j)
            codiff_ja = ctx.codifferential(k, j + da)
            rho_k1 = cochain_action_matrix(ctx, k + 1, j, a)
            rho_k = cochain_action_matrix(ctx, k, j, a)
            if rho_k @ codiff_j != codiff_ja @ rho_k1:
                return False
    return True


def hodge_projectors_h0_equivariant(g: GradedLieAlgebra, metric: AdaptedMetric, k: int, j: int) -> bool:
    """Infinitesimal surrogate for the invariance of the Hodge splitting:
    the three projectors of the (k, j) block must commute with the
    degree-0 action on cochains.  Holds whenever the metric is admissible
    (the differential side commutes unconditionally, by the Jacobi
    identity)."""
    ctx = metric_context(g, metric)
    ph, pc, pe = ctx.hodge(k, j).projectors()
    for a in g.degree_indices(0):
        rho = cochain_action_matrix(ctx, k, j, a)
        for p in (ph, pc, pe):
            if rho @ p != p @ rho:
                return False
    return True


def cotangent_standard_metric(
    g: GradedLieAlgebra, gram_g: AdaptedMetric
) -> tuple[GradedLieAlgebra, AdaptedMetric, Involution, NeutralForm]:
    """t*(g) with the metric <X+xi, Y+eta> = B(X+xi, theta(Y+eta)).

    Returns (t*(g), metric, theta, B): the metric restricts to gram_g on g
    and to the inverse Grams on g*, with g orthogonal to g*; theta swaps g
    and g* by metric duality; B is the neutral pairing form.
    """
    h = cotangent(g)
    n = g.dim
    gram_full = gram_g.full_gram()
    gram_inv = inverse(gram_full)

    blocks = {}
    for d in h.by_degree:
        idx = h.degree_indices(d)
        ents = {}
        for r, i in enumerate(idx):
            for c, j in enumerate(idx):
                if i < n and j < n:
                    v = gram_full[(i, j)]
                elif i >= n and j >= n:
                    v = gram_inv[(i - n, j - n)]
                else:
                    v = ZERO
                if v != 0:
                    ents[(r, c)] = v
        blocks[d] = Matrix(len(idx), len(idx), ents)
    metric = AdaptedMetric(h, blocks)

    theta_ents = {}
    for (i, j), v in gram_full.entries.items():
        theta_ents[(n + i, j)] = v  # theta(X) = X-sharp
    for (i, j), v in gram_inv.entries.items():
        theta_ents[(i, n + j)] = v  # theta(alpha) = alpha-flat
    theta = Involution(Matrix(2 * n, 2 * n, theta_ents))
    theta.validate(h)

    b_ents = {}
    for i in range(n):
        b_ents[(i, n + i)] = Fraction(1)
        b_ents[(n + i, i)] = Fraction(1)
    form = NeutralForm(Matrix(2 * n, 2 * n, b_ents), nondegenerate=True)
    return h, metric, theta, form


def killing_form(g: GradedLieAlgebra) -> NeutralForm:
    """B(x, y) = trace(ad_x ad_y); nondegeneracy reported, not required."""
    n = g.dim
    ads = [g.ad_basis_matrix(i) for i in range(n)]
    ents = {}
    for i in range(n):
        for j in range(i, n):
            t = _trace(ads[i] @ ads[j])
            if t != 0:
                ents[(i, j)] = t
                if i != j:
                    ents[(j, i)] = t
    m = Matrix(n, n, ents)
    return NeutralForm(m, nondegenerate=(linalg.rank(m) == n))


def _trace(m: Matrix) -> Fraction:
    return sum((v for (i, j), v in m.entries.items() if i == j), ZERO)


def btheta_metric(g: GradedLieAlgebra, theta: Involution) -> AdaptedMetric:
    """The adapted metric -B(., theta .) from the Killing form B."""
    b = killing_form(g)
    if not b.nondegenerate:
        raise DegenerateKillingError(f"{g.name} has degenerate Killing form")
    theta.validate(g)
    m = -(b.matrix @ theta.matrix)
    if not m.is_symmetric():
        raise NotAdaptedError("-B(., theta .) is not symmetric")
    for (i, j), v in m.entries.items():
        if v != 0 and g.degrees[i] != g.degrees[j]:
            raise NotAdaptedError("-B(., theta .) has cross-degree entries")
    blocks = {}
    for d in g.by_degree:
        idx = list(g.degree_indices(d))
        blk = m.submatrix(idx, idx)
        if not linalg.is_positive_definite(blk):
            raise NotPositiveDefiniteError(f"-B(., theta .) not positive definite on degree {d}")
        blocks[d] = blk
    return AdaptedMetric(g, blocks)


def check_theta_condition(
    h: GradedLieAlgebra, metric: AdaptedMetric, theta: Involution, form: NeutralForm
) -> AdmissibilityVerdict:
    """Closed-form admissibility test for the cotangent standard metric:

        theta([u, theta([Y, w])]) = [theta([u_0, theta(Y)]), w]
                                    + [Y, theta([u, theta(w)])]

    over basis u of h_0 + h_+ (with u_0 its degree-0 g-part), Y of h_-,
    w of h.  Must agree with ``check_admissible`` on the same inputs.
    """
    th = theta.matrix
    n2 = h.dim
    n = n2 // 2
    if metric.full_gram() != form.matrix @ th:
        raise RangeError("metric is not the pairing form composed with theta")
    # u ranges over the g_0 basis and the full dual basis
    u_indices = [i for i in q_indices(h) if i < n] + list(range(n, n2))
    for ui in u_indices:
        u = h.basis_element(ui)
        u0 = u if ui < n else zero_vec(n2)  # g-part of u
        for y in h.negative_indices:
            ey = h.basis_element(y)
            th_y = th.apply(ey)
            t1 = th.apply(h.bracket(u0, th_y))
            for w in range(n2):
                ew = h.basis_element(w)
                lhs = th.apply(h.bracket(u, th.apply(h.bracket(ey, ew))))
                rhs = linalg.vadd(h.bracket(t1, ew), h.bracket(ey, th.apply(h.bracket(u, th.apply(ew)))))
                if lhs != rhs:
                    return AdmissibilityVerdict(
                        False,
                        ("theta-condition", h.labels[ui], h.labels[y], h.labels[w], lhs, rhs),
                    )
    return AdmissibilityVerdict(True)


@dataclass(frozen=True)
class CotangentMetricDiagnostics:
    g0_abelian: bool
    gram_ad_invariant: bool
    standard_metric_admissible: bool

    @property
    def implication_holds(self) -> bool:
        """admissible => (g_0 abelian and gram not ad-invariant)."""
        if not self.standard_metric_admissible:
            return True
        return self.g0_abelian and not self.gram_ad_invariant


def consecinta_diagnostics(
    g: GradedLieAlgebra, gram_g: AdaptedMetric
) -> CotangentMetricDiagnostics:
    """Structural audit of the cotangent standard metric.

    Reports whether g_0 is abelian, whether gram_g is infinitesimally
    ad(g_0)-invariant, and whether the standard metric on t*(g) is
    admissible; admissibility must imply the first and exclude the second.
    A violated implication is a critical internal bug.
    """
    g0 = g.degree_indices(0)
    abelian = True
    for p, i in enumerate(g0):
        for j in g0[p + 1 :]:
            if g.bracket_basis(i, j):
                abelian = False
                break
        if not abelian:
            break

    gram = gram_g.full_gram()
    invariant = True
    for a in g0:
        ad_a = g.ad_basis_matrix(a)
        # <[A,x],y> + <x,[A,y]> = 0  <=>  ad_A^T G + G ad_A = 0
        if ad_a.transpose() @ gram + gram @ ad_a != Matrix.zero(g.dim, g.dim):
            invariant = False
            break

    _, metric, _, _ = cotangent_standard_metric(g, gram_g)
    verdict = check_admissible(cotangent(g), metric)

    diag = CotangentMetricDiagnostics(
        g0_abelian=abelian,
        gram_ad_invariant=invariant,
        standard_metric_admissible=verdict.admissible,
    )
    if not diag.implication_holds:
        raise InternalInconsistencyError(
            f"admissible cotangent metric on t*({g.name}) with "
            f"g0_abelian={abelian}, ad_invariant={invariant}"
        )
    return diag
