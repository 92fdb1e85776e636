"""Closed-form first cohomology of cotangent algebras, cross-checked against
the general Hodge machinery.

For a non-positively graded fundamental g and h = t*(g), H^1_l(h_-, h)
splits into a g-valued part (the kernel of the g-valued differential, zero
for l >= 2) and a g*-valued part Z_l/B_l living in Hom(g_{-1}, (g_{1-l})*).
``adunat_report`` computes every degree both ways and flags disagreement.

The depth-one specialisation expresses H^1_1 and H^1_2 through prolongation
spaces and invariant-form spaces of the defining representation; note that
the space controlling H^1_1 is the SYMMETRIC first prolongation
{f : f(X)Y = f(Y)X} (the skew variant is also provided, but it is not the
kernel of the degree-one differential).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from gradedlie import linalg
from gradedlie.algebra import GradedLieAlgebra
from gradedlie.cochain import CoeffModule, ComplexCache
from gradedlie.errors import InternalInconsistencyError, RangeError
from gradedlie.hodge import AdaptedMetric, identity_metric, metric_context
from gradedlie.linalg import Matrix, Subspace, ZERO


def g_module(g: GradedLieAlgebra) -> CoeffModule:
    """g as a module over its own negative part."""
    return CoeffModule(
        name="g",
        degrees=g.degrees,
        action=tuple(g.ad_basis_matrix(i) for i in g.negative_indices),
    )


def gstar_module(g: GradedLieAlgebra) -> CoeffModule:
    """g* with the coadjoint action of g_-; dual index b has degree -deg(b)."""
    return CoeffModule(
        name="g*",
        degrees=tuple(-d for d in g.degrees),
        action=tuple(-(g.ad_basis_matrix(i).transpose()) for i in g.negative_indices),
    )


@functools.lru_cache(maxsize=None)
def _g_cache(g: GradedLieAlgebra) -> ComplexCache:
    return ComplexCache(g, g_module(g))


@functools.lru_cache(maxsize=None)
def _gstar_cache(g: GradedLieAlgebra) -> ComplexCache:
    return ComplexCache(g, gstar_module(g))


def _hom_coords(
    g: GradedLieAlgebra, value_indices: Sequence[int], kernel: Subspace, cache: ComplexCache, l: int
) -> Subspace:
    """Restrict C^1_l kernel vectors to Hom(g_{-1}, span(values)) coordinates,
    flattened as value_pos * |g_{-1}| + arg_pos.  The restriction must be
    injective on the kernel (it is, for closed cochains)."""
    gm1 = g.degree_indices(-1)
    vpos = {v: p for p, v in enumerate(value_indices)}
    apos = {a: p for p, a in enumerate(gm1)}
    basis_elems = cache.basis(1, l)
    rows = []
    for vecv in kernel.basis:
        out = [ZERO] * (len(value_indices) * len(gm1))
        for coord, el in zip(vecv, basis_elems):
            if coord == 0:
                continue
            (a,) = el.args
            if a in apos and el.value in vpos:
                out[vpos[el.value] * len(gm1) + apos[a]] = coord
        rows.append(out)
    sub = Subspace(len(value_indices) * len(gm1), rows) if rows else Subspace.zero(
        len(value_indices) * len(gm1)
    )
    if rows and linalg.rank(Matrix.from_rows(rows)) != kernel.dim:
        raise InternalInconsistencyError("restriction to g_{-1} not injective on kernel")
    return sub


def g_closed_kernel(g: GradedLieAlgebra, l: int) -> Subspace:
    """ker of the g-valued differential on C^1_l(g_-, g)."""
    cache = _g_cache(g)
    return linalg.kernel_basis(cache.differential(1, l))


def s_space(g: GradedLieAlgebra) -> Subspace:
    """The degree-one closed g-valued cochains, as a subspace of
    Hom(g_{-1}, g_0) via restriction."""
    kernel = g_closed_kernel(g, 1)
    return _hom_coords(g, g.degree_indices(0), kernel, _g_cache(g), 1)


def zb_spaces(g: GradedLieAlgebra, l: int) -> tuple[Subspace, Subspace]:
    """(Z_l, B_l) inside Hom(g_{-1}, (g_{1-l})*).

    Z_1 is the whole space; for l >= 2, Z_l is the restriction to g_{-1} of
    the closed g*-valued degree-l cochains.  B_l collects the maps
    X -> -beta([X, .]) for beta in (g_{-l})*.  Always B_l <= Z_l.
    """
    if l < 1 or l > g.depth + 1:
        raise RangeError(f"l = {l} outside 1..depth+1 = {g.depth + 1}")
    gm1 = g.degree_indices(-1)
    values = g.degree_indices(1 - l)  # dual basis of (g_{1-l})*
    ambient = len(values) * len(gm1)

    if l == 1:
        z = Subspace.full(ambient)
    else:
        kernel = linalg.kernel_basis(_gstar_cache(g).differential(1, l))
        z = _hom_coords(g, values, kernel, _gstar_cache(g), l)

    bvecs = []
    for b in g.degree_indices(-l):
        out = [ZERO] * ambient
        for zp, zidx in enumerate(values):
            for xp, xidx in enumerate(gm1):
                c = g.bracket_basis(xidx, zidx).get(b, ZERO)
                if c != 0:
                    out[zp * len(gm1) + xp] = -c
        bvecs.append(out)
    bspace = (
        linalg.image_basis(Matrix.from_columns(bvecs, nrows=ambient))
        if bvecs
        else Subspace.zero(ambient)
    )
    for v in bspace.basis:
        if not z.contains(v):
            raise InternalInconsistencyError(f"B_{l} not contained in Z_{l} for {g.name}")
    return z, bspace


@dataclass(frozen=True)
class CtgCohomologyRow:
    l: int
    dim_s: Optional[int]  # l = 1 only
    dim_z: int
    dim_b: int
    g_kernel_dim: int  # must be 0 for l >= 2
    closed_form: int
    general: int

    @property
    def agree(self) -> bool:
        return self.closed_form == self.general


@dataclass(frozen=True)
class CtgCohomologyReport:
    base_name: str
    rows: tuple[CtgCohomologyRow, ...]

    @property
    def all_agree(self) -> bool:
        return all(r.agree for r in self.rows)

    def __str__(self):
        lines = [f"H^1_l of t*({self.base_name}): closed form vs general machinery"]
        for r in self.rows:
            s = f"  l={r.l}: dim Z={r.dim_z} dim B={r.dim_b}"
            if r.dim_s is not None:
                s += f" dim S={r.dim_s}"
            s += f" closed-form={r.closed_form} general={r.general}"
            s += " ok" if r.agree else " DISAGREE"
            lines.append(s)
        return "\n".join(lines)


def adunat_report(g: GradedLieAlgebra, gram_g: Optional[AdaptedMetric] = None) -> CtgCohomologyReport:
    """Compare closed-form H^1_l dims with the general machinery on t*(g),
    for every l up to height(t*(g)) + 2."""
    from gradedlie.admissible import cotangent_standard_metric

    if gram_g is None:
        gram_g = identity_metric(g)
    h, metric, _, _ = cotangent_standard_metric(g, gram_g)
    ctx = metric_context(h, metric)
    rows = []
    for l in range(1, g.depth + 3):
        if l <= g.depth + 1:
            z, b = zb_spaces(g, l)
            dim_z, dim_b = z.dim, b.dim
        else:
            dim_z = dim_b = 0
        gk = g_closed_kernel(g, l).dim
        if l == 1:
            dim_s = s_space(g).dim
            closed = dim_s + dim_z - dim_b
        else:
            dim_s = None
            closed = dim_z - dim_b
        general = ctx.cohomology_dim(1, l)
        rows.append(CtgCohomologyRow(l, dim_s, dim_z, dim_b, gk, closed, general))
    return CtgCohomologyReport(g.name, tuple(rows))


# -- depth-one structural spaces ---------------------------------------------


def _prolongation_space(action: Sequence[Matrix], symmetric: bool) -> Subspace:
    """{f: V -> g0 : f(X)Y -/+ f(Y)X = 0}, coordinates f[a][x] flattened as
    a * dimV + x over the action basis."""
    ng = len(action)
    if ng == 0:
        return Subspace.zero(0)
    nv = action[0].rows
    unknowns = ng * nv
    rows = []
    for x in range(nv):
        start = x if symmetric else x  # x = y row is trivial in the symmetric case
        for y in range(x, nv):
            if symmetric and y == x:
                continue
            for coord in range(nv):
                row = [ZERO] * unknowns
                for a in range(ng):
                    mx = action[a]
                    row[a * nv + x] += mx[(coord, y)]
                    if symmetric:
                        row[a * nv + y] -= mx[(coord, x)]
                    else:
                        row[a * nv + y] += mx[(coord, x)]
                rows.append(row)
    return linalg.kernel_basis(Matrix.from_rows(rows))


def sym_prolongation(action: Sequence[Matrix]) -> Subspace:
    """First prolongation {f : f(X)Y = f(Y)X}; this is the kernel of the
    degree-one differential for a depth-one algebra."""
    return _prolongation_space(action, symmetric=True)


def skew_prolongation(action: Sequence[Matrix]) -> Subspace:
    """Skew variant {f : f(X)Y + f(Y)X = 0} (the g0 ⊗ V* ∩ V ⊗ Λ²V* space)."""
    return _prolongation_space(action, symmetric=False)


def invariant_forms(action: Sequence[Matrix]) -> tuple[int, int]:
    """(dim of invariant skew forms, dim of forms making the action
    self-adjoint): {w skew : w(Ax,y) + w(x,Ay) = 0} and
    {s symmetric : s(Ax,y) = s(x,Ay)}."""
    if not action:
        raise RangeError("empty action")
    nv = action[0].rows
    skew_pairs = [(x, y) for x in range(nv) for y in range(x + 1, nv)]
    sym_pairs = [(x, y) for x in range(nv) for y in range(x, nv)]

    def entry(pairs, symmetric, x, y):
        # coefficient lookup for w(x, y) expressed on the pair basis
        if x == y:
            return ((x, y), Fraction(1)) if symmetric else None
        if x < y:
            return ((x, y), Fraction(1))
        return ((y, x), Fraction(1) if symmetric else Fraction(-1))

    def solve(pairs, symmetric, sign):
        pos = {p: i for i, p in enumerate(pairs)}
        rows = []
        for m in action:
            for x in range(nv):
                for y in range(nv):
                    row = [ZERO] * len(pairs)
                    # w(Ax, y) + sign * w(x, Ay)
                    for u in range(nv):
                        c = m[(u, x)]
                        if c != 0:
                            e = entry(pairs, symmetric, u, y)
                            if e:
                                row[pos[e[0]]] += c * e[1]
                    for u in range(nv):
                        c = m[(u, y)]
                        if c != 0:
                            e = entry(pairs, symmetric, x, u)
                            if e:
                                row[pos[e[0]]] += sign * c * e[1]
                    rows.append(row)
        return linalg.kernel_basis(Matrix.from_rows(rows)).dim

    return solve(skew_pairs, False, Fraction(1)), solve(sym_pairs, True, Fraction(-1))


def contraction_matrix(action: Sequence[Matrix]) -> Matrix:
    """The evaluation map g0 ⊗ V -> V, columns indexed a * dimV + x."""
    nv = action[0].rows
    cols = []
    for m in action:
        for x in range(nv):
            cols.append(m.column(x))
    return Matrix.from_columns(cols, nrows=nv)


def mu_star_rank(action: Sequence[Matrix]) -> int:
    """rank of the dual map V* -> (g0 ⊗ V)* (equals the contraction rank)."""
    return linalg.rank(contraction_matrix(action))


def mu_star_complement(action: Sequence[Matrix]) -> Subspace:
    """Orthogonal complement of the image of the dual map inside
    (V ⊗ g0)* under the coordinate Gram: the kernel of the contraction."""
    return linalg.kernel_basis(contraction_matrix(action))


def depth_one_h1_dims(action: Sequence[Matrix]) -> tuple[int, int]:
    """Closed-form (dim H^1_1, dim H^1_2) for the depth-one cotangent case:
    sym-prolongation + Hom(V, g0*)/im(mu*), and invariant-form dimensions."""
    ng = len(action)
    nv = action[0].rows
    h11 = sym_prolongation(action).dim + ng * nv - mu_star_rank(action)
    lam, sym = invariant_forms(action)
    return h11, lam + sym
