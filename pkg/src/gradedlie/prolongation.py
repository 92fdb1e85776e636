"""Prolongation spaces of a non-positively graded fundamental algebra.

Level k >= 1 is the space of degree-k maps u on the negative part with

    u([X, Y]) = act(u(X), Y) - act(u(Y), X)   for all X, Y in g_-,

where act(w, Z) is the algebra bracket [w, Z] when w sits in degrees <= 0
and the evaluation w(Z) when w belongs to an already-computed level.  Only
the spaces and their dimensions are produced, not the bracket on the tower.

Finite type is certified by TWO consecutive zero levels (one extra linear
solve instead of relying on the one-zero-level theorem).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gradedlie import linalg
from gradedlie.algebra import GradedLieAlgebra, require_valid
from gradedlie.errors import (
    InternalInconsistencyError,
    NotNonPositivelyGradedError,
    RangeError,
)
from gradedlie.linalg import Matrix, Subspace, ZERO


@dataclass(frozen=True)
class ProlongationLevel:
    """Basis of degree-k maps; each basis map sends the degree-p slice of
    g_- into the target slice of degree p + k (an existing algebra degree
    for p + k <= 0, the level-(p+k) space otherwise)."""

    k: int
    # basis[m][p] is a Matrix: coordinates of the image of g_p basis vectors,
    # target dimension = dim of T_{p+k} (see target_dim).
    basis: tuple[dict[int, Matrix], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


class _Tower:
    """Bookkeeping for target spaces T_j: algebra slices for j <= 0,
    computed levels for j >= 1."""

    def __init__(self, g: GradedLieAlgebra):
        self.g = g
        self.levels: list[ProlongationLevel] = []

    def target_dim(self, j: int) -> int:
        if j <= 0:
            return self.g.degree_dim(j)
        if j - 1 < len(self.levels):
            return self.levels[j - 1].dim
        raise RangeError(f"level {j} not computed yet")

    def act(self, j: int, w, z_deg: int, z_pos: int):
        """act(w, e_z) for w given by coordinates in T_j and e_z the
        z_pos-th basis vector of g_{z_deg}; returns coordinates in
        T_{j + z_deg}."""
        g = self.g
        out_dim = self.target_dim(j + z_deg)
        out = [ZERO] * out_dim
        if j <= 0:
            # algebra bracket [w, e_z], read off through structure constants
            src = g.degree_indices(j)
            z = g.degree_indices(z_deg)[z_pos]
            tgt = {idx: p for p, idx in enumerate(g.degree_indices(j + z_deg))}
            for p, wi in enumerate(w):
                if wi == 0:
                    continue
                for kk, c in g.bracket_basis(src[p], z).items():
                    q = tgt.get(kk)
                    if q is not None:
                        out[q] += wi * c
            return out
        level = self.levels[j - 1]
        for p, wi in enumerate(w):
            if wi == 0:
                continue
            mat = level.basis[p].get(z_deg)
            if mat is None:
                continue
            for (r, c), v in mat.entries.items():
                if c == z_pos:
                    out[r] += wi * v
        return out


def prolong(
    g: GradedLieAlgebra, max_k: int, _determinacy_check: bool = True
) -> tuple[list[ProlongationLevel], bool]:
    """Compute prolongation levels 1..max_k (stopping after two consecutive
    zero levels) and the finite-type flag."""
    if max_k < 1:
        raise RangeError("max_k must be >= 1")
    if not g.is_non_positively_graded():
        raise NotNonPositivelyGradedError(f"{g.name} has positive part")
    require_valid(g, require_fundamental=True)

    tower = _Tower(g)
    finite_type = False
    for k in range(1, max_k + 1):
        level = _solve_level(tower, k, _determinacy_check)
        tower.levels.append(level)
        if level.dim == 0 and k >= 2 and tower.levels[k - 2].dim == 0:
            finite_type = True
            break
        if level.dim == 0 and k == max_k:
            # allow the certifying second zero beyond max_k
            extra = _solve_level(tower, k + 1, _determinacy_check)
            tower.levels.append(extra)
            if extra.dim == 0:
                finite_type = True
            break
    return tower.levels, finite_type


def prolongation_dims(g: GradedLieAlgebra, max_k: int) -> list[int]:
    levels, _ = prolong(g, max_k)
    return [lv.dim for lv in levels]


def _solve_level(tower: _Tower, k: int, determinacy_check: bool) -> ProlongationLevel:
    g = tower.g
    neg_degs = sorted(d for d in g.by_degree if d < 0)

    # unknown layout: one block per source degree p with nonzero target
    blocks = []  # (p, n_src, n_tgt, offset)
    offset = 0
    for p in neg_degs:
        n_src = g.degree_dim(p)
        n_tgt = tower.target_dim(p + k)
        blocks.append((p, n_src, n_tgt, offset))
        offset += n_src * n_tgt
    total = offset
    if total == 0:
        return ProlongationLevel(k, ())
    block_of = {p: (n_src, n_tgt, off) for p, n_src, n_tgt, off in blocks}

    def unknown(p, src_pos, tgt_pos):
        n_src, n_tgt, off = block_of[p]
        return off + src_pos * n_tgt + tgt_pos

    rows = []
    pairs = [(i, j) for i in g.negative_indices for j in g.negative_indices if i < j]
    for i, j in pairs:
        di, dj = g.degrees[i], g.degrees[j]
        pi = g.degree_indices(di).index(i)
        pj = g.degree_indices(dj).index(j)
        tdeg = di + dj + k
        if tdeg < -g.depth:
            continue
        out_dim = g.degree_dim(tdeg) if tdeg <= 0 else tower.target_dim(tdeg)
        if out_dim == 0:
            continue
        eq = [dict() for _ in range(out_dim)]

        # u([e_i, e_j]) term
        br = g.bracket_basis(i, j)
        for kk, c in br.items():
            dkk = g.degrees[kk]
            pkk = g.degree_indices(dkk).index(kk)
            n_src, n_tgt, off = block_of[dkk]
            for t in range(n_tgt):
                eq[t][unknown(dkk, pkk, t)] = eq[t].get(unknown(dkk, pkk, t), ZERO) + c

        # -act(u(e_i), e_j) + act(u(e_j), e_i)
        for (src_deg, src_pos, other_deg, other_pos, sign) in (
            (di, pi, dj, pj, -1),
            (dj, pj, di, pi, 1),
        ):
            n_src, n_tgt, off = block_of[src_deg]
            for t in range(n_tgt):
                w = [ZERO] * n_tgt
                w[t] = Fraction(1)
                img = tower.act(src_deg + k, w, other_deg, other_pos)
                for r, v in enumerate(img):
                    if v != 0:
                        key = unknown(src_deg, src_pos, t)
                        eq[r][key] = eq[r].get(key, ZERO) + sign * v
        for terms in eq:
            if terms:
                row = [ZERO] * total
                for key, v in terms.items():
                    row[key] = v
                rows.append(row)

    if rows:
        sol = linalg.kernel_basis(Matrix.from_rows(rows))
    else:
        sol = Subspace.full(total)

    if determinacy_check and sol.dim:
        # fundamentality forces determinacy by the g_{-1} slice: no nonzero
        # solution may vanish on g_{-1}
        n_src, n_tgt, off = block_of[-1]
        restricted = [[v[off + t] for t in range(n_src * n_tgt)] for v in sol.basis]
        if linalg.rank(Matrix.from_rows(restricted)) != sol.dim:
            raise InternalInconsistencyError(
                f"level {k} of {g.name}: solution not determined by its g_-1 slice"
            )

    basis_maps = []
    for v in sol.basis:
        comp = {}
        for p, n_src, n_tgt, off in blocks:
            ents = {}
            for s in range(n_src):
                for t in range(n_tgt):
                    val = v[off + s * n_tgt + t]
                    if val != 0:
                        ents[(t, s)] = val
            comp[p] = Matrix(n_tgt, n_src, ents)
        basis_maps.append(comp)
    return ProlongationLevel(k, tuple(basis_maps))


def classical_first_prolongation_dim(action: Sequence[Matrix]) -> int:
    """Independent solver for the classical first prolongation of a linear
    algebra g0 on V: symmetric bilinear maps T: V x V -> V with every
    T(x, .) inside span(g0).  Parameterized by symmetric tensors, with
    membership enforced through the annihilator of the span."""
    nv = action[0].rows
    flat = []
    for m in action:
        flat.append([m[(r, c)] for r in range(nv) for c in range(nv)])
    ann = linalg.kernel_basis(Matrix.from_rows(flat))  # functionals killing g0

    pairs = [(x, y) for x in range(nv) for y in range(x, nv)]
    pos = {p: i for i, p in enumerate(pairs)}
    unknowns = nv * len(pairs)  # T[coord][pair]

    def uidx(coord, x, y):
        return coord * len(pairs) + pos[(min(x, y), max(x, y))]

    rows = []
    for lam in ann.basis:
        for x in range(nv):
            row = [ZERO] * unknowns
            # lam applied to the endomorphism y -> T(x, y)
            for r in range(nv):
                for c in range(nv):
                    lv = lam[r * nv + c]
                    if lv != 0:
                        row[uidx(r, x, c)] += lv
            rows.append(row)
    if not rows:
        return unknowns
    return linalg.kernel_basis(Matrix.from_rows(rows)).dim
