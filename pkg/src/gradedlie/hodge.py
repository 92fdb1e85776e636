"""Adapted metrics, induced inner products on cochains, codifferentials,
Laplacian, Hodge decomposition and cohomology dimensions.

The codifferential is DEFINED as the Gram adjoint of the differential;
``codifferential_explicit`` assembles it a second time from the structural
formula (adjoint-of-ad terms plus musical-isomorphism wedge insertions) and
the two must agree exactly, which is one of the package's central checks.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from gradedlie import linalg
from gradedlie.algebra import GradedLieAlgebra
from gradedlie.cochain import (
    ComplexCache,
    WedgeBasisElement,
    _insert_sorted,
    complex_cache,
)
from gradedlie.errors import (
    InternalInconsistencyError,
    NonSymmetricError,
    NotPositiveDefiniteError,
    RangeError,
)
from gradedlie.linalg import Matrix, Subspace, ZERO, inverse, vec


class AdaptedMetric:
    """Positive-definite Gram block per degree; distinct degrees orthogonal."""

    def __init__(self, g: GradedLieAlgebra, blocks: dict[int, Matrix]):
        self.g = g
        self.blocks = {}
        for d in sorted(g.by_degree):
            blk = blocks.get(d)
            if blk is None:
                raise RangeError(f"missing Gram block for degree {d}")
            nd = g.degree_dim(d)
            if blk.rows != nd or blk.cols != nd:
                raise RangeError(f"degree {d} block must be {nd}x{nd}")
            if not blk.is_symmetric():
                raise NonSymmetricError(f"degree {d} block not symmetric")
            if not linalg.is_positive_definite(blk):
                raise NotPositiveDefiniteError(f"degree {d} block not positive definite")
            self.blocks[d] = blk

    def full_gram(self) -> Matrix:
        """Gram on all of h, block-diagonal by degree, in basis order."""
        ents = {}
        for d, blk in self.blocks.items():
            idx = self.g.degree_indices(d)
            for (i, j), v in blk.entries.items():
                ents[(idx[i], idx[j])] = v
        return Matrix(self.g.dim, self.g.dim, ents)

    def negative_gram(self) -> Matrix:
        """Gram on h_-, over the negative-index positions."""
        neg = self.g.negative_indices
        pos = {a: p for p, a in enumerate(neg)}
        ents = {}
        for d, blk in self.blocks.items():
            if d >= 0:
                continue
            idx = self.g.degree_indices(d)
            for (i, j), v in blk.entries.items():
                ents[(pos[idx[i]], pos[idx[j]])] = v
        return Matrix(len(neg), len(neg), ents)

    def __repr__(self):
        return f"AdaptedMetric({self.g.name}, degrees {sorted(self.blocks)})"


def identity_metric(g: GradedLieAlgebra) -> AdaptedMetric:
    return AdaptedMetric(g, {d: Matrix.identity(g.degree_dim(d)) for d in g.by_degree})


def diagonal_metric(g: GradedLieAlgebra, diag) -> AdaptedMetric:
    """Build from a full-length diagonal (one positive rational per basis index)."""
    blocks = {}
    for d in g.by_degree:
        idx = g.degree_indices(d)
        blocks[d] = Matrix.diagonal([Fraction(diag[i]) for i in idx])
    return AdaptedMetric(g, blocks)


def random_diagonal_metric(g: GradedLieAlgebra, rng: random.Random) -> AdaptedMetric:
    diag = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(g.dim)]
    return diagonal_metric(g, diag)


def random_block_metric(g: GradedLieAlgebra, rng: random.Random) -> AdaptedMetric:
    """Random non-diagonal SPD blocks (A^T A + n I), for small algebras."""
    blocks = {}
    for d in g.by_degree:
        n = g.degree_dim(d)
        a = Matrix.from_rows([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        blocks[d] = a.transpose() @ a + Matrix.identity(n).scale(n)
    return AdaptedMetric(g, blocks)


@dataclass
class HodgeSplit:
    """Orthogonal splitting of one C^k_j block: ker(Laplacian), im(d*), im(d)."""

    k: int
    j: int
    gram: Matrix
    harmonic: Subspace
    coexact: Subspace
    exact: Subspace
    _projectors: Optional[tuple[Matrix, Matrix, Matrix]] = field(default=None, repr=False)

    @property
    def block_dim(self) -> int:
        return self.gram.rows

    def dims(self) -> tuple[int, int, int]:
        return (self.harmonic.dim, self.coexact.dim, self.exact.dim)

    def projectors(self) -> tuple[Matrix, Matrix, Matrix]:
        """Gram-orthogonal projectors (harmonic, coexact, exact), exact
        normal-equation solves; computed on first use."""
        if self._projectors is None:
            self._projectors = (
                linalg.projection_matrix(self.harmonic, self.gram),
                linalg.projection_matrix(self.coexact, self.gram),
                linalg.projection_matrix(self.exact, self.gram),
            )
        return self._projectors


class MetricContext:
    """Caches every metric-dependent operator per (k, j) block."""

    def __init__(self, g: GradedLieAlgebra, metric: AdaptedMetric):
        if metric.g is not g:
            raise RangeError("metric belongs to a different algebra")
        self.g = g
        self.metric = metric
        self.cache: ComplexCache = complex_cache(g)
        self.gram_h = metric.full_gram()
        self.gram_h_inv = inverse(self.gram_h)
        self.gram_neg = metric.negative_gram()
        self.gram_neg_inv = inverse(self.gram_neg)
        self._induced: dict = {}
        self._induced_inv: dict = {}
        self._codiff: dict = {}
        self._codiff_explicit: dict = {}
        self._hodge: dict = {}
        self._flats: Optional[list] = None
        self._adstars: Optional[list] = None

    # -- induced inner products ------------------------------------------

    def induced_gram(self, k: int, j: int) -> Matrix:
        key = (k, j)
        out = self._induced.get(key)
        if out is None:
            out = self._build_induced(k, j)
            self._induced[key] = out
        return out

    def induced_gram_inv(self, k: int, j: int) -> Matrix:
        key = (k, j)
        out = self._induced_inv.get(key)
        if out is None:
            out = inverse(self.induced_gram(k, j))
            self._induced_inv[key] = out
        return out

    def _build_induced(self, k: int, j: int) -> Matrix:
        basis = self.cache.basis(k, j)
        n = len(basis)
        neg = self.g.negative_indices
        pos = {a: p for p, a in enumerate(neg)}
        ginv = self.gram_neg_inv
        gh = self.gram_h
        diag_fast = _is_diagonal(ginv) and _is_diagonal(gh)
        ents = {}
        for r, e1 in enumerate(basis):
            for c in range(r, n):
                e2 = basis[c]
                if diag_fast:
                    if e1.args != e2.args or e1.value != e2.value:
                        continue
                    v = gh[(e1.value, e1.value)]
                    for a in e1.args:
                        v *= ginv[(pos[a], pos[a])]
                else:
                    v = gh[(e1.value, e2.value)]
                    if v == 0:
                        continue
                    if k > 0:
                        minor = [[ginv[(pos[a], pos[b])] for b in e2.args] for a in e1.args]
                        v *= _small_det(minor)
                if v != 0:
                    ents[(r, c)] = v
                    if c != r:
                        ents[(c, r)] = v
        return Matrix(n, n, ents)

    # -- codifferentials ---------------------------------------------------

    def codifferential(self, k: int, j: int) -> Matrix:
        """Gram adjoint of d: the map C^{k+1}_j -> C^k_j."""
        key = (k, j)
        out = self._codiff.get(key)
        if out is None:
            d = self.cache.differential(k, j)
            out = self.induced_gram_inv(k, j) @ d.transpose() @ self.induced_gram(k + 1, j)
            self._codiff[key] = out
        return out

    def codifferential_explicit(self, k: int, j: int) -> Matrix:
        """Second construction of the same map, assembled term by term from
        the structural formula; must equal ``codifferential`` exactly."""
        key = (k, j)
        out = self._codiff_explicit.get(key)
        if out is None:
            out = self._build_codiff_explicit(k, j)
            self._codiff_explicit[key] = out
        return out

    def _flat_vectors(self) -> list:
        """flat(p): the h_- vector metric-dual to the p-th dual basis vector."""
        if self._flats is None:
            n = len(self.g.negative_indices)
            self._flats = [self.gram_neg_inv.column(p) for p in range(n)]
        return self._flats

    def _adstar_matrices(self) -> list:
        """(ad_{flat(p)})^* on h, per negative position p."""
        if self._adstars is None:
            g = self.g
            neg = g.negative_indices
            out = []
            for p in range(len(neg)):
                x = [ZERO] * g.dim
                for q, v in enumerate(self._flat_vectors()[p]):
                    x[neg[q]] = v
                ad = g.ad_matrix(x)
                out.append(self.gram_h_inv @ ad.transpose() @ self.gram_h)
            self._adstars = out
        return self._adstars

    def _build_codiff_explicit(self, k: int, j: int) -> Matrix:
        g = self.g
        neg = g.negative_indices
        pos = {a: p for p, a in enumerate(neg)}
        dom = self.cache.basis(k + 1, j)
        cod_index = self.cache.basis_index(k, j)
        flats = self._flat_vectors()
        adstars = self._adstar_matrices()
        ents: dict = {}
        for col, el in enumerate(dom):
            args = el.args
            v = el.value
            for i, a in enumerate(args):
                rest = args[:i] + args[i + 1 :]
                astar = adstars[pos[a]]
                sign = -1 if i % 2 else 1
                for u in range(g.dim):
                    c = astar[(u, v)]
                    if c == 0:
                        continue
                    row = cod_index.get(WedgeBasisElement(rest, u))
                    if row is not None:
                        key2 = (row, col)
                        ents[key2] = ents.get(key2, ZERO) + sign * c
            for i in range(len(args)):
                for jj in range(i + 1, len(args)):
                    rest = tuple(x for t, x in enumerate(args) if t != i and t != jj)
                    xi = [ZERO] * g.dim
                    for q, val in enumerate(flats[pos[args[i]]]):
                        xi[neg[q]] = val
                    yj = [ZERO] * g.dim
                    for q, val in enumerate(flats[pos[args[jj]]]):
                        yj[neg[q]] = val
                    br = g.bracket(xi, yj)
                    sharp = self.gram_neg.apply([br[a] for a in neg])
                    for q, beta in enumerate(sharp):
                        if beta == 0:
                            continue
                        w = neg[q]
                        if w in rest:
                            continue
                        merged, sgn = _insert_sorted(rest, w)
                        row = cod_index.get(WedgeBasisElement(merged, v))
                        if row is None:
                            continue
                        s = beta * sgn
                        if (i + jj) % 2:
                            s = -s
                        key2 = (row, col)
                        ents[key2] = ents.get(key2, ZERO) + s
        return Matrix(len(cod_index), len(dom), ents)

    # -- Laplacian / Hodge -------------------------------------------------

    def laplacian(self, k: int, j: int) -> Matrix:
        up = self.codifferential(k, j) @ self.cache.differential(k, j)
        if k == 0:
            return up
        down = self.cache.differential(k - 1, j) @ self.codifferential(k - 1, j)
        return up + down

    def hodge(self, k: int, j: int) -> HodgeSplit:
        key = (k, j)
        out = self._hodge.get(key)
        if out is None:
            harmonic = linalg.kernel_basis(self.laplacian(k, j))
            coexact = linalg.image_basis(self.codifferential(k, j))
            if k == 0:
                exact = Subspace.zero(self.cache.dim(0, j))
            else:
                exact = linalg.image_basis(self.cache.differential(k - 1, j))
            out = HodgeSplit(k, j, self.induced_gram(k, j), harmonic, coexact, exact)
            self._hodge[key] = out
        return out

    def cohomology_dim(self, k: int, l: int) -> int:
        """dim H^k_l, computed as harmonic dimension AND as ker/im; the two
        must agree (metric independence of Betti numbers)."""
        harm = self.hodge(k, l).harmonic.dim
        kerd = linalg.kernel_basis(self.cache.differential(k, l)).dim
        if k == 0:
            imd = 0
        else:
            imd = linalg.rank(self.cache.differential(k - 1, l))
        kerim = kerd - imd
        if harm != kerim:
            raise InternalInconsistencyError(
                f"H^{k}_{l}({self.g.name}): harmonic {harm} != ker/im {kerim}"
            )
        return harm


def _is_diagonal(m: Matrix) -> bool:
    return all(i == j for (i, j) in m.entries)


def _small_det(rows: list) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = ZERO
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        p = Fraction(sign)
        for r in range(n):
            p *= rows[r][perm[r]]
            if p == 0:
                break
        total += p
    return total


@functools.lru_cache(maxsize=64)
def _context(g: GradedLieAlgebra, metric: AdaptedMetric) -> MetricContext:
    return MetricContext(g, metric)


def metric_context(g: GradedLieAlgebra, metric: AdaptedMetric) -> MetricContext:
    return _context(g, metric)


# -- spec-level convenience wrappers ----------------------------------------


def induced_gram(g, metric, k, j) -> Matrix:
    return metric_context(g, metric).induced_gram(k, j)


def codifferential_adjoint(g, metric, k, j) -> Matrix:
    return metric_context(g, metric).codifferential(k, j)


def codifferential_explicit(g, metric, k, j) -> Matrix:
    return metric_context(g, metric).codifferential_explicit(k, j)


def hodge_decompose(g, metric, k, j) -> HodgeSplit:
    return metric_context(g, metric).hodge(k, j)


def cohomology_dim(g, metric, k, l) -> int:
    return metric_context(g, metric).cohomology_dim(k, l)


def induced_gram_pairing_oracle(g, metric, k, j) -> Matrix:
    """Independent construction of the induced Gram: invert the Gram of the
    primal wedge basis (determinants of h_- pairings) instead of taking
    determinants of dual pairings.  Used as a cross-check in tests."""
    ctx = metric_context(g, metric)
    basis = ctx.cache.basis(k, j)
    neg = g.negative_indices
    pos = {a: p for p, a in enumerate(neg)}
    gneg = ctx.gram_neg
    gh = ctx.gram_h
    combos = sorted({e.args for e in basis})
    cpos = {cmb: i for i, cmb in enumerate(combos)}
    n = len(combos)
    prim = Matrix(
        n,
        n,
        {
            (r, c): _small_det([[gneg[(pos[a], pos[b])] for b in combos[c]] for a in combos[r]])
            for r in range(n)
            for c in range(n)
        },
    )
    prim_inv = inverse(prim)
    ents = {}
    for r, e1 in enumerate(basis):
        for c, e2 in enumerate(basis):
            v = prim_inv[(cpos[e1.args], cpos[e2.args])] * gh[(e1.value, e2.value)]
            if v != 0:
                ents[(r, c)] = v
    return Matrix(len(basis), len(basis), ents)
