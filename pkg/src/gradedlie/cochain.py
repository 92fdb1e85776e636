"""Cochain spaces C^k(h_-, V) with their degree bigrading and differential.

The wedge basis of C^k_j is indexed by strictly increasing multi-indices
over the h_- basis together with a value basis index of the coefficient
module V; the homogeneous degree of a basis element is
deg(value) - sum(deg(arguments)).  V defaults to the adjoint module h, but
any module (dimension, degrees, action of each h_- basis vector) works,
which is what the cotangent-cohomology computations use for the g and g*
coefficient blocks.

Form degrees up to MAX_FORM_DEGREE = 5 are supported: Hodge theory on C^2
needs the codifferential on C^3, and the square-zero identity on the
3-forms needs one differential beyond that.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from gradedlie.algebra import GradedLieAlgebra
from gradedlie.errors import ArgumentNotInNegativePartError, DimensionMismatchError, RangeError
from gradedlie.linalg import Matrix, Vector, ZERO, vec, zero_vec

MAX_FORM_DEGREE = 5


@dataclass(frozen=True)
class CoeffModule:
    """An h_- module: per-basis-index degree and one action matrix per
    h_- basis vector of the underlying algebra."""

    name: str
    degrees: tuple[int, ...]
    action: tuple[Matrix, ...]  # indexed like algebra.negative_indices

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def action_of(self, g: GradedLieAlgebra, neg_index: int) -> Matrix:
        return self.action[g.negative_indices.index(neg_index)]


def adjoint_module(g: GradedLieAlgebra) -> CoeffModule:
    """h itself, acted on by ad of the negative basis vectors."""
    return CoeffModule(
        name="h",
        degrees=g.degrees,
        action=tuple(g.ad_basis_matrix(i) for i in g.negative_indices),
    )


def sub_module(g: GradedLieAlgebra, indices: Sequence[int], name: str) -> CoeffModule:
    """The submodule of h spanned by ``indices`` (must be ad(h_-)-stable)."""
    idx = list(indices)
    mats = []
    for i in g.negative_indices:
        full = g.ad_basis_matrix(i)
        m = full.submatrix(idx, idx)
        # stability: nothing may leak outside the chosen span
        for (r, c), v in full.entries.items():
            if c in idx and r not in idx and v != 0:
                raise DimensionMismatchError(f"span not ad-stable: leak {r} <- {c}")
        mats.append(m)
    return CoeffModule(name=name, degrees=tuple(g.degrees[i] for i in idx), action=tuple(mats))


@dataclass(frozen=True, order=True)
class WedgeBasisElement:
    """args: strictly increasing h_- basis indices; value: module basis index."""

    args: tuple[int, ...]
    value: int

    def degree(self, g: GradedLieAlgebra, module: CoeffModule) -> int:
        return module.degrees[self.value] - sum(g.degrees[a] for a in self.args)


class ComplexCache:
    """Per-(algebra, module) cache of wedge bases and differential blocks."""

    def __init__(self, g: GradedLieAlgebra, module: Optional[CoeffModule] = None):
        self.g = g
        self.module = module if module is not None else adjoint_module(g)
        self._basis: dict = {}
        self._index: dict = {}
        self._diff: dict = {}

    def basis(self, k: int, j: int) -> tuple[WedgeBasisElement, ...]:
        """Lexicographically ordered basis of C^k_j (may be empty)."""
        key = (k, j)
        out = self._basis.get(key)
        if out is None:
            out = tuple(self._build_basis(k, j))
            self._basis[key] = out
        return out

    def basis_index(self, k: int, j: int) -> dict[WedgeBasisElement, int]:
        key = (k, j)
        out = self._index.get(key)
        if out is None:
            out = {e: p for p, e in enumerate(self.basis(k, j))}
            self._index[key] = out
        return out

    def dim(self, k: int, j: int) -> int:
        return len(self.basis(k, j))

    def degrees_with_support(self, k: int) -> list[int]:
        g = self.g
        if k == 0:
            degs = {d for d in self.module.degrees}
            return sorted(degs)
        degs = set()
        for combo in itertools.combinations(g.negative_indices, k):
            s = sum(g.degrees[a] for a in combo)
            for d in self.module.degrees:
                degs.add(d - s)
        return sorted(degs)

    def _build_basis(self, k: int, j: int):
        g = self.g
        if k < 0 or k > MAX_FORM_DEGREE:
            raise RangeError(f"form degree {k} outside 0..{MAX_FORM_DEGREE}")
        if k == 0:
            for v, d in enumerate(self.module.degrees):
                if d == j:
                    yield WedgeBasisElement((), v)
            return
        for combo in itertools.combinations(g.negative_indices, k):
            s = sum(g.degrees[a] for a in combo)
            for v, d in enumerate(self.module.degrees):
                if d - s == j:
                    yield WedgeBasisElement(combo, v)

    def differential(self, k: int, j: int) -> Matrix:
        """Matrix of the complex differential C^k_j -> C^{k+1}_j."""
        key = (k, j)
        out = self._diff.get(key)
        if out is None:
            out = self._build_differential(k, j)
            self._diff[key] = out
        return out

    def _build_differential(self, k: int, j: int) -> Matrix:
        g = self.g
        dom = self.basis(k, j)
        cod = self.basis(k + 1, j)
        dom_index = self.basis_index(k, j)
        ents: dict = {}
        module = self.module
        for row, out_el in enumerate(cod):
            jj = out_el.args
            u = out_el.value
            # value-action terms: sum_p (-1)^p act(e_{j_p})(phi(rest))
            for p, a in enumerate(jj):
                rest = jj[:p] + jj[p + 1 :]
                act = module.action_of(g, a)
                # coefficient of u in act(e_v): iterate over column entries
                for v in range(module.dim):
                    c = act[(u, v)]
                    if c == 0:
                        continue
                    col = dom_index.get(WedgeBasisElement(rest, v))
                    if col is not None:
                        sign = -1 if p % 2 else 1
                        key2 = (row, col)
                        ents[key2] = ents.get(key2, ZERO) + sign * c
            # argument-bracket terms: sum_{p<q} (-1)^{p+q} phi([e_p,e_q], rest)
            for p in range(len(jj)):
                for q in range(p + 1, len(jj)):
                    rest = tuple(x for t, x in enumerate(jj) if t != p and t != q)
                    br = g.bracket_basis(jj[p], jj[q])
                    for w, cw in br.items():
                        if w in rest:
                            continue
                        merged, sign = _insert_sorted(rest, w)
                        el = WedgeBasisElement(merged, u)
                        col = dom_index.get(el)
                        if col is None:
                            continue
                        s = cw * sign
                        if (p + q) % 2:
                            s = -s
                        key2 = (row, col)
                        ents[key2] = ents.get(key2, ZERO) + s
        return Matrix(len(cod), len(dom), ents)


def _insert_sorted(sorted_tuple: tuple[int, ...], x: int) -> tuple[tuple[int, ...], int]:
    """Insert x into a strictly increasing tuple; sign = (-1)^position."""
    pos = 0
    while pos < len(sorted_tuple) and sorted_tuple[pos] < x:
        pos += 1
    merged = sorted_tuple[:pos] + (x,) + sorted_tuple[pos:]
    return merged, (-1 if pos % 2 else 1)


@functools.lru_cache(maxsize=None)
def _cache_for(g: GradedLieAlgebra) -> ComplexCache:
    return ComplexCache(g)


def complex_cache(g: GradedLieAlgebra) -> ComplexCache:
    """The shared adjoint-coefficient cache for g."""
    return _cache_for(g)


def basis(g: GradedLieAlgebra, k: int, j: int) -> tuple[WedgeBasisElement, ...]:
    return complex_cache(g).basis(k, j)


def differential_matrix(g: GradedLieAlgebra, k: int, j: int) -> Matrix:
    return complex_cache(g).differential(k, j)


@dataclass(frozen=True)
class Cochain:
    """A k-form on h_- with values in h (sparse coefficients on wedge basis
    elements; ``j`` is None for mixed homogeneous degree)."""

    g: GradedLieAlgebra
    k: int
    j: Optional[int]
    coeffs: tuple[tuple[WedgeBasisElement, Fraction], ...]

    @classmethod
    def make(cls, g, k, j, coeffs: dict) -> "Cochain":
        cache = complex_cache(g)
        items = []
        for el, c in coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            if len(el.args) != k:
                raise DimensionMismatchError("wedge element of wrong form degree")
            if j is not None and el.degree(g, cache.module) != j:
                raise DimensionMismatchError("coefficient outside declared degree")
            items.append((el, c))
        items.sort(key=lambda t: t[0])
        return cls(g, k, j, tuple(items))

    @classmethod
    def from_vector(cls, g, k, j, coords: Sequence[Fraction]) -> "Cochain":
        b = basis(g, k, j)
        if len(coords) != len(b):
            raise DimensionMismatchError("coordinate length != block dimension")
        return cls.make(g, k, j, {el: c for el, c in zip(b, coords)})

    def to_vector(self) -> Vector:
        if self.j is None:
            raise RangeError("mixed-degree cochain has no single block vector")
        idx = complex_cache(self.g).basis_index(self.k, self.j)
        out = [ZERO] * len(idx)
        for el, c in self.coeffs:
            out[idx[el]] = c
        return tuple(out)

    def coeff_map(self) -> dict:
        return dict(self.coeffs)

    def add(self, other: "Cochain") -> "Cochain":
        if self.k != other.k:
            raise DimensionMismatchError("adding cochains of different form degree")
        j = self.j if self.j == other.j else None
        acc = dict(self.coeffs)
        for el, c in other.coeffs:
            acc[el] = acc.get(el, ZERO) + c
        return Cochain.make(self.g, self.k, j, acc)

    def scale(self, c) -> "Cochain":
        c = Fraction(c)
        return Cochain.make(self.g, self.k, self.j, {el: c * v for el, v in self.coeffs})

    def is_zero(self) -> bool:
        return not self.coeffs


def gr_project(c: Cochain, j: int) -> Cochain:
    """Homogeneous degree-j component; summing over all j returns c."""
    cache = complex_cache(c.g)
    kept = {el: v for el, v in c.coeffs if el.degree(c.g, cache.module) == j}
    return Cochain.make(c.g, c.k, j, kept)


def gr_degrees(c: Cochain) -> list[int]:
    cache = complex_cache(c.g)
    return sorted({el.degree(c.g, cache.module) for el, _ in c.coeffs})


def evaluate(c: Cochain, args: Sequence[Sequence[Fraction]]) -> Vector:
    """Multilinear alternating evaluation of c on elements of h_-.

    Independent of the assembled differential matrices: computes
    c(X_1..X_k) = sum_I det([X_t coordinate at i_s]) * (value vector of I).
    """
    g = c.g
    if len(args) != c.k:
        raise DimensionMismatchError(f"need {c.k} arguments")
    neg = set(g.negative_indices)
    for x in args:
        if len(x) != g.dim:
            raise DimensionMismatchError("argument length != algebra dim")
        for i, xi in enumerate(x):
            if xi != 0 and i not in neg:
                raise ArgumentNotInNegativePartError(
                    f"argument has component on {g.labels[i]} of degree {g.degrees[i]}"
                )
    out = [ZERO] * g.dim
    for el, coeff in c.coeffs:
        d = _det([[args[t][i] for t in range(c.k)] for i in el.args])
        if d != 0:
            out[el.value] += coeff * d
    return tuple(out)


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = ZERO
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        p = Fraction(sign)
        for r in range(n):
            p *= m[r][perm[r]]
            if p == 0:
                break
        total += p
    return total


def _perm_sign(perm) -> int:
    inv = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                inv += 1
    return -1 if inv % 2 else 1


def differential_by_formula(c: Cochain, args: Sequence[Sequence[Fraction]]) -> Vector:
    """(dc)(X_0..X_k) computed term by term from the defining sum, using the
    algebra bracket directly; the oracle against the assembled matrices."""
    g = c.g
    k = c.k
    if len(args) != k + 1:
        raise DimensionMismatchError(f"need {k + 1} arguments")
    out = zero_vec(g.dim)
    for i in range(k + 1):
        rest = [args[t] for t in range(k + 1) if t != i]
        val = evaluate(c, rest)
        term = g.bracket(args[i], val)
        if i % 2:
            term = tuple(-t for t in term)
        out = tuple(a + b for a, b in zip(out, term))
    for i in range(k + 1):
        for jj in range(i + 1, k + 1):
            br = g.bracket(args[i], args[jj])
            rest = [br] + [args[t] for t in range(k + 1) if t != i and t != jj]
            term = evaluate(c, rest)
            if (i + jj) % 2:
                term = tuple(-t for t in term)
            out = tuple(a + b for a, b in zip(out, term))
    return out
