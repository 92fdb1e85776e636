"""Degree-by-degree Hodge normalization of formal curvature families.

A formal curvature is a family of 2-form blocks K_m in C^2_m(h_-, h) with
m >= 1 (regularity); a gauge correction is a family of 1-form blocks.  The
update law for a degree-m gauge move is K_m -> K_m + d(phi_m), degrees
below m unchanged; an optional tail operator injects contributions
strictly above m (modeling the nonlinear remainder of a real gauge
transformation).  ``normalize`` removes the exact part of each degree in
increasing order, choosing the minimal-norm preimage, and lands on a
family annihilated by the codifferential in every degree.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from gradedlie import linalg
from gradedlie.algebra import GradedLieAlgebra
from gradedlie.cochain import complex_cache
from gradedlie.errors import RangeError, TailDegreeViolationError
from gradedlie.hodge import AdaptedMetric, metric_context
from gradedlie.linalg import LinearSolver, Matrix, Subspace, Vector, ZERO, vec, zero_vec

Components = dict[int, Vector]

# tail(m, phi_m coordinates, current curvature) -> extra components,
# support must be strictly above m
TailOperator = Callable[[int, Vector, "FormalCurvature"], Components]


def max_curvature_degree(g: GradedLieAlgebra) -> int:
    """Largest homogeneous degree any C^2 block can carry."""
    return g.height + 2 * g.depth


def _validated_components(g: GradedLieAlgebra, k_form: int, components: Components) -> Components:
    cache = complex_cache(g)
    out = {}
    for m, coords in components.items():
        if m < 1:
            raise RangeError(f"component degree {m} < 1 (family must be regular)")
        if m > max_curvature_degree(g):
            raise RangeError(f"component degree {m} beyond support bound")
        coords = vec(coords)
        if len(coords) != cache.dim(k_form, m):
            raise RangeError(f"component {m}: length {len(coords)} != dim C^{k_form}_{m}")
        if any(c != 0 for c in coords):
            out[m] = coords
    return out


@dataclass(frozen=True)
class FormalCurvature:
    """Degree-indexed family in C^2(h_-, h), all degrees >= 1."""

    g: GradedLieAlgebra
    components: tuple[tuple[int, Vector], ...]

    @classmethod
    def make(cls, g: GradedLieAlgebra, components: Components) -> "FormalCurvature":
        clean = _validated_components(g, 2, components)
        return cls(g, tuple(sorted(clean.items())))

    def component(self, m: int) -> Vector:
        for d, coords in self.components:
            if d == m:
                return coords
        return zero_vec(complex_cache(self.g).dim(2, m))

    def degrees(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.components)

    def as_dict(self) -> Components:
        return dict(self.components)

    def is_zero(self) -> bool:
        return not self.components


@dataclass(frozen=True)
class GaugeCorrection:
    """Degree-indexed family in C^1(h_-, h), all degrees >= 1."""

    g: GradedLieAlgebra
    components: tuple[tuple[int, Vector], ...]

    @classmethod
    def make(cls, g: GradedLieAlgebra, components: Components) -> "GaugeCorrection":
        clean = _validated_components(g, 1, components)
        return cls(g, tuple(sorted(clean.items())))

    def component(self, m: int) -> Vector:
        for d, coords in self.components:
            if d == m:
                return coords
        return zero_vec(complex_cache(self.g).dim(1, m))

    def as_dict(self) -> Components:
        return dict(self.components)

    def is_zero(self) -> bool:
        return not self.components


def curvature_update(
    K: FormalCurvature,
    m: int,
    phi_m: Vector,
    tail: Optional[TailOperator] = None,
) -> FormalCurvature:
    """Apply a degree-m gauge move: K_m += d(phi_m); degrees below m are
    untouched; a tail may shift degrees above m only."""
    g = K.g
    cache = complex_cache(g)
    if m < 1:
        raise RangeError("gauge degree must be >= 1")
    comps = K.as_dict()
    d_phi = cache.differential(1, m).apply(vec(phi_m))
    cur = comps.get(m, zero_vec(len(d_phi)))
    comps[m] = linalg.vadd(cur, d_phi)
    if tail is not None:
        extra = tail(m, vec(phi_m), K)
        for d, coords in extra.items():
            if any(c != 0 for c in vec(coords)) and d <= m:
                raise TailDegreeViolationError(
                    f"tail output touches degree {d} <= gauge degree {m}"
                )
            cur = comps.get(d, zero_vec(cache.dim(2, d)))
            comps[d] = linalg.vadd(cur, vec(coords))
    comps = {d: c for d, c in comps.items() if any(x != 0 for x in c)}
    return FormalCurvature.make(g, comps)


class NormalizationEngine:
    """Precomputed per-degree Hodge data for fast repeated normalization."""

    def __init__(self, g: GradedLieAlgebra, metric: AdaptedMetric):
        self.g = g
        self.metric = metric
        self.ctx = metric_context(g, metric)
        self.cache = complex_cache(g)
        self._exact_proj: dict[int, Matrix] = {}
        self._solvers: dict[int, LinearSolver] = {}
        self._kernels: dict[int, Subspace] = {}
        self._gram1: dict[int, Matrix] = {}

    def degrees(self) -> list[int]:
        return [m for m in self.cache.degrees_with_support(2) if m >= 1]

    def exact_projector(self, m: int) -> Matrix:
        p = self._exact_proj.get(m)
        if p is None:
            split = self.ctx.hodge(2, m)
            p = linalg.projection_matrix(split.exact, split.gram)
            self._exact_proj[m] = p
        return p

    def coclosed_projector(self, m: int) -> Matrix:
        split = self.ctx.hodge(2, m)
        n = split.block_dim
        return Matrix.identity(n) - self.exact_projector(m)

    def minimal_norm_preimage(self, m: int, exact_part: Vector) -> Vector:
        """The d-preimage of an exact C^2_m vector that is Gram-orthogonal
        to ker d (hence of minimal norm); deterministic."""
        solver = self._solvers.get(m)
        if solver is None:
            solver = LinearSolver(self.cache.differential(1, m))
            self._solvers[m] = solver
            self._kernels[m] = linalg.kernel_basis(self.cache.differential(1, m))
            self._gram1[m] = self.ctx.induced_gram(1, m)
        x0 = solver.solve(exact_part)
        if x0 is None:
            raise RangeError("vector not in the image of d")
        ker = self._kernels[m]
        if ker.dim == 0:
            return x0
        proj = linalg.orthogonal_projection(x0, ker, self._gram1[m])
        return linalg.vsub(x0, proj)

    def is_normal(self, K: FormalCurvature) -> bool:
        for m, coords in K.components:
            if not linalg.is_zero_vec(self.ctx.codifferential(1, m).apply(coords)):
                return False
        return True

    def normalize(
        self, K: FormalCurvature, tail: Optional[TailOperator] = None
    ) -> tuple[FormalCurvature, GaugeCorrection, list[dict]]:
        """Remove exact parts degree by degree; returns the normal family,
        the gauge correction used, and a per-degree trace."""
        g = self.g
        gauge: Components = {}
        trace = []
        bound = max_curvature_degree(g)
        for m in range(1, bound + 1):
            if self.cache.dim(2, m) == 0:
                continue
            km = K.component(m)
            split = self.ctx.hodge(2, m)
            exact_part = self.exact_projector(m).apply(km)
            step = {
                "degree": m,
                "dims": split.dims(),
                "exact_removed": not linalg.is_zero_vec(exact_part),
            }
            trace.append(step)
            if step["exact_removed"]:
                phi = self.minimal_norm_preimage(m, exact_part)
                gauge[m] = phi
                K = curvature_update(K, m, tuple(-x for x in phi), tail)
            elif tail is not None:
                # a zero move never fires the tail
                pass
        return K, GaugeCorrection.make(g, gauge), trace


@functools.lru_cache(maxsize=32)
def _engine(g: GradedLieAlgebra, metric: AdaptedMetric) -> NormalizationEngine:
    return NormalizationEngine(g, metric)


def normalization_engine(g, metric) -> NormalizationEngine:
    return _engine(g, metric)


def normalize(K: FormalCurvature, metric: AdaptedMetric, tail: Optional[TailOperator] = None):
    return normalization_engine(K.g, metric).normalize(K, tail)


def is_normal(K: FormalCurvature, metric: AdaptedMetric) -> bool:
    return normalization_engine(K.g, metric).is_normal(K)


def gauge_leading(phi: GaugeCorrection, psi: Components) -> GaugeCorrection:
    """Leading-order gauge action on corrections: phi_m -> phi_m - d(psi_m)
    for a family psi of algebra elements in positive degrees (0-cochains)."""
    g = phi.g
    cache = complex_cache(g)
    comps = phi.as_dict()
    for m, coords in psi.items():
        if m < 1:
            raise RangeError("gauge family must live in positive degrees")
        coords = vec(coords)
        if len(coords) != cache.dim(0, m):
            raise RangeError(f"psi component {m}: wrong length")
        d_psi = cache.differential(0, m).apply(coords)
        cur = comps.get(m, zero_vec(cache.dim(1, m)))
        comps[m] = linalg.vsub(cur, d_psi)
    return GaugeCorrection.make(g, comps)


def apply_gauge_to_curvature(K: FormalCurvature, phi: GaugeCorrection) -> FormalCurvature:
    """K + d(phi) slotwise (exact perturbation, no tail)."""
    out = K
    for m, coords in phi.components:
        out = curvature_update(out, m, coords)
    return out


@dataclass(frozen=True)
class UniquenessReport:
    trials: int
    all_equal: bool
    h1_dims: tuple[tuple[int, int], ...]  # (degree, dim H^1_degree)

    @property
    def h1_vanishes(self) -> bool:
        return all(d == 0 for _, d in self.h1_dims)


def uniqueness_probe(
    K: FormalCurvature, metric: AdaptedMetric, trials: int, rng: random.Random
) -> UniquenessReport:
    """Exact-linear uniqueness surrogate: normalization is invariant under
    exact perturbations K -> K + d(phi); also reports whether the
    obstruction space H^1_l vanishes for all l >= 1."""
    engine = normalization_engine(K.g, metric)
    base, _, _ = engine.normalize(K)
    ok = True
    for _ in range(trials):
        phi = random_gauge(K.g, rng)
        shifted = apply_gauge_to_curvature(K, phi)
        out, _, _ = engine.normalize(shifted)
        if out != base:
            ok = False
            break
    dims = []
    for l in engine.cache.degrees_with_support(1):
        if l >= 1:
            dims.append((l, engine.ctx.cohomology_dim(1, l)))
    return UniquenessReport(trials, ok, tuple(dims))


def random_curvature(g: GradedLieAlgebra, rng: random.Random) -> FormalCurvature:
    cache = complex_cache(g)
    comps = {}
    for m in cache.degrees_with_support(2):
        if m >= 1:
            comps[m] = tuple(
                Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cache.dim(2, m))
            )
    return FormalCurvature.make(g, comps)


def random_gauge(g: GradedLieAlgebra, rng: random.Random) -> GaugeCorrection:
    cache = complex_cache(g)
    comps = {}
    for m in cache.degrees_with_support(1):
        if m >= 1:
            comps[m] = tuple(
                Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(cache.dim(1, m))
            )
    return GaugeCorrection.make(g, comps)


def fixed_injection_tail(degree_shift: int = 1, scale: Fraction = Fraction(1)) -> TailOperator:
    """Test tail: after a degree-m move, add ``scale`` times the current
    degree-(m + shift) block back in (support strictly above m)."""

    def tail(m: int, phi_m: Vector, K: FormalCurvature) -> Components:
        cache = complex_cache(K.g)
        target = m + degree_shift
        if degree_shift < 1:
            raise TailDegreeViolationError("shift must be positive")
        if target > max_curvature_degree(K.g) or cache.dim(2, target) == 0:
            return {}
        if linalg.is_zero_vec(phi_m):
            return {}
        src = K.component(target)
        return {target: tuple(scale * x for x in src)}

    return tail
