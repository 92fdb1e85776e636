"""Finite-dimensional graded Lie algebras with exact structure constants.

An algebra is a basis with an integer degree per basis vector and a sparse
table of brackets [e_i, e_j] for i < j; antisymmetry is structural (the
table is never stored for i >= j), grading and Jacobi are validated.
Includes the coadjoint action, the cotangent algebra t*(g) = g + g* and
depth-one algebras built from a representation.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from gradedlie import linalg
from gradedlie.errors import (
    DimensionMismatchError,
    NotARepresentationError,
    NotExactError,
    NotNonPositivelyGradedError,
    ValidationFailureError,
)
from gradedlie.linalg import Matrix, Vector, ZERO, vec, zero_vec

BasisBracket = dict[int, Fraction]


def _clean(coeffs: dict) -> BasisBracket:
    return {k: Fraction(v) for k, v in coeffs.items() if Fraction(v) != 0}


class GradedLieAlgebra:
    """Basis-indexed structure constants plus an integer degree per index."""

    def __init__(
        self,
        name: str,
        degrees: Sequence[int],
        structure: dict[tuple[int, int], dict],
        labels: Optional[Sequence[str]] = None,
    ):
        self.name = name
        self.degrees = tuple(int(d) for d in degrees)
        self.dim = len(self.degrees)
        if labels is None:
            labels = [f"e{i}" for i in range(self.dim)]
        self.labels = tuple(labels)
        if len(self.labels) != self.dim:
            raise DimensionMismatchError("labels/degrees length mismatch")
        if len(set(self.labels)) != self.dim:
            raise ValueError("duplicate basis labels")
        table = {}
        for (i, j), coeffs in structure.items():
            if not (0 <= i < j < self.dim):
                raise ValueError(f"structure key ({i},{j}) must satisfy 0 <= i < j < dim")
            c = _clean(coeffs)
            if c:
                table[(i, j)] = c
        self.structure = table
        self.by_degree: dict[int, tuple[int, ...]] = {}
        for i, d in enumerate(self.degrees):
            self.by_degree.setdefault(d, ())
            self.by_degree[d] += (i,)
        self.depth = -min(self.degrees)
        self.height = max(self.degrees)
        self.negative_indices = tuple(i for i, d in enumerate(self.degrees) if d < 0)
        self._ad_cache: dict[int, Matrix] = {}

    def __repr__(self):
        return f"GradedLieAlgebra({self.name!r}, dim={self.dim}, degrees {-self.depth}..{self.height})"

    def degree_indices(self, d: int) -> tuple[int, ...]:
        return self.by_degree.get(d, ())

    def degree_dim(self, d: int) -> int:
        return len(self.degree_indices(d))

    def is_non_positively_graded(self) -> bool:
        return self.height == 0

    def bracket_basis(self, i: int, j: int) -> BasisBracket:
        """[e_i, e_j] as a sparse coefficient dict; antisymmetry built in."""
        if i == j:
            return {}
        if i < j:
            return self.structure.get((i, j), {})
        return {k: -v for k, v in self.structure.get((j, i), {}).items()}

    def bracket(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        """Bilinear extension of the structure constants."""
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatchError("element length != algebra dim")
        out = [ZERO] * self.dim
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0 or i == j:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] += xi * yj * c
        return tuple(out)

    def ad_basis_matrix(self, i: int) -> Matrix:
        """Matrix of ad(e_i) in the basis (column j = [e_i, e_j])."""
        m = self._ad_cache.get(i)
        if m is None:
            ents = {}
            for j in range(self.dim):
                for k, c in self.bracket_basis(i, j).items():
                    ents[(k, j)] = c
            m = Matrix(self.dim, self.dim, ents)
            self._ad_cache[i] = m
        return m

    def ad_matrix(self, x: Sequence[Fraction]) -> Matrix:
        m = Matrix.zero(self.dim, self.dim)
        for i, xi in enumerate(x):
            if xi != 0:
                m = m + self.ad_basis_matrix(i).scale(xi)
        return m

    def coadjoint_matrix(self, x: Sequence[Fraction]) -> Matrix:
        """Matrix of L_x on the dual basis: L_x(a)(Y) = -a([x, Y])."""
        if len(x) != self.dim:
            raise DimensionMismatchError("element length != algebra dim")
        return -self.ad_matrix(x).transpose()

    def basis_element(self, i: int) -> Vector:
        return linalg.unit_vec(self.dim, i)

    def element_from_labels(self, coeffs: dict[str, Fraction]) -> Vector:
        pos = {lab: i for i, lab in enumerate(self.labels)}
        out = [ZERO] * self.dim
        for lab, v in coeffs.items():
            out[pos[lab]] = Fraction(v)
        return tuple(out)


@dataclass(frozen=True)
class AxiomFailure:
    axiom: str
    witness: tuple
    detail: str

    def __str__(self):
        return f"{self.axiom} at {self.witness}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    algebra_name: str
    failures: tuple[AxiomFailure, ...]

    @property
    def valid(self) -> bool:
        return not self.failures

    def __str__(self):
        if self.valid:
            return f"{self.algebra_name}: valid"
        lines = [f"{self.algebra_name}: {len(self.failures)} failure(s)"]
        lines += [f"  - {f}" for f in self.failures]
        return "\n".join(lines)


def validate(
    g: GradedLieAlgebra,
    require_fundamental: bool = True,
    check_exact_action: Optional[bool] = None,
) -> ValidationReport:
    """Check grading, Jacobi and (optionally) fundamentality axioms.

    Every failed axiom is reported with a witness; an empty failure list
    means the algebra is valid.

    ``check_exact_action`` controls the effectiveness axiom (h_0 acting
    injectively on h_{-1}).  By default it is enforced only on
    non-positively graded algebras: there it is part of being a valid
    symbol datum, while on algebras with a positive part it is not
    intrinsic (in t*(g) the dual half of h_0 always annihilates h_{-1},
    by grading alone).
    """
    failures = []

    for (i, j), coeffs in g.structure.items():
        want = g.degrees[i] + g.degrees[j]
        for k in coeffs:
            if g.degrees[k] != want:
                failures.append(
                    AxiomFailure(
                        "grading",
                        (g.labels[i], g.labels[j]),
                        f"bracket hits {g.labels[k]} of degree {g.degrees[k]}, expected {want}",
                    )
                )
                break

    for i in range(g.dim):
        ei = g.basis_element(i)
        for j in range(i + 1, g.dim):
            ej = g.basis_element(j)
            bij = g.bracket(ei, ej)
            for k in range(j + 1, g.dim):
                ek = g.basis_element(k)
                s = g.bracket(bij, ek)
                s = linalg.vadd(s, g.bracket(g.bracket(ej, ek), ei))
                s = linalg.vadd(s, g.bracket(g.bracket(ek, ei), ej))
                if not linalg.is_zero_vec(s):
                    failures.append(
                        AxiomFailure(
                            "jacobi",
                            (g.labels[i], g.labels[j], g.labels[k]),
                            "cyclic sum nonzero",
                        )
                    )

    if require_fundamental:
        if check_exact_action is None:
            check_exact_action = g.is_non_positively_graded()
        failures.extend(_fundamental_failures(g, check_exact_action))

    return ValidationReport(g.name, tuple(failures))


def _fundamental_failures(g: GradedLieAlgebra, check_exact_action: bool) -> list[AxiomFailure]:
    failures = []
    if g.degree_dim(0) == 0:
        failures.append(AxiomFailure("nontrivial-h0", (), "no degree-0 basis vectors"))
    if g.depth < 1:
        failures.append(AxiomFailure("depth", (), "no negative part"))
        return failures

    # h- generated by h_{-1}: brackets of h_{-1} with the span built so far
    # must fill each deeper degree.
    gen = [g.basis_element(i) for i in g.degree_indices(-1)]
    if not gen:
        failures.append(AxiomFailure("generation", (-1,), "h_{-1} is zero"))
        return failures
    prev = gen
    for d in range(-2, -g.depth - 1, -1):
        target = g.degree_indices(d)
        produced = []
        for i in g.degree_indices(-1):
            ei = g.basis_element(i)
            for u in prev:
                produced.append(g.bracket(ei, u))
        if target:
            cols = [[w[t] for t in target] for w in produced]
            got = linalg.rank(Matrix.from_columns(cols, nrows=len(target))) if cols else 0
            if got != len(target):
                failures.append(
                    AxiomFailure(
                        "generation",
                        (d,),
                        f"[h_-1, h_{d + 1}] spans {got} of {len(target)} dims in degree {d}",
                    )
                )
        prev = [w for w in produced if not linalg.is_zero_vec(w)]

    # Exactness: h_0 -> End(h_{-1}) injective.
    h0 = g.degree_indices(0)
    hm1 = g.degree_indices(-1)
    if check_exact_action and h0 and hm1:
        cols = []
        for a in h0:
            ada = g.ad_basis_matrix(a)
            flat = []
            for x in hm1:
                col = ada.column(x)
                flat.extend(col[y] for y in hm1)
            cols.append(flat)
        ker = linalg.kernel_basis(Matrix.from_columns(cols, nrows=len(hm1) ** 2))
        if ker.dim > 0:
            w = ker.basis[0]
            witness = tuple(g.labels[h0[a]] for a in range(len(h0)) if w[a] != 0)
            failures.append(
                AxiomFailure("exact-h0-action", witness, "h_0 element acting as 0 on h_{-1}")
            )
    return failures


def require_valid(g: GradedLieAlgebra, require_fundamental: bool = True):
    report = validate(g, require_fundamental=require_fundamental)
    if not report.valid:
        raise ValidationFailureError(report)


@functools.lru_cache(maxsize=None)
def cotangent(g: GradedLieAlgebra) -> GradedLieAlgebra:
    """Cotangent Lie algebra t*(g) = g + g* with the coadjoint bracket.

    Basis order: the basis of g (original order), then the dual basis in the
    same order.  Degrees: g keeps its degrees, the dual vector of a degree-d
    basis vector sits in degree -d.  Requires g non-positively graded and
    fundamental.
    """
    if not g.is_non_positively_graded():
        raise NotNonPositivelyGradedError(f"{g.name} has height {g.height} > 0")
    require_valid(g, require_fundamental=True)

    n = g.dim
    degrees = list(g.degrees) + [-d for d in g.degrees]
    labels = list(g.labels) + [lab + "*" for lab in g.labels]
    structure: dict[tuple[int, int], dict] = {}
    for (i, j), coeffs in g.structure.items():
        structure[(i, j)] = dict(coeffs)
    # [e_a, e_b*] = L_{e_a}(e_b*) = -sum_c <e_b, [e_a, e_c]> e_c*
    for a in range(n):
        ada = g.ad_basis_matrix(a)
        for b in range(n):
            coeffs = {}
            for c in range(n):
                v = ada[(b, c)]
                if v != 0:
                    coeffs[n + c] = -v
            if coeffs:
                structure[(a, n + b)] = coeffs
    h = GradedLieAlgebra(f"t*({g.name})", degrees, structure, labels=labels)
    require_valid(h, require_fundamental=True)
    return h


def from_representation(
    g0: GradedLieAlgebra,
    action: Sequence[Matrix],
    name: str = "",
    v_labels: Optional[Sequence[str]] = None,
) -> GradedLieAlgebra:
    """Depth-one algebra V + g0, with V abelian in degree -1 and [A, X] = A X.

    ``action`` gives one matrix on V per g0 basis element; it must be a Lie
    algebra homomorphism (bracket relations hold as commutators) and exact
    (injective), otherwise NotARepresentationError / NotExactError.
    """
    if any(d != 0 for d in g0.degrees):
        raise ValueError("g0 must be concentrated in degree 0")
    if not action:
        raise NotExactError("empty g0 cannot act exactly")
    nv = action[0].rows
    for m in action:
        if m.rows != nv or m.cols != nv:
            raise DimensionMismatchError("action matrices must be square of equal size")

    for i in range(g0.dim):
        for j in range(i + 1, g0.dim):
            comm = action[i] @ action[j] - action[j] @ action[i]
            want = Matrix.zero(nv, nv)
            for k, c in g0.bracket_basis(i, j).items():
                want = want + action[k].scale(c)
            if comm != want:
                raise NotARepresentationError(
                    f"bracket relation [{g0.labels[i]}, {g0.labels[j]}] not respected"
                )

    flat_cols = []
    for m in action:
        flat_cols.append([m[(r, c)] for c in range(nv) for r in range(nv)])
    ker = linalg.kernel_basis(Matrix.from_columns(flat_cols, nrows=nv * nv))
    if ker.dim > 0:
        raise NotExactError("g0 has a nonzero element acting as zero on V")

    if v_labels is None:
        v_labels = [f"v{i + 1}" for i in range(nv)]
    degrees = [-1] * nv + [0] * g0.dim
    labels = list(v_labels) + list(g0.labels)
    structure: dict[tuple[int, int], dict] = {}
    # V abelian; [x_c, A_a] = -A_a x_c
    for c in range(nv):
        for a in range(g0.dim):
            col = action[a].column(c)
            coeffs = {r: -col[r] for r in range(nv) if col[r] != 0}
            if coeffs:
                structure[(c, nv + a)] = coeffs
    for (i, j), coeffs in g0.structure.items():
        structure[(nv + i, nv + j)] = {nv + k: v for k, v in coeffs.items()}
    g = GradedLieAlgebra(name or f"V{nv}+{g0.name}", degrees, structure, labels=labels)
    require_valid(g, require_fundamental=True)
    return g
