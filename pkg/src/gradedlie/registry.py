"""Built-in example algebras.

All registry algebras pass full validation; ``registry_get`` returns them
validated.  Names: heis3, sl2-graded, so2-V2, nonab-g0, free-nilp-2-3.
"""

from __future__ import annotations

import functools

from gradedlie.algebra import GradedLieAlgebra, from_representation, validate
from gradedlie.errors import UnknownNameError, ValidationFailureError
from gradedlie.linalg import Matrix


def _heis3() -> GradedLieAlgebra:
    # Heisenberg algebra X, Y, Z = [X, Y] plus the grading element E
    # ([E, v] = deg(v) v, stored as [v, E] = -deg(v) v).
    return GradedLieAlgebra(
        "heis3",
        degrees=[-1, -1, -2, 0],
        structure={
            (0, 1): {2: 1},
            (0, 3): {0: 1},
            (1, 3): {1: 1},
            (2, 3): {2: 2},
        },
        labels=["X", "Y", "Z", "E"],
    )


def _sl2_graded() -> GradedLieAlgebra:
    # Split sl2 with its |1|-gradation: f (deg -1), h (deg 0), e (deg +1);
    # [h,e] = 2e, [h,f] = -2f, [e,f] = h.
    return GradedLieAlgebra(
        "sl2-graded",
        degrees=[-1, 0, 1],
        structure={
            (0, 1): {0: 2},
            (0, 2): {1: -1},
            (1, 2): {2: 2},
        },
        labels=["f", "h", "e"],
    )


def so2_action() -> list[Matrix]:
    """so(2) on R^2: the rotation generator."""
    return [Matrix.from_rows([[0, -1], [1, 0]])]


def _so2_g0() -> GradedLieAlgebra:
    return GradedLieAlgebra("so2", degrees=[0], structure={}, labels=["J"])


def _so2_V2() -> GradedLieAlgebra:
    return from_representation(_so2_g0(), so2_action(), name="so2-V2")


def nonab_action() -> list[Matrix]:
    """Nonabelian 2-dim algebra span{E, N}, [E, N] = N, acting on R^2."""
    e = Matrix.from_rows([[1, 0], [0, 0]])
    n = Matrix.from_rows([[0, 1], [0, 0]])
    return [e, n]


def _nonab_g0_algebra() -> GradedLieAlgebra:
    return GradedLieAlgebra(
        "eb2", degrees=[0, 0], structure={(0, 1): {1: 1}}, labels=["E", "N"]
    )


def _nonab_g0() -> GradedLieAlgebra:
    return from_representation(_nonab_g0_algebra(), nonab_action(), name="nonab-g0")


def gl_algebra(n: int) -> GradedLieAlgebra:
    """gl(n) as an abstract degree-0 algebra on the elementary matrices."""
    labels = [f"E{a + 1}{b + 1}" for a in range(n) for b in range(n)]
    idx = lambda a, b: n * a + b
    structure = {}
    for a in range(n):
        for b in range(n):
            i = idx(a, b)
            for c in range(n):
                for d in range(n):
                    j = idx(c, d)
                    if i >= j:
                        continue
                    coeffs = {}
                    if b == c:
                        coeffs[idx(a, d)] = coeffs.get(idx(a, d), 0) + 1
                    if d == a:
                        coeffs[idx(c, b)] = coeffs.get(idx(c, b), 0) - 1
                    coeffs = {k: v for k, v in coeffs.items() if v != 0}
                    if coeffs:
                        structure[(i, j)] = coeffs
    return GradedLieAlgebra(f"gl{n}", degrees=[0] * (n * n), structure=structure, labels=labels)


def gl_action(n: int) -> list[Matrix]:
    mats = []
    for a in range(n):
        for b in range(n):
            mats.append(Matrix(n, n, {(a, b): 1}))
    return mats


def gl_on_standard(n: int) -> GradedLieAlgebra:
    """Depth-one algebra R^n + gl(n) with the standard action."""
    return from_representation(gl_algebra(n), gl_action(n), name=f"gl{n}-Rn")


def _free_nilp_2_3() -> GradedLieAlgebra:
    # Free 2-step nilpotent algebra on x1, x2, x3 (z_ab = [x_a, x_b]),
    # with the full algebra of degree-0 derivations (a copy of gl(3),
    # basis D_ab: x_b -> x_a) as the degree-0 part.
    nx = 3
    x = lambda a: a
    zpos = {(0, 1): 3, (0, 2): 4, (1, 2): 5}
    d = lambda a, b: 6 + 3 * a + b
    labels = ["x1", "x2", "x3", "z12", "z13", "z23"] + [
        f"D{a + 1}{b + 1}" for a in range(3) for b in range(3)
    ]
    degrees = [-1] * 3 + [-2] * 3 + [0] * 9
    structure: dict[tuple[int, int], dict] = {}

    def z_of(a, b):
        """[x_a, x_b] as (index, sign); zero if a == b."""
        if a == b:
            return None
        if a < b:
            return zpos[(a, b)], 1
        return zpos[(b, a)], -1

    for (a, b), zi in zpos.items():
        structure[(x(a), x(b))] = {zi: 1}
    # [D_ab, x_c] = delta_bc x_a, stored as (x_c, D_ab).
    for a in range(3):
        for b in range(3):
            structure[(x(b), d(a, b))] = {x(a): -1}
    # [D_ab, z_cd] = delta_bc [x_a, x_d] + delta_bd [x_c, x_a], stored as (z_cd, D_ab).
    for a in range(3):
        for b in range(3):
            for (c, e), zi in zpos.items():
                coeffs: dict[int, int] = {}
                if b == c:
                    t = z_of(a, e)
                    if t:
                        coeffs[t[0]] = coeffs.get(t[0], 0) + t[1]
                if b == e:
                    t = z_of(c, a)
                    if t:
                        coeffs[t[0]] = coeffs.get(t[0], 0) + t[1]
                coeffs = {k: -v for k, v in coeffs.items() if v != 0}
                if coeffs:
                    structure[(zi, d(a, b))] = coeffs
    # [D_ab, D_ce] = delta_bc D_ae - delta_ea D_cb.
    for a in range(3):
        for b in range(3):
            for c in range(3):
                for e in range(3):
                    i, j = d(a, b), d(c, e)
                    if i >= j:
                        continue
                    coeffs = {}
                    if b == c:
                        coeffs[d(a, e)] = coeffs.get(d(a, e), 0) + 1
                    if e == a:
                        coeffs[d(c, b)] = coeffs.get(d(c, b), 0) - 1
                    coeffs = {k: v for k, v in coeffs.items() if v != 0}
                    if coeffs:
                        structure[(i, j)] = coeffs
    return GradedLieAlgebra("free-nilp-2-3", degrees, structure, labels=labels)


_BUILDERS = {
    "heis3": _heis3,
    "sl2-graded": _sl2_graded,
    "so2-V2": _so2_V2,
    "nonab-g0": _nonab_g0,
    "free-nilp-2-3": _free_nilp_2_3,
}


def registry_names() -> list[str]:
    return sorted(_BUILDERS)


@functools.lru_cache(maxsize=None)
def registry_get(name: str) -> GradedLieAlgebra:
    """Return a validated built-in algebra by name."""
    builder = _BUILDERS.get(name)
    if builder is None:
        raise UnknownNameError(f"unknown registry algebra {name!r}; know {registry_names()}")
    g = builder()
    report = validate(g, require_fundamental=True, check_exact_action=True)
    if not report.valid:
        raise ValidationFailureError(report)
    return g
