"""Pointwise and local holomorphic similarity of polynomial matrix families.

pointwise_similar decides similarity of two constant matrices through the
invariant factors of their characteristic pencils (exact Smith form over
Q(i)[lambda]) and can produce an explicit conjugating witness by seeded random
sampling of the intertwiner kernel.

wasow_check operationalizes the constancy criterion: the kernel dimension of
the intertwiner representation matrix is constant near a point exactly when
all its local Smith exponents there vanish, which is decidable for polynomial
families.

local_similarity builds the holomorphic solution H of A H = H B with
H(point) = Phi by projecting vec(Phi) through the kernel-bundle idempotent.
The identity A H = H B always holds exactly by construction; H(point) = Phi is
guaranteed in the constant-dimension case and certified a posteriori
otherwise, mirroring the continuity argument that underlies the topological
criterion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .algebra import (
    FuncMatrix,
    GaussianRational,
    GR_ONE,
    GR_ZERO,
    Poly,
    PolyMatrix,
    RationalFunction,
)
from .smith import invariant_factors, kernel_projection, local_smith
from .sylvester import ConstMatrix, sylvester_matrix, unvec, vec

WITNESS_RETRIES = 32


class SimilarityError(ValueError):
    """Raised for shape and precondition violations."""


@dataclass(frozen=True)
class PointwiseVerdict:
    similar: bool
    invariant_factors_a: tuple[Poly, ...]
    invariant_factors_b: tuple[Poly, ...]
    witness: ConstMatrix | None
    witness_note: str | None = None


@dataclass(frozen=True)
class WasowReport:
    point: GaussianRational
    dim_at_point: int
    dim_generic: int
    constant_near_point: bool
    smith_exponents: tuple[int, ...]


@dataclass(frozen=True)
class LocalSimilarity:
    point: GaussianRational
    H: FuncMatrix
    seed: ConstMatrix


def characteristic_pencil(a0: ConstMatrix, variable: str = "lambda") -> PolyMatrix:
    """The pencil lambda I - A0 as a univariate polynomial matrix."""
    n = len(a0)
    vs = (variable,)
    lam = Poly.variable(vs, variable)
    grid = []
    for i in range(n):
        row = []
        for j in range(n):
            c = Poly.constant(vs, a0[i][j])
            row.append(lam - c if i == j else -c)
        grid.append(row)
    return PolyMatrix(grid)


def pointwise_similar(
    a0: ConstMatrix,
    b0: ConstMatrix,
    want_witness: bool = False,
    seed: int = 0,
) -> PointwiseVerdict:
    """Decide similarity of constant matrices via invariant factors.

    The verdict is exact and authoritative.  The witness search samples random
    rational combinations of an intertwiner-kernel basis (coefficients in
    -5..5, deterministic for a fixed seed); exhaustion after 32 draws signals
    bad luck only and is reported without affecting the verdict.
    """
    n = len(a0)
    if len(b0) != n or any(len(r) != n for r in a0) or any(len(r) != n for r in b0):
        raise SimilarityError("matrices must be square and of equal size")
    fa = tuple(invariant_factors(characteristic_pencil(a0)))
    fb = tuple(invariant_factors(characteristic_pencil(b0)))
    similar = fa == fb
    witness = None
    note = None
    if similar and want_witness:
        witness, note = _witness_search(a0, b0, seed)
    return PointwiseVerdict(
        similar=similar,
        invariant_factors_a=fa,
        invariant_factors_b=fb,
        witness=witness,
        witness_note=note,
    )


def _witness_search(a0: ConstMatrix, b0: ConstMatrix, seed: int):
    n = len(a0)
    if a0 == b0:
        return linalg.identity(n, GR_ONE, GR_ZERO), None
    pa = PolyMatrix.from_scalars(a0)
    pb = PolyMatrix.from_scalars(b0)
    system = sylvester_matrix(pa, pb)
    m_at = system.M.evaluate([])
    kernel = linalg.nullspace(m_at, GR_ONE, GR_ZERO)
    rng = random.Random(seed)
    for _ in range(WITNESS_RETRIES):
        combo = [GR_ZERO] * (n * n)
        for basis_vec in kernel:
            c = GaussianRational(rng.randint(-5, 5), 0)
            combo = [x + c * y for x, y in zip(combo, basis_vec)]
        candidate = unvec(combo, n)
        if linalg.det(candidate, GR_ONE, GR_ZERO):
            return candidate, None
    return None, f"witness search exhausted after {WITNESS_RETRIES} draws"


def wasow_check(a: PolyMatrix, b: PolyMatrix, point: GaussianRational) -> WasowReport:
    """Constancy report for the intertwiner-kernel dimension near a point."""
    if len(a.variables) != 1:
        raise SimilarityError("wasow_check requires univariate families")
    pt = point if isinstance(point, GaussianRational) else GaussianRational(point)
    system = sylvester_matrix(a, b)
    n2 = a.rows * a.rows
    m_at = system.M.evaluate([pt])
    dim_at = n2 - linalg.rank(m_at)
    fact = local_smith(system.M, pt)
    dim_generic = n2 - fact.generic_rank
    constant = all(k == 0 for k in fact.exponents)
    return WasowReport(
        point=pt,
        dim_at_point=dim_at,
        dim_generic=dim_generic,
        constant_near_point=constant,
        smith_exponents=fact.exponents,
    )


def local_similarity(
    a: PolyMatrix, b: PolyMatrix, point: GaussianRational, phi: ConstMatrix
) -> LocalSimilarity:
    """Holomorphic H with A H = H B exactly and H(point) = Phi.

    Requires A(point) Phi = Phi B(point).  H is unvec(P vec(Phi)) for the
    kernel-bundle idempotent P of the intertwiner matrix at the point; the
    intertwining identity holds automatically, and H(point) = Phi is
    guaranteed when the kernel dimension is constant (all Smith exponents
    zero) and certified exactly otherwise.
    """
    if len(a.variables) != 1:
        raise SimilarityError("local_similarity requires univariate families")
    pt = point if isinstance(point, GaussianRational) else GaussianRational(point)
    n = a.rows
    a_at = a.evaluate([pt])
    b_at = b.evaluate([pt])
    lhs = linalg.mat_mul(a_at, phi, GR_ZERO)
    rhs = linalg.mat_mul(phi, b_at, GR_ZERO)
    if lhs != rhs:
        raise SimilarityError("Phi does not intertwine at the point")

    system = sylvester_matrix(a, b)
    proj = kernel_projection(system.M, pt)
    vs = a.variables
    zero = RationalFunction.constant(vs, GR_ZERO)
    phi_vec = [RationalFunction.constant(vs, x) for x in vec(phi)]
    h_vec = linalg.mat_vec([list(row) for row in proj.P.entries], phi_vec, zero)
    h = FuncMatrix(unvec(h_vec, n))

    at_point = h.evaluate([pt])
    if at_point != phi:
        raise SimilarityError(
            "construction fails: P(point) vec(Phi) differs from vec(Phi)"
        )
    return LocalSimilarity(point=pt, H=h, seed=phi)
