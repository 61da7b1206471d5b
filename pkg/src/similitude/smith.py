"""Local Smith factorization of univariate polynomial matrices at a point.

local_smith writes M(z) = E(z) * diag((z-xi)^k1, ..., (z-xi)^kr, 0, ...) * F(z)
with E, F invertible at xi and entries in the local ring at xi (rational
functions whose denominators do not vanish there).  The exponents are the
local invariant exponents: their prefix sums equal the (z-xi)-adic valuations
of the gcds of k x k minors, which tests verify independently.

kernel_projection turns the factorization into the holomorphic idempotent
P = F^-1 * diag(0, I) * F whose image agrees with ker M(z) away from xi and is
contained in it at xi; when all exponents vanish the agreement includes xi and
holomorphic_kernel_section extends any kernel vector at xi to an exact
polynomial-family kernel section.

invariant_factors is the global Smith form over Q(i)[x] (Euclidean pivoting
with the divisibility chain enforced); it serves the pointwise similarity test
and rank-drop loci.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .algebra import (
    FuncMatrix,
    GaussianRational,
    GR_ONE,
    GR_ZERO,
    Poly,
    PolyMatrix,
    RationalFunction,
    poly_divmod_univariate,
)


class SmithError(ValueError):
    """Raised for precondition violations in this module."""


@dataclass(frozen=True)
class SmithFactorization:
    """Local factorization M = E * D * F at `point` with D = diag((z-point)^k)."""

    point: GaussianRational
    E: FuncMatrix
    exponents: tuple[int, ...]
    F: FuncMatrix
    generic_rank: int

    @property
    def variables(self) -> tuple:
        return self.E.variables

    def diagonal(self) -> PolyMatrix:
        """The middle factor as an explicit polynomial matrix."""
        vs = self.variables
        n = self.E.rows
        m = self.F.rows
        shift = Poly.variable(vs, vs[0]) - Poly.constant(vs, self.point)
        zero = Poly.zero(vs)
        grid = [[zero] * m for _ in range(n)]
        for idx, k in enumerate(self.exponents):
            grid[idx][idx] = shift**k
        return PolyMatrix(grid)

    def reconstruct(self) -> FuncMatrix:
        return self.E * self.diagonal().to_func() * self.F


@dataclass(frozen=True)
class KernelProjection:
    """Holomorphic idempotent whose image is ker M away from `point`."""

    point: GaussianRational
    P: FuncMatrix
    exponents: tuple[int, ...]

    def constant_kernel_dimension(self) -> bool:
        return all(k == 0 for k in self.exponents)


def _unit_part(f: RationalFunction, valuation: int) -> RationalFunction:
    """f / z^valuation for univariate f with that exact vanishing order at 0."""
    coeffs = f.numerator.coefficients()
    num = Poly.from_coefficients(f.variables, coeffs[valuation:])
    return RationalFunction(num, f.denominator)


def _valuation(f: RationalFunction) -> int | None:
    """Vanishing order at 0, or None for the zero function."""
    if not f:
        return None
    return f.numerator.valuation()


def local_smith(m: PolyMatrix | FuncMatrix, point: GaussianRational) -> SmithFactorization:
    """Local Smith factorization of a univariate matrix family at `point`.

    Accepts polynomial entries or rational-function entries from the local
    ring at the point (denominators nonvanishing there).  Pivots on a
    minimal-valuation entry (ties broken by smallest (row, col)) and clears
    with row/column operations that are invertible over the local ring, so E
    and F are exact units at the point.
    """
    if len(m.variables) != 1:
        raise SmithError("local_smith requires a univariate matrix")
    pt = point if isinstance(point, GaussianRational) else GaussianRational(point)
    vs = m.variables
    if isinstance(m, PolyMatrix):
        m = m.to_func()
    if not m.defined_at([pt]):
        raise SmithError("matrix entries must lie in the local ring at the point")
    z_shift = Poly.variable(vs, vs[0]) + Poly.constant(vs, pt)
    shifted = m.substitute({vs[0]: z_shift}) if pt else m

    n, cols = shifted.rows, shifted.cols
    work = [list(row) for row in shifted.entries]
    e = [list(row) for row in FuncMatrix.identity(n, vs).entries]
    f = [list(row) for row in FuncMatrix.identity(cols, vs).entries]

    exponents: list[int] = []
    for k in range(min(n, cols)):
        best = None
        for i in range(k, n):
            for j in range(k, cols):
                v = _valuation(work[i][j])
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        kappa, pi, pj = best
        if pi != k:
            work[k], work[pi] = work[pi], work[k]
            for row in e:
                row[k], row[pi] = row[pi], row[k]
        if pj != k:
            for row in work:
                row[k], row[pj] = row[pj], row[k]
            f[k], f[pj] = f[pj], f[k]

        unit = _unit_part(work[k][k], kappa)
        inv_unit = unit.inverse()
        for j in range(k, cols):
            work[k][j] = work[k][j] * inv_unit
        for r in range(n):
            e[r][k] = e[r][k] * unit

        pivot_inv = work[k][k].inverse()
        for i in range(k + 1, n):
            if work[i][k]:
                factor = work[i][k] * pivot_inv
                for j in range(k, cols):
                    work[i][j] = work[i][j] - factor * work[k][j]
                for r in range(n):
                    e[r][k] = e[r][k] + factor * e[r][i]
        for j in range(k + 1, cols):
            if work[k][j]:
                factor = work[k][j] * pivot_inv
                for i in range(n):
                    work[i][j] = work[i][j] - factor * work[i][k]
                for c in range(cols):
                    f[k][c] = f[k][c] + factor * f[j][c]
        exponents.append(kappa)

    if any(a > b for a, b in zip(exponents, exponents[1:])):
        raise AssertionError("local Smith exponents came out decreasing")

    if pt:
        z = Poly.variable(vs, vs[0])
        back = {vs[0]: z - Poly.constant(vs, pt)}
        e = [[entry.substitute(back) for entry in row] for row in e]
        f = [[entry.substitute(back) for entry in row] for row in f]
    return SmithFactorization(
        point=pt,
        E=FuncMatrix(e),
        exponents=tuple(exponents),
        F=FuncMatrix(f),
        generic_rank=len(exponents),
    )


def kernel_projection(m: PolyMatrix, point: GaussianRational) -> KernelProjection:
    """The idempotent P = F^-1 diag(0_r, I_{m-r}) F from the local factorization."""
    fact = local_smith(m, point)
    cols = m.cols
    r = fact.generic_rank
    vs = m.variables
    inv = linalg.invert(
        [list(row) for row in fact.F.entries],
        RationalFunction.constant(vs, GR_ONE),
        RationalFunction.constant(vs, GR_ZERO),
    )
    if inv is None:
        raise AssertionError("Smith factor F must be invertible over the function field")
    one = RationalFunction.constant(vs, GR_ONE)
    zero = RationalFunction.constant(vs, GR_ZERO)
    selector = FuncMatrix(
        [[one if (i == j and i >= r) else zero for j in range(cols)] for i in range(cols)]
    )
    p = FuncMatrix(inv) * selector * fact.F
    return KernelProjection(point=fact.point, P=p, exponents=fact.exponents)


def holomorphic_kernel_section(
    m: PolyMatrix, point: GaussianRational, v: Sequence[GaussianRational]
) -> list[RationalFunction]:
    """Extend v in ker M(point) to h(z) with M h = 0 exactly and h(point) = v.

    When the kernel dimension is constant near the point (all local Smith
    exponents zero) success is guaranteed.  With a dimension jump the
    projection is still applied and the result certified a posteriori: if it
    fails to fix v at the point, the jump error is raised.
    """
    pt = point if isinstance(point, GaussianRational) else GaussianRational(point)
    vec = [x if isinstance(x, GaussianRational) else GaussianRational(x) for x in v]
    if len(vec) != m.cols:
        raise SmithError("vector length does not match matrix columns")
    at_pt = m.evaluate([pt])
    image = linalg.mat_vec(at_pt, vec, GR_ZERO)
    if any(image):
        raise SmithError("v not in kernel: M(point)·v is nonzero")
    proj = kernel_projection(m, pt)
    zero = RationalFunction.constant(m.variables, GR_ZERO)
    const = [RationalFunction.constant(m.variables, x) for x in vec]
    h = linalg.mat_vec([list(row) for row in proj.P.entries], const, zero)
    at_point = [entry.evaluate([pt]) for entry in h]
    if any(a != b for a, b in zip(at_point, vec)):
        if proj.constant_kernel_dimension():
            raise AssertionError("projection failed to fix a kernel vector despite constant dimension")
        raise SmithError("kernel dimension jumps at the point")
    return h


# ---------------------------------------------------------------------------
# Global Smith form over Q(i)[x]


def invariant_factors(m: PolyMatrix) -> list[Poly]:
    """Monic invariant factors s_1 | s_2 | ... of a univariate polynomial matrix.

    Classical Smith reduction over the Euclidean domain Q(i)[x]: pivot on a
    minimal-degree entry, reduce row and column by polynomial division, and
    fold non-divisible submatrix entries into the pivot row until the
    divisibility chain holds.
    """
    if len(m.variables) != 1:
        raise SmithError("invariant_factors requires a univariate matrix")
    work = [list(row) for row in m.entries]
    n, cols = m.rows, m.cols
    factors: list[Poly] = []
    for k in range(min(n, cols)):
        if not _move_min_degree_pivot(work, k, n, cols):
            break
        while True:
            dirty = False
            for i in range(k + 1, n):
                if work[i][k]:
                    q, r = poly_divmod_univariate(work[i][k], work[k][k])
                    for j in range(k, cols):
                        work[i][j] = work[i][j] - q * work[k][j]
                    if r:
                        dirty = True
            for j in range(k + 1, cols):
                if work[k][j]:
                    q, r = poly_divmod_univariate(work[k][j], work[k][k])
                    for i in range(k, n):
                        work[i][j] = work[i][j] - q * work[i][k]
                    if r:
                        dirty = True
            if dirty:
                _move_min_degree_pivot(work, k, n, cols)
                continue
            offender = None
            for i in range(k + 1, n):
                for j in range(k + 1, cols):
                    if work[i][j]:
                        _, r = poly_divmod_univariate(work[i][j], work[k][k])
                        if r:
                            offender = i
                            break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(k, cols):
                work[k][j] = work[k][j] + work[offender][j]
        pivot = work[k][k]
        lead = pivot.coefficients()[-1]
        if lead != GR_ONE:
            inv = lead.inverse()
            pivot = pivot.map_coefficients(lambda c: c * inv)
        factors.append(pivot)
    return factors


def _move_min_degree_pivot(work: list[list[Poly]], k: int, n: int, cols: int) -> bool:
    best = None
    for i in range(k, n):
        for j in range(k, cols):
            p = work[i][j]
            if p:
                d = p.degree_in(p.variables[0])
                if best is None or d < best[0]:
                    best = (d, i, j)
    if best is None:
        return False
    _, pi, pj = best
    if pi != k:
        work[k], work[pi] = work[pi], work[k]
    if pj != k:
        for row in work:
            row[k], row[pj] = row[pj], row[k]
    return True


def minor_gcd_valuation(m: PolyMatrix, point: GaussianRational, k: int) -> int | None:
    """(z-point)-adic valuation of the gcd of all k x k minors, or None if all vanish.

    Independent oracle for the local Smith exponents: the sum k_1 + ... + k_j
    must equal this valuation for every j up to the generic rank.
    """
    if len(m.variables) != 1:
        raise SmithError("minor_gcd_valuation requires a univariate matrix")
    from itertools import combinations

    pt = point if isinstance(point, GaussianRational) else GaussianRational(point)
    shifted = m.map(lambda p: p.shift_univariate(pt))
    best: int | None = None
    rows = range(shifted.rows)
    cols = range(shifted.cols)
    one = RationalFunction.constant(m.variables, GR_ONE)
    zero = RationalFunction.constant(m.variables, GR_ZERO)
    for rsel in combinations(rows, k):
        for csel in combinations(cols, k):
            sub = [[RationalFunction(shifted.entries[i][j]) for j in csel] for i in rsel]
            d = linalg.det(sub, one, zero)
            if d:
                v = d.numerator.valuation()
                if best is None or v < best:
                    best = v
                if best == 0:
                    return 0
    return best
