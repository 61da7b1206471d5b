"""The counterexample family, jet rigidity, index sets, winding, clutching."""

import cmath
import math
import random

import pytest

from similitude.algebra import GR_ONE, GR_ZERO, GaussianRational, Poly, PolyMatrix
from similitude.rigidity import (
    Cusp,
    FullPlane,
    Lines,
    RigidityError,
    build_family,
    clutching_invertibility,
    cusp_coefficient_support,
    default_order,
    index_sets,
    jet_rigidity,
    parse_variety,
    vandermonde_check,
    vandermonde_product,
    verify_division_identity,
    verify_smooth_similarity,
    winding_number,
)

g = GaussianRational
VARS = ("z", "w")


class TestFamily:
    def test_matrices_for_ell_zero(self):
        fam = build_family(0)
        assert fam.A == PolyMatrix.from_strings(
            [["z^2*w^2", "z^3"], ["w^3", "0"]], VARS
        )
        assert fam.B == PolyMatrix.from_strings(
            [["0", "z^3"], ["w^3", "z^2*w^2"]], VARS
        )

    def test_top_right_entry_for_ell_one(self):
        fam = build_family(1)
        assert fam.A.entries[0][1] == Poly.parse("z^4", VARS)

    def test_c_z_shape(self):
        fam = build_family(0)
        cz = fam.c_z
        assert cz.numerator == Poly.parse("u*w^2", ("z", "w", "u", "v"))
        assert cz.denominator == Poly.parse("z*u+w*v", ("z", "w", "u", "v"))


class TestDivisionIdentity:
    def test_holds_for_small_ell(self):
        for ell in range(7):
            assert verify_division_identity(ell)

    def test_perturbed_identity_fails(self):
        # same combination with the coefficient of one numerator bumped by 1
        z, w, u, v = (Poly.variable(("z", "w", "u", "v"), n) for n in ("z", "w", "u", "v"))
        lhs = (u * w**2 + Poly.constant(("z", "w", "u", "v"), GR_ONE)) * z**3 + v * z**2 * w**3
        rhs = z**2 * w**2 * (z * u + w * v)
        assert lhs - rhs


class TestSmoothSimilarity:
    def test_exact_conjugation_small_ell(self):
        for ell in range(4):
            rep = verify_smooth_similarity(ell)
            assert rep.conjugation_exact
            assert rep.determinant_nonvanishing
            assert rep.max_abs_czcw < 1.0
            assert rep.degree_gap == ell + 1
            assert rep.smoothness_class == ell

    def test_grid_point_value(self):
        # at z = w = 1/2 (real): |c_z c_w| is far below 1
        ell = 0
        zz = ww = complex(0.5, 0.0)
        norm2 = abs(zz) ** 2 + abs(ww) ** 2
        cz = zz.conjugate() * ww ** (2 + ell) / norm2
        cw = ww.conjugate() * zz ** (2 + ell) / norm2
        assert abs(cz * cw) < 1.0


class TestJetRigidityFullPlane:
    def test_relation_forces_zero(self):
        for ell in (0, 1, 2):
            fam = build_family(ell)
            order = 2 * ell + 4
            assert jet_rigidity(fam.A, fam.B, "AHeqHB", FullPlane(), order).is_zero_space()
            assert jet_rigidity(fam.A, fam.B, "HAeqBH", FullPlane(), order).is_zero_space()

    def test_commuting_relation_forces_scalar(self):
        for ell in (0, 1, 2):
            fam = build_family(ell)
            res = jet_rigidity(fam.A, fam.B, "AHeqHA", FullPlane(), 2 * ell + 4)
            assert res.is_scalar_line()

    def test_monotonicity_in_order(self):
        fam = build_family(0)
        dims = [
            jet_rigidity(fam.A, fam.B, "AHeqHA", FullPlane(), order).dimension()
            for order in (4, 6, 8)
        ]
        assert dims[0] >= dims[1] >= dims[2]

    def test_low_order_is_not_rigid(self):
        # below the isolation order the constant jet is unconstrained enough
        fam = build_family(0)
        res = jet_rigidity(fam.A, fam.B, "AHeqHB", FullPlane(), 2)
        assert not res.is_zero_space()


class TestJetRigidityCusp:
    def test_boundary_cusp_leaves_one_direction(self):
        # (p, q) = (4, 3) sits on the boundary q = ell + 3 of the exponent
        # hypothesis: z^4 - w^3 is the curve's own equation, so
        # H = [[0, 1], [z, 0]] intertwines exactly on the cusp and the
        # admissible H(0) form the line through [[0,1],[0,0]].
        fam = build_family(0)
        res = jet_rigidity(fam.A, fam.B, "AHeqHB", Cusp(4, 3), 21)
        assert [[str(x) for x in v] for v in res.solution_space] == [["0", "1", "0", "0"]]
        # det H(0) = 0 on the whole admissible space: the similarity
        # obstruction (no invertible H(0)) survives
        assert not res.contains_invertible()

    def test_explicit_intertwiner_on_boundary_cusp(self):
        fam = build_family(0)
        z = Poly.variable(VARS, "z")
        one = Poly.constant(VARS, GR_ONE)
        zero = Poly.zero(VARS)
        h = PolyMatrix([[zero, one], [z, zero]])
        residue = fam.A * h - h * fam.B
        curve = Poly.parse("z^4-w^3", VARS)
        assert residue.entries[0][0] == curve
        assert residue.entries[1][1] == -curve
        assert not residue.entries[0][1] and not residue.entries[1][0]

    def test_interior_cusp_is_rigid(self):
        # (p, q) = (5, 4) satisfies the hypothesis strictly: q >= ell + 4
        fam = build_family(0)
        res = jet_rigidity(fam.A, fam.B, "AHeqHB", Cusp(5, 4), 27)
        assert res.is_zero_space()

    def test_cusp_validation(self):
        with pytest.raises(RigidityError, match="coprime"):
            Cusp(2, 2)


class TestJetRigidityLines:
    def test_five_lines_force_zero(self):
        fam = build_family(0)
        res = jet_rigidity(
            fam.A, fam.B, "AHeqHB", Lines(tuple(g(i) for i in (1, 2, 3, 4, 5))), 4
        )
        assert res.is_zero_space()

    def test_two_lines_admit_invertible_jet(self):
        fam = build_family(0)
        res = jet_rigidity(fam.A, fam.B, "AHeqHB", Lines((g(1), g(2))), 4)
        assert res.contains_invertible()

    def test_repeated_slopes_rejected(self):
        with pytest.raises(RigidityError, match="distinct"):
            Lines((g(1), g(1)))

    def test_variety_parsing(self):
        assert parse_variety("full") == FullPlane()
        assert parse_variety("cusp:4,3") == Cusp(4, 3)
        assert parse_variety("lines:1,2") == Lines((g(1), g(2)))
        assert default_order(Cusp(4, 3), 0) == 21
        assert default_order(FullPlane(), 1) == 6


class TestIndexSets:
    def test_boundary_instances_have_one_collision(self):
        # q = ell + 3 puts (p - ell - 3, 0) into B_alpha; the other five are empty
        s = index_sets(4, 3, 0)
        assert s.B_alpha == frozenset({(1, 0)})
        assert not (s.A_beta or s.A_gamma or s.B_gamma or s.C_alpha or s.C_beta)
        s2 = index_sets(7, 5, 2)
        assert s2.B_alpha == frozenset({(2, 0)})
        assert not (s2.A_beta or s2.A_gamma or s2.B_gamma or s2.C_alpha or s2.C_beta)

    def test_interior_instances_are_empty(self):
        assert index_sets(5, 4, 0).all_empty()
        assert index_sets(7, 6, 2).all_empty()

    def test_degenerate_exponents_collide(self):
        s = index_sets(2, 2, 0)
        assert not s.all_empty()
        assert (0, 0) in s.A_beta

    def test_support_cross_check(self):
        # independent enumeration of the compared powers' Taylor support
        for (p, q, ell) in [(4, 3, 0), (7, 5, 2), (5, 4, 0), (7, 6, 2), (3, 2, 0)]:
            sets_ = index_sets(p, q, ell)
            sup = cusp_coefficient_support(p, q, ell)
            assert sup["t_alpha"]["alpha"] == frozenset({(0, 0)})
            assert sup["t_alpha"]["beta"] == sets_.A_beta
            assert sup["t_alpha"]["gamma"] == sets_.A_gamma
            assert sup["t_beta"]["beta"] == frozenset({(0, 0)})
            assert sup["t_beta"]["alpha"] == sets_.B_alpha
            assert sup["t_beta"]["gamma"] == sets_.B_gamma
            assert sup["t_gamma"]["gamma"] == frozenset({(0, 0)})
            assert sup["t_gamma"]["alpha"] == sets_.C_alpha
            assert sup["t_gamma"]["beta"] == sets_.C_beta

    def test_emptiness_matches_cusp_rigidity(self):
        # where all six sets are empty the cusp jet computation is rigid;
        # on the boundary instance the collision direction survives
        fam = build_family(0)
        assert index_sets(5, 4, 0).all_empty()
        assert jet_rigidity(fam.A, fam.B, "AHeqHB", Cusp(5, 4), 27).is_zero_space()
        assert not index_sets(4, 3, 0).all_empty()
        assert not jet_rigidity(fam.A, fam.B, "AHeqHB", Cusp(4, 3), 21).is_zero_space()


class TestVandermonde:
    def test_three_nodes(self):
        ok, det = vandermonde_check([g(1), g(2), g(3)])
        assert ok and det == g(2)

    def test_repeated_node(self):
        ok, det = vandermonde_check([g(1), g(1)])
        assert not ok and det == GR_ZERO

    def test_two_nodes(self):
        ok, det = vandermonde_check([g(0), g(1)])
        assert ok and det == GR_ONE

    def test_matches_product_form(self):
        rng = random.Random(97)
        for _ in range(10):
            nodes = []
            seen = set()
            for _k in range(rng.randint(1, 5)):
                while True:
                    t = g(rng.randint(-4, 4), rng.randint(-2, 2))
                    if (t.re, t.im) not in seen:
                        seen.add((t.re, t.im))
                        nodes.append(t)
                        break
            _, det = vandermonde_check(nodes)
            assert det == vandermonde_product(nodes)


class TestWindingNumber:
    def _circle(self, turns, count=64):
        return [
            cmath.exp(1j * turns * 2.0 * math.pi * k / count) for k in range(count)
        ]

    def test_unit_circle(self):
        assert winding_number(self._circle(1)) == 1

    def test_double_reverse(self):
        assert winding_number(self._circle(-2)) == -2

    def test_constant_curve(self):
        assert winding_number([complex(2.0, 1.0)] * 8) == 0

    def test_reversal_negates(self):
        rng = random.Random(101)
        for turns in (1, 2, -1, 3):
            curve = self._circle(turns, 96)
            # jiggle the radius so the curve is not perfectly round
            curve = [s * (1.0 + 0.2 * math.sin(5 * k)) for k, s in enumerate(curve)]
            assert winding_number(list(reversed(curve))) == -winding_number(curve)
        del rng

    def test_concatenation_adds(self):
        a = self._circle(1, 128)
        b = self._circle(2, 128)
        # traverse a, return to start, then traverse b: indices add
        combined = a + [a[0]] + b + [b[0]]
        assert winding_number(combined) == winding_number(a) + winding_number(b)

    def test_zero_sample_rejected(self):
        with pytest.raises(RigidityError, match="zero"):
            winding_number([1.0, 0.0, -1.0])

    def test_undersampled_rejected(self):
        with pytest.raises(RigidityError, match="density"):
            winding_number([1.0, -1.0, 1.0, -1.0])


class TestClutching:
    def test_equator_value(self):
        # chi = 1 at height 0 and h h* = 1: det = 1 at the equator
        eps = 0.125
        x3 = 0.0
        chi = 1.0
        det = chi * chi * (1 - x3 * x3) + (1 - chi) ** 2
        assert det == 1.0

    def test_cap_value_is_one(self):
        report = clutching_invertibility("1/8", 32)
        assert report.chi_zero_band_all_one

    def test_pinned_grid_bound(self):
        report = clutching_invertibility("1/8", 32)
        assert report.bound_holds
        assert report.min_re_det >= 0.5
        assert report.samples == 32 * 32

    def test_epsilon_validation(self):
        with pytest.raises(RigidityError):
            clutching_invertibility("1/2", 8)
