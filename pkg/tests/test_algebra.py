"""Algebra layer: exact scalars, polynomials, rational functions, jets."""

import random

import pytest

from similitude.algebra import (
    AlgebraError,
    GR_I,
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    Jet,
    Poly,
    PolyMatrix,
    RationalFunction,
    format_polynomial,
    generic_rank,
    parse_gaussian_rational,
    parse_polynomial,
    poly_eval,
    poly_substitute,
    rational_to_jet,
)

g = GaussianRational


def rand_scalar(rng, span=6):
    return g(rng.randint(-span, span), rng.randint(-span, span))


def rand_poly(rng, variables, degree, span=4):
    terms = {}
    width = len(variables)
    for _ in range(rng.randint(1, 6)):
        expo = [0] * width
        budget = rng.randint(0, degree)
        for _ in range(budget):
            expo[rng.randrange(width)] += 1
        terms[tuple(expo)] = rand_scalar(rng, span)
    return Poly(variables, terms)


class TestGaussianRational:
    def test_exactness(self):
        rng = random.Random(0)
        for _ in range(100):
            a, b = rand_scalar(rng), rand_scalar(rng)
            assert (a + b) - b == a
            if b:
                assert (a / b) * b == a

    def test_canonical_strings(self):
        assert str(g(3, 0)) == "3"
        assert str(g(0, 1)) == "1i"
        assert str(g(0, -2)) == "-2i"
        assert str(parse_gaussian_rational("3/2+1/2i")) == "3/2+1/2i"
        assert str(parse_gaussian_rational("1-2i")) == "1-2i"
        assert parse_gaussian_rational("-i") == g(0, -1)

    def test_parse_rejects_garbage(self):
        with pytest.raises(AlgebraError):
            parse_gaussian_rational("3+")
        with pytest.raises(AlgebraError):
            parse_gaussian_rational("x")


class TestPolyEval:
    def test_square_plus_one(self):
        p = Poly.parse("z^2+1", ["z"])
        assert poly_eval(p, [g(2)]) == g(5)

    def test_zero_factor(self):
        p = Poly.parse("z*w", ["z", "w"])
        assert poly_eval(p, [g(0), g(7)]) == GR_ZERO

    def test_at_i(self):
        # z^3 + i z at z = i: i^3 = -i, so -i + i*i = -1 - i
        p = Poly.parse("z^3+1i*z", ["z"])
        assert poly_eval(p, [GR_I]) == g(-1, -1)

    def test_arity_mismatch(self):
        p = Poly.parse("z", ["z"])
        with pytest.raises(AlgebraError):
            poly_eval(p, [g(1), g(2)])


class TestPolySubstitute:
    def test_cusp_parameterization(self):
        # ell = 0: z^(l+3) with z -> t^3 gives t^9
        p = Poly.parse("z^3", ["z"])
        t3 = Poly.parse("t^3", ["t"])
        assert poly_substitute(p, {"z": t3}) == Poly.parse("t^9", ["t"])

    def test_identity(self):
        p = Poly.parse("z", ["z"])
        assert poly_substitute(p, {"z": Poly.parse("z", ["z"])}) == p

    def test_exponent_bookkeeping(self):
        p = Poly.parse("z^2*w^2", ["z", "w"])
        t3 = Poly.parse("t^3", ["t"])
        t4 = Poly.parse("t^4", ["t"])
        assert poly_substitute(p, {"z": t3, "w": t4}) == Poly.parse("t^14", ["t"])

    def test_unbound_variable(self):
        p = Poly.parse("z*w", ["z", "w"])
        with pytest.raises(AlgebraError):
            poly_substitute(p, {"z": Poly.parse("t", ["t"])})


class TestRationalToJet:
    def test_geometric_series(self):
        f = RationalFunction(Poly.parse("1", ["z"]), Poly.parse("1-z", ["z"]))
        assert rational_to_jet(f, 3) == Jet.from_poly(Poly.parse("1+z+z^2+z^3", ["z"]), 3)

    def test_polynomial_passes_through(self):
        f = RationalFunction(Poly.parse("z", ["z"]))
        assert rational_to_jet(f, 5) == Jet.from_poly(Poly.parse("z", ["z"]), 5)

    def test_bivariate(self):
        f = RationalFunction(
            Poly.parse("1+w", ["z", "w"]), Poly.parse("1+z", ["z", "w"])
        )
        expected = Poly.parse("1+w-z-z*w+z^2", ["z", "w"])
        assert rational_to_jet(f, 2) == Jet.from_poly(expected, 2)

    def test_denominator_vanishing_at_origin(self):
        f = RationalFunction(Poly.parse("1", ["z"]), Poly.parse("z", ["z"]))
        with pytest.raises(AlgebraError):
            rational_to_jet(f, 2)

    def test_inverse_pairs_multiply_to_one(self):
        rng = random.Random(3)
        for _ in range(25):
            num = rand_poly(rng, ("z", "w"), 3)
            den = rand_poly(rng, ("z", "w"), 3)
            if not num.constant_coefficient() or not den.constant_coefficient():
                continue
            f = RationalFunction(num, den)
            order = 4
            prod = rational_to_jet(f, order) * rational_to_jet(f.inverse(), order)
            assert prod == Jet.constant(("z", "w"), order, GR_ONE)


class TestGenericRank:
    def test_examples(self):
        assert generic_rank(PolyMatrix.from_strings([["z", "0"], ["0", "1"]], ["z"])) == 2
        assert generic_rank(PolyMatrix.from_strings([["0", "0"], ["0", "0"]], ["z"])) == 0
        assert generic_rank(PolyMatrix.from_strings([["z", "z"], ["z", "z"]], ["z"])) == 1

    def test_rank_semicontinuity(self):
        import similitude.linalg as linalg

        rng = random.Random(5)
        for _ in range(20):
            m = PolyMatrix(
                [[rand_poly(rng, ("z",), 3) for _ in range(3)] for _ in range(3)]
            )
            r = generic_rank(m)
            pt = rand_scalar(rng, 4)
            assert linalg.rank(m.evaluate([pt])) <= r


class TestRingLaws:
    def test_poly_ring_laws(self):
        rng = random.Random(11)
        vs = ("z", "w")
        for _ in range(100):
            a = rand_poly(rng, vs, 6)
            b = rand_poly(rng, vs, 6)
            c = rand_poly(rng, vs, 6)
            assert (a + b) + c == a + (b + c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c
            assert (a * b) * c == a * (b * c)

    def test_jet_ring_laws(self):
        rng = random.Random(12)
        vs = ("z", "w")
        for _ in range(100):
            a = Jet.from_poly(rand_poly(rng, vs, 6), 5)
            b = Jet.from_poly(rand_poly(rng, vs, 6), 5)
            c = Jet.from_poly(rand_poly(rng, vs, 6), 5)
            assert (a + b) + c == a + (b + c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c
            assert (a * b) * c == a * (b * c)

    def test_eval_compose_law(self):
        rng = random.Random(13)
        for _ in range(50):
            p = rand_poly(rng, ("z", "w"), 4)
            f = rand_poly(rng, ("t",), 3)
            h = rand_poly(rng, ("t",), 3)
            point = [rand_scalar(rng, 3)]
            composed = poly_substitute(p, {"z": f, "w": h})
            assert poly_eval(composed, point) == poly_eval(
                p, [poly_eval(f, point), poly_eval(h, point)]
            )


class TestGrammar:
    CANONICAL = [
        "z^2*w^2",
        "z^3",
        "0",
        "-z^2+2*z-1",
        "3/2+1/2i",
        "1i*z+3",
        "1i",
        "z^2-z*w-z+w+1",
        "1-2i*z",
        "-2i*z+1",
    ]

    def test_round_trip_is_identity_on_canonical_form(self):
        for text in self.CANONICAL:
            p = parse_polynomial(text, ["z", "w"])
            printed = format_polynomial(p)
            assert parse_polynomial(printed, ["z", "w"]) == p
            assert format_polynomial(parse_polynomial(printed, ["z", "w"])) == printed

    def test_random_round_trips(self):
        rng = random.Random(17)
        for _ in range(100):
            p = rand_poly(rng, ("z", "w"), 5)
            printed = format_polynomial(p)
            assert parse_polynomial(printed, ["z", "w"]) == p

    def test_mixed_coefficient_is_unambiguous(self):
        # (1-2i)*z versus the sum 1 + (-2i)*z: distinct canonical strings
        mixed = Poly.monomial(("z",), (1,), g(1, -2))
        split = Poly.constant(("z",), g(1)) + Poly.monomial(("z",), (1,), g(0, -2))
        assert format_polynomial(mixed) != format_polynomial(split)
        for p in (mixed, split):
            assert parse_polynomial(format_polynomial(p), ["z"]) == p
