#include <catch2/catch_amalgamated.hpp>

#include "mvforge/eigenhopf.hpp"
#include "test_util.hpp"

using namespace mvforge;

namespace {

QuadExt q5(const Rational& a, const Rational& b = 0) { return QuadExt(a, b, 5); }

SegmentFunction restrict_term(const std::string& src, const EigenSegment& w) {
    return restrict_to_segment(from_term(parse_term(src, int(w.w.size())), int(w.w.size())), w);
}

}  // namespace

TEST_CASE("unimodular matrix construction") {
    UnimodularMatrix L({{Integer(1), Integer(-1)}, {Integer(-1), Integer(2)}});
    REQUIRE(L.dim() == 2);
    CHECK(int_determinant(L.m) == 1);

    CHECK_THROWS_AS(UnimodularMatrix({{Integer(2), Integer(0)}, {Integer(0), Integer(1)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(UnimodularMatrix({{Integer(1), Integer(0)}}), std::invalid_argument);

    RatPoint p{Rational(1, 3), Rational(2, 7)};
    RatPoint lp = L.apply(p);
    CHECK(lp[0] == Rational(1, 3) - Rational(2, 7));
    CHECK(lp[1] == Rational(4, 7) - Rational(1, 3));
}

TEST_CASE("contracting eigen data of the unit determinant pair") {
    Figure1 fig = build_figure1();

    CHECK(fig.lambda == q5(Rational(3, 2), Rational(-1, 2)));
    CHECK(fig.w.w[0] == q5(Rational(1, 2)));
    CHECK(fig.w.w[1] == q5(Rational(-1, 4), Rational(1, 4)));

    std::vector<QuadExt> lw = fig.L.apply(fig.w.w);
    CHECK(lw[0] == q5(Rational(3, 4), Rational(-1, 4)));
    CHECK(lw[1] == q5(-1, Rational(1, 2)));

    CHECK(verify_eigen(fig.L, fig.lambda, fig.w.w));

    SECTION("rejections") {
        UnimodularMatrix id({{Integer(1), Integer(0)}, {Integer(0), Integer(1)}});
        CHECK_FALSE(verify_eigen(id, q5(1), fig.w.w));
        CHECK_FALSE(verify_eigen(fig.L, q5(Rational(3, 2), Rational(1, 2)), fig.w.w));
        CHECK_THROWS_AS(verify_eigen(fig.L, fig.lambda, {q5(Rational(1, 2))}), std::invalid_argument);
    }

    SECTION("lambda is in (0,1) and w is in the box") {
        CHECK(fig.lambda.sign() > 0);
        CHECK(fig.lambda < q5(1));
        for (const auto& c : fig.w.w) {
            CHECK(c.sign() > 0);
            CHECK(c <= q5(Rational(1, 2)));
        }
    }
}

TEST_CASE("rational points on the segment") {
    Figure1 fig = build_figure1();
    CHECK(no_nonzero_rational_on_segment(fig.w));

    CHECK_FALSE(no_nonzero_rational_on_segment({q5(Rational(1, 2)), q5(Rational(1, 4))}));
    CHECK(no_nonzero_rational_on_segment(
        {QuadExt(Rational(1, 3), 0, 2), QuadExt(0, Rational(1, 6), 2)}));
    CHECK_THROWS_AS(no_nonzero_rational_on_segment(std::vector<QuadExt>{q5(0), q5(0)}),
                    std::invalid_argument);

    // irrational coordinates with a rational direction still hit lattice points
    CHECK_FALSE(no_nonzero_rational_on_segment(
        {QuadExt(0, Rational(1, 4), 2), QuadExt(0, Rational(1, 4), 2)}));
}

TEST_CASE("eigen segment endpoint validation") {
    CHECK_THROWS_AS(EigenSegment({q5(Rational(3, 4))}), std::invalid_argument);
    CHECK_THROWS_AS(EigenSegment({q5(0)}), std::invalid_argument);
    CHECK_THROWS_AS(EigenSegment({q5(Rational(1, 4)), QuadExt(Rational(1, 4), 0, 2)}),
                    std::invalid_argument);
    CHECK_NOTHROW(EigenSegment({q5(Rational(1, 2)), q5(Rational(-1, 4), Rational(1, 4))}));
}

TEST_CASE("restriction to the segment") {
    Figure1 fig = build_figure1();
    const EigenSegment& w = fig.w;

    SECTION("coordinate function") {
        SegmentFunction s = restrict_term("x1", w);
        REQUIRE(s.slopes().size() == 1);
        CHECK(s.slopes()[0] == q5(Rational(1, 2)));
        CHECK(s.intercepts()[0] == q5(0));
        CHECK(s.provenance() != nullptr);
    }

    SECTION("constant one") {
        SegmentFunction s = restrict_term("~0", w);
        REQUIRE(s.slopes().size() == 1);
        CHECK(s.slopes()[0] == q5(0));
        CHECK(s.intercepts()[0] == q5(1));
    }

    SECTION("doubling stays below the cap along the segment") {
        SegmentFunction s = restrict_term("x1 (+) x1", w);
        REQUIRE(s.slopes().size() == 1);
        CHECK(s.slopes()[0] == q5(1));
        CHECK(s.intercepts()[0] == q5(0));
    }

    SECTION("quadrupling the second coordinate breaks at an irrational parameter") {
        SegmentFunction s = restrict_term("(x2 (+) x2) (+) (x2 (+) x2)", w);
        // 4 * w2 * t caps at 1 when t = 1/(4 w2) = (sqrt5 + 1)/4
        REQUIRE(s.breaks().size() == 3);
        CHECK(s.breaks()[1] == q5(Rational(1, 4), Rational(1, 4)));
        CHECK(s.eval(s.breaks()[1]) == q5(1));
        CHECK(s.eval(q5(1)) == q5(1));
        CHECK(s.slopes()[1] == q5(0));
        CHECK_FALSE(s.breaks()[1].is_rational());
    }

    SECTION("restriction along a rational segment matches pointwise evaluation") {
        // a rational endpoint keeps every segment point rational, so the
        // carrier function itself is the oracle
        EigenSegment wr({q5(Rational(1, 2)), q5(Rational(1, 3))});
        std::mt19937 rng(4243);
        for (int trial = 0; trial < 40; ++trial) {
            MVTerm t = mvtest::random_term(rng, 2, 4);
            McNFunction f = from_term(t, 2);
            SegmentFunction s = restrict_to_segment(f, wr);
            for (int k = 0; k <= 12; ++k) {
                Rational tr(k, 12);
                Rational direct = f.eval_at({tr * Rational(1, 2), tr * Rational(1, 3)});
                CHECK(s.eval(QuadExt::from_rational(tr, 5)) == QuadExt::from_rational(direct, 5));
            }
        }
    }

    SECTION("restriction at the irrational endpoint agrees at the origin") {
        std::mt19937 rng(5253);
        for (int trial = 0; trial < 20; ++trial) {
            McNFunction f = from_term(mvtest::random_term(rng, 2, 4), 2);
            SegmentFunction s = restrict_to_segment(f, w);
            CHECK(s.eval(q5(0)) == QuadExt::from_rational(f.eval_at({Rational(0), Rational(0)}), 5));
        }
    }

    SECTION("arity mismatch") {
        McNFunction f = from_term(parse_term("x1", 1), 1);
        CHECK_THROWS_AS(restrict_to_segment(f, w), std::invalid_argument);
    }
}

TEST_CASE("segment function algebra") {
    Figure1 fig = build_figure1();
    const EigenSegment& w = fig.w;

    SegmentFunction x1 = restrict_term("x1", w);
    SegmentFunction x2 = restrict_term("x2", w);
    SegmentFunction one = restrict_term("~0", w);
    SegmentFunction zero = restrict_term("0", w);

    CHECK(seg_neg(zero) == one);
    CHECK(seg_neg(seg_neg(x1)) == x1);
    CHECK(seg_plus(x1, zero) == x1);
    CHECK(seg_plus(x1, one) == one);
    CHECK(seg_join(x1, x2) == x1);  // w1 > w2 pointwise on (0,1]
    CHECK(seg_meet(x1, x2) == x2);
    CHECK(zero.is_zero());
    CHECK_FALSE(x1.is_zero());

    SECTION("restriction is a hom for the four connectives") {
        std::mt19937 rng(515);
        for (int trial = 0; trial < 35; ++trial) {
            MVTerm ta = mvtest::random_term(rng, 2, 3);
            MVTerm tb = mvtest::random_term(rng, 2, 3);
            McNFunction fa = from_term(ta, 2), fb = from_term(tb, 2);
            SegmentFunction ra = restrict_to_segment(fa, w), rb = restrict_to_segment(fb, w);
            CHECK(restrict_to_segment(mv_plus(fa, fb), w) == seg_plus(ra, rb));
            CHECK(restrict_to_segment(mv_neg(fa), w) == seg_neg(ra));
            CHECK(restrict_to_segment(mv_join(fa, fb), w) == seg_join(ra, rb));
            CHECK(restrict_to_segment(mv_meet(fa, fb), w) == seg_meet(ra, rb));
        }
    }
}

TEST_CASE("eigen substitution") {
    Figure1 fig = build_figure1();
    const EigenSegment& w = fig.w;
    const QuadExt& lam = fig.lambda;

    SECTION("linear pieces rescale") {
        SegmentFunction s = restrict_term("x1", w);  // t/2
        SegmentFunction ss = sigma_eigen(s, lam);
        REQUIRE(ss.slopes().size() == 1);
        CHECK(ss.slopes()[0] == lam * q5(Rational(1, 2)));
        CHECK(ss.intercepts()[0] == q5(0));
    }

    SECTION("constants are fixed") {
        SegmentFunction s = restrict_term("~0", w);
        CHECK(sigma_eigen(s, lam) == s);
    }

    SECTION("function supported past lambda dies") {
        // zero for t <= lambda, rising to 1/2 after: substitution keeps only the zero part
        QuadExt z = q5(0), o = q5(1);
        QuadExt m = q5(Rational(1, 2)) / (o - lam);
        SegmentFunction s(5, {z, lam, o}, {z, m}, {z, -lam * m}, nullptr);
        CHECK_FALSE(s.is_zero());
        CHECK(sigma_eigen(s, lam).is_zero());
    }

    SECTION("substitution is a hom on restrictions") {
        std::mt19937 rng(616);
        for (int trial = 0; trial < 35; ++trial) {
            MVTerm ta = mvtest::random_term(rng, 2, 3);
            MVTerm tb = mvtest::random_term(rng, 2, 3);
            SegmentFunction ra = restrict_to_segment(from_term(ta, 2), w);
            SegmentFunction rb = restrict_to_segment(from_term(tb, 2), w);
            CHECK(sigma_eigen(seg_plus(ra, rb), lam) == seg_plus(sigma_eigen(ra, lam), sigma_eigen(rb, lam)));
            CHECK(sigma_eigen(seg_neg(ra), lam) == seg_neg(sigma_eigen(ra, lam)));
            CHECK(sigma_eigen(seg_join(ra, rb), lam) == seg_join(sigma_eigen(ra, lam), sigma_eigen(rb, lam)));
            CHECK(sigma_eigen(seg_meet(ra, rb), lam) == seg_meet(sigma_eigen(ra, lam), sigma_eigen(rb, lam)));
        }
    }

    SECTION("substitution is injective on distinct restrictions") {
        std::mt19937 rng(717);
        int checked = 0;
        while (checked < 25) {
            SegmentFunction ra = restrict_to_segment(from_term(mvtest::random_term(rng, 2, 3), 2), w);
            SegmentFunction rb = restrict_to_segment(from_term(mvtest::random_term(rng, 2, 3), 2), w);
            if (ra == rb) continue;
            CHECK(sigma_eigen(ra, lam) != sigma_eigen(rb, lam));
            ++checked;
        }
    }

    SECTION("rejects a non-contracting factor") {
        SegmentFunction s = restrict_term("x1", w);
        CHECK_THROWS_AS(sigma_eigen(s, q5(1)), std::invalid_argument);
        CHECK_THROWS_AS(sigma_eigen(s, q5(0)), std::invalid_argument);
    }
}

TEST_CASE("kernel witness strip") {
    Figure1 fig = build_figure1();

    KernelWitness kw = kernel_witness(fig.w, fig.lambda);
    CHECK(kw.c == Rational(1, 3));  // simplest rational in (lambda/2, 1/2)
    CHECK(kw.restriction_nonzero);
    CHECK(kw.sigma_image_zero);
    CHECK(kw.certificate);

    // the hat is positive at the far end of the segment
    CHECK(kw.restricted.eval(q5(1)).sign() > 0);
    // and vanishes up to the strip boundary t = 2c
    CHECK(kw.restricted.eval(q5(Rational(1, 2))) == q5(0));

    SECTION("strip below lambda/2 fails the certificate") {
        KernelWitness bad = kernel_negative_control(fig.w, fig.lambda);
        CHECK(bad.c == Rational(1, 6));
        CHECK(bad.c < Rational(1, 5));
        CHECK(bad.restriction_nonzero);
        CHECK_FALSE(bad.sigma_image_zero);
        CHECK_FALSE(bad.certificate);
    }
}

TEST_CASE("integer matrices preserve denominators") {
    Figure1 fig = build_figure1();
    std::mt19937 rng(818);
    for (int trial = 0; trial < 100; ++trial) {
        RatPoint p = mvtest::random_point(rng, 2, 30);
        RatPoint lp = fig.L.apply(p);
        // |det| = 1 gives an integer inverse, so the lcm of denominators is preserved
        CHECK(den(lp) == den(p));
    }
}
