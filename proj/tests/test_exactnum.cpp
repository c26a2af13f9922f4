#include <catch2/catch_amalgamated.hpp>

#include "mvforge/contfrac.hpp"
#include "mvforge/quadext.hpp"
#include "mvforge/rational.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <random>

using namespace mvforge;

TEST_CASE("den of points") {
    CHECK(den(RatPoint{Rational(1, 2), Rational(2, 3)}) == 6);
    CHECK(den(RatPoint{0, 0, 0}) == 1);
    CHECK(den(RatPoint{Rational(3, 4), Rational(5, 6), Rational(1, 10)}) == 60);
    CHECK_THROWS_AS(den(RatPoint{}), std::invalid_argument);
}

TEST_CASE("den is the minimal integral scaling") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pd(-20, 20), qd(1, 20);
    for (int i = 0; i < 200; ++i) {
        RatPoint p;
        int n = 1 + int(rng() % 3);
        for (int j = 0; j < n; ++j) p.emplace_back(pd(rng), qd(rng));
        Integer d = den(p);
        for (const auto& c : p) CHECK(mvforge::den(Rational(c * Rational(d))) == 1);
        if (d > 1) {
            // No smaller scaling works.
            for (Integer s = 1; s < d; ++s) {
                bool all = true;
                for (const auto& c : p)
                    if (mvforge::den(Rational(c * Rational(s))) != 1) { all = false; break; }
                CHECK_FALSE(all);
            }
        }
    }
}

TEST_CASE("quadext sign cases") {
    CHECK(QuadExt(Rational(7, 2), Rational(-3, 2), 5).sign() == 1);   // 49 > 45
    CHECK(QuadExt(0, 0, 5).sign() == 0);
    CHECK(QuadExt(-1, 1, 2).sign() == 1);                             // sqrt(2) > 1
    CHECK(QuadExt(Rational(-7, 2), Rational(3, 2), 5).sign() == -1);
    CHECK(QuadExt(3, -1, 5).sign() == 1);                             // 9 > 5
    CHECK(QuadExt(2, -1, 5).sign() == -1);                            // 4 < 5
    CHECK(QuadExt(0, Rational(-1, 7), 3).sign() == -1);
    CHECK(QuadExt(Rational(5, 3), 0, 2).sign() == 1);
}

TEST_CASE("quadext sign agrees with high-precision float, fuzzed") {
    using boost::multiprecision::cpp_dec_float_50;
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pd(-50, 50), qd(1, 50);
    const int Ds[] = {2, 3, 5, 7};
    for (int i = 0; i < 500; ++i) {
        Rational a(pd(rng), qd(rng)), b(pd(rng), qd(rng));
        int D = Ds[rng() % 4];
        QuadExt x(a, b, D);
        cpp_dec_float_50 fa(num(a).str()), fb(num(b).str());
        fa /= cpp_dec_float_50(den(a).str());
        fb /= cpp_dec_float_50(den(b).str());
        cpp_dec_float_50 v = fa + fb * sqrt(cpp_dec_float_50(D));
        // For |p|,q <= 50 the separation bound |a+b*sqrt(D)| >= 6e-10 for
        // nonzero values, far above 50-digit noise.
        if (a == 0 && b == 0)
            CHECK(x.sign() == 0);
        else
            CHECK(x.sign() == (v > 0 ? 1 : -1));
    }
}

TEST_CASE("quadext arithmetic and validation") {
    QuadExt phi(Rational(-1, 2), Rational(1, 2), 5);  // (sqrt(5)-1)/2
    QuadExt one = QuadExt::from_rational(1, 5);
    // phi satisfies x^2 = 1 - x.
    CHECK(phi * phi == one - phi);
    CHECK(phi / phi == one);
    CHECK((one / phi) - phi == one);  // 1/phi = phi + 1
    CHECK_THROWS_AS(QuadExt(1, 1, 4), std::invalid_argument);   // not square-free
    CHECK_THROWS_AS(QuadExt(1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(QuadExt(1, 1, 2) + QuadExt(1, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(QuadExt(1, 1, 5) / QuadExt(0, 0, 5), std::invalid_argument);
}

TEST_CASE("quadext serialization") {
    QuadExt x(Rational(7, 2), Rational(-3, 2), 5);
    CHECK(x.str() == "7/2-3/2*sqrt(5)");
    CHECK(QuadExt::parse(x.str()) == x);
    QuadExt y(Rational(-1, 2), Rational(1, 2), 5);
    CHECK(y.str() == "-1/2+1/2*sqrt(5)");
    CHECK(QuadExt::parse(y.str()) == y);
    CHECK(QuadExt::parse("0+1*sqrt(2)") == QuadExt(0, 1, 2));
    CHECK_THROWS_AS(QuadExt::parse("sqrt(2)"), std::invalid_argument);
}

TEST_CASE("convergents examples") {
    ContinuedFraction golden({0}, {1});
    auto c = golden.convergents(4);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == 0);
    CHECK(c[1] == 1);
    CHECK(c[2] == Rational(1, 2));
    CHECK(c[3] == Rational(2, 3));

    ContinuedFraction two({2});
    CHECK(two.convergents(1) == std::vector<Rational>{Rational(2)});
    CHECK_THROWS_AS(two.convergents(2), std::invalid_argument);

    ContinuedFraction sqrt2m1({0}, {2});
    auto c2 = sqrt2m1.convergents(3);
    CHECK(c2[0] == 0);
    CHECK(c2[1] == Rational(1, 2));
    CHECK(c2[2] == Rational(2, 5));

    CHECK_THROWS_AS(golden.convergents(0), std::invalid_argument);
    CHECK_THROWS_AS(ContinuedFraction({0}, {1, 0}), std::invalid_argument);
}

TEST_CASE("convergents alternate around a quadratic target") {
    QuadExt theta(Rational(-1, 2), Rational(1, 2), 5);  // (sqrt(5)-1)/2
    auto cf = ContinuedFraction::from_quadext(theta);
    auto cs = cf.convergents(12);
    for (size_t i = 0; i < cs.size(); ++i) {
        QuadExt c = QuadExt::from_rational(cs[i], 5);
        if (i % 2 == 0)
            CHECK((c - theta).sign() <= 0);
        else
            CHECK((c - theta).sign() >= 0);
    }
    // Denominators strictly increase from index 2 on.
    for (size_t i = 2; i < cs.size(); ++i) CHECK(den(cs[i]) > den(cs[i - 1]));
}

TEST_CASE("continued fraction from quadext: period detection") {
    QuadExt golden(Rational(-1, 2), Rational(1, 2), 5);
    auto cf = ContinuedFraction::from_quadext(golden);
    REQUIRE(cf.periodic());
    CHECK(cf.head() == std::vector<Integer>{0});
    CHECK(cf.tail() == std::vector<Integer>{1});

    QuadExt s2m1(-1, 1, 2);  // sqrt(2) - 1 = [0; 2,2,2,...]
    auto cf2 = ContinuedFraction::from_quadext(s2m1);
    REQUIRE(cf2.periodic());
    CHECK(cf2.head() == std::vector<Integer>{0});
    CHECK(cf2.tail() == std::vector<Integer>{2});

    // Purely periodic value > 1: golden ratio (1+sqrt(5))/2 = [1;1,1,...].
    QuadExt grat(Rational(1, 2), Rational(1, 2), 5);
    auto cf3 = ContinuedFraction::from_quadext(grat);
    CHECK(cf3.quotient(0) == 1);
    CHECK(cf3.quotient(5) == 1);
    REQUIRE(cf3.periodic());

    // Rational inputs give finite canonical expansions.
    auto cf4 = ContinuedFraction::from_quadext(QuadExt::from_rational(Rational(7, 3), 5));
    CHECK_FALSE(cf4.periodic());
    CHECK(cf4.head() == std::vector<Integer>{2, 3});
    auto cf5 = ContinuedFraction::from_quadext(QuadExt::from_rational(Rational(1, 2), 5));
    CHECK(cf5.head() == std::vector<Integer>{0, 2});

    CHECK_THROWS_AS(ContinuedFraction::from_quadext(QuadExt(-1, 0, 5)), std::invalid_argument);
}

TEST_CASE("group Z+Za criterion") {
    QuadExt a(Rational(-1, 2), Rational(1, 2), 5);        // (sqrt(5)-1)/2
    QuadExt b(Rational(3, 2), Rational(-1, 2), 5);        // (3-sqrt(5))/2 = 1-a
    QuadExt c(Rational(-1, 4), Rational(1, 4), 5);        // (sqrt(5)-1)/4
    CHECK(group_Z_plus_Z_equal(a, b));
    CHECK(group_Z_plus_Z_equal(a, a));
    CHECK_FALSE(group_Z_plus_Z_equal(a, c));
    CHECK_THROWS_AS(group_Z_plus_Z_equal(a, QuadExt::from_rational(Rational(1, 2), 5)),
                    std::invalid_argument);
    // Equivalence relation on a sample closed under x -> 1-x.
    std::vector<QuadExt> sample = {a, b, c, QuadExt(Rational(5, 4), Rational(-1, 4), 5)};
    for (const auto& x : sample)
        for (const auto& y : sample) {
            CHECK(group_Z_plus_Z_equal(x, y) == group_Z_plus_Z_equal(y, x));
            for (const auto& z : sample)
                if (group_Z_plus_Z_equal(x, y) && group_Z_plus_Z_equal(y, z))
                    CHECK(group_Z_plus_Z_equal(x, z));
        }
}

TEST_CASE("farey mediant") {
    CHECK(farey_mediant(Rational(0), Rational(1)) == Rational(1, 2));
    CHECK(farey_mediant(Rational(1, 3), Rational(1, 2)) == Rational(2, 5));
    CHECK(farey_mediant(Rational(1, 2), Rational(2, 3)) == Rational(3, 5));
    CHECK_THROWS_AS(farey_mediant(Rational(1, 2), Rational(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(farey_mediant(Rational(2, 3), Rational(1, 3)), std::invalid_argument);
}

TEST_CASE("rational parse and format") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-4/2") == Rational(-2));
    CHECK(parse_rational("17") == Rational(17));
    CHECK(to_string(Rational(1, 2)) == "1/2");
    CHECK(to_string(Rational(-3)) == "-3");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
    CHECK(floor_rat(Rational(-1, 2)) == -1);
    CHECK(floor_rat(Rational(7, 2)) == 3);
    CHECK(floor_rat(Rational(4)) == 4);
}

TEST_CASE("simplest rational in an open interval") {
    CHECK(simplest_between(Rational(1, 3), Rational(1, 2)) == Rational(2, 5));
    CHECK(simplest_between(Rational(0), Rational(1)) == Rational(1, 2));
    // ((3-sqrt(5))/4, 1/2): 1/3 is the smallest-denominator witness.
    QuadExt lo(Rational(3, 4), Rational(-1, 4), 5);
    QuadExt hi = QuadExt::from_rational(Rational(1, 2), 5);
    CHECK(simplest_between(lo, hi) == Rational(1, 3));
}
