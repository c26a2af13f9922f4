#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mvforge/gammagerms.hpp"
#include "test_util.hpp"

using namespace mvforge;
using mvtest::random_term;

namespace {

HomogPL random_hpl(std::mt19937& rng, int depth) {
    if (depth == 0) {
        std::uniform_int_distribution<int> c(-3, 3);
        return HomogPL::linear(c(rng), c(rng));
    }
    HomogPL a = random_hpl(rng, depth - 1);
    HomogPL b = random_hpl(rng, depth - 1);
    switch (rng() % 5) {
        case 0: return a + b;
        case 1: return a - b;
        case 2: return hpl_join(a, b);
        case 3: return hpl_meet(a, b);
        default: return a.scaled(Integer(int(rng() % 5) - 2));
    }
}

LexElement random_lex(std::mt19937& rng) {
    std::uniform_int_distribution<int> m(-2, 2);
    return {Integer(m(rng)), random_hpl(rng, 2)};
}

// Directions used for pointwise comparison of quadrant fans.
std::vector<std::pair<Rational, Rational>> probe_dirs() {
    std::vector<std::pair<Rational, Rational>> dirs;
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j)
            if (i || j) dirs.emplace_back(i, j);
    return dirs;
}

}  // namespace

TEST_CASE("homogeneous fan construction and evaluation") {
    HomogPL f = HomogPL::linear(2, 3);
    CHECK(f.eval(Rational(1, 2), Rational(1, 3)) == 2);
    CHECK(f.eval(0, 0) == 0);
    CHECK_THROWS_AS(f.eval(-1, 0), std::invalid_argument);

    // fan with an inactive interior ray collapses to one cone
    HomogPL g({{1, 0}, {1, 1}, {0, 1}}, {{1, 0}, {1, 0}});
    CHECK(g == HomogPL::linear(1, 0));
    CHECK(g.rays().size() == 2);

    CHECK_THROWS_AS(HomogPL({{1, 0}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(HomogPL({{1, 0}, {1, 1}}, {{1, 0}}), std::invalid_argument);  // must end at (0,1)
    CHECK_THROWS_AS(HomogPL({{1, 0}, {2, 2}, {0, 1}}, {{1, 0}, {1, 0}}), std::invalid_argument);  // not primitive
    CHECK_THROWS_AS(HomogPL({{1, 0}, {0, 1}, {1, 1}}, {{1, 0}, {1, 0}}), std::invalid_argument);  // unsorted
    // discontinuous across (1,1)
    CHECK_THROWS_AS(HomogPL({{1, 0}, {1, 1}, {0, 1}}, {{1, 0}, {0, 2}}), std::invalid_argument);
}

TEST_CASE("fan lattice operations have the expected canonical form") {
    HomogPL x = HomogPL::linear(1, 0), y = HomogPL::linear(0, 1);
    CHECK(x + y == HomogPL::linear(1, 1));
    CHECK(x - x == HomogPL::zero());
    CHECK((x - x).is_zero());

    HomogPL pos_part = hpl_join(x - y, HomogPL::zero());
    CHECK(pos_part.rays() == std::vector<HomogPL::Ray>{{1, 0}, {1, 1}, {0, 1}});
    CHECK(pos_part.pieces() == std::vector<HomogPL::Piece>{{1, -1}, {0, 0}});
    CHECK(pos_part.is_nonneg());
    CHECK_FALSE((x - y).is_nonneg());

    CHECK(hpl_meet(x, y).eval(1, 2) == 1);
    CHECK(hpl_meet(x, y).eval(3, 1) == 1);
    CHECK(hpl_join(x, y) + hpl_meet(x, y) == x + y);
}

TEST_CASE("fan operations agree with pointwise evaluation") {
    std::mt19937 rng(7130);
    auto dirs = probe_dirs();
    for (int trial = 0; trial < 40; ++trial) {
        HomogPL a = random_hpl(rng, 2), b = random_hpl(rng, 2);
        HomogPL sum = a + b, jn = hpl_join(a, b), mt = hpl_meet(a, b);
        for (const auto& [px, py] : dirs) {
            CHECK(sum.eval(px, py) == a.eval(px, py) + b.eval(px, py));
            CHECK(jn.eval(px, py) == std::max(a.eval(px, py), b.eval(px, py)));
            CHECK(mt.eval(px, py) == std::min(a.eval(px, py), b.eval(px, py)));
        }
        // homogeneity
        CHECK(a.eval(Rational(3, 2), Rational(9, 4)) == a.eval(Rational(2, 3), Rational(1)) * Rational(9, 4));
    }
}

TEST_CASE("fan serialization round-trips") {
    HomogPL f = hpl_join(HomogPL::linear(1, -1), HomogPL::zero());
    auto j = homogpl_to_json(f);
    CHECK(j["rays"].size() == 3);
    CHECK(j["rays"][0] == nlohmann::json({1, 0}));
    CHECK(j["rays"].back() == nlohmann::json({0, 1}));
    CHECK(j["pieces"][0]["ax"] == 1);
    CHECK(j["pieces"][0]["ay"] == -1);
    CHECK(homogpl_from_json(j) == f);
    CHECK_THROWS(homogpl_from_json(nlohmann::json{{"rays", {{1, 0}}}, {"pieces", nlohmann::json::array()}}));
}

TEST_CASE("one-variable germs at zero") {
    CHECK(germ_at_zero_1d(from_term(parse_term("x1", 1), 1)) == Germ1D(0, 1));
    CHECK(germ_at_zero_1d(from_term(parse_term("0", 1), 1)) == Germ1D(0, 0));
    CHECK(germ_at_zero_1d(from_term(parse_term("~(x1 (+) x1)", 1), 1)) == Germ1D(1, -2));
    auto hat = hat_function(1, {{{Rational(1)}, Rational(-1, 3)}, {{Rational(-1)}, Rational(2, 3)}});
    CHECK(germ_at_zero_1d(hat) == Germ1D(0, 0));

    CHECK_THROWS_AS(Germ1D(0, -1), std::invalid_argument);
    CHECK_THROWS_AS(Germ1D(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Germ1D(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(germ_at_zero_1d(from_term(parse_term("x1 ^ x2", 2), 2)), std::invalid_argument);
}

TEST_CASE("germ extraction at zero is a homomorphism") {
    std::mt19937 rng(3311);
    for (int trial = 0; trial < 60; ++trial) {
        auto f = from_term(random_term(rng, 1, 3), 1);
        auto g = from_term(random_term(rng, 1, 3), 1);
        CHECK(germ_at_zero_1d(mv_plus(f, g)) == germ1d_plus(germ_at_zero_1d(f), germ_at_zero_1d(g)));
        CHECK(germ_at_zero_1d(mv_neg(f)) == germ1d_neg(germ_at_zero_1d(f)));
        CHECK(germ_at_zero_1d(mv_join(f, g)) == germ1d_join(germ_at_zero_1d(f), germ_at_zero_1d(g)));
        CHECK(germ_at_zero_1d(mv_meet(f, g)) == germ1d_meet(germ_at_zero_1d(f), germ_at_zero_1d(g)));
    }
}

TEST_CASE("chang algebra is isomorphic to germs at zero") {
    CHECK(chang_iso_check(10));
    CHECK(chang_to_germ(ChangElement(0, 3)) == Germ1D(0, 3));
    CHECK(chang_to_germ(ChangElement(1, -4)) == Germ1D(1, -4));
    CHECK(germ_to_chang(Germ1D(1, 0)) == ChangElement(1, 0));
}

TEST_CASE("two-variable germs at the origin") {
    auto plus = from_term(parse_term("x1 (+) x2", 2), 2);
    CHECK(germ_at_origin_2d(plus) == Germ2D(0, HomogPL::linear(1, 1)));

    auto one = from_term(parse_term("1", 2), 2);
    CHECK(germ_at_origin_2d(one) == Germ2D(1, HomogPL::zero()));

    auto tminus = from_term(parse_term("x1 (-) x2", 2), 2);
    Germ2D g = germ_at_origin_2d(tminus);
    CHECK(g.value() == 0);
    CHECK(g.profile() == hpl_join(HomogPL::linear(1, -1), HomogPL::zero()));
    CHECK(g.profile().rays()[1] == HomogPL::Ray{1, 1});  // breakray on the diagonal

    auto co = from_term(parse_term("~(x1 (+) x1)", 2), 2);
    CHECK(germ_at_origin_2d(co) == Germ2D(1, HomogPL::linear(2, 0)));

    CHECK_THROWS_AS(germ_at_origin_2d(from_term(parse_term("x1", 1), 1)), std::invalid_argument);
}

TEST_CASE("two-variable germ extraction is a homomorphism") {
    std::mt19937 rng(9096);
    for (int trial = 0; trial < 50; ++trial) {
        auto f = from_term(random_term(rng, 2, 3), 2);
        auto g = from_term(random_term(rng, 2, 3), 2);
        CHECK(germ_at_origin_2d(mv_plus(f, g)) == germ2d_plus(germ_at_origin_2d(f), germ_at_origin_2d(g)));
        CHECK(germ_at_origin_2d(mv_neg(f)) == germ2d_neg(germ_at_origin_2d(f)));
    }
}

TEST_CASE("germ case formulas match truncated lex arithmetic") {
    std::mt19937 rng(2024);
    int done = 0;
    while (done < 40) {
        HomogPL p = random_hpl(rng, 2), q = random_hpl(rng, 2);
        if (!p.is_nonneg() || !q.is_nonneg()) continue;
        ++done;
        std::uniform_int_distribution<int> v(0, 1);
        Germ2D a(v(rng), p), b(v(rng), q);
        CHECK(germ_to_lex(germ2d_plus(a, b)) == quadlex_plus(germ_to_lex(a), germ_to_lex(b)));
        CHECK(germ_to_lex(germ2d_neg(a)) == quadlex_neg(germ_to_lex(a)));
        CHECK(lex_to_germ(germ_to_lex(a)) == a);
    }
    CHECK(germ2d_plus(Germ2D(1, HomogPL::linear(1, 1)), Germ2D(1, HomogPL::linear(0, 1))) ==
          Germ2D(1, HomogPL::zero()));
}

TEST_CASE("lexicographic group operations order by level first") {
    LexElement a{0, HomogPL::linear(5, 5)}, b{1, HomogPL::linear(-7, -7)};
    CHECK(lex_join(a, b) == b);
    CHECK(lex_meet(a, b) == a);
    LexElement c{0, HomogPL::linear(1, 0)}, d{0, HomogPL::linear(0, 1)};
    CHECK(lex_join(c, d).h == hpl_join(c.h, d.h));
    CHECK(lex_add(lex_unit(), lex_neg(lex_unit())) == lex_zero());
}

TEST_CASE("shear substitution fixes x, collapses below the diagonal") {
    LexElement x{0, HomogPL::linear(1, 0)};
    LexElement y{0, HomogPL::linear(0, 1)};
    LexElement ymx{0, hpl_join(y.h - x.h, HomogPL::zero())};
    LexElement xmy{0, hpl_join(x.h - y.h, HomogPL::zero())};

    CHECK(quadrant_sigma(x) == x);
    CHECK(quadrant_sigma(ymx) == y);
    CHECK(quadrant_sigma(xmy) == lex_zero());
    CHECK(quadrant_sigma(lex_unit()) == lex_unit());

    // the collapsed element is a nonzero kernel witness
    CHECK_FALSE(quadrant_ideal_member(xmy));
    CHECK(quadrant_ideal_member(quadrant_sigma(xmy)));
}

TEST_CASE("shear substitution is a lattice group homomorphism") {
    std::mt19937 rng(5150);
    for (int trial = 0; trial < 50; ++trial) {
        LexElement a = random_lex(rng), b = random_lex(rng);
        CHECK(quadrant_sigma(lex_add(a, b)) == lex_add(quadrant_sigma(a), quadrant_sigma(b)));
        CHECK(quadrant_sigma(lex_neg(a)) == lex_neg(quadrant_sigma(a)));
        CHECK(quadrant_sigma(lex_join(a, b)) == lex_join(quadrant_sigma(a), quadrant_sigma(b)));
        CHECK(quadrant_sigma(lex_meet(a, b)) == lex_meet(quadrant_sigma(a), quadrant_sigma(b)));
    }
}

TEST_CASE("quadrant ideal membership preconditions") {
    CHECK(quadrant_ideal_member(lex_zero()));
    CHECK_THROWS_AS(quadrant_ideal_member(lex_unit()), std::invalid_argument);
    CHECK_THROWS_AS(quadrant_ideal_member(LexElement{0, HomogPL::linear(-1, 0)}), std::invalid_argument);
}

TEST_CASE("ambient four-quadrant comparison function") {
    AmbientHomogPL q = ambient_q();
    CHECK(q.eval(1, 1) == 0);
    CHECK(q.eval(-1, 0) == 1);
    CHECK(q.eval(-2, -3) == 3);
    CHECK(q.eval(-3, -2) == 3);
    CHECK(q.eval(0, -2) == 2);
    CHECK(q.is_nonneg());

    CHECK(ambient_dominates(1, q));  // q itself is dominated at multiplier 1
    CHECK(ambient_dominates(3, q.scaled(3)));
    CHECK_FALSE(ambient_dominates(2, q.scaled(3)));
    CHECK_FALSE(ambient_dominates(5, AmbientHomogPL::linear(1, 0)));
    CHECK(ambient_dominates(1, AmbientHomogPL::linear(-1, 0)));  // -x <= q... on the right half, = on the left
}

TEST_CASE("ambient fan arithmetic agrees with pointwise evaluation") {
    std::mt19937 rng(808);
    std::vector<std::pair<Rational, Rational>> dirs;
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j)
            if (i || j) dirs.emplace_back(i, j);
    for (int trial = 0; trial < 25; ++trial) {
        std::uniform_int_distribution<int> c(-3, 3);
        AmbientHomogPL a = ambient_join(AmbientHomogPL::linear(c(rng), c(rng)), AmbientHomogPL::linear(c(rng), c(rng)));
        AmbientHomogPL b = ambient_join(AmbientHomogPL::linear(c(rng), c(rng)), AmbientHomogPL::linear(c(rng), c(rng)));
        AmbientHomogPL sum = a + b, jn = ambient_join(a, b);
        for (const auto& [px, py] : dirs) {
            CHECK(sum.eval(px, py) == a.eval(px, py) + b.eval(px, py));
            CHECK(jn.eval(px, py) == std::max(a.eval(px, py), b.eval(px, py)));
        }
    }
}

TEST_CASE("unit interval functor on group descriptors") {
    CHECK(gamma(UnitalGroupDescriptor::z_with_unit(5)).kind == GammaImage::Kind::FiniteChain);
    CHECK(gamma(UnitalGroupDescriptor::z_with_unit(5)).param == 5);
    CHECK(gamma(UnitalGroupDescriptor::z_lex_z()).kind == GammaImage::Kind::ChangAlgebra);
    CHECK(gamma(UnitalGroupDescriptor::pl_group(2)).kind == GammaImage::Kind::McNaughtonClass);
    CHECK(gamma(UnitalGroupDescriptor::quadrant_lex()).kind == GammaImage::Kind::QuadrantGermAlgebra);
    CHECK_THROWS_AS(UnitalGroupDescriptor::z_with_unit(0), std::invalid_argument);
    CHECK_THROWS_AS(UnitalGroupDescriptor::pl_group(4), std::invalid_argument);

    for (int d = 1; d <= 12; ++d) {
        MVChain C(d);
        for (int i = 0; i <= d; ++i) {
            CHECK(zu_gamma_neg(d, i) == C.neg(i));
            for (int j = 0; j <= d; ++j) CHECK(zu_gamma_plus(d, i, j) == C.plus(i, j));
        }
    }

    std::vector<ChangElement> elems;
    for (long long k = 0; k <= 10; ++k) {
        elems.push_back(ChangElement(0, k));
        elems.push_back(ChangElement(1, -k));
    }
    auto to_pair = [](const ChangElement& e) { return LexPair{e.m, e.k}; };
    for (const auto& a : elems) {
        CHECK(to_pair(chang_neg(a)) == zlex_gamma_neg(to_pair(a)));
        for (const auto& b : elems)
            CHECK(to_pair(chang_plus(a, b)) == zlex_gamma_plus(to_pair(a), to_pair(b)));
    }
}

TEST_CASE("ideal correspondence on finite products") {
    FiniteMV A({1, 2});
    std::vector<int> ds{1, 2};
    for (int mask = 0; mask < 4; ++mask) {
        FiniteMVIdealMask I{{bool(mask & 1), bool(mask & 2)}};
        CHECK(ideal_psi(ideal_phi(I)) == I);
        UnitalZnIdealMask J = ideal_phi(I);
        // defining formula phi(i) = { x : |x| meet u in i }
        for (long long x0 = -4; x0 <= 4; ++x0)
            for (long long x1 = -4; x1 <= 4; ++x1) {
                FiniteMV::Elem trunc{int(std::min<long long>(std::llabs(x0), ds[0])),
                                     int(std::min<long long>(std::llabs(x1), ds[1]))};
                CHECK(zn_ideal_contains(J, {x0, x1}) == finite_ideal_contains(I, trunc));
            }
        // defining formula psi(j) = j intersected with [0, u]
        for (const auto& a : A.elements())
            CHECK(finite_ideal_contains(ideal_psi(J), a) ==
                  zn_ideal_contains(J, {a[0], a[1]}));
    }
}

TEST_CASE("ideal correspondence on the chang algebra") {
    CHECK(ideal_phi(ChangIdealKind::Zero) == ZLexZIdealKind::Zero);
    CHECK(ideal_phi(ChangIdealKind::Infinitesimals) == ZLexZIdealKind::ZeroCrossZ);
    CHECK(ideal_psi(ideal_phi(ChangIdealKind::Zero)) == ChangIdealKind::Zero);
    CHECK(ideal_psi(ideal_phi(ChangIdealKind::Infinitesimals)) == ChangIdealKind::Infinitesimals);

    auto lex_abs = [](const LexPair& x) { return std::max(x, LexPair{-x.first, -x.second}); };
    for (ChangIdealKind I : {ChangIdealKind::Zero, ChangIdealKind::Infinitesimals}) {
        ZLexZIdealKind J = ideal_phi(I);
        for (long long m = -3; m <= 3; ++m)
            for (long long k = -5; k <= 5; ++k) {
                LexPair ax = std::min(lex_abs({m, k}), LexPair{1, 0});
                ChangElement trunc(int(ax.first), ax.second);
                CHECK(zlexz_ideal_contains(J, {m, k}) == chang_ideal_contains(I, trunc));
            }
        for (const auto& a : {ChangElement(0, 0), ChangElement(0, 2), ChangElement(1, -1), ChangElement(1, 0)})
            CHECK(chang_ideal_contains(ideal_psi(J), a) == zlexz_ideal_contains(J, {a.m, a.k}));
    }
}
