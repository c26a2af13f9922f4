#pragma once

#include "mvforge/finitemv.hpp"

namespace mvforge {

namespace fan {

using IVec2 = std::pair<Integer, Integer>;

inline Integer cross(const IVec2& u, const IVec2& v) { return u.first * v.second - u.second * v.first; }

inline IVec2 primitive(Integer x, Integer y) {
    using boost::multiprecision::abs;
    using boost::multiprecision::gcd;
    if (x == 0 && y == 0) throw std::invalid_argument("fan: zero direction");
    Integer g = gcd(abs(x), abs(y));
    return {x / g, y / g};
}

// Strict angular order on nonzero integer directions, starting at (1,0) and
// running counterclockwise through the full circle.
inline bool angle_less(const IVec2& u, const IVec2& v) {
    auto half = [](const IVec2& w) { return (w.second > 0 || (w.second == 0 && w.first > 0)) ? 0 : 1; };
    int hu = half(u), hv = half(v);
    if (hu != hv) return hu < hv;
    return cross(u, v) > 0;
}

}  // namespace fan

// Homogeneous piecewise-linear function with integer coefficients on the
// closed positive quadrant Q, stored as a fan of rational cones between
// primitive rays running from the x-axis to the y-axis, one linear piece per
// cone.  Canonical form: adjacent cones with equal pieces are merged, so
// structural equality is function equality.
class HomogPL {
public:
    using Ray = fan::IVec2;
    using Piece = fan::IVec2;  // (a, b) for a*x + b*y

    HomogPL(std::vector<Ray> rays, std::vector<Piece> pieces)
        : rays_(std::move(rays)), pieces_(std::move(pieces)) {
        validate();
        canonicalize();
    }

    static HomogPL linear(Integer a, Integer b) {
        return HomogPL({{1, 0}, {0, 1}}, {{std::move(a), std::move(b)}});
    }
    static HomogPL zero() { return linear(0, 0); }

    const std::vector<Ray>& rays() const { return rays_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    Rational eval(const Rational& x, const Rational& y) const {
        if (x < 0 || y < 0) throw std::invalid_argument("HomogPL: point outside the quadrant");
        if (x == 0 && y == 0) return 0;
        const Piece& p = piece_at(x, y);
        return Rational(p.first) * x + Rational(p.second) * y;
    }

    const Piece& piece_at(const Rational& x, const Rational& y) const {
        for (size_t i = 0; i + 1 < rays_.size(); ++i) {
            // within the cone iff counterclockwise of ray i and clockwise of ray i+1
            if (Rational(rays_[i].first) * y - Rational(rays_[i].second) * x >= 0 &&
                Rational(rays_[i + 1].second) * x - Rational(rays_[i + 1].first) * y >= 0)
                return pieces_[i];
        }
        throw std::invalid_argument("HomogPL: direction outside the quadrant");
    }

    HomogPL operator+(const HomogPL& o) const {
        return combine(o, [](const Integer& pa, const Integer& qa) { return pa + qa; });
    }
    HomogPL operator-(const HomogPL& o) const {
        return combine(o, [](const Integer& pa, const Integer& qa) { return pa - qa; });
    }
    HomogPL operator-() const { return scaled(-1); }

    HomogPL scaled(const Integer& c) const {
        std::vector<Piece> ps;
        for (const auto& p : pieces_) ps.push_back({c * p.first, c * p.second});
        return HomogPL(rays_, std::move(ps));
    }

    // Values on a cone are linear, so extremes over the quadrant sit on rays.
    bool is_nonneg() const {
        for (const auto& r : rays_)
            if (eval(Rational(r.first), Rational(r.second)) < 0) return false;
        return true;
    }

    bool is_zero() const { return pieces_.size() == 1 && pieces_[0] == Piece{0, 0}; }

    bool operator==(const HomogPL& o) const { return rays_ == o.rays_ && pieces_ == o.pieces_; }
    bool operator!=(const HomogPL& o) const { return !(*this == o); }

    friend HomogPL hpl_join(const HomogPL& f, const HomogPL& g);
    friend HomogPL hpl_meet(const HomogPL& f, const HomogPL& g);

private:
    void validate() const {
        if (rays_.size() < 2) throw std::invalid_argument("HomogPL: need at least two rays");
        if (pieces_.size() + 1 != rays_.size()) throw std::invalid_argument("HomogPL: piece count mismatch");
        if (rays_.front() != Ray{1, 0} || rays_.back() != Ray{0, 1})
            throw std::invalid_argument("HomogPL: fan must span from (1,0) to (0,1)");
        for (const auto& r : rays_) {
            if (r.first < 0 || r.second < 0) throw std::invalid_argument("HomogPL: ray outside the quadrant");
            if (r != fan::primitive(r.first, r.second)) throw std::invalid_argument("HomogPL: ray not primitive");
        }
        for (size_t i = 0; i + 1 < rays_.size(); ++i) {
            if (fan::cross(rays_[i], rays_[i + 1]) <= 0)
                throw std::invalid_argument("HomogPL: rays not strictly sorted");
            if (i + 2 < rays_.size()) {
                const Ray& r = rays_[i + 1];
                if (pieces_[i].first * r.first + pieces_[i].second * r.second !=
                    pieces_[i + 1].first * r.first + pieces_[i + 1].second * r.second)
                    throw std::invalid_argument("HomogPL: pieces disagree on a shared ray");
            }
        }
    }

    void canonicalize() {
        std::vector<Ray> rs{rays_.front()};
        std::vector<Piece> ps{pieces_.front()};
        for (size_t i = 1; i + 1 < rays_.size(); ++i) {
            if (pieces_[i] == ps.back()) continue;  // merge across an inactive ray
            rs.push_back(rays_[i]);
            ps.push_back(pieces_[i]);
        }
        rs.push_back(rays_.back());
        rays_ = std::move(rs);
        pieces_ = std::move(ps);
    }

    static std::vector<Ray> merge_rays(const std::vector<Ray>& a, const std::vector<Ray>& b) {
        std::vector<Ray> out;
        std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), fan::angle_less);
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // Pieces aligned to a target fan whose rays contain this fan's rays.
    std::vector<Piece> aligned_to(const std::vector<Ray>& target) const {
        std::vector<Piece> out;
        for (size_t j = 0; j + 1 < target.size(); ++j) {
            Ray mid{target[j].first + target[j + 1].first, target[j].second + target[j + 1].second};
            out.push_back(piece_at(Rational(mid.first), Rational(mid.second)));
        }
        return out;
    }

    template <typename Op>
    HomogPL combine(const HomogPL& o, Op op) const {
        auto target = merge_rays(rays_, o.rays_);
        auto pa = aligned_to(target);
        auto pb = o.aligned_to(target);
        std::vector<Piece> ps;
        for (size_t j = 0; j < pa.size(); ++j)
            ps.push_back({op(pa[j].first, pb[j].first), op(pa[j].second, pb[j].second)});
        return HomogPL(std::move(target), std::move(ps));
    }

    std::vector<Ray> rays_;
    std::vector<Piece> pieces_;
};

namespace fan {

// Rays strictly inside the cone (lo, hi) where the linear form d vanishes.
inline std::vector<IVec2> crossing_rays(const IVec2& lo, const IVec2& hi, const IVec2& d) {
    std::vector<IVec2> out;
    if (d.first == 0 && d.second == 0) return out;
    for (const IVec2& w : {IVec2{-d.second, d.first}, IVec2{d.second, -d.first}})
        if ((w.first != 0 || w.second != 0) && cross(lo, w) > 0 && cross(w, hi) > 0)
            out.push_back(primitive(w.first, w.second));
    return out;
}

}  // namespace fan

// Join refines to the union of both fans plus every ray where the difference
// changes sign; after that the winner is constant per cone and a midpoint
// test selects it.
inline HomogPL hpl_join(const HomogPL& f, const HomogPL& g) {
    HomogPL diff = f - g;
    auto target = HomogPL::merge_rays(f.rays(), g.rays());
    for (size_t i = 0; i + 1 < diff.rays().size(); ++i)
        for (auto& w : fan::crossing_rays(diff.rays()[i], diff.rays()[i + 1], diff.pieces()[i]))
            target.push_back(w);
    std::sort(target.begin(), target.end(), fan::angle_less);
    target.erase(std::unique(target.begin(), target.end()), target.end());
    auto pf = f.aligned_to(target);
    auto pg = g.aligned_to(target);
    std::vector<HomogPL::Piece> ps;
    for (size_t j = 0; j + 1 < target.size(); ++j) {
        fan::IVec2 mid{target[j].first + target[j + 1].first, target[j].second + target[j + 1].second};
        Integer vf = pf[j].first * mid.first + pf[j].second * mid.second;
        Integer vg = pg[j].first * mid.first + pg[j].second * mid.second;
        ps.push_back(vf >= vg ? pf[j] : pg[j]);
    }
    return HomogPL(std::move(target), std::move(ps));
}

inline HomogPL hpl_meet(const HomogPL& f, const HomogPL& g) { return -hpl_join(-f, -g); }

inline nlohmann::json homogpl_to_json(const HomogPL& h) {
    nlohmann::json j;
    j["rays"] = nlohmann::json::array();
    for (const auto& r : h.rays())
        j["rays"].push_back({r.first.convert_to<long long>(), r.second.convert_to<long long>()});
    j["pieces"] = nlohmann::json::array();
    for (const auto& p : h.pieces())
        j["pieces"].push_back({{"ax", p.first.convert_to<long long>()}, {"ay", p.second.convert_to<long long>()}});
    return j;
}

inline HomogPL homogpl_from_json(const nlohmann::json& j) {
    std::vector<HomogPL::Ray> rays;
    for (const auto& r : j.at("rays")) rays.push_back({Integer(r.at(0).get<long long>()), Integer(r.at(1).get<long long>())});
    std::vector<HomogPL::Piece> pieces;
    for (const auto& p : j.at("pieces"))
        pieces.push_back({Integer(p.at("ax").get<long long>()), Integer(p.at("ay").get<long long>())});
    return HomogPL(std::move(rays), std::move(pieces));
}

// Germ at 0+ of a one-variable McNaughton function: the value at 0 and the
// slope of the first piece.  Values in [0,1] force slope >= 0 at value 0 and
// slope <= 0 at value 1.
struct Germ1D {
    int value;
    long long slope;

    Germ1D(int v, long long s) : value(v), slope(s) {
        if (value != 0 && value != 1) throw std::invalid_argument("Germ1D: value must be 0 or 1");
        if (value == 0 && slope < 0) throw std::invalid_argument("Germ1D: value 0 needs slope >= 0");
        if (value == 1 && slope > 0) throw std::invalid_argument("Germ1D: value 1 needs slope <= 0");
    }

    bool operator==(const Germ1D& o) const { return value == o.value && slope == o.slope; }
};

inline Germ1D germ1d_neg(const Germ1D& g) { return Germ1D(1 - g.value, -g.slope); }

inline Germ1D germ1d_plus(const Germ1D& a, const Germ1D& b) {
    int m = a.value + b.value;
    long long k = a.slope + b.slope;
    if (m >= 2) return Germ1D(1, 0);
    if (m == 1) return Germ1D(1, std::min<long long>(k, 0));
    return Germ1D(0, k);
}

inline Germ1D germ1d_join(const Germ1D& a, const Germ1D& b) {
    bool a_ge = a.value != b.value ? a.value > b.value : a.slope >= b.slope;
    return a_ge ? a : b;
}

inline Germ1D germ1d_meet(const Germ1D& a, const Germ1D& b) {
    bool a_le = a.value != b.value ? a.value < b.value : a.slope <= b.slope;
    return a_le ? a : b;
}

inline Germ1D germ_at_zero_1d(const McNFunction& f) {
    if (f.arity() != 1) throw std::invalid_argument("germ_at_zero_1d: arity 1 required");
    RatPoint origin{Rational(0)};
    Rational v0 = f.eval_at(origin);
    if (v0 != 0 && v0 != 1) throw std::logic_error("germ_at_zero_1d: non-integer value at a unit-denominator point");
    for (size_t i = 0; i < f.domain().cells().size(); ++i) {
        const auto& cell = f.domain().cells()[i];
        if (cell.dim() == 1 && cell.contains(origin))
            return Germ1D(num(v0).convert_to<int>(), f.as_lgroup().pieces()[i].coeffs[0].convert_to<long long>());
    }
    throw std::invalid_argument("germ_at_zero_1d: carrier has no segment at 0");
}

// The Chang algebra is carried isomorphically onto germs at 0+: k*eps to
// slope k at value 0, 1+k*eps to slope k at value 1.
inline Germ1D chang_to_germ(const ChangElement& e) { return Germ1D(e.m, e.k); }
inline ChangElement germ_to_chang(const Germ1D& g) { return ChangElement(g.value, g.slope); }

inline bool chang_iso_check(long long bound) {
    std::vector<ChangElement> elems;
    for (long long k = 0; k <= bound; ++k) {
        elems.push_back(ChangElement(0, k));
        elems.push_back(ChangElement(1, -k));
    }
    for (const auto& a : elems) {
        if (germ_to_chang(chang_to_germ(a)) != a) return false;
        if (chang_to_germ(chang_neg(a)) != germ1d_neg(chang_to_germ(a))) return false;
        for (const auto& b : elems) {
            if (chang_to_germ(chang_plus(a, b)) != germ1d_plus(chang_to_germ(a), chang_to_germ(b))) return false;
            if (chang_to_germ(chang_join(a, b)) != germ1d_join(chang_to_germ(a), chang_to_germ(b))) return false;
        }
    }
    // injectivity on the scanned window
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = i + 1; j < elems.size(); ++j)
            if (chang_to_germ(elems[i]) == chang_to_germ(elems[j])) return false;
    return true;
}

// Germ at the origin of a two-variable McNaughton function: the value v at
// (0,0) plus a nonnegative homogeneous profile p, encoding v=0 germs as p and
// v=1 germs as 1-p.
class Germ2D {
public:
    Germ2D(int value, HomogPL profile) : value_(value), profile_(std::move(profile)) {
        if (value_ != 0 && value_ != 1) throw std::invalid_argument("Germ2D: value must be 0 or 1");
        if (!profile_.is_nonneg()) throw std::invalid_argument("Germ2D: profile must be >= 0 on the quadrant");
    }

    int value() const { return value_; }
    const HomogPL& profile() const { return profile_; }

    bool operator==(const Germ2D& o) const { return value_ == o.value_ && profile_ == o.profile_; }
    bool operator!=(const Germ2D& o) const { return !(*this == o); }

private:
    int value_;
    HomogPL profile_;
};

inline Germ2D germ2d_neg(const Germ2D& g) { return Germ2D(1 - g.value(), g.profile()); }

inline Germ2D germ2d_plus(const Germ2D& a, const Germ2D& b) {
    if (a.value() == 0 && b.value() == 0) return Germ2D(0, a.profile() + b.profile());
    if (a.value() == 1 && b.value() == 1) return Germ2D(1, HomogPL::zero());
    const Germ2D& low = a.value() == 0 ? a : b;   // germ p
    const Germ2D& high = a.value() == 0 ? b : a;  // germ 1 - q
    return Germ2D(1, hpl_join(high.profile() - low.profile(), HomogPL::zero()));
}

// Exact germ extraction by probing: the fan of directions to domain vertices
// refines the star of the origin, so on each cone the directional derivative
// is linear and two ray probes determine its integer coefficients.
inline Germ2D germ_at_origin_2d(const McNFunction& f) {
    if (f.arity() != 2) throw std::invalid_argument("germ_at_origin_2d: arity 2 required");
    RatPoint origin{Rational(0), Rational(0)};
    Rational v0 = f.eval_at(origin);
    if (v0 != 0 && v0 != 1) throw std::logic_error("germ_at_origin_2d: non-integer value at a unit-denominator point");

    std::vector<fan::IVec2> rays{{1, 0}, {0, 1}};
    for (const auto& v : f.domain().vertices()) {
        if (v[0] == 0 && v[1] == 0) continue;
        rays.push_back(fan::primitive(num(v[0]) * den(v[1]), num(v[1]) * den(v[0])));
    }
    std::sort(rays.begin(), rays.end(), fan::angle_less);
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());

    std::set<std::vector<Integer>> seen;
    std::vector<std::pair<Vec, Rational>> walls;
    for (const auto& cell : f.domain().cells()) detail::collect_walls(cell.hrep(), seen, walls);

    auto derivative = [&](const fan::IVec2& dir) {
        RatPoint d{Rational(dir.first), Rational(dir.second)};
        Rational tmax = 0;  // stay inside the cube
        for (size_t i = 0; i < d.size(); ++i)
            if (d[i] > 0) {
                Rational lim = Rational(1) / d[i];
                if (tmax == 0 || lim < tmax) tmax = lim;
            }
        for (const auto& [a, b] : walls) {
            Rational s = geo::dot(a, d);
            if (s == 0) continue;
            Rational t = b / s;
            if (t > 0 && t < tmax) tmax = t;
        }
        Rational th = tmax / 2;
        RatPoint p{th * d[0], th * d[1]};
        return (f.eval_at(p) - v0) / th;
    };

    std::vector<Rational> dv;
    for (const auto& r : rays) dv.push_back(derivative(r));
    std::vector<fan::IVec2> pieces;
    for (size_t j = 0; j + 1 < rays.size(); ++j) {
        Rational det(fan::cross(rays[j], rays[j + 1]));
        Rational a = (dv[j] * Rational(rays[j + 1].second) - dv[j + 1] * Rational(rays[j].second)) / det;
        Rational b = (dv[j + 1] * Rational(rays[j].first) - dv[j] * Rational(rays[j + 1].first)) / det;
        if (den(a) != 1 || den(b) != 1) throw std::logic_error("germ_at_origin_2d: non-integer cone derivative");
        fan::IVec2 mid{rays[j].first + rays[j + 1].first, rays[j].second + rays[j + 1].second};
        if (Rational(num(a) * mid.first + num(b) * mid.second) != derivative(mid))
            throw std::logic_error("germ_at_origin_2d: star of the origin is not conelike");
        pieces.push_back({num(a), num(b)});
    }
    HomogPL prof(std::move(rays), std::move(pieces));
    if (v0 == 0) return Germ2D(0, std::move(prof));
    return Germ2D(1, -prof);
}

// Element (m, h) of the lexicographic group Z x H ordered by the integer
// level first, with unit (1, 0).
struct LexElement {
    Integer m;
    HomogPL h;

    bool operator==(const LexElement& o) const { return m == o.m && h == o.h; }
    bool operator!=(const LexElement& o) const { return !(*this == o); }
};

inline LexElement lex_unit() { return {1, HomogPL::zero()}; }
inline LexElement lex_zero() { return {0, HomogPL::zero()}; }
inline LexElement lex_add(const LexElement& a, const LexElement& b) { return {a.m + b.m, a.h + b.h}; }
inline LexElement lex_sub(const LexElement& a, const LexElement& b) { return {a.m - b.m, a.h - b.h}; }
inline LexElement lex_neg(const LexElement& a) { return {-a.m, -a.h}; }

inline LexElement lex_join(const LexElement& a, const LexElement& b) {
    if (a.m != b.m) return a.m > b.m ? a : b;
    return {a.m, hpl_join(a.h, b.h)};
}

inline LexElement lex_meet(const LexElement& a, const LexElement& b) {
    if (a.m != b.m) return a.m < b.m ? a : b;
    return {a.m, hpl_meet(a.h, b.h)};
}

// Unit-interval operations of the enveloping lex group, by truncation at the
// unit; these are the generic forms the germ formulas must reproduce.
inline LexElement quadlex_plus(const LexElement& a, const LexElement& b) {
    return lex_meet(lex_add(a, b), lex_unit());
}
inline LexElement quadlex_neg(const LexElement& a) { return lex_sub(lex_unit(), a); }

inline LexElement germ_to_lex(const Germ2D& g) {
    if (g.value() == 0) return {0, g.profile()};
    return {1, -g.profile()};
}

inline Germ2D lex_to_germ(const LexElement& l) {
    if (l.m == 0) return Germ2D(0, l.h);
    if (l.m == 1) return Germ2D(1, -l.h);
    throw std::invalid_argument("lex_to_germ: element outside the unit interval");
}

// Pullback along the shear q(x, y) = (x, y + x), which maps the quadrant
// bijectively onto the cone {0 <= x <= y}: breakrays (sx, sy) with sy >= sx
// pull back to (sx, sy - sx), and a piece a*x + b*y pulls back to
// (a+b)*x + b*y.
inline HomogPL sigma_pullback(const HomogPL& h) {
    std::vector<HomogPL::Ray> rays{{1, 0}, {0, 1}};
    for (const auto& s : h.rays())
        if (s.second >= s.first) rays.push_back(fan::primitive(s.first, s.second - s.first));
    std::sort(rays.begin(), rays.end(), fan::angle_less);
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    std::vector<HomogPL::Piece> pieces;
    for (size_t j = 0; j + 1 < rays.size(); ++j) {
        fan::IVec2 mid{rays[j].first + rays[j + 1].first, rays[j].second + rays[j + 1].second};
        const auto& p = h.piece_at(Rational(mid.first), Rational(mid.first + mid.second));
        pieces.push_back({p.first + p.second, p.second});
    }
    return HomogPL(std::move(rays), std::move(pieces));
}

inline LexElement quadrant_sigma(const LexElement& l) { return {l.m, sigma_pullback(l.h)}; }

// Membership in the ideal of germs vanishing on the quadrant, for elements
// below the infinitesimal level: with the representation restricted to Q this
// is exactly h = 0.
inline bool quadrant_ideal_member(const LexElement& l) {
    if (l.m != 0) throw std::invalid_argument("quadrant_ideal_member: requires integer level 0");
    if (!l.h.is_nonneg()) throw std::invalid_argument("quadrant_ideal_member: requires h >= 0 on the quadrant");
    return l.h.is_zero();
}

// Homogeneous integer piecewise-linear function on the whole plane: a cyclic
// fan that always carries the four axis rays, so every cone sits inside one
// sign quadrant.
class AmbientHomogPL {
public:
    using Ray = fan::IVec2;
    using Piece = fan::IVec2;

    AmbientHomogPL(std::vector<Ray> rays, std::vector<Piece> pieces)
        : rays_(std::move(rays)), pieces_(std::move(pieces)) {
        validate();
        canonicalize();
    }

    static AmbientHomogPL linear(Integer a, Integer b) {
        std::vector<Ray> rays{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        std::vector<Piece> ps(4, Piece{a, b});
        return AmbientHomogPL(std::move(rays), std::move(ps));
    }
    static AmbientHomogPL zero() { return linear(0, 0); }

    const std::vector<Ray>& rays() const { return rays_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    const Piece& piece_at(const Rational& x, const Rational& y) const {
        for (size_t i = 0; i < rays_.size(); ++i) {
            const Ray& lo = rays_[i];
            const Ray& hi = rays_[(i + 1) % rays_.size()];
            if (Rational(lo.first) * y - Rational(lo.second) * x >= 0 &&
                Rational(hi.second) * x - Rational(hi.first) * y >= 0)
                return pieces_[i];
        }
        throw std::logic_error("AmbientHomogPL: direction not located");
    }

    Rational eval(const Rational& x, const Rational& y) const {
        if (x == 0 && y == 0) return 0;
        const Piece& p = piece_at(x, y);
        return Rational(p.first) * x + Rational(p.second) * y;
    }

    AmbientHomogPL operator+(const AmbientHomogPL& o) const {
        return combine(o, [](const Integer& u, const Integer& v) { return u + v; });
    }
    AmbientHomogPL operator-(const AmbientHomogPL& o) const {
        return combine(o, [](const Integer& u, const Integer& v) { return u - v; });
    }
    AmbientHomogPL operator-() const { return scaled(-1); }

    AmbientHomogPL scaled(const Integer& c) const {
        std::vector<Piece> ps;
        for (const auto& p : pieces_) ps.push_back({c * p.first, c * p.second});
        return AmbientHomogPL(rays_, std::move(ps));
    }

    bool is_nonneg() const {
        for (const auto& r : rays_)
            if (eval(Rational(r.first), Rational(r.second)) < 0) return false;
        return true;
    }

    bool operator==(const AmbientHomogPL& o) const { return rays_ == o.rays_ && pieces_ == o.pieces_; }

    friend AmbientHomogPL ambient_join(const AmbientHomogPL& f, const AmbientHomogPL& g);

private:
    static bool is_axis(const Ray& r) {
        return r == Ray{1, 0} || r == Ray{0, 1} || r == Ray{-1, 0} || r == Ray{0, -1};
    }

    void validate() const {
        if (rays_.size() != pieces_.size()) throw std::invalid_argument("AmbientHomogPL: piece count mismatch");
        if (rays_.size() < 4 || rays_.front() != Ray{1, 0})
            throw std::invalid_argument("AmbientHomogPL: fan must start at (1,0)");
        int axes = 0;
        for (const auto& r : rays_) {
            if (r.first == 0 && r.second == 0) throw std::invalid_argument("AmbientHomogPL: zero ray");
            if (r != fan::primitive(r.first, r.second)) throw std::invalid_argument("AmbientHomogPL: ray not primitive");
            if (is_axis(r)) ++axes;
        }
        if (axes != 4) throw std::invalid_argument("AmbientHomogPL: fan must contain the four axis rays");
        for (size_t i = 0; i + 1 < rays_.size(); ++i)
            if (!fan::angle_less(rays_[i], rays_[i + 1]))
                throw std::invalid_argument("AmbientHomogPL: rays not strictly sorted");
        for (size_t i = 0; i < rays_.size(); ++i) {
            const Ray& r = rays_[i];
            const Piece& before = pieces_[(i + rays_.size() - 1) % rays_.size()];
            const Piece& after = pieces_[i];
            if (before.first * r.first + before.second * r.second !=
                after.first * r.first + after.second * r.second)
                throw std::invalid_argument("AmbientHomogPL: pieces disagree on a shared ray");
        }
    }

    void canonicalize() {
        std::vector<Ray> rs;
        std::vector<Piece> ps;
        for (size_t i = 0; i < rays_.size(); ++i) {
            const Piece& before = pieces_[(i + rays_.size() - 1) % rays_.size()];
            if (!is_axis(rays_[i]) && before == pieces_[i]) continue;
            rs.push_back(rays_[i]);
            ps.push_back(pieces_[i]);
        }
        rays_ = std::move(rs);
        pieces_ = std::move(ps);
    }

    static std::vector<Ray> merge_rays(const std::vector<Ray>& a, const std::vector<Ray>& b) {
        std::vector<Ray> out;
        std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), fan::angle_less);
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<Piece> aligned_to(const std::vector<Ray>& target) const {
        std::vector<Piece> out;
        for (size_t j = 0; j < target.size(); ++j) {
            const Ray& lo = target[j];
            const Ray& hi = target[(j + 1) % target.size()];
            Ray mid{lo.first + hi.first, lo.second + hi.second};
            out.push_back(piece_at(Rational(mid.first), Rational(mid.second)));
        }
        return out;
    }

    template <typename Op>
    AmbientHomogPL combine(const AmbientHomogPL& o, Op op) const {
        auto target = merge_rays(rays_, o.rays_);
        auto pa = aligned_to(target);
        auto pb = o.aligned_to(target);
        std::vector<Piece> ps;
        for (size_t j = 0; j < pa.size(); ++j)
            ps.push_back({op(pa[j].first, pb[j].first), op(pa[j].second, pb[j].second)});
        return AmbientHomogPL(std::move(target), std::move(ps));
    }

    std::vector<Ray> rays_;
    std::vector<Piece> pieces_;
};

inline AmbientHomogPL ambient_join(const AmbientHomogPL& f, const AmbientHomogPL& g) {
    AmbientHomogPL diff = f - g;
    auto target = AmbientHomogPL::merge_rays(f.rays(), g.rays());
    for (size_t i = 0; i < diff.rays().size(); ++i) {
        const auto& lo = diff.rays()[i];
        const auto& hi = diff.rays()[(i + 1) % diff.rays().size()];
        for (auto& w : fan::crossing_rays(lo, hi, diff.pieces()[i])) target.push_back(w);
    }
    std::sort(target.begin(), target.end(), fan::angle_less);
    target.erase(std::unique(target.begin(), target.end()), target.end());
    std::vector<AmbientHomogPL::Piece> ps;
    for (size_t j = 0; j < target.size(); ++j) {
        const auto& lo = target[j];
        const auto& hi = target[(j + 1) % target.size()];
        Rational mx(lo.first + hi.first), my(lo.second + hi.second);
        ps.push_back(f.eval(mx, my) >= g.eval(mx, my) ? f.piece_at(mx, my) : g.piece_at(mx, my));
    }
    return AmbientHomogPL(std::move(target), std::move(ps));
}

// q = 0 v -x v -y, the ambient comparison function for quadrant-vanishing.
inline AmbientHomogPL ambient_q() {
    return ambient_join(ambient_join(AmbientHomogPL::zero(), AmbientHomogPL::linear(-1, 0)),
                        AmbientHomogPL::linear(0, -1));
}

// Dominance criterion m*q >= l over the whole plane.
inline bool ambient_dominates(const Integer& mult, const AmbientHomogPL& l) {
    return (ambient_q().scaled(mult) - l).is_nonneg();
}

// Unital l-group descriptors and the unit-interval functor on them.
struct UnitalGroupDescriptor {
    enum class Kind { ZWithUnit, ZLexZ, PLGroup, QuadrantLex } kind;
    int param = 0;

    static UnitalGroupDescriptor z_with_unit(int d) {
        if (d < 1) throw std::invalid_argument("z_with_unit: unit must be >= 1");
        return {Kind::ZWithUnit, d};
    }
    static UnitalGroupDescriptor z_lex_z() { return {Kind::ZLexZ, 0}; }
    static UnitalGroupDescriptor pl_group(int n) {
        if (n < 1 || n > 3) throw std::invalid_argument("pl_group: arity must be 1..3");
        return {Kind::PLGroup, n};
    }
    static UnitalGroupDescriptor quadrant_lex() { return {Kind::QuadrantLex, 0}; }
};

struct GammaImage {
    enum class Kind { FiniteChain, ChangAlgebra, McNaughtonClass, QuadrantGermAlgebra } kind;
    int param = 0;
};

inline GammaImage gamma(const UnitalGroupDescriptor& G) {
    switch (G.kind) {
        case UnitalGroupDescriptor::Kind::ZWithUnit:
            return {GammaImage::Kind::FiniteChain, G.param};
        case UnitalGroupDescriptor::Kind::ZLexZ:
            return {GammaImage::Kind::ChangAlgebra, 0};
        case UnitalGroupDescriptor::Kind::PLGroup:
            return {GammaImage::Kind::McNaughtonClass, G.param};
        case UnitalGroupDescriptor::Kind::QuadrantLex:
            return {GammaImage::Kind::QuadrantGermAlgebra, 0};
    }
    throw std::logic_error("gamma: unknown descriptor");
}

// Generic truncated-interval operations on the underlying groups, used to
// cross-check the MV-side implementations.
inline long long zu_gamma_plus(int d, long long i, long long j) { return std::min<long long>(d, i + j); }
inline long long zu_gamma_neg(int d, long long i) { return d - i; }

using LexPair = std::pair<long long, long long>;

inline LexPair zlex_gamma_plus(const LexPair& a, const LexPair& b) {
    LexPair s{a.first + b.first, a.second + b.second};
    return std::min(s, LexPair{1, 0});  // lexicographic std::pair order
}
inline LexPair zlex_gamma_neg(const LexPair& a) { return {1 - a.first, -a.second}; }

// Ideal correspondence for Z^r with a strong order unit and its finite MV
// image: both lattices are given by the set of factors an ideal saturates.
struct FiniteMVIdealMask {
    std::vector<bool> full;
    bool operator==(const FiniteMVIdealMask& o) const { return full == o.full; }
};
struct UnitalZnIdealMask {
    std::vector<bool> full;
    bool operator==(const UnitalZnIdealMask& o) const { return full == o.full; }
};

inline UnitalZnIdealMask ideal_phi(const FiniteMVIdealMask& i) { return {i.full}; }
inline FiniteMVIdealMask ideal_psi(const UnitalZnIdealMask& j) { return {j.full}; }

inline bool finite_ideal_contains(const FiniteMVIdealMask& I, const FiniteMV::Elem& a) {
    if (I.full.size() != a.size()) throw std::invalid_argument("finite_ideal_contains: arity mismatch");
    for (size_t i = 0; i < a.size(); ++i)
        if (!I.full[i] && a[i] != 0) return false;
    return true;
}

inline bool zn_ideal_contains(const UnitalZnIdealMask& J, const std::vector<long long>& x) {
    if (J.full.size() != x.size()) throw std::invalid_argument("zn_ideal_contains: arity mismatch");
    for (size_t i = 0; i < x.size(); ++i)
        if (!J.full[i] && x[i] != 0) return false;
    return true;
}

enum class ChangIdealKind { Zero, Infinitesimals };
enum class ZLexZIdealKind { Zero, ZeroCrossZ };

inline ZLexZIdealKind ideal_phi(ChangIdealKind i) {
    return i == ChangIdealKind::Zero ? ZLexZIdealKind::Zero : ZLexZIdealKind::ZeroCrossZ;
}
inline ChangIdealKind ideal_psi(ZLexZIdealKind j) {
    return j == ZLexZIdealKind::Zero ? ChangIdealKind::Zero : ChangIdealKind::Infinitesimals;
}

inline bool chang_ideal_contains(ChangIdealKind I, const ChangElement& a) {
    if (I == ChangIdealKind::Zero) return a.m == 0 && a.k == 0;
    return a.m == 0;
}

inline bool zlexz_ideal_contains(ZLexZIdealKind J, const LexPair& x) {
    if (J == ZLexZIdealKind::Zero) return x == LexPair{0, 0};
    return x.first == 0;
}

}  // namespace mvforge
