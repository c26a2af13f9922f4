#pragma once

#include "mvforge/contfrac.hpp"
#include "mvforge/finitemv.hpp"

namespace mvforge {

struct UnimodularMatrix {
    std::vector<std::vector<Integer>> m;

    explicit UnimodularMatrix(std::vector<std::vector<Integer>> mm) : m(std::move(mm)) {
        for (const auto& row : m)
            if (row.size() != m.size()) throw std::invalid_argument("UnimodularMatrix: matrix not square");
        using boost::multiprecision::abs;
        if (abs(int_determinant(m)) != 1) throw std::invalid_argument("UnimodularMatrix: determinant not +-1");
    }

    size_t dim() const { return m.size(); }

    std::vector<QuadExt> apply(const std::vector<QuadExt>& v) const {
        if (v.size() != m.size()) throw std::invalid_argument("UnimodularMatrix: dimension mismatch");
        std::vector<QuadExt> out;
        for (const auto& row : m) {
            QuadExt s = QuadExt::from_rational(0, v[0].D());
            for (size_t j = 0; j < v.size(); ++j) s = s + QuadExt::from_rational(Rational(row[j]), v[0].D()) * v[j];
            out.push_back(std::move(s));
        }
        return out;
    }

    RatPoint apply(const RatPoint& p) const {
        if (p.size() != m.size()) throw std::invalid_argument("UnimodularMatrix: dimension mismatch");
        RatPoint out;
        for (const auto& row : m) {
            Rational s = 0;
            for (size_t j = 0; j < p.size(); ++j) s += Rational(row[j]) * p[j];
            out.push_back(std::move(s));
        }
        return out;
    }
};

// Segment E' = { t*w : t in [0,1] } reaching from the origin to a point of
// the closed box [0,1/2]^n that is interior to the cube.
struct EigenSegment {
    std::vector<QuadExt> w;
    Integer D;

    explicit EigenSegment(std::vector<QuadExt> endpoint) : w(std::move(endpoint)) {
        if (w.empty()) throw std::invalid_argument("EigenSegment: empty endpoint");
        D = w[0].D();
        QuadExt half = QuadExt::from_rational(Rational(1, 2), D);
        for (const auto& c : w) {
            if (c.D() != D) throw std::invalid_argument("EigenSegment: mixed field base");
            if (c.sign() <= 0 || c > half)
                throw std::invalid_argument("EigenSegment: endpoint must lie in (0, 1/2]^n");
        }
    }
};

inline bool verify_eigen(const UnimodularMatrix& L, const QuadExt& lambda,
                         const std::vector<QuadExt>& w) {
    std::vector<QuadExt> lw = L.apply(w);
    for (size_t i = 0; i < w.size(); ++i)
        if (lw[i] != lambda * w[i]) return false;
    if (lambda.sign() <= 0 || lambda >= QuadExt::from_rational(1, lambda.D())) return false;
    QuadExt half = QuadExt::from_rational(Rational(1, 2), lambda.D());
    for (const auto& c : w)
        if (c.sign() <= 0 || c > half) return false;
    return true;
}

// The only rational point of {t*w} is the origin iff the direction of w is
// irrational, i.e. some coordinate ratio has a nonzero sqrt component.
inline bool no_nonzero_rational_on_segment(const std::vector<QuadExt>& w) {
    size_t pivot = w.size();
    for (size_t i = 0; i < w.size(); ++i)
        if (w[i].sign() != 0) {
            pivot = i;
            break;
        }
    if (pivot == w.size()) throw std::invalid_argument("no_nonzero_rational_on_segment: w = 0");
    for (size_t i = 0; i < w.size(); ++i)
        if (!(w[i] / w[pivot]).is_rational()) return true;
    return false;
}

inline bool no_nonzero_rational_on_segment(const EigenSegment& E) {
    return no_nonzero_rational_on_segment(E.w);
}

// Piecewise-linear function of the segment parameter t in [0,1], with
// breakpoints and coefficients in Q(sqrt(D)).  Canonical form merges
// intervals sharing a linear piece, so structural equality decides function
// equality.
class SegmentFunction {
public:
    SegmentFunction(Integer D, std::vector<QuadExt> breaks, std::vector<QuadExt> slopes,
                    std::vector<QuadExt> intercepts,
                    std::shared_ptr<const McNFunction> provenance = nullptr)
        : D_(std::move(D)), breaks_(std::move(breaks)), slopes_(std::move(slopes)),
          intercepts_(std::move(intercepts)), provenance_(std::move(provenance)) {
        validate();
        canonicalize();
    }

    static SegmentFunction constant(const Rational& c, const Integer& D) {
        return SegmentFunction(D,
                               {QuadExt::from_rational(0, D), QuadExt::from_rational(1, D)},
                               {QuadExt::from_rational(0, D)}, {QuadExt::from_rational(c, D)});
    }

    const Integer& D() const { return D_; }
    const std::vector<QuadExt>& breaks() const { return breaks_; }
    const std::vector<QuadExt>& slopes() const { return slopes_; }
    const std::vector<QuadExt>& intercepts() const { return intercepts_; }
    const McNFunction* provenance() const { return provenance_.get(); }

    QuadExt eval(const QuadExt& t) const {
        if (t.sign() < 0 || t > breaks_.back())
            throw std::invalid_argument("SegmentFunction: parameter outside [0,1]");
        for (size_t i = 0; i + 1 < breaks_.size(); ++i)
            if (t <= breaks_[i + 1]) return slopes_[i] * t + intercepts_[i];
        throw std::logic_error("SegmentFunction: interval not located");
    }

    bool is_zero() const {
        QuadExt z = QuadExt::from_rational(0, D_);
        return slopes_.size() == 1 && slopes_[0] == z && intercepts_[0] == z;
    }

    bool operator==(const SegmentFunction& o) const {
        return breaks_ == o.breaks_ && slopes_ == o.slopes_ && intercepts_ == o.intercepts_;
    }
    bool operator!=(const SegmentFunction& o) const { return !(*this == o); }

private:
    void validate() const {
        if (breaks_.size() < 2 || slopes_.size() + 1 != breaks_.size() || slopes_.size() != intercepts_.size())
            throw std::invalid_argument("SegmentFunction: piece table mismatch");
        if (breaks_.front() != QuadExt::from_rational(0, D_) || breaks_.back() != QuadExt::from_rational(1, D_))
            throw std::invalid_argument("SegmentFunction: parameter range must be [0,1]");
        QuadExt zero = QuadExt::from_rational(0, D_);
        QuadExt one = QuadExt::from_rational(1, D_);
        for (size_t i = 0; i + 1 < breaks_.size(); ++i) {
            if (!(breaks_[i] < breaks_[i + 1]))
                throw std::invalid_argument("SegmentFunction: breakpoints not strictly sorted");
            if (i + 2 < breaks_.size() &&
                slopes_[i] * breaks_[i + 1] + intercepts_[i] != slopes_[i + 1] * breaks_[i + 1] + intercepts_[i + 1])
                throw std::invalid_argument("SegmentFunction: pieces disagree at a breakpoint");
        }
        for (size_t i = 0; i + 1 < breaks_.size(); ++i)
            for (const QuadExt& t : {breaks_[i], breaks_[i + 1]}) {
                QuadExt v = slopes_[i] * t + intercepts_[i];
                if (v < zero || v > one) throw std::invalid_argument("SegmentFunction: values leave [0,1]");
            }
    }

    void canonicalize() {
        std::vector<QuadExt> bs{breaks_.front()};
        std::vector<QuadExt> sl, ic;
        for (size_t i = 0; i + 1 < breaks_.size(); ++i) {
            if (!sl.empty() && sl.back() == slopes_[i] && ic.back() == intercepts_[i]) {
                bs.back() = breaks_[i + 1];
                continue;
            }
            sl.push_back(slopes_[i]);
            ic.push_back(intercepts_[i]);
            bs.push_back(breaks_[i + 1]);
        }
        breaks_ = std::move(bs);
        slopes_ = std::move(sl);
        intercepts_ = std::move(ic);
    }

    Integer D_;
    std::vector<QuadExt> breaks_;
    std::vector<QuadExt> slopes_;
    std::vector<QuadExt> intercepts_;
    std::shared_ptr<const McNFunction> provenance_;
};

namespace detail {

inline QuadExt quad_dot(const Vec& a, const std::vector<QuadExt>& p, const Integer& D) {
    QuadExt s = QuadExt::from_rational(0, D);
    for (size_t i = 0; i < a.size(); ++i) s = s + QuadExt::from_rational(a[i], D) * p[i];
    return s;
}

// Index of the domain cell containing a Q(sqrt D) point, by exact sign tests
// against each cell's H-representation.
inline size_t quad_find_cell(const SimplicialComplex& K, const std::vector<QuadExt>& p, const Integer& D) {
    for (size_t i = 0; i < K.cells().size(); ++i) {
        const geo::HRep& H = K.cells()[i].hrep();
        bool ok = true;
        for (const auto& e : H.eqs)
            if (quad_dot(e.a, p, D) != QuadExt::from_rational(e.b, D)) { ok = false; break; }
        if (ok)
            for (const auto& q : H.ineqs)
                if (quad_dot(q.a, p, D) > QuadExt::from_rational(q.b, D)) { ok = false; break; }
        if (ok) return i;
    }
    throw std::invalid_argument("restrict: segment leaves the carrier");
}

}  // namespace detail

// Exact restriction f(t*w): breakpoints are the parameter values where t*w
// crosses a wall of f's domain, each solved linearly in t over Q(sqrt D).
inline SegmentFunction restrict_to_segment(const McNFunction& f, const EigenSegment& E) {
    const Integer& D = E.D;
    if (size_t(f.arity()) != E.w.size()) throw std::invalid_argument("restrict: arity mismatch");
    QuadExt zero = QuadExt::from_rational(0, D);
    QuadExt one = QuadExt::from_rational(1, D);

    std::set<std::vector<Integer>> seen;
    std::vector<std::pair<Vec, Rational>> walls;
    for (const auto& cell : f.domain().cells()) detail::collect_walls(cell.hrep(), seen, walls);

    std::vector<QuadExt> breaks{zero, one};
    for (const auto& [a, b] : walls) {
        QuadExt s = detail::quad_dot(a, E.w, D);
        if (s.sign() == 0) continue;
        QuadExt t = QuadExt::from_rational(b, D) / s;
        if (t > zero && t < one) breaks.push_back(std::move(t));
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::vector<QuadExt> slopes, intercepts;
    QuadExt two = QuadExt::from_rational(2, D);
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        QuadExt tm = (breaks[i] + breaks[i + 1]) / two;
        std::vector<QuadExt> p;
        for (const auto& c : E.w) p.push_back(tm * c);
        size_t cell = detail::quad_find_cell(f.domain(), p, D);
        const auto& piece = f.as_lgroup().pieces()[cell];
        QuadExt slope = zero;
        for (size_t j = 0; j < E.w.size(); ++j)
            slope = slope + QuadExt::from_rational(Rational(piece.coeffs[j]), D) * E.w[j];
        slopes.push_back(std::move(slope));
        intercepts.push_back(QuadExt::from_rational(Rational(piece.offset), D));
    }
    return SegmentFunction(D, std::move(breaks), std::move(slopes), std::move(intercepts),
                           std::make_shared<McNFunction>(f));
}

// Parameter substitution t -> lambda*t, the segment form of composing with
// the eigen contraction.
inline SegmentFunction sigma_eigen(const SegmentFunction& s, const QuadExt& lambda) {
    const Integer& D = s.D();
    if (lambda.D() != D) throw std::invalid_argument("sigma_eigen: mixed field base");
    if (lambda.sign() <= 0 || lambda >= QuadExt::from_rational(1, D))
        throw std::invalid_argument("sigma_eigen: contraction factor must satisfy 0 < lambda < 1");
    QuadExt zero = QuadExt::from_rational(0, D);
    QuadExt one = QuadExt::from_rational(1, D);
    std::vector<QuadExt> breaks{zero, one};
    for (size_t i = 1; i + 1 < s.breaks().size(); ++i) {
        QuadExt t = s.breaks()[i] / lambda;
        if (t > zero && t < one) breaks.push_back(std::move(t));
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<QuadExt> slopes, intercepts;
    QuadExt two = QuadExt::from_rational(2, D);
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        QuadExt tm = lambda * ((breaks[i] + breaks[i + 1]) / two);
        // piece of s at the image midpoint
        const auto& sb = s.breaks();
        size_t k = 0;
        while (k + 2 < sb.size() && tm > sb[k + 1]) ++k;
        slopes.push_back(lambda * s.slopes()[k]);
        intercepts.push_back(s.intercepts()[k]);
    }
    return SegmentFunction(D, std::move(breaks), std::move(slopes), std::move(intercepts));
}

namespace detail {

enum class SegOp { TruncatedPlus, Join, Meet };

inline SegmentFunction seg_combine(const SegmentFunction& f, const SegmentFunction& g, SegOp op) {
    const Integer& D = f.D();
    if (g.D() != D) throw std::invalid_argument("segment ops: mixed field base");
    QuadExt one = QuadExt::from_rational(1, D);
    std::vector<QuadExt> breaks;
    breaks.insert(breaks.end(), f.breaks().begin(), f.breaks().end());
    breaks.insert(breaks.end(), g.breaks().begin(), g.breaks().end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    // insert the points where the selected branch changes
    std::vector<QuadExt> cross;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        // local linear forms of f, g recovered from the interval endpoints
        QuadExt t0 = breaks[i], t1 = breaks[i + 1];
        QuadExt dt = t1 - t0;
        QuadExt sf = (f.eval(t1) - f.eval(t0)) / dt, cf = f.eval(t0) - sf * t0;
        QuadExt sg = (g.eval(t1) - g.eval(t0)) / dt, cg = g.eval(t0) - sg * t0;
        QuadExt ds = op == SegOp::TruncatedPlus ? sf + sg : sf - sg;
        QuadExt dc = op == SegOp::TruncatedPlus ? cf + cg - one : cf - cg;
        if (ds.sign() != 0) {
            QuadExt t = -dc / ds;
            if (t > t0 && t < t1) cross.push_back(std::move(t));
        }
    }
    breaks.insert(breaks.end(), cross.begin(), cross.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    auto apply = [&](const QuadExt& a, const QuadExt& b) {
        switch (op) {
            case SegOp::TruncatedPlus: {
                QuadExt s = a + b;
                return s > one ? one : s;
            }
            case SegOp::Join: return a >= b ? a : b;
            case SegOp::Meet: return a <= b ? a : b;
        }
        throw std::logic_error("segment ops: unknown op");
    };

    std::vector<QuadExt> slopes, intercepts;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        QuadExt t0 = breaks[i], t1 = breaks[i + 1];
        QuadExt v0 = apply(f.eval(t0), g.eval(t0));
        QuadExt v1 = apply(f.eval(t1), g.eval(t1));
        QuadExt slope = (v1 - v0) / (t1 - t0);
        intercepts.push_back(v0 - slope * t0);
        slopes.push_back(std::move(slope));
    }
    return SegmentFunction(D, std::move(breaks), std::move(slopes), std::move(intercepts));
}

}  // namespace detail

inline SegmentFunction seg_plus(const SegmentFunction& f, const SegmentFunction& g) {
    return detail::seg_combine(f, g, detail::SegOp::TruncatedPlus);
}
inline SegmentFunction seg_join(const SegmentFunction& f, const SegmentFunction& g) {
    return detail::seg_combine(f, g, detail::SegOp::Join);
}
inline SegmentFunction seg_meet(const SegmentFunction& f, const SegmentFunction& g) {
    return detail::seg_combine(f, g, detail::SegOp::Meet);
}
inline SegmentFunction seg_neg(const SegmentFunction& f) {
    QuadExt one = QuadExt::from_rational(1, f.D());
    std::vector<QuadExt> slopes, intercepts;
    for (size_t i = 0; i < f.slopes().size(); ++i) {
        slopes.push_back(-f.slopes()[i]);
        intercepts.push_back(one - f.intercepts()[i]);
    }
    return SegmentFunction(f.D(), f.breaks(), std::move(slopes), std::move(intercepts));
}

// Figure 1 data: the inverse of [[2,1],[1,1]] contracting the eigen segment
// in direction w by lambda = (3 - sqrt5)/2.
struct Figure1 {
    UnimodularMatrix L;
    QuadExt lambda;
    EigenSegment w;
};

inline Figure1 build_figure1() {
    UnimodularMatrix L({{Integer(1), Integer(-1)}, {Integer(-1), Integer(2)}});
    QuadExt lambda(Rational(3, 2), Rational(-1, 2), 5);
    EigenSegment w({QuadExt(Rational(1, 2), 0, 5), QuadExt(Rational(-1, 4), Rational(1, 4), 5)});
    if (!verify_eigen(L, lambda, w.w)) throw std::logic_error("build_figure1: eigen data failed verification");
    return {std::move(L), std::move(lambda), std::move(w)};
}

// Separating strip T = {x1 > c} with lambda/2 < c < 1/2: its hat function
// vanishes on the contracted segment but not on the full one.
struct KernelWitness {
    Rational c;
    McNFunction g;
    SegmentFunction restricted;
    SegmentFunction sigma_image;
    bool restriction_nonzero;
    bool sigma_image_zero;
    bool certificate;
};

namespace detail {

inline KernelWitness kernel_witness_at(const EigenSegment& w, const QuadExt& lambda, const Rational& c) {
    Vec strip(w.w.size(), Rational(0));
    strip[0] = 1;
    McNFunction g = hat_function(int(w.w.size()), {{strip, -c}});
    SegmentFunction r = restrict_to_segment(g, w);
    SegmentFunction sr = sigma_eigen(r, lambda);
    bool nonzero = !r.is_zero();
    bool zero_after = sr.is_zero();
    return {c, std::move(g), std::move(r), std::move(sr), nonzero, zero_after, nonzero && zero_after};
}

}  // namespace detail

inline KernelWitness kernel_witness(const EigenSegment& w, const QuadExt& lambda) {
    QuadExt two = QuadExt::from_rational(2, lambda.D());
    Rational c = simplest_between(lambda / two, QuadExt::from_rational(Rational(1, 2), lambda.D()));
    return detail::kernel_witness_at(w, lambda, c);
}

// Strip bound below lambda/2: the hat survives on the contracted segment, so
// the certificate must fail.
inline KernelWitness kernel_negative_control(const EigenSegment& w, const QuadExt& lambda) {
    QuadExt two = QuadExt::from_rational(2, lambda.D());
    Rational c = simplest_between(QuadExt::from_rational(0, lambda.D()), lambda / two);
    return detail::kernel_witness_at(w, lambda, c);
}

}  // namespace mvforge
