#pragma once

#include "mvforge/rational.hpp"

namespace mvforge {

namespace detail {
inline bool squarefree(Integer d) {
    if (d < 2) return false;
    for (Integer f = 2; f * f <= d; ++f) {
        Integer c = 0;
        while (d % f == 0) { d /= f; ++c; }
        if (c > 1) return false;
    }
    return true;
}
}  // namespace detail

// Element a + b*sqrt(D) of the real quadratic field Q(sqrt(D)).
// Two values interoperate only when their D agree; mixed-D arithmetic is an
// error, not an embedding.
class QuadExt {
public:
    QuadExt(Rational a, Rational b, Integer D) : a_(std::move(a)), b_(std::move(b)), D_(std::move(D)) {
        if (!detail::squarefree(D_))
            throw std::invalid_argument("QuadExt: D must be square-free and >= 2");
    }
    static QuadExt from_rational(Rational a, Integer D) { return QuadExt(std::move(a), 0, std::move(D)); }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    const Integer& D() const { return D_; }
    bool is_rational() const { return b_ == 0; }

    // Exact sign, by case analysis on the signs of a, b and comparison of
    // a^2 with b^2*D.  a + b*sqrt(D) = 0 forces a = b = 0 because sqrt(D) is
    // irrational for square-free D >= 2.
    int sign() const {
        int sa = mvforge::sign(a_), sb = mvforge::sign(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        Rational cmp = a_ * a_ - b_ * b_ * Rational(D_);
        if (cmp > 0) return sa;
        if (cmp < 0) return sb;
        throw std::logic_error("QuadExt::sign: a^2 = b^2*D contradicts square-free D");
    }

    QuadExt operator-() const { return QuadExt(-a_, -b_, D_); }
    QuadExt operator+(const QuadExt& o) const { check(o); return QuadExt(a_ + o.a_, b_ + o.b_, D_); }
    QuadExt operator-(const QuadExt& o) const { check(o); return QuadExt(a_ - o.a_, b_ - o.b_, D_); }
    QuadExt operator*(const QuadExt& o) const {
        check(o);
        return QuadExt(a_ * o.a_ + b_ * o.b_ * Rational(D_), a_ * o.b_ + b_ * o.a_, D_);
    }
    QuadExt operator/(const QuadExt& o) const {
        check(o);
        Rational n = o.a_ * o.a_ - o.b_ * o.b_ * Rational(D_);
        if (o.a_ == 0 && o.b_ == 0) throw std::invalid_argument("QuadExt: division by zero");
        // n = 0 with o nonzero would make sqrt(D) rational.
        return *this * QuadExt(o.a_ / n, -o.b_ / n, D_);
    }

    bool operator==(const QuadExt& o) const { check(o); return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const QuadExt& o) const { return !(*this == o); }
    bool operator<(const QuadExt& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const QuadExt& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const QuadExt& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const QuadExt& o) const { return (*this - o).sign() >= 0; }

    // Serialization "a+b*sqrt(D)", a and b in p/q form.
    std::string str() const {
        std::string bs = to_string(b_);
        std::string sep = "+";
        if (b_ < 0) { sep = "-"; bs = to_string(-b_); }
        return to_string(a_) + sep + bs + "*sqrt(" + D_.str() + ")";
    }

    static QuadExt parse(const std::string& s) {
        auto star = s.find("*sqrt(");
        if (star == std::string::npos || s.back() != ')')
            throw std::invalid_argument("QuadExt::parse: expected a+b*sqrt(D)");
        Integer D(s.substr(star + 6, s.size() - star - 7));
        // Split "a+b" / "a-b" at the sign that starts the b term: the last
        // '+' or '-' not in position 0 and not directly after '/' or another sign.
        std::string ab = s.substr(0, star);
        size_t split = std::string::npos;
        for (size_t i = ab.size(); i-- > 1;) {
            if ((ab[i] == '+' || ab[i] == '-') && ab[i - 1] != '/' && ab[i - 1] != '+' && ab[i - 1] != '-') {
                split = i;
                break;
            }
        }
        if (split == std::string::npos) throw std::invalid_argument("QuadExt::parse: missing a term");
        Rational a = parse_rational(ab.substr(0, split));
        Rational b = parse_rational(ab.substr(split + 1));
        if (ab[split] == '-') b = -b;
        return QuadExt(a, b, D);
    }

private:
    void check(const QuadExt& o) const {
        if (D_ != o.D_) throw std::invalid_argument("QuadExt: mixed D");
    }
    Rational a_, b_;
    Integer D_;
};

// Za + Z = Zb + Z for irrational a, b in (0,1): holds iff b = a or b = 1 - a.
inline bool group_Z_plus_Z_equal(const QuadExt& a, const QuadExt& b) {
    if (a.is_rational() || b.is_rational())
        throw std::invalid_argument("group_Z_plus_Z_equal: requires irrational arguments");
    QuadExt one = QuadExt::from_rational(1, a.D());
    return b == a || b == one - a;
}

}  // namespace mvforge
