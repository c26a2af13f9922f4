#pragma once

#include "mvforge/quadext.hpp"

#include <map>
#include <optional>
#include <utility>

namespace mvforge {

namespace detail {

// floor((P + sqrt(N)) / Q) for integers with N >= 0, Q != 0, computed exactly.
inline Integer floor_surd(const Integer& P, const Integer& N, const Integer& Q) {
    Integer s = boost::multiprecision::sqrt(N);  // integer sqrt: s <= sqrt(N) < s+1
    // Initial guess with the integer part of sqrt(N), then fix up by exact
    // comparison of k*Q against P + sqrt(N).
    auto fdiv = [](const Integer& a, const Integer& b) {
        Integer q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    };
    Integer k = Q > 0 ? fdiv(P + s, Q) : fdiv(P + s + 1, Q);
    auto le_surd = [&](const Integer& v) {  // v <= P + sqrt(N) ?
        Integer d = v - P;                  // v <= P + sqrt(N)  iff  d <= sqrt(N)
        if (d <= 0) return true;
        return d * d <= N;
    };
    auto surd_lt = [&](const Integer& v) {  // P + sqrt(N) < v ?
        return !le_surd(v);
    };
    if (Q > 0) {
        while (!le_surd(k * Q)) --k;
        while (le_surd((k + 1) * Q)) ++k;
    } else {
        // t/Q with Q < 0: k = floor(t/Q) iff kQ >= t > (k+1)Q.
        while (le_surd(k * Q)) --k;
        while (surd_lt((k + 1) * Q)) ++k;
    }
    return k;
}

}  // namespace detail

// Simple continued fraction [a0; a1, a2, ...] with an optional purely
// periodic tail.  All partial quotients >= 1 except a0, which may be 0.
class ContinuedFraction {
public:
    explicit ContinuedFraction(std::vector<Integer> head, std::vector<Integer> tail = {})
        : head_(std::move(head)), tail_(std::move(tail)) {
        if (head_.empty()) throw std::invalid_argument("ContinuedFraction: needs a0");
        if (head_[0] < 0) throw std::invalid_argument("ContinuedFraction: a0 must be >= 0");
        for (size_t i = 1; i < head_.size(); ++i)
            if (head_[i] < 1) throw std::invalid_argument("ContinuedFraction: quotients must be >= 1");
        for (const auto& a : tail_)
            if (a < 1) throw std::invalid_argument("ContinuedFraction: tail quotients must be >= 1");
    }

    bool periodic() const { return !tail_.empty(); }
    const std::vector<Integer>& head() const { return head_; }
    const std::vector<Integer>& tail() const { return tail_; }

    // i-th partial quotient, expanding the periodic tail as needed.
    Integer quotient(size_t i) const {
        if (i < head_.size()) return head_[i];
        if (tail_.empty())
            throw std::invalid_argument("ContinuedFraction: quotient index exceeds finite expansion");
        return tail_[(i - head_.size()) % tail_.size()];
    }

    // First k convergents p_i/q_i via the standard recurrence.
    std::vector<Rational> convergents(size_t k) const {
        if (k < 1) throw std::invalid_argument("convergents: k >= 1 required");
        if (tail_.empty() && k > head_.size())
            throw std::invalid_argument("convergents: k exceeds available quotients");
        std::vector<Rational> out;
        Integer p0 = 1, p1 = quotient(0), q0 = 0, q1 = 1;
        out.emplace_back(p1, q1);
        for (size_t i = 1; i < k; ++i) {
            Integer a = quotient(i);
            Integer p2 = a * p1 + p0, q2 = a * q1 + q0;
            out.emplace_back(p2, q2);
            p0 = p1; p1 = p2; q0 = q1; q1 = q2;
        }
        return out;
    }

    // Expansion of x >= 0.  Rational x yields a finite expansion (Euclid);
    // irrational quadratic x yields an eventually periodic one, detected by
    // recurrence of the (P, Q) state of the surd (P + sqrt(N)) / Q.
    static ContinuedFraction from_quadext(const QuadExt& x) {
        if (x.sign() < 0) throw std::invalid_argument("from_quadext: negative input");
        if (x.is_rational()) {
            Rational r = x.a();
            std::vector<Integer> head;
            Integer p = num(r), q = den(r);
            while (q != 0) {
                Integer a = p / q;
                if (p % q != 0 && ((p < 0) != (q < 0))) --a;
                head.push_back(a);
                Integer rem = p - a * q;
                p = q; q = rem;
            }
            // Canonical form: last quotient > 1 unless the expansion is just [a0].
            if (head.size() > 1 && head.back() == 1) {
                head.pop_back();
                head.back() += 1;
            }
            return ContinuedFraction(std::move(head));
        }
        // x = (P + sqrt(N)) / Q with Q | N - P^2 (achieved by scaling).
        Rational ra = x.a(), rb = x.b();
        Integer r = boost::multiprecision::lcm(den(ra), den(rb));
        Integer p = num(ra) * (r / den(ra));
        Integer s = num(rb) * (r / den(rb));
        Integer P, N, Q;
        if (s > 0) { P = p; N = s * s * x.D(); Q = r; }
        else { P = -p; N = s * s * x.D(); Q = -r; }
        if ((N - P * P) % Q != 0) {
            Integer m = boost::multiprecision::abs(Q);
            P *= m; N *= m * m; Q *= m;
        }
        std::vector<Integer> quots;
        std::map<std::pair<Integer, Integer>, size_t> seen;
        for (;;) {
            auto state = std::make_pair(P, Q);
            auto it = seen.find(state);
            if (it != seen.end()) {
                std::vector<Integer> head(quots.begin(), quots.begin() + it->second);
                std::vector<Integer> tail(quots.begin() + it->second, quots.end());
                if (head.empty()) head = tail;  // purely periodic: unroll one period
                return ContinuedFraction(std::move(head), std::move(tail));
            }
            seen.emplace(state, quots.size());
            Integer a = detail::floor_surd(P, N, Q);
            quots.push_back(a);
            P = a * Q - P;
            Q = (N - P * P) / Q;
        }
    }

private:
    std::vector<Integer> head_, tail_;
};

// Smallest-denominator rational in the open interval (lo, hi), by the
// Stern-Brocot walk.  Requires 0 <= lo < hi.
inline Rational simplest_between(const QuadExt& lo, const QuadExt& hi) {
    if (!((lo - hi).sign() < 0) || lo.sign() < 0)
        throw std::invalid_argument("simplest_between: requires 0 <= lo < hi");
    Integer lp = 0, lq = 1, rp = 1, rq = 0;
    for (;;) {
        Integer mp = lp + rp, mq = lq + rq;
        QuadExt m = QuadExt::from_rational(Rational(mp, mq), lo.D());
        if ((m - lo).sign() <= 0) { lp = mp; lq = mq; }
        else if ((m - hi).sign() >= 0) { rp = mp; rq = mq; }
        else return Rational(mp, mq);
    }
}

inline Rational simplest_between(const Rational& lo, const Rational& hi) {
    return simplest_between(QuadExt::from_rational(lo, 2), QuadExt::from_rational(hi, 2));
}

}  // namespace mvforge
