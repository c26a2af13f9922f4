#pragma once

#include "mvforge/mcnaughton.hpp"
#include "mvforge/quadext.hpp"

namespace mvforge {

// Lukasiewicz chain with d+1 elements {0, 1/d, ..., 1}, encoded as 0..d.
class MVChain {
public:
    explicit MVChain(int d) : d_(d) {
        if (d < 1) throw std::invalid_argument("MVChain: d must be >= 1");
    }

    int d() const { return d_; }
    int size() const { return d_ + 1; }

    int check(int i) const {
        if (i < 0 || i > d_) throw std::invalid_argument("MVChain: element out of range");
        return i;
    }

    int plus(int i, int j) const { return std::min(d_, check(i) + check(j)); }
    int neg(int i) const { return d_ - check(i); }
    int join(int i, int j) const { return std::max(check(i), check(j)); }
    int meet(int i, int j) const { return std::min(check(i), check(j)); }

    bool operator==(const MVChain& o) const { return d_ == o.d_; }

private:
    int d_;
};

// Finite product of chains; elements are integer tuples, operations act
// componentwise.
class FiniteMV {
public:
    using Elem = std::vector<int>;

    explicit FiniteMV(std::vector<int> ds) {
        if (ds.empty()) throw std::invalid_argument("FiniteMV: no factors");
        for (int d : ds) factors_.emplace_back(d);
    }

    size_t factor_count() const { return factors_.size(); }
    const MVChain& factor(size_t i) const { return factors_[i]; }

    size_t size() const {
        size_t s = 1;
        for (const auto& c : factors_) s *= size_t(c.size());
        return s;
    }

    void check(const Elem& a) const {
        if (a.size() != factors_.size()) throw std::invalid_argument("FiniteMV: element arity mismatch");
        for (size_t i = 0; i < a.size(); ++i) factors_[i].check(a[i]);
    }

    Elem zero() const { return Elem(factors_.size(), 0); }
    Elem one() const {
        Elem e;
        for (const auto& c : factors_) e.push_back(c.d());
        return e;
    }

    Elem plus(const Elem& a, const Elem& b) const { return zip(a, b, [](const MVChain& c, int x, int y) { return c.plus(x, y); }); }
    Elem join(const Elem& a, const Elem& b) const { return zip(a, b, [](const MVChain& c, int x, int y) { return c.join(x, y); }); }
    Elem meet(const Elem& a, const Elem& b) const { return zip(a, b, [](const MVChain& c, int x, int y) { return c.meet(x, y); }); }
    Elem neg(const Elem& a) const {
        check(a);
        Elem e;
        for (size_t i = 0; i < a.size(); ++i) e.push_back(factors_[i].neg(a[i]));
        return e;
    }

    std::vector<Elem> elements() const {
        std::vector<Elem> out;
        Elem e = zero();
        for (;;) {
            out.push_back(e);
            size_t c = 0;
            while (c < e.size() && e[c] == factors_[c].d()) e[c++] = 0;
            if (c == e.size()) break;
            ++e[c];
        }
        return out;
    }

    size_t index_of(const Elem& a) const {
        check(a);
        size_t idx = 0, stride = 1;
        for (size_t i = 0; i < a.size(); ++i) {
            idx += stride * size_t(a[i]);
            stride *= size_t(factors_[i].size());
        }
        return idx;
    }

    bool operator==(const FiniteMV& o) const {
        if (factors_.size() != o.factors_.size()) return false;
        for (size_t i = 0; i < factors_.size(); ++i)
            if (!(factors_[i] == o.factors_[i])) return false;
        return true;
    }

private:
    template <typename Op>
    Elem zip(const Elem& a, const Elem& b, Op op) const {
        check(a);
        check(b);
        Elem e;
        for (size_t i = 0; i < a.size(); ++i) e.push_back(op(factors_[i], a[i], b[i]));
        return e;
    }

    std::vector<MVChain> factors_;
};

// Homomorphism between finite MV-algebras as an element table, verified
// exhaustively at construction.
struct FiniteHom {
    FiniteMV dom;
    FiniteMV cod;
    std::vector<FiniteMV::Elem> table;  // indexed by dom element index

    FiniteHom(FiniteMV d, FiniteMV c, std::vector<FiniteMV::Elem> t)
        : dom(std::move(d)), cod(std::move(c)), table(std::move(t)) {
        auto elems = dom.elements();
        if (table.size() != elems.size()) throw std::invalid_argument("FiniteHom: table size mismatch");
        for (const auto& v : table) cod.check(v);
        auto at = [&](const FiniteMV::Elem& a) { return table[dom.index_of(a)]; };
        if (at(dom.zero()) != cod.zero()) throw std::invalid_argument("FiniteHom: does not preserve 0");
        for (const auto& a : elems) {
            if (at(dom.neg(a)) != cod.neg(at(a))) throw std::invalid_argument("FiniteHom: does not preserve negation");
            for (const auto& b : elems)
                if (at(dom.plus(a, b)) != cod.plus(at(a), at(b)))
                    throw std::invalid_argument("FiniteHom: does not preserve sum");
        }
    }

    FiniteMV::Elem apply(const FiniteMV::Elem& a) const { return table[dom.index_of(a)]; }

    bool injective() const {
        std::set<FiniteMV::Elem> img(table.begin(), table.end());
        return img.size() == table.size();
    }

    bool surjective() const {
        std::set<FiniteMV::Elem> img(table.begin(), table.end());
        return img.size() == cod.size();
    }
};

// Element of the Chang algebra: (0,k) is k*eps for k >= 0, (1,k) is 1+k*eps
// (so 1-|k|*eps) for k <= 0.
struct ChangElement {
    int m;
    long long k;

    ChangElement(int mm, long long kk) : m(mm), k(kk) {
        if (m != 0 && m != 1) throw std::invalid_argument("ChangElement: integer part must be 0 or 1");
        if (m == 0 && k < 0) throw std::invalid_argument("ChangElement: k*eps needs k >= 0");
        if (m == 1 && k > 0) throw std::invalid_argument("ChangElement: 1+k*eps needs k <= 0");
    }

    bool operator==(const ChangElement& o) const { return m == o.m && k == o.k; }
};

inline ChangElement chang_neg(const ChangElement& a) { return ChangElement(1 - a.m, -a.k); }

// Truncated lexicographic sum at the unit (1,0).
inline ChangElement chang_plus(const ChangElement& a, const ChangElement& b) {
    int m = a.m + b.m;
    long long k = a.k + b.k;
    if (m > 1 || (m == 1 && k >= 0)) return ChangElement(1, 0);
    return ChangElement(m, k);
}

inline ChangElement chang_join(const ChangElement& a, const ChangElement& b) {
    bool a_ge = a.m != b.m ? a.m > b.m : a.k >= b.k;
    return a_ge ? a : b;
}

inline ChangElement chang_meet(const ChangElement& a, const ChangElement& b) {
    bool a_le = a.m != b.m ? a.m < b.m : a.k <= b.k;
    return a_le ? a : b;
}

// Evaluation witness: f(r) = image/d > 0 at the rational point r, so
// evaluation at r is a homomorphism onto a subalgebra of the chain with
// denominator d separating f from 0.
struct Separation {
    RatPoint r;
    Integer d;
    Integer image;
};

// Scans the vertices of f's domain (f is affine per cell, so a nonzero f is
// positive at some vertex) and picks a positive vertex of least denominator,
// breaking ties by vertex order.
inline Separation separate(const McNFunction& f) {
    if (f.max_value() == 0) throw std::domain_error("separate: function is identically zero");
    std::optional<RatPoint> best;
    Integer best_den = 0;
    for (const auto& v : f.domain().vertices()) {
        if (f.eval_at(v) <= 0) continue;
        Integer dv = den(v);
        if (!best || dv < best_den) {
            best = v;
            best_den = dv;
        }
    }
    if (!best) throw std::logic_error("separate: positive function with no positive vertex");
    Rational val = f.eval_at(*best);
    Integer image = num(val) * (best_den / den(val));
    return {*best, best_den, image};
}

// Carrier descriptors for the residual-finiteness question: a rational
// complex, or the segment {t*w : t in [0,1]} with quadratic-irrational w.
struct CarrierDescriptor {
    enum class Kind { RationalComplex, QuadSegment } kind;
    std::optional<SimplicialComplex> complex;
    std::vector<QuadExt> w;

    static CarrierDescriptor rational_complex(SimplicialComplex K) {
        CarrierDescriptor d{Kind::RationalComplex, std::move(K), {}};
        return d;
    }
    static CarrierDescriptor quad_segment(std::vector<QuadExt> w) {
        if (w.empty()) throw std::invalid_argument("CarrierDescriptor: empty endpoint");
        CarrierDescriptor d{Kind::QuadSegment, std::nullopt, std::move(w)};
        return d;
    }
};

struct ResidualReport {
    bool residually_finite;
    std::string witness;
};

// A segment {t*w} carries a dense set of rational points exactly when its
// direction is rational; a rational complex always does (rational vertices).
inline ResidualReport is_residually_finite(const CarrierDescriptor& X) {
    if (X.kind == CarrierDescriptor::Kind::RationalComplex)
        return {true, "rational points are dense in every cell of a rational complex"};
    size_t pivot = X.w.size();
    for (size_t i = 0; i < X.w.size(); ++i)
        if (X.w[i].sign() != 0) {
            pivot = i;
            break;
        }
    if (pivot == X.w.size()) return {true, "degenerate segment {0} is finite"};
    for (size_t i = 0; i < X.w.size(); ++i) {
        QuadExt ratio = X.w[i] / X.w[pivot];
        if (!ratio.is_rational())
            return {false, "irrational direction ratio: the only rational point is the origin"};
    }
    return {true, "rational direction: rational points are dense on the segment"};
}

// All homomorphisms A -> chain(e) by backtracking over images of the factor
// atoms (the tuples with a single 1): every element is an MV-sum of atoms, so
// a candidate assignment determines the full table, then gets verified.
inline std::vector<std::vector<int>> homs_to_chain(const FiniteMV& A, int e) {
    MVChain C(e);
    auto elems = A.elements();
    std::vector<std::vector<int>> out;
    size_t r = A.factor_count();
    std::vector<int> v(r, 0);
    auto try_assignment = [&]() {
        std::vector<int> table(elems.size());
        for (size_t idx = 0; idx < elems.size(); ++idx) {
            long long s = 0;
            for (size_t i = 0; i < r; ++i) s += (long long)elems[idx][i] * v[i];
            table[idx] = int(std::min<long long>(e, s));
        }
        auto at = [&](const FiniteMV::Elem& a) { return table[A.index_of(a)]; };
        for (const auto& a : elems) {
            if (at(A.neg(a)) != C.neg(at(a))) return;
            for (const auto& b : elems)
                if (at(A.plus(a, b)) != C.plus(at(a), at(b))) return;
        }
        out.push_back(std::move(table));
    };
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == r) {
            try_assignment();
            return;
        }
        for (v[i] = 0; v[i] <= e; ++v[i]) self(self, i + 1);
        v[i] = 0;
    };
    rec(rec, 0);
    return out;
}

// All endomorphisms of A: one homomorphism into each factor chain, combined
// componentwise.
inline std::vector<FiniteHom> enumerate_endomorphisms(const FiniteMV& A, size_t max_size = 64) {
    if (A.size() > max_size) throw std::invalid_argument("enumerate_endomorphisms: algebra exceeds the size bound");
    auto elems = A.elements();
    std::vector<std::vector<std::vector<int>>> per_factor;
    for (size_t j = 0; j < A.factor_count(); ++j) per_factor.push_back(homs_to_chain(A, A.factor(j).d()));
    std::vector<FiniteHom> out;
    std::vector<size_t> choice(A.factor_count(), 0);
    for (;;) {
        std::vector<FiniteMV::Elem> table(elems.size(), FiniteMV::Elem(A.factor_count()));
        for (size_t idx = 0; idx < elems.size(); ++idx)
            for (size_t j = 0; j < A.factor_count(); ++j) table[idx][j] = per_factor[j][choice[j]][idx];
        out.emplace_back(A, A, std::move(table));
        size_t c = 0;
        while (c < choice.size() && choice[c] + 1 == per_factor[c].size()) choice[c++] = 0;
        if (c == choice.size()) break;
        ++choice[c];
    }
    return out;
}

inline bool is_hopfian_finite(const FiniteMV& A, size_t max_size = 64) {
    for (const auto& h : enumerate_endomorphisms(A, max_size))
        if (h.surjective() && !h.injective()) return false;
    return true;
}

// Smith normal form diagonal of a square integer matrix (nonnegative,
// divisibility chain d1 | d2 | ...).
inline std::vector<Integer> smith_normal_form(std::vector<std::vector<Integer>> M) {
    size_t k = M.size();
    for (const auto& row : M)
        if (row.size() != k) throw std::invalid_argument("smith_normal_form: matrix not square");
    using boost::multiprecision::abs;
    std::vector<Integer> diag;
    for (size_t t = 0; t < k; ++t) {
        for (;;) {
            size_t pr = t, pc = t;
            bool found = false;
            for (size_t i = t; i < k; ++i)
                for (size_t j = t; j < k; ++j)
                    if (M[i][j] != 0 && (!found || abs(M[i][j]) < abs(M[pr][pc]))) {
                        pr = i;
                        pc = j;
                        found = true;
                    }
            if (!found) {
                diag.push_back(0);
                break;
            }
            std::swap(M[pr], M[t]);
            for (size_t i = 0; i < k; ++i) std::swap(M[i][pc], M[i][t]);
            bool clean = true;
            for (size_t i = t + 1; i < k; ++i) {
                Integer q = M[i][t] / M[t][t];
                if (q != 0)
                    for (size_t j = t; j < k; ++j) M[i][j] -= q * M[t][j];
                if (M[i][t] != 0) clean = false;
            }
            for (size_t j = t + 1; j < k; ++j) {
                Integer q = M[t][j] / M[t][t];
                if (q != 0)
                    for (size_t i = t; i < k; ++i) M[i][j] -= q * M[i][t];
                if (M[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // Pivot must divide every remaining entry for the divisibility
            // chain; fold a violating row in and retry.
            bool divides = true;
            for (size_t i = t + 1; i < k && divides; ++i)
                for (size_t j = t + 1; j < k && divides; ++j)
                    if (M[i][j] % M[t][t] != 0) {
                        for (size_t jj = t; jj < k; ++jj) M[t][jj] += M[i][jj];
                        divides = false;
                    }
            if (!divides) continue;
            diag.push_back(abs(M[t][t]));
            break;
        }
    }
    return diag;
}

inline Integer int_determinant(const std::vector<std::vector<Integer>>& M) {
    size_t k = M.size();
    Mat R(k, Vec(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) R[i][j] = Rational(M[i][j]);
    Rational det = 1;
    for (size_t c = 0; c < k; ++c) {
        size_t p = c;
        while (p < k && R[p][c] == 0) ++p;
        if (p == k) return 0;
        if (p != c) {
            std::swap(R[p], R[c]);
            det = -det;
        }
        det *= R[c][c];
        for (size_t i = c + 1; i < k; ++i) {
            Rational f = R[i][c] / R[c][c];
            for (size_t j = c; j < k; ++j) R[i][j] -= f * R[c][j];
        }
    }
    return num(det);
}

// Surjectivity of Z^k -> Z^k means all invariant factors are 1, which forces
// |det| = 1 and hence injectivity.
struct ZnkReport {
    std::vector<Integer> invariant_factors;
    Integer det;
    bool surjective;
    bool injective;
    bool implication_holds;
};

inline ZnkReport znk_surjective_implies_injective(const std::vector<std::vector<Integer>>& M) {
    if (M.size() > 8) throw std::invalid_argument("znk check: k <= 8 required");
    ZnkReport rep;
    rep.invariant_factors = smith_normal_form(M);
    rep.det = int_determinant(M);
    rep.surjective = std::all_of(rep.invariant_factors.begin(), rep.invariant_factors.end(),
                                 [](const Integer& d) { return d == 1; });
    rep.injective = rep.det != 0;
    using boost::multiprecision::abs;
    rep.implication_holds = !rep.surjective || (abs(rep.det) == 1 && rep.injective);
    return rep;
}

}  // namespace mvforge
