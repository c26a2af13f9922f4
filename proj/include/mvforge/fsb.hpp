#pragma once

#include "mvforge/contfrac.hpp"
#include "mvforge/finitemv.hpp"

#include <cstdlib>
#include <sstream>

namespace mvforge {

// Leveled labeled graph generated by the mediant rule: row 0 holds 0/1 and
// 1/1 labeled 1; each later row interleaves inherited copies with mediants.
// Fractions come from the mediant recursion, labels from the edge-sum rule;
// that these agree (label = denominator) is checked in tests, not assumed.
class BratteliDiagram {
public:
    struct Vertex {
        Integer p, q;   // fraction p/q in lowest terms
        Integer label;
    };
    using Edge = std::pair<size_t, size_t>;  // (index in row d, index in row d+1)

    explicit BratteliDiagram(int d_max) {
        if (d_max < 0 || d_max > max_depth())
            throw std::invalid_argument("build_diagram: depth out of range");
        rows_.push_back({{0, 1, 1}, {1, 1, 1}});
        for (int d = 1; d <= d_max; ++d) {
            const auto& prev = rows_.back();
            std::vector<Vertex> row;
            std::vector<Edge> es;
            for (size_t i = 0; i < prev.size(); ++i) {
                es.emplace_back(i, row.size());
                row.push_back({prev[i].p, prev[i].q, prev[i].label});
                if (i + 1 < prev.size()) {
                    es.emplace_back(i, row.size());
                    es.emplace_back(i + 1, row.size());
                    row.push_back({prev[i].p + prev[i + 1].p, prev[i].q + prev[i + 1].q,
                                   prev[i].label + prev[i + 1].label});
                }
            }
            rows_.push_back(std::move(row));
            edges_.push_back(std::move(es));
        }
    }

    // Depth cap, overridable through the environment.
    static int max_depth() {
        if (const char* s = std::getenv("MVFORGE_MAX_DEPTH")) {
            char* end = nullptr;
            long v = std::strtol(s, &end, 10);
            if (end == s || *end != '\0' || v < 0)
                throw std::invalid_argument("MVFORGE_MAX_DEPTH: not a nonnegative integer");
            return int(v);
        }
        return 24;
    }

    int depth() const { return int(rows_.size()) - 1; }
    const std::vector<std::vector<Vertex>>& rows() const { return rows_; }
    const std::vector<std::vector<Edge>>& edges() const { return edges_; }

    std::vector<Integer> row_labels(int d) const {
        std::vector<Integer> out;
        for (const auto& v : rows_.at(size_t(d))) out.push_back(v.label);
        return out;
    }

    std::string to_dot() const {
        std::ostringstream os;
        os << "digraph bratteli {\n  rankdir=TB;\n  node [shape=box];\n";
        for (size_t d = 0; d < rows_.size(); ++d) {
            os << "  { rank=same;";
            for (size_t i = 0; i < rows_[d].size(); ++i) os << " v" << d << "_" << i << ";";
            os << " }\n";
            for (size_t i = 0; i < rows_[d].size(); ++i)
                os << "  v" << d << "_" << i << " [label=\"" << rows_[d][i].p << "/" << rows_[d][i].q
                   << " (" << rows_[d][i].label << ")\"];\n";
        }
        for (size_t d = 0; d < edges_.size(); ++d)
            for (const auto& [from, to] : edges_[d])
                os << "  v" << d << "_" << from << " -> v" << d + 1 << "_" << to << ";\n";
        os << "}\n";
        return os.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json js;
        auto& rows = js["rows"] = nlohmann::json::array();
        std::vector<size_t> offset{0};
        for (const auto& row : rows_) {
            nlohmann::json rj = nlohmann::json::array();
            for (const auto& v : row)
                rj.push_back({{"p", v.p.convert_to<long long>()},
                              {"q", v.q.convert_to<long long>()},
                              {"label", v.label.convert_to<long long>()}});
            rows.push_back(std::move(rj));
            offset.push_back(offset.back() + row.size());
        }
        auto& ej = js["edges"] = nlohmann::json::array();
        for (size_t d = 0; d < edges_.size(); ++d)
            for (const auto& [from, to] : edges_[d])
                ej.push_back({offset[d] + from, offset[d + 1] + to});
        return js;
    }

private:
    std::vector<std::vector<Vertex>> rows_;
    std::vector<std::vector<Edge>> edges_;
};

inline BratteliDiagram build_diagram(int d_max) { return BratteliDiagram(d_max); }

struct FareyVertex {
    int depth;
    size_t index;
    Rational fraction;
    Integer label;
};

// First appearance of rho in the mediant tree, located by the Stern-Brocot
// walk.  The walk interval endpoints stay adjacent in every row, so the
// mediant's row index is one past the doubled left index.
inline FareyVertex vertex_for_fraction(const Rational& rho) {
    if (rho < 0 || rho > 1) throw std::invalid_argument("vertex_for_fraction: fraction outside [0,1]");
    if (rho == 0) return {0, 0, rho, 1};
    if (rho == 1) return {0, 1, rho, 1};
    Rational lo(0), hi(1);
    size_t lo_idx = 0;
    int d = 0;
    for (;;) {
        Rational m(num(lo) + num(hi), den(lo) + den(hi));
        ++d;
        if (rho == m) return {d, 2 * lo_idx + 1, rho, den(rho)};
        if (rho < m) {
            hi = m;
            lo_idx = 2 * lo_idx;
        } else {
            lo = m;
            lo_idx = 2 * lo_idx + 1;
        }
    }
}

// Totally ordered group Z + Z*theta with unit 1; order decided by the exact
// sign of a + b*theta.
class EffrosShenGroup {
public:
    using Elem = std::pair<Integer, Integer>;  // a + b*theta

    explicit EffrosShenGroup(QuadExt theta) : theta_(std::move(theta)) {
        if (theta_.is_rational())
            throw std::invalid_argument("EffrosShenGroup: theta must be irrational");
        if (theta_.sign() <= 0 || theta_ >= QuadExt::from_rational(1, theta_.D()))
            throw std::invalid_argument("EffrosShenGroup: theta must lie in (0,1)");
    }

    const QuadExt& theta() const { return theta_; }
    static Elem zero() { return {0, 0}; }
    static Elem unit() { return {1, 0}; }

    QuadExt value(const Elem& g) const {
        return QuadExt::from_rational(Rational(g.first), theta_.D()) +
               QuadExt::from_rational(Rational(g.second), theta_.D()) * theta_;
    }

private:
    QuadExt theta_;
};

inline EffrosShenGroup::Elem es_add(const EffrosShenGroup::Elem& g, const EffrosShenGroup::Elem& h) {
    return {g.first + h.first, g.second + h.second};
}
inline EffrosShenGroup::Elem es_neg(const EffrosShenGroup::Elem& g) { return {-g.first, -g.second}; }
inline EffrosShenGroup::Elem es_sub(const EffrosShenGroup::Elem& g, const EffrosShenGroup::Elem& h) {
    return es_add(g, es_neg(h));
}

inline int es_sign(const EffrosShenGroup& G, const EffrosShenGroup::Elem& g) {
    return G.value(g).sign();
}
inline bool es_positive(const EffrosShenGroup& G, const EffrosShenGroup::Elem& g) {
    return es_sign(G, g) >= 0;
}
inline bool es_leq(const EffrosShenGroup& G, const EffrosShenGroup::Elem& g,
                   const EffrosShenGroup::Elem& h) {
    return es_sign(G, es_sub(h, g)) >= 0;
}
inline EffrosShenGroup::Elem es_join(const EffrosShenGroup& G, const EffrosShenGroup::Elem& g,
                                     const EffrosShenGroup::Elem& h) {
    return es_leq(G, g, h) ? h : g;
}
inline EffrosShenGroup::Elem es_meet(const EffrosShenGroup& G, const EffrosShenGroup::Elem& g,
                                     const EffrosShenGroup::Elem& h) {
    return es_leq(G, g, h) ? g : h;
}
inline bool es_below_unit(const EffrosShenGroup& G, const EffrosShenGroup::Elem& g) {
    return es_leq(G, g, EffrosShenGroup::unit());
}

// Sign of a + b*theta from a continued-fraction prefix alone.  The prefix is
// treated as proper (the expansion continues), so theta lies strictly between
// the last two convergents; anything the bracket cannot settle is Undecided.
enum class EsDecision { Negative, Zero, Positive, Undecided };

inline EsDecision es_sign_prefix(const ContinuedFraction& cf, size_t quotients,
                                 const EffrosShenGroup::Elem& g) {
    if (g.second == 0)
        return g.first > 0 ? EsDecision::Positive
                           : g.first < 0 ? EsDecision::Negative : EsDecision::Zero;
    if (quotients < 2) return EsDecision::Undecided;
    auto cs = cf.convergents(quotients);
    Rational lo = cs[cs.size() - 2], hi = cs.back();
    if (lo > hi) std::swap(lo, hi);
    Rational vlo = Rational(g.first) + Rational(g.second) * lo;
    Rational vhi = Rational(g.first) + Rational(g.second) * hi;
    if (vlo > vhi) std::swap(vlo, vhi);
    if (vlo >= 0) return EsDecision::Positive;
    if (vhi <= 0) return EsDecision::Negative;
    return EsDecision::Undecided;
}

struct PrimitiveQuotientDescriptor {
    enum class Kind { FiniteDim, EffrosShen };
    Kind kind;
    Integer q;                      // FiniteDim matrix size
    std::optional<QuadExt> theta;   // EffrosShen parameter
};

inline PrimitiveQuotientDescriptor primitive_quotient(const Rational& rho) {
    if (rho < 0 || rho > 1) throw std::invalid_argument("primitive_quotient: rho outside [0,1]");
    return {PrimitiveQuotientDescriptor::Kind::FiniteDim, den(rho), std::nullopt};
}

inline PrimitiveQuotientDescriptor primitive_quotient(const QuadExt& theta) {
    if (theta.is_rational())
        throw std::invalid_argument("primitive_quotient: quadratic input is secretly rational");
    if (theta.sign() <= 0 || theta >= QuadExt::from_rational(1, theta.D()))
        throw std::invalid_argument("primitive_quotient: theta outside (0,1)");
    return {PrimitiveQuotientDescriptor::Kind::EffrosShen, 0, theta};
}

// Both supported variants are simple at the ideal level: (Z, q) is totally
// ordered archimedean and Z + Z*theta has no proper nonzero ideal.  The
// value 2 is reserved for lexicographic descriptors, which carry no
// arithmetic here.
inline int prime_ideal_count(const PrimitiveQuotientDescriptor&) { return 1; }

// Finite-depth shadow of the kernel ideal of evaluation at rho: the row-d
// indices outside the downward edge-path cone of rho's first appearance.
// Children of row index i are 2i-1, 2i, 2i+1, clipped at the row ends.
inline std::vector<size_t> ideal_of_diagram_at(const Rational& rho, int depth) {
    FareyVertex v = vertex_for_fraction(rho);
    if (depth < v.depth)
        throw std::invalid_argument("ideal_of_diagram_at: fraction not yet present at this depth");
    std::vector<bool> cone;
    {
        size_t row_size = v.depth == 0 ? 2 : (size_t(1) << v.depth) + 1;
        cone.assign(row_size, false);
        cone[v.index] = true;
    }
    for (int d = v.depth; d < depth; ++d) {
        size_t next_size = (size_t(1) << (d + 1)) + 1;
        std::vector<bool> next(next_size, false);
        for (size_t i = 0; i < cone.size(); ++i) {
            if (!cone[i]) continue;
            if (i >= 1) next[2 * i - 1] = true;
            next[2 * i] = true;
            if (i + 1 < cone.size()) next[2 * i + 1] = true;
        }
        cone = std::move(next);
    }
    std::vector<size_t> out;
    for (size_t i = 0; i < cone.size(); ++i)
        if (!cone[i]) out.push_back(i);
    return out;
}

// Separating finite-dimensional data for a nonzero function on [0,1]: the
// separation point and its denominator, read as a representation dimension.
struct FdWitness {
    Rational point;
    Integer dimension;
};

inline FdWitness residual_fd_witness(const McNFunction& f) {
    if (f.arity() != 1) throw std::invalid_argument("residual_fd_witness: function must live on [0,1]");
    Separation s = separate(f);
    return {s.r[0], s.d};
}

}  // namespace mvforge
