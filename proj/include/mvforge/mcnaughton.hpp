#pragma once

#include "mvforge/geometry.hpp"
#include "mvforge/term.hpp"

#include <utility>

namespace mvforge {

namespace detail {

inline AffineFunctional af_constant(size_t n, const Integer& c) {
    AffineFunctional h;
    h.coeffs.assign(n, 0);
    h.offset = c;
    return h;
}

inline AffineFunctional af_add(const AffineFunctional& a, const AffineFunctional& b) {
    AffineFunctional h = a;
    for (size_t i = 0; i < h.coeffs.size(); ++i) h.coeffs[i] += b.coeffs[i];
    h.offset += b.offset;
    return h;
}

inline AffineFunctional af_sub(const AffineFunctional& a, const AffineFunctional& b) {
    AffineFunctional h = a;
    for (size_t i = 0; i < h.coeffs.size(); ++i) h.coeffs[i] -= b.coeffs[i];
    h.offset -= b.offset;
    return h;
}

inline AffineFunctional af_scale(const AffineFunctional& a, const Integer& k) {
    AffineFunctional h = a;
    for (auto& c : h.coeffs) c *= k;
    h.offset *= k;
    return h;
}

// Builds a complex from (cell, data) rows and returns the data aligned with
// the complex's final cell order.
template <typename T>
std::pair<SimplicialComplex, std::vector<T>> build_aligned(int ambient,
                                                           std::vector<std::pair<RationalSimplex, T>> rows) {
    std::vector<RationalSimplex> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows) cells.push_back(r.first);
    SimplicialComplex K(ambient, std::move(cells));
    std::map<std::vector<RatPoint>, const T*> lookup;
    for (const auto& r : rows) lookup[r.first.vertices()] = &r.second;
    std::vector<T> data;
    data.reserve(K.cells().size());
    for (const auto& c : K.cells()) {
        auto f = lookup.find(c.vertices());
        if (f == lookup.end()) throw std::logic_error("build_aligned: piece table misaligned");
        data.push_back(*f->second);
    }
    return {std::move(K), std::move(data)};
}

}  // namespace detail

// Continuous piecewise-linear function with integer coefficients over a
// proper complex: one affine piece per maximal cell, pieces agreeing at every
// shared vertex (hence on every shared face).  Vertex values give the exact
// range bounds, cached at construction.
class LGroupFunction {
public:
    LGroupFunction(SimplicialComplex domain, std::vector<AffineFunctional> pieces)
        : dom_(std::move(domain)), pieces_(std::move(pieces)) {
        if (dom_.empty()) throw std::invalid_argument("LGroupFunction: empty domain");
        if (pieces_.size() != dom_.cells().size())
            throw std::invalid_argument("LGroupFunction: piece count does not match cell count");
        size_t n = size_t(dom_.ambient());
        for (const auto& p : pieces_)
            if (p.coeffs.size() != n) throw std::invalid_argument("LGroupFunction: piece arity mismatch");
        bool first = true;
        std::map<RatPoint, Rational> at_vertex;
        for (size_t i = 0; i < pieces_.size(); ++i) {
            for (const auto& v : dom_.cells()[i].vertices()) {
                Rational val = pieces_[i].eval(v);
                auto [it, fresh] = at_vertex.emplace(v, val);
                if (!fresh && it->second != val)
                    throw std::invalid_argument("LGroupFunction: pieces disagree at a shared vertex");
                if (first || val < lo_) lo_ = val;
                if (first || val > hi_) hi_ = val;
                first = false;
            }
        }
    }

    const SimplicialComplex& domain() const { return dom_; }
    const std::vector<AffineFunctional>& pieces() const { return pieces_; }
    int arity() const { return dom_.ambient(); }
    const Rational& min_value() const { return lo_; }
    const Rational& max_value() const { return hi_; }

    Rational eval_at(const RatPoint& r) const {
        auto i = dom_.find_cell(r);
        if (!i) throw std::invalid_argument("eval_at: point outside the carrier");
        return pieces_[*i].eval(r);
    }

private:
    SimplicialComplex dom_;
    std::vector<AffineFunctional> pieces_;
    Rational lo_ = 0, hi_ = 0;
};

// McNaughton function: an LGroupFunction with values in [0,1].
class McNFunction {
public:
    explicit McNFunction(LGroupFunction h) : h_(std::move(h)) {
        if (h_.min_value() < 0 || h_.max_value() > 1)
            throw std::invalid_argument("McNFunction: value outside [0,1]");
    }
    McNFunction(SimplicialComplex domain, std::vector<AffineFunctional> pieces)
        : McNFunction(LGroupFunction(std::move(domain), std::move(pieces))) {}

    const SimplicialComplex& domain() const { return h_.domain(); }
    const std::vector<AffineFunctional>& pieces() const { return h_.pieces(); }
    int arity() const { return h_.arity(); }
    const Rational& min_value() const { return h_.min_value(); }
    const Rational& max_value() const { return h_.max_value(); }
    Rational eval_at(const RatPoint& r) const { return h_.eval_at(r); }
    const LGroupFunction& as_lgroup() const { return h_; }

private:
    LGroupFunction h_;
};

namespace detail {

// Applies `emit` on every cell of the common refinement together with the two
// covering pieces, collecting (cell, functional) rows.
template <typename Emit>
LGroupFunction lg_overlay(const LGroupFunction& f, const LGroupFunction& g, Emit&& emit) {
    auto refined = common_refinement_indexed(f.domain(), g.domain());
    std::vector<std::pair<RationalSimplex, AffineFunctional>> rows;
    for (auto& p : refined) emit(std::move(p.cell), f.pieces()[p.parent1], g.pieces()[p.parent2], rows);
    auto [K, table] = build_aligned(f.domain().ambient(), std::move(rows));
    return LGroupFunction(std::move(K), std::move(table));
}

// Splits the cell at p = q and emits `below` on {p <= q}, `above` on {p >= q}.
inline void emit_split(RationalSimplex cell, const AffineFunctional& p, const AffineFunctional& q,
                       const AffineFunctional& below, const AffineFunctional& above,
                       std::vector<std::pair<RationalSimplex, AffineFunctional>>& rows) {
    AffineFunctional d = af_sub(p, q);
    Vec a(d.coeffs.size());
    for (size_t i = 0; i < a.size(); ++i) a[i] = Rational(d.coeffs[i]);
    std::vector<RationalSimplex> le, ge;
    split_simplex(cell, a, Rational(-d.offset), le, ge);
    for (auto& c : le) rows.emplace_back(std::move(c), below);
    for (auto& c : ge) rows.emplace_back(std::move(c), above);
}

}  // namespace detail

inline LGroupFunction lg_neg(const LGroupFunction& f) {
    std::vector<AffineFunctional> out;
    for (const auto& p : f.pieces()) out.push_back(detail::af_scale(p, -1));
    return LGroupFunction(f.domain(), std::move(out));
}

inline LGroupFunction lg_scale(const LGroupFunction& f, const Integer& k) {
    std::vector<AffineFunctional> out;
    for (const auto& p : f.pieces()) out.push_back(detail::af_scale(p, k));
    return LGroupFunction(f.domain(), std::move(out));
}

inline LGroupFunction lg_add(const LGroupFunction& f, const LGroupFunction& g) {
    return detail::lg_overlay(f, g,
                              [](RationalSimplex cell, const AffineFunctional& pf, const AffineFunctional& pg,
                                 std::vector<std::pair<RationalSimplex, AffineFunctional>>& rows) {
                                  rows.emplace_back(std::move(cell), detail::af_add(pf, pg));
                              });
}

inline LGroupFunction lg_sub(const LGroupFunction& f, const LGroupFunction& g) {
    return detail::lg_overlay(f, g,
                              [](RationalSimplex cell, const AffineFunctional& pf, const AffineFunctional& pg,
                                 std::vector<std::pair<RationalSimplex, AffineFunctional>>& rows) {
                                  rows.emplace_back(std::move(cell), detail::af_sub(pf, pg));
                              });
}

inline LGroupFunction lg_join(const LGroupFunction& f, const LGroupFunction& g) {
    return detail::lg_overlay(f, g,
                              [](RationalSimplex cell, const AffineFunctional& pf, const AffineFunctional& pg,
                                 std::vector<std::pair<RationalSimplex, AffineFunctional>>& rows) {
                                  detail::emit_split(std::move(cell), pf, pg, pg, pf, rows);
                              });
}

inline LGroupFunction lg_meet(const LGroupFunction& f, const LGroupFunction& g) {
    return detail::lg_overlay(f, g,
                              [](RationalSimplex cell, const AffineFunctional& pf, const AffineFunctional& pg,
                                 std::vector<std::pair<RationalSimplex, AffineFunctional>>& rows) {
                                  detail::emit_split(std::move(cell), pf, pg, pf, pg, rows);
                              });
}

// min(f, c) with the domain subdivided along f = c.
inline LGroupFunction lg_clamp_above(const LGroupFunction& f, const Integer& c) {
    AffineFunctional cc = detail::af_constant(f.pieces()[0].coeffs.size(), c);
    std::vector<std::pair<RationalSimplex, AffineFunctional>> rows;
    for (size_t i = 0; i < f.pieces().size(); ++i)
        detail::emit_split(f.domain().cells()[i], f.pieces()[i], cc, f.pieces()[i], cc, rows);
    auto [K, table] = detail::build_aligned(f.domain().ambient(), std::move(rows));
    return LGroupFunction(std::move(K), std::move(table));
}

// max(f, c) with the domain subdivided along f = c.
inline LGroupFunction lg_clamp_below(const LGroupFunction& f, const Integer& c) {
    AffineFunctional cc = detail::af_constant(f.pieces()[0].coeffs.size(), c);
    std::vector<std::pair<RationalSimplex, AffineFunctional>> rows;
    for (size_t i = 0; i < f.pieces().size(); ++i)
        detail::emit_split(f.domain().cells()[i], f.pieces()[i], cc, cc, f.pieces()[i], rows);
    auto [K, table] = detail::build_aligned(f.domain().ambient(), std::move(rows));
    return LGroupFunction(std::move(K), std::move(table));
}

inline LGroupFunction lg_constant(const SimplicialComplex& K, const Integer& c) {
    return LGroupFunction(K, std::vector<AffineFunctional>(K.cells().size(),
                                                           detail::af_constant(size_t(K.ambient()), c)));
}

inline LGroupFunction lg_coordinate(int n, int i) {
    if (i < 1 || i > n) throw std::invalid_argument("lg_coordinate: index out of range");
    SimplicialComplex K = triangulate_cube(n);
    AffineFunctional h = detail::af_constant(size_t(n), 0);
    h.coeffs[size_t(i) - 1] = 1;
    return LGroupFunction(K, std::vector<AffineFunctional>(K.cells().size(), h));
}

inline McNFunction mv_neg(const McNFunction& f) {
    std::vector<AffineFunctional> out;
    for (const auto& p : f.pieces()) {
        AffineFunctional q = detail::af_scale(p, -1);
        q.offset += 1;
        out.push_back(std::move(q));
    }
    return McNFunction(f.domain(), std::move(out));
}

inline McNFunction mv_plus(const McNFunction& f, const McNFunction& g) {
    return McNFunction(lg_clamp_above(lg_add(f.as_lgroup(), g.as_lgroup()), 1));
}

inline McNFunction mv_join(const McNFunction& f, const McNFunction& g) {
    return McNFunction(lg_join(f.as_lgroup(), g.as_lgroup()));
}

inline McNFunction mv_meet(const McNFunction& f, const McNFunction& g) {
    return McNFunction(lg_meet(f.as_lgroup(), g.as_lgroup()));
}

inline McNFunction mv_truncated_minus(const McNFunction& f, const McNFunction& g) {
    return McNFunction(lg_clamp_below(lg_sub(f.as_lgroup(), g.as_lgroup()), 0));
}

// min(max(h, 0), 1) as a McNaughton function.
inline McNFunction unit_interval_part(const LGroupFunction& h) {
    return McNFunction(lg_clamp_below(lg_clamp_above(h, 1), 0));
}

// Interprets t as a function [0,1]^n -> [0,1].  Requires 1 <= n <= 3 and
// every variable of t within arity n.
inline McNFunction from_term(const MVTerm& t, int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("from_term: arity must be 1..3");
    if (t.max_var() > n) throw std::invalid_argument("from_term: term uses a variable beyond the arity");
    switch (t.kind()) {
        case MVTerm::Kind::Zero: return McNFunction(lg_constant(triangulate_cube(n), 0));
        case MVTerm::Kind::One: return McNFunction(lg_constant(triangulate_cube(n), 1));
        case MVTerm::Kind::Var: return McNFunction(lg_coordinate(n, t.var_index()));
        case MVTerm::Kind::Neg: return mv_neg(from_term(t.lhs(), n));
        case MVTerm::Kind::Plus: return mv_plus(from_term(t.lhs(), n), from_term(t.rhs(), n));
    }
    throw std::logic_error("from_term: unknown node");
}

// Exact function equality over a common carrier (refine, then compare at the
// vertices of each refined cell).
inline bool equal(const LGroupFunction& f, const LGroupFunction& g) {
    if (f.min_value() != g.min_value() || f.max_value() != g.max_value()) return false;
    auto refined = common_refinement_indexed(f.domain(), g.domain());
    for (const auto& p : refined)
        for (const auto& v : p.cell.vertices())
            if (f.pieces()[p.parent1].eval(v) != g.pieces()[p.parent2].eval(v)) return false;
    return true;
}

inline bool equal(const McNFunction& f, const McNFunction& g) { return equal(f.as_lgroup(), g.as_lgroup()); }

// Zero set as a subcomplex.  Since f >= 0, the zero set meets each cell in
// the face spanned by that cell's zero vertices; the result may be empty.
inline SimplicialComplex zeroset(const McNFunction& f) {
    std::vector<RationalSimplex> cells;
    for (size_t i = 0; i < f.pieces().size(); ++i) {
        std::vector<RatPoint> zv;
        for (const auto& v : f.domain().cells()[i].vertices())
            if (f.pieces()[i].eval(v) == 0) zv.push_back(v);
        if (!zv.empty()) cells.emplace_back(std::move(zv));
    }
    return SimplicialComplex(f.domain().ambient(), std::move(cells));
}

// Hat at the region {all a_j . x + b_j >= 0} inside the cube: the function
// min(max(min_j l_j, 0), 1) where l_j is the minimal positive integer scaling
// of a_j . x + b_j.  Errors if the region has empty interior.
inline McNFunction hat_function(int n, const std::vector<std::pair<Vec, Rational>>& halfplanes) {
    if (halfplanes.empty()) throw std::invalid_argument("hat_function: no constraints");
    SimplicialComplex cube = triangulate_cube(n);
    std::optional<LGroupFunction> acc;
    for (const auto& [a, b] : halfplanes) {
        if (a.size() != size_t(n)) throw std::invalid_argument("hat_function: constraint arity mismatch");
        AffineFunctional l = AffineFunctional::from_rational(a, b);
        LGroupFunction lf(cube, std::vector<AffineFunctional>(cube.cells().size(), l));
        acc = acc ? lg_meet(*acc, lf) : std::move(lf);
    }
    McNFunction h = unit_interval_part(*acc);
    if (h.max_value() == 0) throw std::invalid_argument("hat_function: region has empty interior");
    return h;
}

// Integer-affine piecewise map [0,1]^n -> [0,1]^m: one McNaughton component
// per output coordinate, re-homed onto a single shared domain complex.
class ZMapFn {
public:
    explicit ZMapFn(const std::vector<McNFunction>& comps) : dom_(build(comps)) {}

    int arity() const { return dom_.ambient(); }
    int m() const { return int(table_[0].size()); }
    const SimplicialComplex& domain() const { return dom_; }
    const std::vector<AffineFunctional>& maps(size_t cell) const { return table_[cell]; }

    AffineMap map_at(size_t cell) const {
        AffineMap M;
        for (const auto& p : table_[cell]) {
            M.matrix.push_back(p.coeffs);
            M.offset.push_back(p.offset);
        }
        return M;
    }

    RatPoint apply(const RatPoint& r) const {
        auto i = dom_.find_cell(r);
        if (!i) throw std::invalid_argument("apply: point outside the carrier");
        RatPoint out;
        for (const auto& p : table_[*i]) out.push_back(p.eval(r));
        return out;
    }

    McNFunction component(size_t j) const {
        std::vector<AffineFunctional> out;
        for (const auto& row : table_) out.push_back(row[j]);
        return McNFunction(dom_, std::move(out));
    }

private:
    SimplicialComplex build(const std::vector<McNFunction>& comps) {
        if (comps.empty()) throw std::invalid_argument("ZMapFn: no components");
        for (const auto& c : comps)
            if (c.arity() != comps[0].arity()) throw std::invalid_argument("ZMapFn: mixed arities");
        SimplicialComplex K = comps[0].domain();
        table_.clear();
        for (const auto& p : comps[0].pieces()) table_.push_back({p});
        for (size_t j = 1; j < comps.size(); ++j) {
            auto refined = common_refinement_indexed(K, comps[j].domain());
            std::vector<std::pair<RationalSimplex, std::vector<AffineFunctional>>> rows;
            for (auto& p : refined) {
                auto row = table_[p.parent1];
                row.push_back(comps[j].pieces()[p.parent2]);
                rows.emplace_back(std::move(p.cell), std::move(row));
            }
            auto [K2, table2] = detail::build_aligned(K.ambient(), std::move(rows));
            K = std::move(K2);
            table_ = std::move(table2);
        }
        return K;
    }

    std::vector<std::vector<AffineFunctional>> table_;
    SimplicialComplex dom_;
};

namespace detail {

inline bool point_in_hrep(const RatPoint& p, const geo::HRep& H) {
    for (const auto& e : H.eqs)
        if (geo::dot(e.a, p) != e.b) return false;
    for (const auto& q : H.ineqs)
        if (geo::dot(q.a, p) > q.b) return false;
    return true;
}

// Hyperplanes spanned by the eqs and ineq boundaries of H, deduplicated by
// canonical integer key.
inline void collect_walls(const geo::HRep& H, std::set<std::vector<Integer>>& seen,
                          std::vector<std::pair<Vec, Rational>>& walls) {
    auto add = [&](const Vec& a, const Rational& b) {
        Vec key = a;
        key.push_back(b);
        if (seen.insert(scale_to_integer(key)).second) walls.emplace_back(a, b);
    };
    for (const auto& e : H.eqs) add(e.a, e.b);
    for (const auto& q : H.ineqs) add(q.a, q.b);
}

// Fragments of S that are sign-constant with respect to every wall.
inline std::vector<RationalSimplex> split_by_walls(const RationalSimplex& S,
                                                   const std::vector<std::pair<Vec, Rational>>& walls) {
    std::vector<RationalSimplex> frags{S};
    for (const auto& [a, b] : walls) {
        std::vector<RationalSimplex> next;
        for (const auto& F : frags) split_simplex(F, a, b, next, next);
        frags = std::move(next);
    }
    return frags;
}

}  // namespace detail

// Image of the carrier of g as a complex in [0,1]^m: split every cell image
// along every image wall, so overlapping images decompose into identical
// fragments, then drop fragments covered by higher-dimensional ones.
inline SimplicialComplex range_of_zmap(const ZMapFn& g) {
    int m = g.m();
    if (m < 1 || m > 3) throw std::invalid_argument("range_of_zmap: target dimension must be 1..3");
    std::set<std::vector<RatPoint>> polys;
    for (size_t i = 0; i < g.domain().cells().size(); ++i)
        polys.insert(image_extreme_points(g.domain().cells()[i], g.map_at(i)));
    std::set<std::vector<Integer>> seen;
    std::vector<std::pair<Vec, Rational>> walls;
    for (const auto& P : polys) detail::collect_walls(geo::polytope_hrep(P), seen, walls);
    std::vector<std::vector<RatPoint>> frags(polys.begin(), polys.end());
    for (const auto& [a, b] : walls) {
        std::vector<std::vector<RatPoint>> next;
        for (auto& P : frags) {
            bool pos = false, neg = false;
            for (const auto& v : P) {
                int s = sign(geo::dot(a, v) - b);
                pos |= s > 0;
                neg |= s < 0;
            }
            if (!pos || !neg) {
                next.push_back(std::move(P));
                continue;
            }
            geo::HRep H = geo::polytope_hrep(P);
            for (int side = 0; side < 2; ++side) {
                geo::HRep Hs = H;
                Vec aa = a;
                Rational bb = b;
                if (side == 1) {
                    for (auto& c : aa) c = -c;
                    bb = -bb;
                }
                Hs.ineqs.push_back({std::move(aa), std::move(bb)});
                auto pts = geo::enumerate_vertices(Hs, size_t(m));
                if (!pts.empty()) next.push_back(std::move(pts));
            }
        }
        frags = std::move(next);
    }
    std::sort(frags.begin(), frags.end());
    frags.erase(std::unique(frags.begin(), frags.end()), frags.end());
    std::stable_sort(frags.begin(), frags.end(), [](const auto& x, const auto& y) {
        return geo::affine_dim(x) > geo::affine_dim(y);
    });
    std::vector<std::vector<RatPoint>> kept;
    std::vector<geo::HRep> kept_hreps;
    std::vector<int> kept_dims;
    for (auto& P : frags) {
        int d = geo::affine_dim(P);
        bool covered = false;
        for (size_t k = 0; k < kept.size() && !covered; ++k) {
            if (kept_dims[k] <= d) continue;
            covered = std::all_of(P.begin(), P.end(),
                                  [&](const RatPoint& v) { return detail::point_in_hrep(v, kept_hreps[k]); });
        }
        if (covered) continue;
        kept_hreps.push_back(geo::polytope_hrep(P));
        kept_dims.push_back(d);
        kept.push_back(std::move(P));
    }
    std::vector<RationalSimplex> cells;
    for (const auto& P : kept) {
        std::vector<std::vector<RatPoint>> tris;
        geo::pulling_triangulation(P, tris);
        for (auto& t : tris) cells.emplace_back(std::move(t));
    }
    return SimplicialComplex(m, std::move(cells));
}

// f after g.  Each cell of g's domain is split along the pullbacks of the
// walls of f's domain, so every fragment maps into a single cell of f.
inline McNFunction compose(const McNFunction& f, const ZMapFn& g) {
    if (f.arity() != g.m()) throw std::invalid_argument("compose: dimension mismatch");
    std::set<std::vector<Integer>> seen;
    std::vector<std::pair<Vec, Rational>> walls;
    for (const auto& cell : f.domain().cells()) detail::collect_walls(cell.hrep(), seen, walls);
    std::vector<std::pair<RationalSimplex, AffineFunctional>> rows;
    size_t n = size_t(g.arity());
    for (size_t i = 0; i < g.domain().cells().size(); ++i) {
        const auto& maps = g.maps(i);
        std::vector<std::pair<Vec, Rational>> pulled;
        for (const auto& [a, b] : walls) {
            // Pullback of a . y = b through y = maps(x).
            Vec pa(n, 0);
            Rational pb = b;
            for (size_t k = 0; k < maps.size(); ++k) {
                for (size_t j = 0; j < n; ++j) pa[j] += a[k] * Rational(maps[k].coeffs[j]);
                pb -= a[k] * Rational(maps[k].offset);
            }
            pulled.emplace_back(std::move(pa), std::move(pb));
        }
        for (auto& F : detail::split_by_walls(g.domain().cells()[i], pulled)) {
            RatPoint y;
            RatPoint c = geo::centroid(F.vertices());
            for (const auto& p : maps) y.push_back(p.eval(c));
            auto idx = f.domain().find_cell(y);
            if (!idx) throw std::invalid_argument("compose: image leaves the outer domain");
            const AffineFunctional& fp = f.pieces()[*idx];
            AffineFunctional comp;
            comp.coeffs.assign(n, 0);
            comp.offset = fp.offset;
            for (size_t k = 0; k < maps.size(); ++k) {
                for (size_t j = 0; j < n; ++j) comp.coeffs[j] += fp.coeffs[k] * maps[k].coeffs[j];
                comp.offset += fp.coeffs[k] * maps[k].offset;
            }
            rows.emplace_back(std::move(F), std::move(comp));
        }
    }
    auto [K, table] = detail::build_aligned(int(n), std::move(rows));
    return McNFunction(std::move(K), std::move(table));
}

inline ZMapFn zmap_compose(const ZMapFn& f, const ZMapFn& g) {
    std::vector<McNFunction> comps;
    for (int j = 0; j < f.m(); ++j) comps.push_back(compose(f.component(size_t(j)), g));
    return ZMapFn(comps);
}

// Number of carrier points whose exact denominator (lcm of coordinate
// denominators) equals b.
inline size_t denominator_census(const SimplicialComplex& K, const Integer& b) {
    return rational_points_with_denominator(K, b).size();
}

// Restriction to a subcomplex whose carrier lies inside the carrier of f
// (possibly of lower dimension).  Each cell of Ksub is split along f's walls,
// so every fragment inherits the piece of the cell of f covering it.
inline LGroupFunction restrict_function(const LGroupFunction& f, const SimplicialComplex& Ksub) {
    if (Ksub.ambient() != f.domain().ambient())
        throw std::invalid_argument("restrict_function: ambient dimensions differ");
    if (Ksub.empty()) throw std::invalid_argument("restrict_function: empty subcomplex");
    std::set<std::vector<Integer>> seen;
    std::vector<std::pair<Vec, Rational>> walls;
    for (const auto& cell : f.domain().cells()) detail::collect_walls(cell.hrep(), seen, walls);
    std::vector<std::pair<RationalSimplex, AffineFunctional>> rows;
    for (const auto& S : Ksub.cells()) {
        for (auto& F : detail::split_by_walls(S, walls)) {
            auto idx = f.domain().find_cell(geo::centroid(F.vertices()));
            if (!idx) throw std::invalid_argument("restrict_function: subcomplex leaves the carrier");
            rows.emplace_back(std::move(F), f.pieces()[*idx]);
        }
    }
    auto [K, table] = detail::build_aligned(f.domain().ambient(), std::move(rows));
    return LGroupFunction(std::move(K), std::move(table));
}

inline McNFunction restrict_function(const McNFunction& f, const SimplicialComplex& Ksub) {
    return McNFunction(restrict_function(f.as_lgroup(), Ksub));
}

// The substitution x2 := x1 kills |x1 - x2| while the two-variable function
// is nonzero: a nontrivial kernel produced by identifying generators.
struct ShiftKernelDemo {
    MVTerm term;
    McNFunction two_var;
    McNFunction one_var;
    bool nonzero_before = false;
    bool zero_after = false;
    Rational sample_value;
};

inline ShiftKernelDemo shift_kernel_demo() {
    MVTerm t = parse_term("(x1 (-) x2) (+) (x2 (-) x1)", 2);
    McNFunction f2 = from_term(t, 2);
    McNFunction f1 = from_term(t.substitute(2, MVTerm::var(1)), 1);
    bool nz = !equal(f2, from_term(MVTerm::zero(), 2));
    bool z = equal(f1, from_term(MVTerm::zero(), 1));
    return {t, f2, f1, nz, z, f2.eval_at({Rational(1, 2), Rational(1, 4)})};
}

inline nlohmann::json function_to_json(const LGroupFunction& f) {
    nlohmann::json js;
    js["domain"] = f.domain().to_json();
    auto& ps = js["pieces"] = nlohmann::json::array();
    for (size_t i = 0; i < f.pieces().size(); ++i) {
        nlohmann::json pj;
        pj["cell"] = i;
        pj["coeffs"] = nlohmann::json::array();
        for (const auto& c : f.pieces()[i].coeffs) pj["coeffs"].push_back(c.convert_to<long long>());
        pj["offset"] = f.pieces()[i].offset.convert_to<long long>();
        ps.push_back(std::move(pj));
    }
    return js;
}

inline nlohmann::json function_to_json(const McNFunction& f) { return function_to_json(f.as_lgroup()); }

inline LGroupFunction lgroup_from_json(const nlohmann::json& js) {
    SimplicialComplex K = SimplicialComplex::from_json(js.at("domain"));
    std::vector<AffineFunctional> pieces(K.cells().size());
    std::vector<bool> got(K.cells().size(), false);
    for (const auto& pj : js.at("pieces")) {
        size_t i = pj.at("cell").get<size_t>();
        if (i >= pieces.size()) throw std::invalid_argument("function json: cell index out of range");
        if (got[i]) throw std::invalid_argument("function json: duplicate cell index");
        got[i] = true;
        AffineFunctional h;
        for (const auto& c : pj.at("coeffs")) h.coeffs.push_back(Integer(c.get<long long>()));
        h.offset = Integer(pj.at("offset").get<long long>());
        pieces[i] = std::move(h);
    }
    if (std::find(got.begin(), got.end(), false) != got.end())
        throw std::invalid_argument("function json: missing piece for a cell");
    return LGroupFunction(std::move(K), std::move(pieces));
}

inline McNFunction mcnaughton_from_json(const nlohmann::json& js) { return McNFunction(lgroup_from_json(js)); }

}  // namespace mvforge
