#pragma once

#include "mvforge/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace mvforge {

// h(x) = coeffs . x + offset, integer coefficients.
struct AffineFunctional {
    std::vector<Integer> coeffs;
    Integer offset = 0;

    Rational eval(const RatPoint& p) const {
        if (p.size() != coeffs.size()) throw std::invalid_argument("AffineFunctional: dimension mismatch");
        Rational v(offset);
        for (size_t i = 0; i < p.size(); ++i) v += Rational(coeffs[i]) * p[i];
        return v;
    }

    // Clears denominators of a rational functional a.x + b.  The scaling
    // factor is positive (and minimal), so the sign of h is preserved.
    static AffineFunctional from_rational(const Vec& a, const Rational& b) {
        Vec all = a;
        all.push_back(b);
        auto z = scale_to_integer_positive(all);
        AffineFunctional h;
        h.coeffs.assign(z.begin(), z.end() - 1);
        h.offset = z.back();
        return h;
    }
};

// x |-> matrix * x + offset with integer entries (the defining constraint on
// McNaughton pieces).
struct AffineMap {
    std::vector<std::vector<Integer>> matrix;  // m rows of length n
    std::vector<Integer> offset;               // length m

    size_t rows() const { return matrix.size(); }
    size_t cols() const { return matrix.empty() ? 0 : matrix[0].size(); }

    RatPoint apply(const RatPoint& p) const {
        if (p.size() != cols() || offset.size() != rows())
            throw std::invalid_argument("AffineMap: dimension mismatch");
        RatPoint out(rows(), 0);
        for (size_t i = 0; i < rows(); ++i) {
            Rational v(offset[i]);
            for (size_t j = 0; j < p.size(); ++j) v += Rational(matrix[i][j]) * p[j];
            out[i] = v;
        }
        return out;
    }
};

namespace geo {

struct HullData {
    RatPoint base;
    Mat directions;  // basis rows spanning aff(P) - base
    Mat normals;     // basis rows of the orthogonal complement
    int dim = 0;
};

inline HullData affine_hull(const std::vector<RatPoint>& pts) {
    if (pts.empty()) throw std::invalid_argument("affine_hull: empty point set");
    HullData h;
    h.base = pts[0];
    size_t n = pts[0].size();
    Mat diffs;
    for (size_t i = 1; i < pts.size(); ++i) {
        Vec d(n);
        for (size_t j = 0; j < n; ++j) d[j] = pts[i][j] - pts[0][j];
        diffs.push_back(std::move(d));
    }
    if (!diffs.empty()) {
        Mat r = diffs;
        auto pivots = rref(r);
        for (size_t i = 0; i < pivots.size(); ++i) h.directions.push_back(r[i]);
        h.normals = nullspace(diffs);
    } else {
        for (size_t j = 0; j < n; ++j) {
            Vec e(n, 0);
            e[j] = 1;
            h.normals.push_back(std::move(e));
        }
    }
    h.dim = int(h.directions.size());
    return h;
}

inline int affine_dim(const std::vector<RatPoint>& pts) { return affine_hull(pts).dim; }

struct HalfSpace { Vec a; Rational b; };     // a.x <= b
struct HyperPlaneEq { Vec a; Rational b; };  // a.x = b

struct HRep {
    std::vector<HyperPlaneEq> eqs;
    std::vector<HalfSpace> ineqs;
};

inline Rational dot(const Vec& a, const RatPoint& p) {
    Rational v = 0;
    for (size_t i = 0; i < a.size(); ++i) v += a[i] * p[i];
    return v;
}

// All extreme points of the (bounded) solution set, by solving every
// maximal-rank constraint subsystem.  Feasible for ambient dimension <= 3.
inline std::vector<RatPoint> enumerate_vertices(const HRep& H, size_t n) {
    Mat eqm;
    Vec eqb;
    for (const auto& e : H.eqs) { eqm.push_back(e.a); eqb.push_back(e.b); }
    Mat r = eqm;
    size_t eqrank = rref(r).size();
    size_t free_dim = n - eqrank;
    std::set<RatPoint> found;
    auto feasible = [&](const RatPoint& p) {
        for (const auto& e : H.eqs)
            if (dot(e.a, p) != e.b) return false;
        for (const auto& q : H.ineqs)
            if (dot(q.a, p) > q.b) return false;
        return true;
    };
    auto try_system = [&](const std::vector<size_t>& sel) {
        Mat A = eqm;
        Vec b = eqb;
        for (size_t s : sel) { A.push_back(H.ineqs[s].a); b.push_back(H.ineqs[s].b); }
        auto x = solve_unique(A, b);
        if (x && feasible(*x)) found.insert(*x);
    };
    if (free_dim == 0) {
        try_system({});
    } else {
        // Iterate all free_dim-subsets of the inequality constraints.
        std::vector<size_t> sel(free_dim);
        auto rec = [&](auto&& self, size_t start, size_t k) -> void {
            if (k == free_dim) { try_system(sel); return; }
            for (size_t i = start; i < H.ineqs.size(); ++i) {
                sel[k] = i;
                self(self, i + 1, k + 1);
            }
        };
        rec(rec, 0, 0);
    }
    return {found.begin(), found.end()};
}

struct Facet {
    Vec a;        // a.x <= b on the polytope, a.x = b on the facet
    Rational b;
    std::vector<RatPoint> verts;
};

// Facets of the polytope conv(verts), verts extreme and lex-sorted.
// Vertex lists come out lex-sorted.  Handles dim >= 1.
inline std::vector<Facet> facets_of(const std::vector<RatPoint>& verts, const HullData& hull) {
    size_t n = verts[0].size();
    size_t d = size_t(hull.dim);
    std::map<std::vector<Integer>, Facet> facets;
    std::vector<size_t> sel(d);
    auto consider = [&]() {
        Mat cons;  // a . row = 0 constraints on the normal a
        for (size_t i = 1; i < d; ++i) {
            Vec diff(n);
            for (size_t j = 0; j < n; ++j) diff[j] = verts[sel[i]][j] - verts[sel[0]][j];
            cons.push_back(std::move(diff));
        }
        for (const auto& nr : hull.normals) cons.push_back(nr);
        auto basis = nullspace(cons.empty() ? Mat{Vec(n, 0)} : cons);
        if (basis.size() != 1) return;  // degenerate subset
        Vec a = basis[0];
        Rational b = dot(a, verts[sel[0]]);
        int pos = 0, neg = 0;
        for (const auto& v : verts) {
            Rational s = dot(a, v) - b;
            if (s > 0) ++pos;
            else if (s < 0) ++neg;
        }
        if (pos > 0 && neg > 0) return;
        if (pos > 0) {  // orient so a.x <= b holds on the polytope
            for (auto& c : a) c = -c;
            b = -b;
        }
        std::vector<RatPoint> on;
        for (const auto& v : verts)
            if (dot(a, v) == b) on.push_back(v);
        Vec key = a;
        key.push_back(b);
        facets.emplace(scale_to_integer(key), Facet{std::move(a), std::move(b), std::move(on)});
    };
    auto rec = [&](auto&& self, size_t start, size_t k) -> void {
        if (k == d) { consider(); return; }
        for (size_t i = start; i < verts.size(); ++i) {
            sel[k] = i;
            self(self, i + 1, k + 1);
        }
    };
    rec(rec, 0, 0);
    std::vector<Facet> out;
    for (auto& [k, f] : facets) out.push_back(std::move(f));
    return out;
}

// Hull equalities plus facet inequalities of conv(verts).
inline HRep polytope_hrep(const std::vector<RatPoint>& verts) {
    HullData hull = affine_hull(verts);
    HRep H;
    for (const auto& nr : hull.normals) H.eqs.push_back({nr, dot(nr, verts[0])});
    if (hull.dim >= 1)
        for (auto& f : facets_of(verts, hull)) H.ineqs.push_back({std::move(f.a), std::move(f.b)});
    return H;
}

inline RatPoint centroid(const std::vector<RatPoint>& verts) {
    RatPoint c(verts[0].size(), 0);
    for (const auto& v : verts)
        for (size_t i = 0; i < c.size(); ++i) c[i] += v[i];
    for (auto& x : c) x /= int(verts.size());
    return c;
}

// Pulling triangulation: cone the lex-smallest vertex over the recursively
// triangulated facets that avoid it.  The rule is face-local, so the induced
// triangulations of shared faces agree across neighboring polytopes.
inline void pulling_triangulation(const std::vector<RatPoint>& verts, std::vector<std::vector<RatPoint>>& out) {
    HullData hull = affine_hull(verts);
    if (verts.size() == size_t(hull.dim) + 1) {
        out.push_back(verts);
        return;
    }
    const RatPoint& apex = verts[0];
    for (auto& fct : facets_of(verts, hull)) {
        auto& f = fct.verts;
        if (std::find(f.begin(), f.end(), apex) != f.end()) continue;
        std::vector<std::vector<RatPoint>> sub;
        pulling_triangulation(f, sub);
        for (auto& t : sub) {
            t.push_back(apex);
            std::sort(t.begin(), t.end());
            out.push_back(std::move(t));
        }
    }
}

}  // namespace geo

class RationalSimplex {
public:
    explicit RationalSimplex(std::vector<RatPoint> verts, bool require_cube = true)
        : verts_(std::move(verts)) {
        if (verts_.empty()) throw std::invalid_argument("RationalSimplex: no vertices");
        size_t n = verts_[0].size();
        if (n < 1 || n > 3) throw std::invalid_argument("RationalSimplex: ambient dimension must be 1..3");
        for (const auto& v : verts_) {
            if (v.size() != n) throw std::invalid_argument("RationalSimplex: inconsistent dimensions");
            if (require_cube && !in_unit_cube(v))
                throw std::invalid_argument("RationalSimplex: vertex outside [0,1]^n");
        }
        std::sort(verts_.begin(), verts_.end());
        if (std::adjacent_find(verts_.begin(), verts_.end()) != verts_.end())
            throw std::invalid_argument("RationalSimplex: repeated vertex");
        if (geo::affine_dim(verts_) != dim())
            throw std::invalid_argument("RationalSimplex: vertices not affinely independent");
    }

    int dim() const { return int(verts_.size()) - 1; }
    int ambient() const { return int(verts_[0].size()); }
    const std::vector<RatPoint>& vertices() const { return verts_; }

    // Barycentric membership test.
    bool contains(const RatPoint& p) const {
        auto l = barycentric(p);
        if (!l) return false;
        for (const auto& c : *l)
            if (c < 0) return false;
        return true;
    }

    std::optional<Vec> barycentric(const RatPoint& p) const {
        size_t n = p.size(), k = verts_.size();
        if (int(n) != ambient()) throw std::invalid_argument("contains: dimension mismatch");
        Mat A(n + 1, Vec(k));
        Vec b(n + 1);
        for (size_t j = 0; j < k; ++j) {
            for (size_t i = 0; i < n; ++i) A[i][j] = verts_[j][i];
            A[n][j] = 1;
        }
        for (size_t i = 0; i < n; ++i) b[i] = p[i];
        b[n] = 1;
        return solve_unique(A, b);
    }

    geo::HRep hrep() const {
        geo::HullData hull = geo::affine_hull(verts_);
        geo::HRep H;
        for (const auto& nr : hull.normals) H.eqs.push_back({nr, geo::dot(nr, verts_[0])});
        size_t n = verts_[0].size();
        if (dim() >= 1) {
            for (size_t skip = 0; skip < verts_.size(); ++skip) {
                Mat cons;
                size_t first = skip == 0 ? 1 : 0;
                for (size_t i = 0; i < verts_.size(); ++i) {
                    if (i == skip || i == first) continue;
                    Vec diff(n);
                    for (size_t j = 0; j < n; ++j) diff[j] = verts_[i][j] - verts_[first][j];
                    cons.push_back(std::move(diff));
                }
                for (const auto& nr : hull.normals) cons.push_back(nr);
                auto basis = nullspace(cons.empty() ? Mat{Vec(n, 0)} : cons);
                if (basis.size() != 1) throw std::logic_error("simplex hrep: facet normal not unique");
                Vec a = basis[0];
                Rational b = geo::dot(a, verts_[first]);
                Rational side = geo::dot(a, verts_[skip]) - b;
                if (side > 0) {
                    for (auto& c : a) c = -c;
                    b = -b;
                }
                H.ineqs.push_back({std::move(a), b});
            }
        }
        return H;
    }

    std::pair<RatPoint, RatPoint> bbox() const {
        RatPoint lo = verts_[0], hi = verts_[0];
        for (const auto& v : verts_)
            for (size_t i = 0; i < v.size(); ++i) {
                if (v[i] < lo[i]) lo[i] = v[i];
                if (v[i] > hi[i]) hi[i] = v[i];
            }
        return {lo, hi};
    }

    bool operator==(const RationalSimplex& o) const { return verts_ == o.verts_; }
    bool operator<(const RationalSimplex& o) const { return verts_ < o.verts_; }

private:
    std::vector<RatPoint> verts_;
};

// Finite simplicial complex, stored by its maximal simplices (faces are
// implicit).  Carrier = union of maximal simplices, inside [0,1]^n.
// The empty complex (no cells, empty carrier) is allowed.
class SimplicialComplex {
public:
    SimplicialComplex(int ambient, std::vector<RationalSimplex> maximal)
        : n_(ambient), max_(std::move(maximal)) {
        if (n_ < 1 || n_ > 3) throw std::invalid_argument("SimplicialComplex: ambient dimension must be 1..3");
        for (const auto& s : max_) {
            if (s.ambient() != n_) throw std::invalid_argument("SimplicialComplex: mixed ambient dimensions");
            for (const auto& v : s.vertices())
                if (!in_unit_cube(v)) throw std::invalid_argument("SimplicialComplex: carrier outside [0,1]^n");
        }
        std::sort(max_.begin(), max_.end());
        max_.erase(std::unique(max_.begin(), max_.end()), max_.end());
        // Drop cells that are faces of other cells.
        std::vector<RationalSimplex> keep;
        for (size_t i = 0; i < max_.size(); ++i) {
            bool face = false;
            for (size_t j = 0; j < max_.size() && !face; ++j) {
                if (i == j || max_[i].dim() >= max_[j].dim()) continue;
                face = std::includes(max_[j].vertices().begin(), max_[j].vertices().end(),
                                     max_[i].vertices().begin(), max_[i].vertices().end());
            }
            if (!face) keep.push_back(max_[i]);
        }
        max_ = std::move(keep);
    }

    int ambient() const { return n_; }
    const std::vector<RationalSimplex>& cells() const { return max_; }

    bool empty() const { return max_.empty(); }

    int carrier_dim() const {
        int d = -1;
        for (const auto& s : max_) d = std::max(d, s.dim());
        return d;
    }

    bool pure() const {
        for (const auto& s : max_)
            if (s.dim() != carrier_dim()) return false;
        return true;
    }

    bool contains(const RatPoint& p) const { return find_cell(p).has_value(); }

    std::optional<size_t> find_cell(const RatPoint& p) const {
        for (size_t i = 0; i < max_.size(); ++i)
            if (max_[i].contains(p)) return i;
        return std::nullopt;
    }

    std::vector<RatPoint> vertices() const {
        std::set<RatPoint> vs;
        for (const auto& s : max_) vs.insert(s.vertices().begin(), s.vertices().end());
        return {vs.begin(), vs.end()};
    }

    // Proper-complex condition: any two maximal cells intersect in a common
    // face (possibly empty).  O(cells^2); used on untrusted input and in tests.
    void validate_proper() const {
        for (size_t i = 0; i < max_.size(); ++i)
            for (size_t j = i + 1; j < max_.size(); ++j) {
                geo::HRep H = max_[i].hrep();
                geo::HRep H2 = max_[j].hrep();
                H.eqs.insert(H.eqs.end(), H2.eqs.begin(), H2.eqs.end());
                H.ineqs.insert(H.ineqs.end(), H2.ineqs.begin(), H2.ineqs.end());
                auto pts = geo::enumerate_vertices(H, size_t(n_));
                for (const auto& p : pts) {
                    const auto& vi = max_[i].vertices();
                    const auto& vj = max_[j].vertices();
                    bool common = std::binary_search(vi.begin(), vi.end(), p) &&
                                  std::binary_search(vj.begin(), vj.end(), p);
                    if (!common)
                        throw std::invalid_argument("SimplicialComplex: cells " + std::to_string(i) + "," +
                                                    std::to_string(j) + " do not meet in a common face");
                }
            }
    }

    nlohmann::json to_json() const {
        nlohmann::json js;
        js["n"] = n_;
        auto& sims = js["simplices"] = nlohmann::json::array();
        for (const auto& s : max_) {
            nlohmann::json sj = nlohmann::json::array();
            for (const auto& v : s.vertices()) {
                nlohmann::json vj = nlohmann::json::array();
                for (const auto& c : v) vj.push_back(to_string(c));
                sj.push_back(vj);
            }
            sims.push_back(sj);
        }
        return js;
    }

    static SimplicialComplex from_json(const nlohmann::json& js) {
        int n = js.at("n").get<int>();
        std::vector<RationalSimplex> cells;
        for (const auto& sj : js.at("simplices")) {
            std::vector<RatPoint> verts;
            for (const auto& vj : sj) {
                RatPoint p;
                for (const auto& c : vj) p.push_back(parse_rational(c.get<std::string>()));
                verts.push_back(std::move(p));
            }
            cells.emplace_back(std::move(verts));
        }
        SimplicialComplex K(n, std::move(cells));
        K.validate_proper();
        return K;
    }

private:
    int n_;
    std::vector<RationalSimplex> max_;
};

// Kuhn/Freudenthal triangulation of [0,1]^n into n! simplices.
inline SimplicialComplex triangulate_cube(int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("triangulate_cube: dimension must be 1..3");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::vector<RationalSimplex> cells;
    do {
        std::vector<RatPoint> verts;
        RatPoint v(n, 0);
        verts.push_back(v);
        for (int i = 0; i < n; ++i) {
            v[perm[i]] = 1;
            verts.push_back(v);
        }
        cells.emplace_back(std::move(verts));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return SimplicialComplex(n, std::move(cells));
}

namespace geo {

// d-dimensional chart volume of a simplex: |det| of its edge vectors
// restricted to the chart columns.  Consistent within one chart, which is all
// the coverage accounting needs.
inline std::vector<size_t> chart_columns(const RationalSimplex& S) {
    Mat diffs;
    size_t n = S.vertices()[0].size();
    for (size_t i = 1; i < S.vertices().size(); ++i) {
        Vec d(n);
        for (size_t j = 0; j < n; ++j) d[j] = S.vertices()[i][j] - S.vertices()[0][j];
        diffs.push_back(std::move(d));
    }
    if (diffs.empty()) return {};
    return rref(diffs);
}

inline Rational chart_volume(const std::vector<RatPoint>& verts, const std::vector<size_t>& chart) {
    size_t d = chart.size();
    if (d == 0) return 1;
    Mat M(d, Vec(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) M[i][j] = verts[i + 1][chart[j]] - verts[0][chart[j]];
    // Exact determinant by elimination.
    Rational det = 1;
    for (size_t c = 0; c < d; ++c) {
        size_t p = c;
        while (p < d && M[p][c] == 0) ++p;
        if (p == d) return 0;
        if (p != c) { std::swap(M[p], M[c]); det = -det; }
        det *= M[c][c];
        for (size_t i = c + 1; i < d; ++i) {
            Rational f = M[i][c] / M[c][c];
            for (size_t j = c; j < d; ++j) M[i][j] -= f * M[c][j];
        }
    }
    return rat_abs(det);
}

inline bool bbox_disjoint(const std::pair<RatPoint, RatPoint>& a, const std::pair<RatPoint, RatPoint>& b) {
    for (size_t i = 0; i < a.first.size(); ++i)
        if (a.second[i] < b.first[i] || b.second[i] < a.first[i]) return true;
    return false;
}

}  // namespace geo

// One cell of a refinement, tagged with the covering cell on each side.
struct RefinedPiece {
    RationalSimplex cell;
    size_t parent1, parent2;
};

// Pairwise cell intersections of K1 and K2 (equal carriers), each
// triangulated by pulling.  Every output cell lies inside one cell of K1 and
// one cell of K2, and the pieces tile both carriers.
inline std::vector<RefinedPiece> common_refinement_indexed(const SimplicialComplex& K1,
                                                           const SimplicialComplex& K2) {
    if (K1.ambient() != K2.ambient())
        throw std::invalid_argument("common_refinement: ambient dimensions differ");
    if (!K1.pure() || !K2.pure() || K1.carrier_dim() != K2.carrier_dim())
        throw std::invalid_argument("common_refinement: requires pure complexes of equal dimension");
    size_t n = size_t(K1.ambient());
    int d = K1.carrier_dim();
    std::vector<geo::HRep> h1, h2;
    std::vector<std::pair<RatPoint, RatPoint>> b1, b2;
    for (const auto& s : K1.cells()) { h1.push_back(s.hrep()); b1.push_back(s.bbox()); }
    for (const auto& s : K2.cells()) { h2.push_back(s.hrep()); b2.push_back(s.bbox()); }
    std::vector<std::vector<size_t>> chart1, chart2;
    for (const auto& s : K1.cells()) chart1.push_back(geo::chart_columns(s));
    for (const auto& s : K2.cells()) chart2.push_back(geo::chart_columns(s));
    std::vector<Rational> covered1(K1.cells().size(), 0), covered2(K2.cells().size(), 0);
    std::vector<RefinedPiece> pieces;
    for (size_t i = 0; i < K1.cells().size(); ++i) {
        for (size_t j = 0; j < K2.cells().size(); ++j) {
            if (geo::bbox_disjoint(b1[i], b2[j])) continue;
            geo::HRep H = h1[i];
            H.eqs.insert(H.eqs.end(), h2[j].eqs.begin(), h2[j].eqs.end());
            H.ineqs.insert(H.ineqs.end(), h2[j].ineqs.begin(), h2[j].ineqs.end());
            auto pts = geo::enumerate_vertices(H, n);
            if (pts.empty() || geo::affine_dim(pts) != d) continue;
            std::vector<std::vector<RatPoint>> tris;
            geo::pulling_triangulation(pts, tris);
            for (auto& t : tris) {
                covered1[i] += geo::chart_volume(t, chart1[i]);
                covered2[j] += geo::chart_volume(t, chart2[j]);
                pieces.push_back({RationalSimplex(std::move(t)), i, j});
            }
        }
    }
    for (size_t i = 0; i < K1.cells().size(); ++i)
        if (covered1[i] != geo::chart_volume(K1.cells()[i].vertices(), chart1[i]))
            throw std::invalid_argument("common_refinement: carriers differ");
    for (size_t j = 0; j < K2.cells().size(); ++j)
        if (covered2[j] != geo::chart_volume(K2.cells()[j].vertices(), chart2[j]))
            throw std::invalid_argument("common_refinement: carriers differ");
    return pieces;
}

// Refines K1 and K2 (equal carriers) into the complex of pairwise cell
// intersections, each triangulated by pulling.
inline SimplicialComplex common_refinement(const SimplicialComplex& K1, const SimplicialComplex& K2) {
    auto pieces = common_refinement_indexed(K1, K2);
    std::vector<RationalSimplex> cells;
    cells.reserve(pieces.size());
    for (auto& p : pieces) cells.push_back(std::move(p.cell));
    return SimplicialComplex(K1.ambient(), std::move(cells));
}

// Splits S at the rational hyperplane a.x = b.  Cells with no vertex strictly
// above land in `le`, cells with none strictly below in `ge`; a sign-constant
// S passes through unchanged (a flat S only to `le`).
inline void split_simplex(const RationalSimplex& S, const Vec& a, const Rational& b,
                          std::vector<RationalSimplex>& le, std::vector<RationalSimplex>& ge) {
    bool pos = false, neg = false;
    for (const auto& v : S.vertices()) {
        int s = sign(geo::dot(a, v) - b);
        pos |= s > 0;
        neg |= s < 0;
    }
    if (!pos) { le.push_back(S); return; }
    if (!neg) { ge.push_back(S); return; }
    for (int side = 0; side < 2; ++side) {
        geo::HRep H = S.hrep();
        Vec aa = a;
        Rational bb = b;
        if (side == 1) {
            for (auto& c : aa) c = -c;
            bb = -bb;
        }
        H.ineqs.push_back({std::move(aa), std::move(bb)});
        auto pts = geo::enumerate_vertices(H, size_t(S.ambient()));
        if (pts.empty() || geo::affine_dim(pts) != S.dim()) continue;
        std::vector<std::vector<RatPoint>> tris;
        geo::pulling_triangulation(pts, tris);
        auto& out = side == 0 ? le : ge;
        for (auto& t : tris) out.emplace_back(std::move(t));
    }
}

// Refinement of K on which h has constant sign (<= 0 or >= 0) per cell.
inline SimplicialComplex subdivide_by_hyperplane(const SimplicialComplex& K, const AffineFunctional& h) {
    size_t n = size_t(K.ambient());
    if (h.coeffs.size() != n) throw std::invalid_argument("subdivide_by_hyperplane: dimension mismatch");
    std::vector<RationalSimplex> out;
    Vec ha(h.coeffs.size());
    for (size_t i = 0; i < ha.size(); ++i) ha[i] = Rational(h.coeffs[i]);
    for (const auto& S : K.cells()) {
        bool pos = false, neg = false;
        for (const auto& v : S.vertices()) {
            int s = sign(h.eval(v));
            pos |= s > 0;
            neg |= s < 0;
        }
        if (!pos || !neg) {
            out.push_back(S);
            continue;
        }
        for (int side = 0; side < 2; ++side) {
            geo::HRep H = S.hrep();
            if (side == 0)
                H.ineqs.push_back({ha, Rational(-h.offset)});  // h <= 0
            else {
                Vec na(ha.size());
                for (size_t i = 0; i < ha.size(); ++i) na[i] = -ha[i];
                H.ineqs.push_back({std::move(na), Rational(h.offset)});  // h >= 0
            }
            auto pts = geo::enumerate_vertices(H, n);
            if (pts.empty() || geo::affine_dim(pts) != S.dim()) continue;
            std::vector<std::vector<RatPoint>> tris;
            geo::pulling_triangulation(pts, tris);
            for (auto& t : tris) out.emplace_back(std::move(t));
        }
    }
    return SimplicialComplex(int(n), std::move(out));
}

// Convex hull of the vertex images under an integer-affine map; dimension
// collapse produces a pulling-triangulated lower-dimensional hull.
struct SimplexImage {
    std::vector<RationalSimplex> simplices;
    int dim = 0;
    bool degenerate = false;
};

// Extreme points of f(S), lex-sorted.
inline std::vector<RatPoint> image_extreme_points(const RationalSimplex& S, const AffineMap& f) {
    if (f.cols() != size_t(S.ambient())) throw std::invalid_argument("image_of_simplex: dimension mismatch");
    std::set<RatPoint> imgs;
    for (const auto& v : S.vertices()) imgs.insert(f.apply(v));
    std::vector<RatPoint> pts(imgs.begin(), imgs.end());
    // Prune non-extreme points (Caratheodory over small subsets).
    std::vector<RatPoint> extreme;
    for (size_t i = 0; i < pts.size(); ++i) {
        std::vector<RatPoint> others;
        for (size_t j = 0; j < pts.size(); ++j)
            if (j != i) others.push_back(pts[j]);
        bool inside = false;
        if (others.size() >= 1) {
            std::vector<size_t> sel;
            auto rec = [&](auto&& self, size_t start) -> void {
                if (inside) return;
                if (sel.size() >= 1 && sel.size() <= size_t(f.rows()) + 1) {
                    std::vector<RatPoint> sub;
                    for (size_t s : sel) sub.push_back(others[s]);
                    if (geo::affine_dim(sub) == int(sub.size()) - 1 &&
                        RationalSimplex(sub, false).contains(pts[i]))
                        inside = true;
                }
                if (inside || sel.size() == size_t(f.rows()) + 1) return;
                for (size_t s = start; s < others.size(); ++s) {
                    sel.push_back(s);
                    self(self, s + 1);
                    sel.pop_back();
                }
            };
            rec(rec, 0);
        }
        if (!inside) extreme.push_back(pts[i]);
    }
    return extreme;
}

inline SimplexImage image_of_simplex(const RationalSimplex& S, const AffineMap& f) {
    auto extreme = image_extreme_points(S, f);
    SimplexImage out;
    out.dim = geo::affine_dim(extreme);
    out.degenerate = out.dim < S.dim();
    std::vector<std::vector<RatPoint>> tris;
    geo::pulling_triangulation(extreme, tris);
    for (auto& t : tris) out.simplices.emplace_back(std::move(t), false);
    return out;
}

// All carrier points with exact denominator b, by scanning (1/b)Z^n.
inline std::vector<RatPoint> rational_points_with_denominator(const SimplicialComplex& K, const Integer& b) {
    if (b < 1) throw std::invalid_argument("rational_points_with_denominator: b >= 1 required");
    size_t n = size_t(K.ambient());
    std::vector<RatPoint> out;
    std::vector<Integer> counter(n, 0);
    for (;;) {
        RatPoint p(n);
        for (size_t i = 0; i < n; ++i) p[i] = Rational(counter[i], b);
        if (den(p) == b && K.contains(p)) out.push_back(p);
        size_t c = 0;
        while (c < n && counter[c] == b) { counter[c] = 0; ++c; }
        if (c == n) break;
        ++counter[c];
    }
    return out;
}

}  // namespace mvforge
