#pragma once

#include "mvforge/rational.hpp"

#include <optional>

namespace mvforge {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

// Reduced row echelon form in place; returns the pivot column indices.
inline std::vector<size_t> rref(Mat& m) {
    std::vector<size_t> pivots;
    size_t rows = m.size(), cols = rows ? m[0].size() : 0, r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rational inv = m[r][c];
        for (auto& x : m[r]) x /= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline int rank_of(Mat m) { return int(rref(m).size()); }

// Unique solution of A x = b, or nullopt (inconsistent or underdetermined).
inline std::optional<Vec> solve_unique(const Mat& A, const Vec& b) {
    size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    Mat aug(rows, Vec(cols + 1, 0));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) aug[i][j] = A[i][j];
        aug[i][cols] = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;  // inconsistent
    if (pivots.size() != cols) return std::nullopt;                     // underdetermined
    Vec x(cols, 0);
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
    return x;
}

// Basis of { x : A x = 0 }.
inline std::vector<Vec> nullspace(Mat A) {
    size_t cols = A.empty() ? 0 : A[0].size();
    auto pivots = rref(A);
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec v(cols, 0);
        v[f] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -A[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Scale a rational vector to coprime integers by a positive factor only, so
// inequality orientations survive.
inline std::vector<Integer> scale_to_integer_positive(const Vec& v) {
    Integer l = 1;
    for (const auto& x : v) l = boost::multiprecision::lcm(l, den(x));
    std::vector<Integer> out;
    Integer g = 0;
    for (const auto& x : v) {
        out.push_back(num(x) * (l / den(x)));
        g = boost::multiprecision::gcd(g, out.back());
    }
    if (g > 1)
        for (auto& z : out) z /= g;
    return out;
}

// Scale a rational vector to coprime integers, first nonzero entry positive.
inline std::vector<Integer> scale_to_integer(const Vec& v) {
    auto out = scale_to_integer_positive(v);
    for (const auto& z : out) {
        if (z == 0) continue;
        if (z < 0)
            for (auto& w : out) w = -w;
        break;
    }
    return out;
}

}  // namespace mvforge
