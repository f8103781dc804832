#pragma once

#include <chrono>
#include <cstdint>
#include <utility>
#include <vector>

#include "rectcover/bool_matrix.hpp"
#include "rectcover/errors.hpp"

namespace rectcover {

// Point (p1,p2) or line (l1,l2) with the 1-based ranges p1 in [1,m],
// p2 in [1,2m^2]. A line (l1,l2) stands for y = l1*x + l2.
struct GridPair {
    std::uint64_t first = 0;
    std::uint64_t second = 0;
    friend bool operator==(const GridPair&, const GridPair&) = default;
};

struct BuildLimits {
    std::size_t max_n = 3456;  // n = 2m^3, so m <= 12 by default
};

// The incidence instance at parameter m: points and lines both range over
// [m] x [2m^2], the matrix is n x n with n = 2m^3, and entry(row(p), col(l))
// is 0 exactly when l1*p1 + l2 = p2.
struct IncidenceInstance {
    std::uint64_t m = 0;
    std::size_t n = 0;
    std::vector<GridPair> points;
    std::vector<GridPair> lines;
    BoolMatrix matrix;

    // index = (first-1)*2m^2 + (second-1); rows are points, columns lines
    std::size_t row_of(std::uint64_t p1, std::uint64_t p2) const {
        return std::size_t(p1 - 1) * (2 * m * m) + std::size_t(p2 - 1);
    }
    std::size_t col_of(std::uint64_t l1, std::uint64_t l2) const {
        return row_of(l1, l2);
    }
    const GridPair& point_at(std::size_t row) const { return points[row]; }
    const GridPair& line_at(std::size_t col) const { return lines[col]; }
};

inline IncidenceInstance build(std::uint64_t m, const BuildLimits& limits = {}) {
    if (m == 0)
        throw std::invalid_argument("build: m must be >= 1");
    const std::uint64_t n64 = 2 * m * m * m;
    if (n64 > limits.max_n)
        throw std::invalid_argument("build: n = 2m^3 = " + std::to_string(n64) +
                                    " exceeds guard " + std::to_string(limits.max_n));
    const std::size_t n = std::size_t(n64);
    const std::uint64_t span2 = 2 * m * m;

    IncidenceInstance inst{m, n, {}, {}, BoolMatrix::all_ones(n, n)};
    inst.points.reserve(n);
    for (std::uint64_t a = 1; a <= m; ++a)
        for (std::uint64_t b = 1; b <= span2; ++b)
            inst.points.push_back({a, b});
    inst.lines = inst.points;

    // Zeros of row (p1,p2): for each slope l1 the single intercept
    // l2 = p2 - l1*p1, provided it lands in [1, 2m^2].
    for (std::size_t r = 0; r < n; ++r) {
        const auto [p1, p2] = inst.points[r];
        for (std::uint64_t l1 = 1; l1 <= m; ++l1) {
            if (p2 <= l1 * p1)
                continue;
            const std::uint64_t l2 = p2 - l1 * p1;
            if (l2 <= span2)
                inst.matrix.set(r, inst.col_of(l1, l2), false);
        }
    }
    return inst;
}

inline std::uint64_t exact_zero_count(std::uint64_t m) {
    if (m == 0)
        throw std::invalid_argument("exact_zero_count: m must be >= 1");
    if (m > 55108)
        throw std::overflow_error("exact_zero_count: 2m^4 exceeds 64 bits");
    const std::uint64_t tri = m * (m + 1) / 2;
    return 2 * m * m * m * m - tri * tri;
}

struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return double(num) / double(den); }
};

inline Ratio density(const IncidenceInstance& inst) {
    return Ratio{inst.matrix.count_zeros(), inst.n};
}

inline Ratio density(const BoolMatrix& m) {
    return Ratio{m.count_zeros(), m.rows()};
}

// Shared points (within P at parameter m) of two distinct lines. Parallel
// distinct lines share none; otherwise the single candidate x is checked
// against the grid ranges.
inline unsigned line_pair_shared_points(GridPair la, GridPair lb, std::uint64_t m) {
    if (la.first == lb.first)
        return 0;  // parallel, l2 differs
    // l1*x + l2 = l1'*x + l2'  =>  x = (l2' - l2) / (l1 - l1')
    const std::int64_t dl1 = std::int64_t(la.first) - std::int64_t(lb.first);
    const std::int64_t dl2 = std::int64_t(lb.second) - std::int64_t(la.second);
    if (dl2 % dl1 != 0)
        return 0;
    const std::int64_t x = dl2 / dl1;
    if (x < 1 || std::uint64_t(x) > m)
        return 0;
    const std::int64_t y = std::int64_t(la.first) * x + std::int64_t(la.second);
    if (y < 1 || std::uint64_t(y) > 2 * m * m)
        return 0;
    return 1;
}

struct ZeroBlockReport {
    bool scan_passed = false;
    bool analytic_passed = false;
    double scan_seconds = 0.0;
    double analytic_seconds = 0.0;
};

// Dual-route check of the no-2x2-all-zero property: the exhaustive bit scan
// over column pairs, and the analytic count of shared points per line pair.
// A witness from either route throws; the construction proves none exists.
inline ZeroBlockReport verify_no_zero_block(const IncidenceInstance& inst) {
    using clock = std::chrono::steady_clock;
    ZeroBlockReport report;

    auto t0 = clock::now();
    if (auto w = find_zero_2x2(inst.matrix))
        throw structural_error("2x2 all-zero submatrix found", *w);
    report.scan_passed = true;
    report.scan_seconds = std::chrono::duration<double>(clock::now() - t0).count();

    t0 = clock::now();
    for (std::size_t i = 0; i < inst.lines.size(); ++i)
        for (std::size_t j = i + 1; j < inst.lines.size(); ++j)
            if (line_pair_shared_points(inst.lines[i], inst.lines[j], inst.m) > 1)
                throw structural_error("two lines share two points",
                                       ZeroBlockWitness{0, 0, i, j});
    report.analytic_passed = true;
    report.analytic_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    return report;
}

}  // namespace rectcover
