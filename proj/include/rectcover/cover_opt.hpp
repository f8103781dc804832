#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "rectcover/bool_matrix.hpp"
#include "rectcover/errors.hpp"

namespace rectcover {

struct OptLimits {
    std::size_t max_entries = 1024;    // maximal_rectangles guard when no cap given
    std::size_t max_candidates = 512;  // candidate guard for the exact solver
    std::uint64_t max_ones_exact = 64;
    std::size_t default_cap = 4096;    // enumeration working-set cap when none given
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline Bits row_bits(const BoolMatrix& m, std::size_t r) {
    auto rw = m.row_words(r);
    return Bits(rw.begin(), rw.end());
}

inline Bits and_bits(const Bits& a, const Bits& b) {
    Bits out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] & b[i];
    return out;
}

inline bool superset(const Bits& big, const Bits& small) {
    for (std::size_t i = 0; i < big.size(); ++i)
        if ((big[i] & small[i]) != small[i])
            return false;
    return true;
}

inline bool any_bit(const Bits& b) {
    for (std::uint64_t w : b)
        if (w)
            return true;
    return false;
}

inline std::vector<std::size_t> bits_to_indices(const Bits& b) {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < b.size(); ++w) {
        std::uint64_t x = b[w];
        while (x) {
            out.push_back(w * 64 + std::countr_zero(x));
            x &= x - 1;
        }
    }
    return out;
}

// The concept (closure) generated by a column set: all rows whose ones
// contain it, paired with the columns those rows have in common.
inline std::optional<Rectangle> close_columns(const BoolMatrix& m, const Bits& colset) {
    if (!any_bit(colset))
        return std::nullopt;
    Rectangle rect;
    Bits common(m.words_per_row(), ~std::uint64_t(0));
    common.back() = m.last_word_mask();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const Bits rb = row_bits(m, r);
        if (superset(rb, colset)) {
            rect.rows.push_back(r);
            common = and_bits(common, rb);
        }
    }
    if (rect.rows.empty())
        return std::nullopt;
    rect.cols = bits_to_indices(common);
    return rect;
}

}  // namespace detail

// All inclusion-maximal all-one rectangles with both sides nonempty, sorted by
// (rows, cols). Intents are generated as the closure of row-set intersections;
// the working set is bounded by `cap` (or limits.default_cap when cap==0, in
// which case the matrix must fit limits.max_entries).
inline std::vector<Rectangle> maximal_rectangles(const BoolMatrix& m, std::size_t cap = 0,
                                                 const OptLimits& limits = {}) {
    if (cap == 0) {
        if (m.rows() * m.cols() > limits.max_entries)
            throw size_guard_error("maximal_rectangles: matrix exceeds " +
                                   std::to_string(limits.max_entries) +
                                   " entries and no cap was given");
        cap = limits.default_cap;
    }

    std::set<detail::Bits> closed;
    detail::Bits full(m.words_per_row(), ~std::uint64_t(0));
    full.back() = m.last_word_mask();
    closed.insert(full);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const detail::Bits rb = detail::row_bits(m, r);
        std::vector<detail::Bits> fresh;
        for (const auto& s : closed)
            fresh.push_back(detail::and_bits(s, rb));
        for (auto& f : fresh) {
            closed.insert(std::move(f));
            if (closed.size() > cap)
                throw enumeration_overflow("maximal_rectangles: more than " +
                                           std::to_string(cap) + " closed column sets");
        }
    }

    std::vector<Rectangle> out;
    for (const auto& colset : closed) {
        if (!detail::any_bit(colset))
            continue;
        Rectangle rect;
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (detail::superset(detail::row_bits(m, r), colset))
                rect.rows.push_back(r);
        if (rect.rows.empty())
            continue;
        rect.cols = detail::bits_to_indices(colset);
        out.push_back(std::move(rect));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Grow a 1-monochromatic rectangle to an inclusion-maximal one containing it:
// first all columns its rows share, then all rows carrying those columns.
inline Rectangle expand_to_maximal(const BoolMatrix& m, const Rectangle& r) {
    detail::check_rectangle(m, r);
    if (r.empty())
        return r;
    if (!is_monochromatic_one(m, r))
        throw std::invalid_argument("expand_to_maximal: rectangle is not all-ones");
    detail::Bits common(m.words_per_row(), ~std::uint64_t(0));
    common.back() = m.last_word_mask();
    for (std::size_t row : r.rows)
        common = detail::and_bits(common, detail::row_bits(m, row));
    auto grown = detail::close_columns(m, common);
    return *grown;  // nonempty: r.rows all qualify
}

// Deterministic fallback candidates when full enumeration overflows: the
// concepts generated by every single row and every single column. Any
// one-entry lies in its row's concept, so these always cover.
inline std::vector<Rectangle> row_col_concepts(const BoolMatrix& m) {
    std::set<Rectangle> uniq;
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (auto rect = detail::close_columns(m, detail::row_bits(m, r)))
            uniq.insert(std::move(*rect));
    const BoolMatrix t = m.transposed();
    for (std::size_t c = 0; c < t.rows(); ++c) {
        Rectangle seed;
        seed.rows = detail::bits_to_indices(detail::row_bits(t, c));
        if (seed.rows.empty())
            continue;
        seed.cols = {c};
        uniq.insert(expand_to_maximal(m, seed));
    }
    return {uniq.begin(), uniq.end()};
}

namespace detail {

inline std::vector<Rectangle> greedy_from_candidates(const BoolMatrix& m,
                                                     const std::vector<Rectangle>& cands) {
    const std::size_t words = m.words_per_row();
    Bits uncovered(m.rows() * words, 0);
    std::uint64_t remaining = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto rw = m.row_words(r);
        for (std::size_t w = 0; w < words; ++w) {
            uncovered[r * words + w] = rw[w];
            remaining += std::popcount(rw[w]);
        }
    }
    std::vector<Bits> masks;  // per-candidate column masks
    masks.reserve(cands.size());
    for (const Rectangle& r : cands)
        masks.push_back(col_mask(m, r.cols));

    std::vector<Rectangle> cover;
    while (remaining > 0) {
        std::size_t best = SIZE_MAX;
        std::uint64_t best_gain = 0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            std::uint64_t gain = 0;
            for (std::size_t r : cands[i].rows)
                for (std::size_t w = 0; w < words; ++w)
                    gain += std::popcount(uncovered[r * words + w] & masks[i][w]);
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best == SIZE_MAX)
            throw std::logic_error("greedy: uncovered ones but no candidate helps");
        for (std::size_t r : cands[best].rows)
            for (std::size_t w = 0; w < words; ++w)
                uncovered[r * words + w] &= ~masks[best][w];
        remaining -= best_gain;
        cover.push_back(cands[best]);
    }
    return cover;
}

}  // namespace detail

// Standard set-cover greedy over maximal rectangles; ties go to the first
// candidate in sorted order. Falls back to row/column concepts when the full
// enumeration overflows its cap.
inline std::vector<Rectangle> greedy_cover(const BoolMatrix& m, std::size_t cap = 0,
                                           const OptLimits& limits = {}) {
    std::vector<Rectangle> cands;
    try {
        cands = maximal_rectangles(m, cap == 0 ? limits.default_cap : cap, limits);
    } catch (const enumeration_overflow&) {
        cands = row_col_concepts(m);
    }
    return detail::greedy_from_candidates(m, cands);
}

struct ExactCover {
    std::vector<Rectangle> rects;
    bool optimal = false;
};

// Branch and bound over the maximal rectangles: greedy seeds the upper bound,
// ceil(uncovered / best-single-candidate) bounds below, and branching fixes
// the uncovered one-entry with the fewest covering candidates.
inline ExactCover exact_min_cover(const BoolMatrix& m, const OptLimits& limits = {}) {
    const std::uint64_t ones = m.popcount();
    if (ones > limits.max_ones_exact)
        throw size_guard_error("exact_min_cover: " + std::to_string(ones) + " ones exceed guard " +
                               std::to_string(limits.max_ones_exact) + "; use greedy_cover");
    if (ones == 0)
        return {{}, true};

    const std::vector<Rectangle> cands = maximal_rectangles(m, limits.max_candidates, limits);

    // ones are few; index them and express candidate coverage as uint64 masks
    std::vector<std::pair<std::size_t, std::size_t>> one_cells;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.entry(r, c))
                one_cells.emplace_back(r, c);
    auto cell_index = [&](std::size_t r, std::size_t c) {
        return std::size_t(std::lower_bound(one_cells.begin(), one_cells.end(),
                                            std::make_pair(r, c)) -
                           one_cells.begin());
    };
    std::vector<std::uint64_t> cover_mask(cands.size(), 0);
    for (std::size_t i = 0; i < cands.size(); ++i)
        for (std::size_t r : cands[i].rows)
            for (std::size_t c : cands[i].cols)
                cover_mask[i] |= std::uint64_t(1) << cell_index(r, c);
    const std::uint64_t all_mask =
        ones == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << ones) - 1;

    std::vector<std::size_t> best_set;
    {
        auto greedy = detail::greedy_from_candidates(m, cands);
        for (const Rectangle& g : greedy) {
            auto it = std::lower_bound(cands.begin(), cands.end(), g);
            best_set.push_back(std::size_t(it - cands.begin()));
        }
    }

    std::uint64_t max_single = 0;
    for (std::uint64_t cm : cover_mask)
        max_single = std::max<std::uint64_t>(max_single, std::popcount(cm));

    std::vector<std::size_t> chosen;
    auto recurse = [&](auto&& self, std::uint64_t uncovered) -> void {
        if (uncovered == 0) {
            if (chosen.size() < best_set.size())
                best_set = chosen;
            return;
        }
        const std::uint64_t need =
            (std::uint64_t(std::popcount(uncovered)) + max_single - 1) / max_single;
        if (chosen.size() + need >= best_set.size())
            return;
        // fail-first: branch on the uncovered cell with fewest covering candidates
        std::size_t branch_cell = SIZE_MAX, fewest = SIZE_MAX;
        std::uint64_t u = uncovered;
        while (u) {
            const std::size_t cell = std::countr_zero(u);
            u &= u - 1;
            std::size_t k = 0;
            for (std::size_t i = 0; i < cands.size(); ++i)
                if (cover_mask[i] >> cell & 1)
                    ++k;
            if (k < fewest) {
                fewest = k;
                branch_cell = cell;
            }
        }
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (!(cover_mask[i] >> branch_cell & 1))
                continue;
            chosen.push_back(i);
            self(self, uncovered & ~cover_mask[i]);
            chosen.pop_back();
        }
    };
    recurse(recurse, all_mask);

    ExactCover out;
    out.optimal = true;
    for (std::size_t i : best_set)
        out.rects.push_back(cands[i]);
    return out;
}

// Greedy fooling set: one-entries kept in row-major order when they conflict
// with every entry already kept. Two one-entries conflict when either cross
// entry is zero, so no all-one rectangle can contain both, making the kept
// count a lower bound on the covering number.
inline std::pair<std::uint64_t, std::vector<std::pair<std::size_t, std::size_t>>>
fooling_lower_bound(const BoolMatrix& m) {
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (!m.entry(r, c))
                continue;
            bool conflicts_all = true;
            for (const auto& [kr, kc] : kept)
                if (m.entry(r, kc) && m.entry(kr, c)) {
                    conflicts_all = false;
                    break;
                }
            if (conflicts_all)
                kept.emplace_back(r, c);
        }
    return {kept.size(), kept};
}

struct CoverStats {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t ones = 0;
    std::uint64_t zeros = 0;
    double d = 0.0;  // zeros / rows
    std::optional<std::uint64_t> explicit_size;
    std::optional<std::uint64_t> greedy_size;
    std::optional<std::uint64_t> exact_size;
    bool optimal = false;
    std::uint64_t lower_bound = 0;
};

inline CoverStats stats(const BoolMatrix& m, std::optional<std::uint64_t> explicit_size = {},
                        const OptLimits& limits = {}) {
    CoverStats s;
    s.rows = m.rows();
    s.cols = m.cols();
    s.ones = m.popcount();
    s.zeros = m.count_zeros();
    s.d = double(s.zeros) / double(s.rows);
    s.explicit_size = explicit_size;
    s.lower_bound = fooling_lower_bound(m).first;
    s.greedy_size = greedy_cover(m, 0, limits).size();
    try {
        auto exact = exact_min_cover(m, limits);
        s.exact_size = exact.rects.size();
        s.optimal = exact.optimal;
    } catch (const size_guard_error&) {
    } catch (const enumeration_overflow&) {
    }
    return s;
}

}  // namespace rectcover
