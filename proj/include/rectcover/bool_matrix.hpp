#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rectcover/errors.hpp"

namespace rectcover {

// Bit-packed 0/1 matrix, row-major, one bit per entry. Padding bits past the
// last column of each row are kept zero so word-level popcounts are exact.
class BoolMatrix {
public:
    BoolMatrix(std::size_t rows, std::size_t cols, bool fill = false)
        : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64),
          bits_(rows * ((cols + 63) / 64), 0) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("BoolMatrix: rows and cols must be >= 1");
        if (fill)
            for (std::size_t r = 0; r < rows_; ++r)
                fill_row(r);
    }

    static BoolMatrix all_ones(std::size_t rows, std::size_t cols) {
        return BoolMatrix(rows, cols, true);
    }

    static BoolMatrix identity_ones(std::size_t n) {
        BoolMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return words_per_row_; }

    bool entry(std::size_t r, std::size_t c) const {
        check_index(r, c);
        return (word(r, c / 64) >> (c % 64)) & 1u;
    }

    void set(std::size_t r, std::size_t c, bool v) {
        check_index(r, c);
        std::uint64_t& w = bits_[r * words_per_row_ + c / 64];
        const std::uint64_t bit = std::uint64_t(1) << (c % 64);
        w = v ? (w | bit) : (w & ~bit);
    }

    std::span<const std::uint64_t> row_words(std::size_t r) const {
        return {bits_.data() + r * words_per_row_, words_per_row_};
    }

    std::uint64_t popcount() const {
        std::uint64_t total = 0;
        for (std::uint64_t w : bits_)
            total += std::popcount(w);
        return total;
    }

    std::uint64_t count_zeros() const {
        return std::uint64_t(rows_) * cols_ - popcount();
    }

    BoolMatrix transposed() const {
        BoolMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            auto rw = row_words(r);
            for (std::size_t w = 0; w < words_per_row_; ++w) {
                std::uint64_t x = rw[w];
                while (x) {
                    const unsigned b = std::countr_zero(x);
                    t.set(w * 64 + b, r, true);
                    x &= x - 1;
                }
            }
        }
        return t;
    }

    // Bits valid in the last word of a row.
    std::uint64_t last_word_mask() const {
        const std::size_t rem = cols_ % 64;
        return rem == 0 ? ~std::uint64_t(0) : (std::uint64_t(1) << rem) - 1;
    }

    friend bool operator==(const BoolMatrix& a, const BoolMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bits_ == b.bits_;
    }

private:
    void check_index(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            throw std::out_of_range("BoolMatrix: index out of range");
    }

    std::uint64_t word(std::size_t r, std::size_t w) const {
        return bits_[r * words_per_row_ + w];
    }

    void fill_row(std::size_t r) {
        for (std::size_t w = 0; w + 1 < words_per_row_; ++w)
            bits_[r * words_per_row_ + w] = ~std::uint64_t(0);
        bits_[r * words_per_row_ + words_per_row_ - 1] = last_word_mask();
    }

    std::size_t rows_;
    std::size_t cols_;
    std::size_t words_per_row_;
    std::vector<std::uint64_t> bits_;
};

// Row-set x column-set rectangle; index lists are sorted and duplicate-free.
// Either side may be empty, which makes the rectangle empty.
struct Rectangle {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;

    bool empty() const { return rows.empty() || cols.empty(); }

    static Rectangle normalized(std::vector<std::size_t> rows, std::vector<std::size_t> cols) {
        auto tidy = [](std::vector<std::size_t>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        tidy(rows);
        tidy(cols);
        return Rectangle{std::move(rows), std::move(cols)};
    }

    friend bool operator==(const Rectangle& a, const Rectangle& b) {
        return a.rows == b.rows && a.cols == b.cols;
    }
    friend auto operator<=>(const Rectangle& a, const Rectangle& b) {
        if (auto c = a.rows <=> b.rows; c != 0)
            return c;
        return a.cols <=> b.cols;
    }
};

namespace detail {

inline void check_rectangle(const BoolMatrix& m, const Rectangle& r) {
    for (std::size_t row : r.rows)
        if (row >= m.rows())
            throw std::out_of_range("Rectangle: row index out of range");
    for (std::size_t col : r.cols)
        if (col >= m.cols())
            throw std::out_of_range("Rectangle: col index out of range");
}

inline std::vector<std::uint64_t> col_mask(const BoolMatrix& m, const std::vector<std::size_t>& cols) {
    std::vector<std::uint64_t> mask(m.words_per_row(), 0);
    for (std::size_t c : cols)
        mask[c / 64] |= std::uint64_t(1) << (c % 64);
    return mask;
}

}  // namespace detail

inline bool is_monochromatic_one(const BoolMatrix& m, const Rectangle& r) {
    detail::check_rectangle(m, r);
    if (r.empty())
        return true;  // vacuous
    const auto mask = detail::col_mask(m, r.cols);
    for (std::size_t row : r.rows) {
        auto rw = m.row_words(row);
        for (std::size_t w = 0; w < mask.size(); ++w)
            if ((rw[w] & mask[w]) != mask[w])
                return false;
    }
    return true;
}

// Exhaustive scan for a 2x2 all-zero submatrix, driven by column pairs of the
// complement. The transpose is materialized once per scan; the witness is the
// first hit in (c1,c2) lexicographic order, then lowest two rows.
inline std::optional<ZeroBlockWitness> find_zero_2x2(const BoolMatrix& m) {
    const BoolMatrix t = m.transposed();  // row r of t = column r of m
    const std::size_t words = t.words_per_row();
    const std::uint64_t tail = t.last_word_mask();
    std::vector<std::uint64_t> zc(words);
    for (std::size_t c1 = 0; c1 + 1 < m.cols(); ++c1) {
        auto w1 = t.row_words(c1);
        for (std::size_t w = 0; w < words; ++w)
            zc[w] = ~w1[w] & (w + 1 == words ? tail : ~std::uint64_t(0));
        for (std::size_t c2 = c1 + 1; c2 < m.cols(); ++c2) {
            auto w2 = t.row_words(c2);
            std::size_t r1 = SIZE_MAX;
            for (std::size_t w = 0; w < words; ++w) {
                std::uint64_t both = zc[w] & ~w2[w];
                if (w + 1 == words)
                    both &= tail;
                while (both) {
                    const std::size_t r = w * 64 + std::countr_zero(both);
                    if (r1 == SIZE_MAX) {
                        r1 = r;
                        both &= both - 1;
                    } else {
                        return ZeroBlockWitness{r1, r, c1, c2};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

// One-entries of m that no rectangle in `cover` contains, in row-major order.
inline std::vector<std::pair<std::size_t, std::size_t>>
coverage_defect(const BoolMatrix& m, std::span<const Rectangle> cover) {
    const std::size_t words = m.words_per_row();
    std::vector<std::uint64_t> covered(m.rows() * words, 0);
    for (const Rectangle& r : cover) {
        detail::check_rectangle(m, r);
        if (r.empty())
            continue;
        const auto mask = detail::col_mask(m, r.cols);
        for (std::size_t row : r.rows)
            for (std::size_t w = 0; w < words; ++w)
                covered[row * words + w] |= mask[w];
    }
    std::vector<std::pair<std::size_t, std::size_t>> defect;
    for (std::size_t row = 0; row < m.rows(); ++row) {
        auto rw = m.row_words(row);
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t miss = rw[w] & ~covered[row * words + w];
            while (miss) {
                defect.emplace_back(row, w * 64 + std::countr_zero(miss));
                miss &= miss - 1;
            }
        }
    }
    return defect;
}

inline std::vector<std::pair<std::size_t, std::size_t>>
coverage_defect(const BoolMatrix& m, const std::vector<Rectangle>& cover) {
    return coverage_defect(m, std::span<const Rectangle>(cover));
}

}  // namespace rectcover
