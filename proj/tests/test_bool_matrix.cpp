#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <random>
#include <set>

#include "rectcover/bool_matrix.hpp"
#include "test_support.hpp"

using namespace rectcover;
using testsupport::random_matrix;

namespace {

// quadruple-loop oracle for the column-pair scan
std::optional<ZeroBlockWitness> naive_zero_2x2(const BoolMatrix& m) {
    for (std::size_t r1 = 0; r1 < m.rows(); ++r1)
        for (std::size_t r2 = r1 + 1; r2 < m.rows(); ++r2)
            for (std::size_t c1 = 0; c1 < m.cols(); ++c1)
                for (std::size_t c2 = c1 + 1; c2 < m.cols(); ++c2)
                    if (!m.entry(r1, c1) && !m.entry(r1, c2) && !m.entry(r2, c1) &&
                        !m.entry(r2, c2))
                        return ZeroBlockWitness{r1, r2, c1, c2};
    return std::nullopt;
}

}  // namespace

TEST_CASE("entry reads stored bits", "[boolmat]") {
    BoolMatrix one(1, 1);
    one.set(0, 0, true);
    CHECK(one.entry(0, 0));

    const BoolMatrix id = BoolMatrix::identity_ones(2);
    CHECK(id.entry(0, 0));
    CHECK_FALSE(id.entry(0, 1));
    CHECK_FALSE(id.entry(1, 0));
    CHECK(id.entry(1, 1));

    CHECK_THROWS_AS(id.entry(2, 0), std::out_of_range);
    CHECK_THROWS_AS(id.entry(0, 2), std::out_of_range);
    CHECK_THROWS_AS(BoolMatrix(0, 3), std::invalid_argument);
}

TEST_CASE("count_zeros and popcount partition the entries", "[boolmat]") {
    CHECK(BoolMatrix::all_ones(3, 3).count_zeros() == 0);
    CHECK(BoolMatrix(3, 3).count_zeros() == 9);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const std::size_t r = 1 + rng() % 90, c = 1 + rng() % 90;
        const BoolMatrix m = random_matrix(rng, r, c);
        CHECK(m.count_zeros() + m.popcount() == std::uint64_t(r) * c);
    }
}

TEST_CASE("transpose mirrors entries", "[boolmat]") {
    std::mt19937_64 rng(11);
    const BoolMatrix m = random_matrix(rng, 70, 13);
    const BoolMatrix t = m.transposed();
    REQUIRE(t.rows() == 13);
    REQUIRE(t.cols() == 70);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            CHECK(t.entry(c, r) == m.entry(r, c));
    CHECK(t.popcount() == m.popcount());
}

TEST_CASE("is_monochromatic_one", "[boolmat]") {
    const BoolMatrix ones = BoolMatrix::all_ones(2, 2);
    const BoolMatrix id = BoolMatrix::identity_ones(2);
    const Rectangle full{{0, 1}, {0, 1}};

    CHECK(is_monochromatic_one(ones, Rectangle{}));
    CHECK(is_monochromatic_one(id, Rectangle{{0, 1}, {}}));
    CHECK(is_monochromatic_one(ones, full));
    CHECK_FALSE(is_monochromatic_one(id, full));
    CHECK(is_monochromatic_one(id, Rectangle{{0}, {0}}));

    CHECK_THROWS_AS(is_monochromatic_one(id, Rectangle{{0, 2}, {0}}), std::out_of_range);
}

TEST_CASE("find_zero_2x2 basics", "[boolmat]") {
    CHECK(find_zero_2x2(BoolMatrix(2, 2)) == ZeroBlockWitness{0, 1, 0, 1});
    CHECK_FALSE(find_zero_2x2(BoolMatrix::all_ones(8, 8)).has_value());
    CHECK_FALSE(find_zero_2x2(BoolMatrix(1, 40)).has_value());  // needs two rows
}

TEST_CASE("find_zero_2x2 agrees with the quadruple loop", "[boolmat]") {
    std::mt19937_64 rng(13);
    int found = 0;
    for (int i = 0; i < 1200; ++i) {
        const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        const double p = 0.2 + 0.1 * (rng() % 7);
        const BoolMatrix m = random_matrix(rng, r, c, p);
        const auto fast = find_zero_2x2(m);
        const auto slow = naive_zero_2x2(m);
        REQUIRE(fast.has_value() == slow.has_value());
        if (fast) {
            ++found;
            CHECK(fast->r1 < fast->r2);
            CHECK(fast->c1 < fast->c2);
            CHECK_FALSE(m.entry(fast->r1, fast->c1));
            CHECK_FALSE(m.entry(fast->r1, fast->c2));
            CHECK_FALSE(m.entry(fast->r2, fast->c1));
            CHECK_FALSE(m.entry(fast->r2, fast->c2));
        }
    }
    CHECK(found > 200);  // the sample exercises both outcomes
}

TEST_CASE("coverage_defect lists uncovered ones row-major", "[boolmat]") {
    const BoolMatrix ones = BoolMatrix::all_ones(2, 2);
    const Rectangle full{{0, 1}, {0, 1}};
    CHECK(coverage_defect(ones, std::vector<Rectangle>{full}).empty());

    const auto all = coverage_defect(ones, std::vector<Rectangle>{});
    const std::vector<std::pair<std::size_t, std::size_t>> expect{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    CHECK(all == expect);

    CHECK_THROWS_AS(coverage_defect(ones, std::vector<Rectangle>{Rectangle{{0}, {5}}}),
                    std::out_of_range);
}

TEST_CASE("coverage_defect is monotone in the cover", "[boolmat]") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 60; ++i) {
        const BoolMatrix m = random_matrix(rng, 8, 8, 0.6);
        auto random_rect = [&]() {
            Rectangle r;
            for (std::size_t k = 0; k < 8; ++k) {
                if (rng() % 3 == 0)
                    r.rows.push_back(k);
                if (rng() % 3 == 0)
                    r.cols.push_back(k);
            }
            return r;
        };
        std::vector<Rectangle> base;
        for (int k = 0; k < 3; ++k)
            base.push_back(random_rect());
        std::vector<Rectangle> extended = base;
        extended.push_back(random_rect());

        const auto big = coverage_defect(m, base);
        const auto small = coverage_defect(m, extended);
        const std::set<std::pair<std::size_t, std::size_t>> big_set(big.begin(), big.end());
        for (const auto& cell : small)
            CHECK(big_set.count(cell) == 1);
    }
}

TEST_CASE("monochromaticity cross-checks the defect path", "[boolmat]") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 80; ++i) {
        const BoolMatrix m = random_matrix(rng, 8, 8, 0.7);
        Rectangle r;
        for (std::size_t k = 0; k < 8; ++k) {
            if (rng() % 2)
                r.rows.push_back(k);
            if (rng() % 2)
                r.cols.push_back(k);
        }
        // the rectangle is all-ones iff the uncovered one-entries under the
        // empty cover, restricted to its cells, are exactly its cells
        const auto ones = coverage_defect(m, std::vector<Rectangle>{});
        const std::set<std::pair<std::size_t, std::size_t>> one_set(ones.begin(), ones.end());
        std::size_t inside = 0;
        for (std::size_t row : r.rows)
            for (std::size_t col : r.cols)
                inside += one_set.count({row, col});
        CHECK(is_monochromatic_one(m, r) == (inside == r.rows.size() * r.cols.size()));
    }
}

TEST_CASE("rectangle normalization sorts and dedupes", "[boolmat]") {
    const Rectangle r = Rectangle::normalized({3, 1, 3, 0}, {2, 2});
    CHECK(r.rows == std::vector<std::size_t>{0, 1, 3});
    CHECK(r.cols == std::vector<std::size_t>{2});
    CHECK_FALSE(r.empty());
    CHECK(Rectangle{}.empty());
    CHECK(Rectangle{{1}, {}}.empty());
}
