#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rectcover/bool_matrix.hpp"
#include "rectcover/errors.hpp"
#include "rectcover/incidence.hpp"

namespace rectcover {

enum class PlanMode { paper, adaptive };

inline const char* to_string(PlanMode mode) {
    return mode == PlanMode::paper ? "paper" : "adaptive";
}

// Prime selection for a cover. `sufficient` records whether the primorial
// clears the bound 3m^2, which is what the CRT coverage argument needs:
// l1*p1 + l2 can reach m^2 + 2m^2, so differences |p2 - (l1*p1+l2)| fall
// strictly below 3m^2.
struct PrimePlan {
    std::uint64_t m = 0;
    unsigned k_paper = 0;  // ceil(log2(2m^2))
    std::vector<std::uint64_t> primes;
    std::uint64_t primorial = 1;
    std::uint64_t bound = 0;  // 3m^2
    bool sufficient = false;
};

namespace detail {

inline bool is_prime(std::uint64_t x) {
    if (x < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= x; ++d)
        if (x % d == 0)
            return false;
    return true;
}

inline std::uint64_t next_prime(std::uint64_t x) {
    do {
        ++x;
    } while (!is_prime(x));
    return x;
}

// Count of x in [1..n] with x === r (mod q), canonical residue r in [0,q).
inline std::uint64_t residue_count(std::uint64_t n, std::uint64_t q, std::uint64_t r) {
    const std::uint64_t rep = (r == 0) ? q : r;  // least positive representative
    return rep > n ? 0 : (n - rep) / q + 1;
}

}  // namespace detail

inline PrimePlan select_primes(std::uint64_t m, PlanMode mode) {
    if (m == 0)
        throw std::invalid_argument("select_primes: m must be >= 1");
    if (m > 300'000'000)
        throw std::invalid_argument("select_primes: primorial for 3m^2 would overflow 64 bits");
    PrimePlan plan;
    plan.m = m;
    plan.bound = 3 * m * m;
    plan.k_paper = unsigned(std::bit_width(2 * m * m - 1));  // ceil(log2(2m^2))
    if (mode == PlanMode::paper) {
        for (std::uint64_t q = 2; q < plan.k_paper; q = detail::next_prime(q)) {
            plan.primes.push_back(q);
            plan.primorial *= q;
        }
    } else {
        for (std::uint64_t q = 2; plan.primorial <= plan.bound; q = detail::next_prime(q)) {
            plan.primes.push_back(q);
            plan.primorial *= q;
        }
    }
    plan.sufficient = plan.primorial > plan.bound;
    return plan;
}

// P^q_{a,b,c} x L^q_{a,b,c}: points with p1 === a and p2 =/= a*b+c (mod q)
// against lines with l1 === b and l2 === c (mod q). Residues are taken on the
// 1-based paper values, not on matrix indices.
inline Rectangle residue_rectangle(const IncidenceInstance& inst, std::uint64_t q,
                                   std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    if (!detail::is_prime(q))
        throw std::invalid_argument("residue_rectangle: q must be prime");
    if (a >= q || b >= q || c >= q)
        throw std::invalid_argument("residue_rectangle: residues must lie in [0,q)");
    Rectangle r;
    const std::uint64_t excluded = (a * b + c) % q;
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
        const auto& p = inst.points[i];
        if (p.first % q == a && p.second % q != excluded)
            r.rows.push_back(i);
    }
    for (std::size_t i = 0; i < inst.lines.size(); ++i) {
        const auto& l = inst.lines[i];
        if (l.first % q == b && l.second % q == c)
            r.cols.push_back(i);
    }
    return r;
}

struct CoverEntry {
    std::uint64_t q = 0;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t c = 0;
    Rectangle rect;
};

// All Sum(q^3) residue rectangles of a plan, in (q, a, b, c) ascending order.
// Empty rectangles are kept; total_slots must stay equal to Sum(q^3).
struct CoverPlan {
    PrimePlan plan;
    std::vector<CoverEntry> rectangles;
    std::uint64_t total_slots = 0;
    std::uint64_t nonempty_count = 0;
};

inline CoverPlan generate_cover(const IncidenceInstance& inst, const PrimePlan& plan) {
    if (plan.m != inst.m)
        throw std::invalid_argument("generate_cover: plan and instance disagree on m");
    CoverPlan cp;
    cp.plan = plan;
    for (std::uint64_t q : plan.primes) {
        cp.total_slots += q * q * q;
        for (std::uint64_t a = 0; a < q; ++a)
            for (std::uint64_t b = 0; b < q; ++b)
                for (std::uint64_t c = 0; c < q; ++c) {
                    CoverEntry e{q, a, b, c, residue_rectangle(inst, q, a, b, c)};
                    if (!e.rect.empty())
                        ++cp.nonempty_count;
                    cp.rectangles.push_back(std::move(e));
                }
    }
    return cp;
}

struct CoverReport {
    bool monochromatic_ok = false;
    bool coverage_ok = false;
    bool crt_ok = false;
    std::uint64_t defect_count = 0;
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // first bad cell

    bool all_ok() const { return monochromatic_ok && coverage_ok && crt_ok; }
};

// Three checks: (a) every rectangle is all-ones, (b) no one-entry is left
// uncovered, (c) the CRT argument replayed numerically: after each proper
// prefix of the primes, every still-uncovered one-entry has p2 === l1*p1+l2
// modulo the prefix primorial, and whenever |p2 - (l1*p1+l2)| < the full
// primorial the entry is covered by the full set. Throws only when a
// sufficiency-flagged plan fails, since that can only be a construction bug.
inline CoverReport verify_cover(const IncidenceInstance& inst, const CoverPlan& cp) {
    if (cp.plan.m != inst.m)
        throw std::invalid_argument("verify_cover: plan and instance disagree on m");
    CoverReport report;
    auto fail = [&](const std::string& what, std::size_t r, std::size_t c) {
        if (!report.witness)
            report.witness = {r, c};
        if (cp.plan.sufficient)
            throw cover_verification_error("verify_cover: " + what +
                                           " with a sufficient plan", r, c);
    };

    // (a) monochromaticity
    report.monochromatic_ok = true;
    for (const CoverEntry& e : cp.rectangles) {
        if (is_monochromatic_one(inst.matrix, e.rect))
            continue;
        report.monochromatic_ok = false;
        for (std::size_t r : e.rect.rows)
            for (std::size_t c : e.rect.cols)
                if (!inst.matrix.entry(r, c)) {
                    fail("rectangle contains a zero entry", r, c);
                    goto mono_done;
                }
    }
mono_done:;

    // (b) + (c) in one pass: grow the covered bitmap prime by prime and audit
    // the congruences at every proper prefix.
    const std::size_t words = inst.matrix.words_per_row();
    std::vector<std::uint64_t> covered(inst.n * words, 0);
    std::size_t next_rect = 0;
    std::uint64_t prefix_primorial = 1;
    report.crt_ok = true;
    for (std::size_t pi = 0; pi < cp.plan.primes.size(); ++pi) {
        const std::uint64_t q = cp.plan.primes[pi];
        for (; next_rect < cp.rectangles.size() && cp.rectangles[next_rect].q == q; ++next_rect) {
            const Rectangle& r = cp.rectangles[next_rect].rect;
            if (r.empty())
                continue;
            const auto mask = detail::col_mask(inst.matrix, r.cols);
            for (std::size_t row : r.rows)
                for (std::size_t w = 0; w < words; ++w)
                    covered[row * words + w] |= mask[w];
        }
        prefix_primorial *= q;
        if (pi + 1 == cp.plan.primes.size())
            break;  // full set; coverage handled below
        for (std::size_t row = 0; row < inst.n && report.crt_ok; ++row) {
            const auto& p = inst.points[row];
            auto rw = inst.matrix.row_words(row);
            for (std::size_t w = 0; w < words && report.crt_ok; ++w) {
                std::uint64_t open = rw[w] & ~covered[row * words + w];
                while (open) {
                    const std::size_t col = w * 64 + std::countr_zero(open);
                    open &= open - 1;
                    const auto& l = inst.lines[col];
                    const std::uint64_t v = l.first * p.first + l.second;
                    const std::uint64_t diff = v > p.second ? v - p.second : p.second - v;
                    // one-entry, so diff != 0; uncovered by the prefix forces
                    // agreement modulo every prefix prime
                    bool ok = diff != 0 && diff % prefix_primorial == 0;
                    for (std::size_t i = 0; i <= pi && ok; ++i)
                        ok = (p.second % cp.plan.primes[i]) == (v % cp.plan.primes[i]);
                    if (!ok) {
                        report.crt_ok = false;
                        fail("CRT prefix audit failed", row, col);
                        break;
                    }
                }
            }
        }
    }

    // (b): the defect under the full rectangle set, plus the tail of (c):
    // diff < primorial must imply coverage, which for a sufficient plan means
    // no defect at all.
    report.coverage_ok = true;
    for (std::size_t row = 0; row < inst.n; ++row) {
        const auto& p = inst.points[row];
        auto rw = inst.matrix.row_words(row);
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t open = rw[w] & ~covered[row * words + w];
            while (open) {
                const std::size_t col = w * 64 + std::countr_zero(open);
                open &= open - 1;
                report.coverage_ok = false;
                ++report.defect_count;
                const auto& l = inst.lines[col];
                const std::uint64_t v = l.first * p.first + l.second;
                const std::uint64_t diff = v > p.second ? v - p.second : p.second - v;
                if (diff < cp.plan.primorial) {
                    report.crt_ok = false;  // CRT promised coverage here
                    fail("uncovered one-entry with difference below the primorial", row, col);
                } else {
                    fail("uncovered one-entry", row, col);
                }
            }
        }
    }
    return report;
}

// Drops rectangles that are empty or fully covered by the rest, scanning in
// reverse (q,a,b,c) order. total_slots is left untouched: it is the size of
// the generated family, pruning is bookkeeping on top of it.
inline CoverPlan prune_cover(const IncidenceInstance& inst, const CoverPlan& cp) {
    CoverReport before = verify_cover(inst, cp);
    if (!before.all_ok())
        throw std::invalid_argument("prune_cover: input cover does not verify");

    const std::size_t n = inst.n;
    std::vector<std::uint32_t> times_covered(n * n, 0);
    for (const CoverEntry& e : cp.rectangles)
        for (std::size_t r : e.rect.rows)
            for (std::size_t c : e.rect.cols)
                ++times_covered[r * n + c];

    std::vector<bool> keep(cp.rectangles.size(), true);
    for (std::size_t i = cp.rectangles.size(); i-- > 0;) {
        const Rectangle& rect = cp.rectangles[i].rect;
        if (rect.empty()) {
            keep[i] = false;
            continue;
        }
        bool removable = true;
        for (std::size_t r : rect.rows) {
            for (std::size_t c : rect.cols)
                if (times_covered[r * n + c] < 2) {
                    removable = false;
                    break;
                }
            if (!removable)
                break;
        }
        if (removable) {
            keep[i] = false;
            for (std::size_t r : rect.rows)
                for (std::size_t c : rect.cols)
                    --times_covered[r * n + c];
        }
    }

    CoverPlan pruned;
    pruned.plan = cp.plan;
    pruned.total_slots = cp.total_slots;
    for (std::size_t i = 0; i < cp.rectangles.size(); ++i)
        if (keep[i])
            pruned.rectangles.push_back(cp.rectangles[i]);
    pruned.nonempty_count = pruned.rectangles.size();
    return pruned;
}

struct CurveRow {
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    std::size_t prime_count = 0;
    std::uint64_t total_slots = 0;
    std::uint64_t nonempty = 0;
    double ratio = 0.0;  // total_slots / (log2 n)^4
};

// Counting-only nonempty tally: a slot (q,a,b,c) is nonempty iff all four
// residue-class cardinalities below are positive. No matrix is materialized.
inline std::uint64_t count_nonempty_slots(std::uint64_t m, const PrimePlan& plan) {
    const std::uint64_t span2 = 2 * m * m;
    if (!plan.primes.empty() && m >= plan.primes.back())
        return std::accumulate(plan.primes.begin(), plan.primes.end(), std::uint64_t(0),
                               [](std::uint64_t s, std::uint64_t q) { return s + q * q * q; });
    std::uint64_t nonempty = 0;
    for (std::uint64_t q : plan.primes)
        for (std::uint64_t a = 0; a < q; ++a)
            for (std::uint64_t b = 0; b < q; ++b)
                for (std::uint64_t c = 0; c < q; ++c) {
                    const std::uint64_t p1s = detail::residue_count(m, q, a);
                    const std::uint64_t bad = detail::residue_count(span2, q, (a * b + c) % q);
                    const std::uint64_t l1s = detail::residue_count(m, q, b);
                    const std::uint64_t l2s = detail::residue_count(span2, q, c);
                    if (p1s > 0 && span2 - bad > 0 && l1s > 0 && l2s > 0)
                        ++nonempty;
                }
    return nonempty;
}

inline CurveRow curve_row(std::uint64_t m, PlanMode mode) {
    if (m > 2'097'151)
        throw std::invalid_argument("curve_row: n = 2m^3 would overflow 64 bits");
    const PrimePlan plan = select_primes(m, mode);
    CurveRow row;
    row.m = m;
    row.n = 2 * m * m * m;
    row.prime_count = plan.primes.size();
    for (std::uint64_t q : plan.primes)
        row.total_slots += q * q * q;
    row.nonempty = count_nonempty_slots(m, plan);
    const double lg = std::log2(double(row.n));
    row.ratio = double(row.total_slots) / (lg * lg * lg * lg);
    return row;
}

inline std::vector<CurveRow> cover_size_curve(std::span<const std::uint64_t> ms, PlanMode mode) {
    std::vector<CurveRow> rows;
    rows.reserve(ms.size());
    for (std::uint64_t m : ms)
        rows.push_back(curve_row(m, mode));
    return rows;
}

}  // namespace rectcover
