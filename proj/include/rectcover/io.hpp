#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rectcover/bool_matrix.hpp"
#include "rectcover/cover_opt.hpp"
#include "rectcover/incidence.hpp"
#include "rectcover/residue_cover.hpp"

namespace rectcover {

using ordered_json = nlohmann::ordered_json;

// -- plain PBM (P1): one-entries written verbatim as 1 --

inline void write_pbm(const BoolMatrix& m, std::ostream& os) {
    os << "P1\n" << m.cols() << ' ' << m.rows() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c)
                os << ' ';
            os << (m.entry(r, c) ? '1' : '0');
        }
        os << '\n';
    }
}

inline std::string to_pbm(const BoolMatrix& m) {
    std::ostringstream ss;
    write_pbm(m, ss);
    return ss.str();
}

namespace detail {

// whitespace-delimited header token, skipping '#' comments
inline std::string pbm_token(std::istream& is) {
    std::string tok;
    int ch;
    while ((ch = is.get()) != EOF) {
        if (ch == '#') {
            while ((ch = is.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty())
                return tok;
            continue;
        }
        tok.push_back(char(ch));
    }
    return tok;
}

// raster bit; P1 allows bits packed without separators
inline int pbm_bit(std::istream& is) {
    int ch;
    while ((ch = is.get()) != EOF) {
        if (ch == '#') {
            while ((ch = is.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch))
            continue;
        if (ch == '0' || ch == '1')
            return ch - '0';
        throw std::invalid_argument(std::string("read_pbm: bad raster character '") +
                                    char(ch) + "'");
    }
    throw std::invalid_argument("read_pbm: raster ended early");
}

}  // namespace detail

inline BoolMatrix read_pbm(std::istream& is) {
    if (detail::pbm_token(is) != "P1")
        throw std::invalid_argument("read_pbm: expected P1 magic");
    const std::string ws = detail::pbm_token(is);
    const std::string hs = detail::pbm_token(is);
    std::size_t cols = 0, rows = 0;
    try {
        cols = std::stoull(ws);
        rows = std::stoull(hs);
    } catch (const std::exception&) {
        throw std::invalid_argument("read_pbm: bad dimensions");
    }
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("read_pbm: dimensions must be positive");
    BoolMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (detail::pbm_bit(is))
                m.set(r, c, true);
    return m;
}

inline BoolMatrix read_pbm_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw std::invalid_argument("read_pbm_file: cannot open " + path);
    return read_pbm(is);
}

// -- JSON schemas --

inline ordered_json rect_to_json(const Rectangle& r) {
    return ordered_json{{"rows", r.rows}, {"cols", r.cols}};
}

inline Rectangle rect_from_json(const ordered_json& j) {
    Rectangle r;
    r.rows = j.at("rows").get<std::vector<std::size_t>>();
    r.cols = j.at("cols").get<std::vector<std::size_t>>();
    return r;
}

inline ordered_json rects_to_json(const std::vector<Rectangle>& rects) {
    ordered_json arr = ordered_json::array();
    for (const Rectangle& r : rects)
        arr.push_back(rect_to_json(r));
    return ordered_json{{"rects", std::move(arr)}};
}

inline std::vector<Rectangle> rects_from_json(const ordered_json& j) {
    std::vector<Rectangle> out;
    for (const auto& item : j.at("rects"))
        out.push_back(rect_from_json(item));
    return out;
}

inline ordered_json metadata_to_json(const IncidenceInstance& inst) {
    return ordered_json{{"m", inst.m},
                        {"n", inst.n},
                        {"zeros", inst.matrix.count_zeros()},
                        {"density", density(inst).value()}};
}

inline ordered_json cover_to_json(const CoverPlan& cp, PlanMode mode) {
    ordered_json rects = ordered_json::array();
    for (const CoverEntry& e : cp.rectangles) {
        ordered_json jr = rect_to_json(e.rect);
        jr["q"] = e.q;
        jr["a"] = e.a;
        jr["b"] = e.b;
        jr["c"] = e.c;
        rects.push_back(std::move(jr));
    }
    return ordered_json{{"m", cp.plan.m},
                        {"mode", to_string(mode)},
                        {"primes", cp.plan.primes},
                        {"primorial", cp.plan.primorial},
                        {"total_slots", cp.total_slots},
                        {"nonempty", cp.nonempty_count},
                        {"rects", std::move(rects)}};
}

inline ordered_json stats_to_json(const CoverStats& s) {
    ordered_json j{{"ones", s.ones}, {"zeros", s.zeros}, {"d", s.d}};
    if (s.explicit_size)
        j["explicit"] = *s.explicit_size;
    if (s.greedy_size)
        j["greedy"] = *s.greedy_size;
    if (s.exact_size) {
        j["exact"] = *s.exact_size;
        j["optimal"] = s.optimal;
    }
    j["lower"] = s.lower_bound;
    return j;
}

// -- curve CSV --

inline void write_curve_csv(const std::vector<CurveRow>& rows, std::ostream& os) {
    os << "m,n,primes,total_slots,nonempty,ratio\n";
    for (const CurveRow& r : rows) {
        os << r.m << ',' << r.n << ',' << r.prime_count << ',' << r.total_slots << ','
           << r.nonempty << ',' << std::fixed << std::setprecision(6) << r.ratio << '\n';
        os.unsetf(std::ios_base::fixed);
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::invalid_argument("cannot open for writing: " + path);
    os << text;
}

}  // namespace rectcover
