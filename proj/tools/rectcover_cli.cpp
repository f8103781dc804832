// Command-line front end: build instances, verify their structure, generate
// and check residue covers, run the covering-number solvers, and sweep the
// scaling curve. Exit codes: 0 success, 1 verification failure, 2 usage
// error, 3 size-guard degradation.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rectcover/rectcover.hpp"

namespace rc = rectcover;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

std::size_t resolve_max_n(std::optional<std::size_t> flag_value) {
    if (flag_value)
        return *flag_value;
    if (const char* env = std::getenv("RECTCOVER_MAX_N")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("RECTCOVER_MAX_N is not a number: " + std::string(env));
        }
    }
    return rc::BuildLimits{}.max_n;
}

std::pair<std::uint64_t, std::uint64_t> parse_m_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const std::uint64_t v = std::stoull(text);
            return {v, v};
        }
        const std::uint64_t lo = std::stoull(text.substr(0, dots));
        const std::uint64_t hi = std::stoull(text.substr(dots + 2));
        if (lo == 0 || hi < lo)
            throw std::invalid_argument("");
        return {lo, hi};
    } catch (const std::exception&) {
        throw std::invalid_argument("bad m range '" + text + "', expected <a> or <a>..<b>");
    }
}

void require_format(const std::string& format, const std::string& expected,
                    const std::string& command) {
    if (!format.empty() && format != expected)
        throw std::invalid_argument(command + " only writes " + expected + " output");
}

std::string stats_path_for(const std::string& cover_path) {
    std::filesystem::path p(cover_path);
    p.replace_extension(".stats.json");
    return p.string();
}

int cmd_build(std::uint64_t m, const std::string& out, std::size_t max_n) {
    const rc::IncidenceInstance inst = rc::build(m, {max_n});
    const std::string prefix = out.empty() ? "m" + std::to_string(m) : out;
    rc::write_text_file(prefix + ".pbm", rc::to_pbm(inst.matrix));
    rc::write_text_file(prefix + ".json", rc::metadata_to_json(inst).dump(2) + "\n");
    std::cout << "n=" << inst.n << " zeros=" << inst.matrix.count_zeros()
              << " density=" << rc::density(inst).value() << "\n";
    return kExitOk;
}

int cmd_verify(std::optional<std::uint64_t> m, const std::string& pbm_path, std::size_t max_n) {
    if (m.has_value() == !pbm_path.empty())
        throw std::invalid_argument("verify needs exactly one of --m or --pbm");
    if (!pbm_path.empty()) {
        // external matrix: exhaustive scan only
        const rc::BoolMatrix mat = rc::read_pbm_file(pbm_path);
        if (auto w = rc::find_zero_2x2(mat)) {
            rc::ordered_json j{{"error", "zero-block"},
                               {"witness", {{"r1", w->r1}, {"r2", w->r2}, {"c1", w->c1}, {"c2", w->c2}}}};
            std::cout << j.dump(2) << "\n";
            return kExitVerifyFail;
        }
        std::cout << "zero-block scan: pass (" << mat.rows() << "x" << mat.cols() << ")\n";
        return kExitOk;
    }
    const rc::IncidenceInstance inst = rc::build(*m, {max_n});
    const std::uint64_t zeros = inst.matrix.count_zeros();
    const std::uint64_t expect = rc::exact_zero_count(*m);
    const std::uint64_t m4 = *m * *m * *m * *m;
    if (zeros != expect || zeros < m4) {
        rc::ordered_json j{{"error", "zero-count"}, {"zeros", zeros}, {"expected", expect}};
        std::cout << j.dump(2) << "\n";
        return kExitVerifyFail;
    }
    std::cout << "zero-count: pass (" << zeros << " == " << expect << ", >= m^4 = " << m4 << ")\n";
    try {
        const rc::ZeroBlockReport rep = rc::verify_no_zero_block(inst);
        std::cout << "zero-block scan: pass (" << rep.scan_seconds << "s)\n"
                  << "line-pair analytic: pass (" << rep.analytic_seconds << "s)\n";
    } catch (const rc::structural_error& e) {
        const auto& w = e.witness;
        rc::ordered_json j{{"error", "zero-block"},
                           {"witness", {{"r1", w.r1}, {"r2", w.r2}, {"c1", w.c1}, {"c2", w.c2}}}};
        std::cout << j.dump(2) << "\n";
        return kExitVerifyFail;
    }
    return kExitOk;
}

int cmd_cover(std::uint64_t m, rc::PlanMode mode, const std::string& out, std::size_t max_n) {
    const rc::IncidenceInstance inst = rc::build(m, {max_n});
    const rc::PrimePlan plan = rc::select_primes(m, mode);
    const rc::CoverPlan cp = rc::generate_cover(inst, plan);
    const std::string path = out.empty() ? "cover_m" + std::to_string(m) + ".json" : out;

    const rc::CoverReport report = rc::verify_cover(inst, cp);  // throws if sufficient plan fails
    if (!report.all_ok()) {
        rc::write_text_file(path, rc::cover_to_json(cp, mode).dump() + "\n");
        rc::ordered_json j{{"error", "coverage-defect"},
                           {"defects", report.defect_count},
                           {"witness", {{"r", report.witness->first}, {"c", report.witness->second}}}};
        std::cout << j.dump(2) << "\n";
        std::cerr << "cover verification failed in " << rc::to_string(mode)
                  << " mode; adaptive mode selects enough primes to cover\n";
        return kExitVerifyFail;
    }
    const rc::CoverPlan pruned = rc::prune_cover(inst, cp);
    rc::write_text_file(path, rc::cover_to_json(pruned, mode).dump() + "\n");

    const double lg = std::log2(double(inst.n));
    rc::ordered_json stats{{"m", m},
                           {"n", inst.n},
                           {"zeros", inst.matrix.count_zeros()},
                           {"density", rc::density(inst).value()},
                           {"mode", rc::to_string(mode)},
                           {"primes", plan.primes},
                           {"primorial", plan.primorial},
                           {"total_slots", cp.total_slots},
                           {"nonempty", cp.nonempty_count},
                           {"pruned", pruned.rectangles.size()},
                           {"ratio", double(cp.total_slots) / (lg * lg * lg * lg)}};
    rc::write_text_file(stats_path_for(path), stats.dump(2) + "\n");
    std::cout << "mode=" << rc::to_string(mode) << " primes=" << plan.primes.size()
              << " total_slots=" << cp.total_slots << " nonempty=" << cp.nonempty_count
              << " pruned=" << pruned.rectangles.size() << " verified=pass\n";
    return kExitOk;
}

int cmd_exact(std::optional<std::uint64_t> m, const std::string& pbm_path, const std::string& out,
              std::size_t max_n) {
    if (m.has_value() == !pbm_path.empty())
        throw std::invalid_argument("exact needs exactly one of --m or --pbm");
    std::optional<rc::BoolMatrix> mat;
    std::optional<std::uint64_t> explicit_size;
    if (m) {
        const rc::IncidenceInstance inst = rc::build(*m, {max_n});
        const rc::PrimePlan plan = rc::select_primes(*m, rc::PlanMode::adaptive);
        const rc::CoverPlan pruned = rc::prune_cover(inst, rc::generate_cover(inst, plan));
        explicit_size = pruned.rectangles.size();
        mat = inst.matrix;
    } else {
        mat = rc::read_pbm_file(pbm_path);
    }
    const rc::CoverStats s = rc::stats(*mat, explicit_size);
    const std::string text = rc::stats_to_json(s).dump(2) + "\n";
    std::cout << text;
    if (!out.empty())
        rc::write_text_file(out, text);
    return s.exact_size ? kExitOk : kExitGuard;
}

int cmd_sweep(const std::string& range, rc::PlanMode mode, bool counting_only, bool doubling,
              const std::string& out, std::size_t max_n) {
    const auto [lo, hi] = parse_m_range(range);
    std::vector<std::uint64_t> ms;
    for (std::uint64_t m = lo; m <= hi; m = doubling ? m * 2 : m + 1) {
        ms.push_back(m);
        if (doubling && m > hi / 2)
            break;
    }
    if (!counting_only) {
        for (std::uint64_t m : ms)
            if (2 * m * m * m > max_n)
                throw std::invalid_argument(
                    "m=" + std::to_string(m) +
                    " exceeds the materialization guard; pass --counting-only");
    }
    const std::vector<rc::CurveRow> rows = rc::cover_size_curve(ms, mode);
    std::ostringstream csv;
    rc::write_curve_csv(rows, csv);
    if (out.empty())
        std::cout << csv.str();
    else
        rc::write_text_file(out, csv.str());

    if (!counting_only) {
        bool all_ok = true;
        for (std::uint64_t m : ms) {
            const rc::IncidenceInstance inst = rc::build(m, {max_n});
            const rc::CoverPlan cp = rc::generate_cover(inst, rc::select_primes(m, mode));
            bool ok = false;
            try {
                ok = rc::verify_cover(inst, cp).all_ok();
            } catch (const rc::cover_verification_error&) {
            }
            std::cerr << "verify m=" << m << ": " << (ok ? "pass" : "FAIL") << "\n";
            all_ok = all_ok && ok;
        }
        if (!all_ok)
            return kExitVerifyFail;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incidence matrices with dense zero sets, no 2x2 all-zero submatrix, "
                 "and polylog all-ones rectangle covers"};
    app.require_subcommand(1);

    std::string m_text, pbm_path, out, format, mode_text = "adaptive";
    std::optional<std::size_t> max_n_flag;
    std::optional<std::uint64_t> seed;
    bool counting_only = false, doubling = false;

    auto add_common = [&](CLI::App* cmd, bool with_m) {
        if (with_m)
            cmd->add_option("--m", m_text, "instance parameter m, or <a>..<b> for sweep");
        cmd->add_option("--out", out, "output path (or path prefix for build)");
        cmd->add_option("--format", format, "output format: json|csv|pbm");
        cmd->add_option("--max-n", max_n_flag,
                        "materialization guard on n = 2m^3 (env RECTCOVER_MAX_N)");
        cmd->add_option("--seed", seed, "reserved; no command uses randomness");
    };

    CLI::App* c_build = app.add_subcommand("build", "build the instance and write PBM + metadata");
    add_common(c_build, true);
    CLI::App* c_verify = app.add_subcommand("verify", "check zero count and 2x2 zero freedom");
    add_common(c_verify, true);
    c_verify->add_option("--pbm", pbm_path, "verify an external PBM matrix (scan only)");
    CLI::App* c_cover = app.add_subcommand("cover", "generate, verify, and prune a residue cover");
    add_common(c_cover, true);
    c_cover->add_option("--mode", mode_text, "prime selection: paper|adaptive")
        ->check(CLI::IsMember({"paper", "adaptive"}));
    CLI::App* c_exact = app.add_subcommand("exact", "covering-number stats (exact where guards allow)");
    add_common(c_exact, true);
    c_exact->add_option("--pbm", pbm_path, "analyze an external PBM matrix");
    CLI::App* c_sweep = app.add_subcommand("sweep", "emit the cover size curve as CSV");
    add_common(c_sweep, true);
    c_sweep->add_option("--mode", mode_text, "prime selection: paper|adaptive")
        ->check(CLI::IsMember({"paper", "adaptive"}));
    c_sweep->add_flag("--counting-only", counting_only, "never materialize matrices");
    c_sweep->add_flag("--doubling", doubling, "step m by doubling instead of +1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (seed)
            throw std::invalid_argument("--seed is reserved: no command uses randomness");
        const rc::PlanMode mode = mode_text == "paper" ? rc::PlanMode::paper : rc::PlanMode::adaptive;
        const std::size_t max_n = resolve_max_n(max_n_flag);

        auto need_m = [&]() -> std::uint64_t {
            if (m_text.empty())
                throw std::invalid_argument("--m is required");
            const auto [lo, hi] = parse_m_range(m_text);
            if (lo != hi)
                throw std::invalid_argument("m ranges are only valid for sweep");
            return lo;
        };
        auto opt_m = [&]() -> std::optional<std::uint64_t> {
            if (m_text.empty())
                return std::nullopt;
            return need_m();
        };

        if (c_build->parsed()) {
            require_format(format, "pbm", "build");
            return cmd_build(need_m(), out, max_n);
        }
        if (c_verify->parsed()) {
            require_format(format, "json", "verify");
            return cmd_verify(opt_m(), pbm_path, max_n);
        }
        if (c_cover->parsed()) {
            require_format(format, "json", "cover");
            return cmd_cover(need_m(), mode, out, max_n);
        }
        if (c_exact->parsed()) {
            require_format(format, "json", "exact");
            return cmd_exact(opt_m(), pbm_path, out, max_n);
        }
        if (c_sweep->parsed()) {
            require_format(format, "csv", "sweep");
            if (m_text.empty())
                throw std::invalid_argument("--m is required");
            return cmd_sweep(m_text, mode, counting_only, doubling, out, max_n);
        }
        throw std::invalid_argument("no subcommand");
    } catch (const rc::structural_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFail;
    } catch (const rc::cover_verification_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFail;
    } catch (const rc::size_guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const rc::enumeration_overflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
