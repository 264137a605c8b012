// runner.hpp
//
// Executes an ExperimentConfig suite by suite and writes one CSV and/or
// JSON file per suite plus a manifest. Output is byte-deterministic:
// fixed row order, shortest round-trip float formatting, no timestamps,
// and Monte Carlo reductions that do not depend on the worker count.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "config.hpp"
#include "exact.hpp"
#include "format.hpp"
#include "mc_verify.hpp"
#include "presets.hpp"
#include "scalar_ineq.hpp"
#include "tail_bounds.hpp"

namespace tailbound {

struct FileEntry {
    std::string path;
    std::uint64_t rows = 0;
};

struct RunManifest {
    std::string config_hash;
    std::uint64_t seed = 0;
    Verdict verdict = Verdict::Pass;
    std::vector<FileEntry> files;
};

namespace detail {

// One suite's tabular result: named columns, rows of JSON scalars. The CSV
// and JSON writers both read from this, so the two formats cannot drift.
struct SuiteTable {
    std::string stem;
    std::vector<std::string> columns;
    std::vector<std::vector<ordered_json>> rows;
    bool failed = false;
};

inline std::string csv_cell(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return fmt_u64(v.get<std::uint64_t>());
    if (v.is_number_integer()) return fmt_double(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return fmt_double(v.get<double>());
}

inline std::string render_csv(const SuiteTable& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += csv_cell(row[c]);
        }
        out += '\n';
    }
    return out;
}

inline std::string render_json(const SuiteTable& t) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c) {
            obj[t.columns[c]] = row[c];
        }
        rows.push_back(std::move(obj));
    }
    ordered_json j;
    j["suite"] = t.stem;
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

inline SuiteTable run_scalar(const ScalarSuite& s, std::uint64_t op_seed) {
    SuiteTable t;
    t.columns = {"x", "variant", "exp_value", "bound_value", "slack", "domain"};
    for (const BoundVariant v : s.variants) {
        const ScanReport rep = scan_inequality(
            s.lo, s.hi, s.step, s.random_points, op_seed, v,
            [&](const SlackReport& r) {
                t.rows.push_back({r.x, variant_name(r.variant), r.exp_value,
                                  r.bound_value, r.slack, domain_name(r.domain)});
            });
        if (rep.violations > 0) t.failed = true;
    }
    return t;
}

inline SuiteTable run_k_table(const KTableSuite& s) {
    SuiteTable t;
    t.columns = {"dist",           "delta", "mean", "second_abs_moment",
                 "abs_exp_moment", "k",     "k_sung"};
    for (const KTableEntry& e : s.entries) {
        const MomentProfile p = moment_profile(e.dist, e.delta);
        t.rows.push_back({name(e.dist), p.delta, p.mean, p.second_abs_moment,
                          p.abs_exp_moment, p.k_constant, p.k_sung});
    }
    return t;
}

inline SuiteTable run_lemma(const LemmaSuite& s, std::uint64_t op_seed,
                            unsigned workers, LemmaForm form) {
    SuiteTable t;
    t.columns = {"dist", "delta", "lambda", "lhs",
                 "lhs_ci_high", "rhs", "margin", "verdict"};
    const auto rows =
        verify_lemma(s.dist, s.delta, s.lambda_grid, s.reps, op_seed, workers,
                     form);
    for (const LemmaRow& r : rows) {
        if (r.row.verdict == Verdict::Fail) t.failed = true;
        t.rows.push_back({r.dist, r.delta, r.lambda, r.row.lhs,
                          r.row.lhs_ci_high, r.row.rhs, r.row.margin,
                          verdict_name(r.row.verdict)});
    }
    return t;
}

inline SuiteTable run_acceptability(const AcceptabilitySuite& s,
                                    std::uint64_t op_seed, unsigned workers) {
    SuiteTable t;
    t.columns = {"family", "n", "lambda", "ratio",
                 "se", "lower99", "upper99", "m", "verdict"};
    const std::string fam = family_name(s.family);
    const std::uint64_t n = family_size(s.family);
    for (std::size_t i = 0; i < s.lambda_grid.size(); ++i) {
        const double lambda = s.lambda_grid[i];
        const RatioEstimate est = acceptability_ratio(
            s.family, lambda, s.reps, derive_seed(op_seed, i), workers);
        const double lower = est.ratio - kNormalUpper99 * est.se;
        const double upper = est.ratio + kNormalUpper99 * est.se;
        const Verdict verdict =
            lower > s.family.declared_m ? Verdict::Fail : Verdict::Pass;
        if (verdict == Verdict::Fail) t.failed = true;
        t.rows.push_back({fam, n, lambda, est.ratio, est.se, lower, upper,
                          s.family.declared_m, verdict_name(verdict)});
    }
    return t;
}

inline SuiteTable run_theorem1(const Theorem1Suite& s, std::uint64_t op_seed,
                               unsigned workers) {
    SuiteTable t;
    t.columns = {"family", "n",   "delta",       "epsilon",   "k",
                 "m",      "lhs", "lhs_ci_high", "log_bound", "verdict"};
    const auto rows = verify_theorem1(s.family, s.delta, s.epsilon_grid, s.reps,
                                      op_seed, workers);
    for (const Theorem1Row& r : rows) {
        if (r.row.verdict == Verdict::Fail) t.failed = true;
        t.rows.push_back({r.family, r.n, r.delta, r.epsilon, r.k, r.m,
                          r.row.lhs, r.row.lhs_ci_high, r.log_bound,
                          verdict_name(r.row.verdict)});
    }
    return t;
}

inline SuiteTable run_compare(const CompareSuite& s) {
    SuiteTable t;
    t.columns = {"dist",     "delta",          "n",
                 "alpha",    "eps_new",        "log_bound_new",
                 "eps_sung", "log_bound_sung", "k_ratio"};
    const auto rows = compare_bounds(s.dist, s.delta, s.n_grid, s.alpha, s.m);
    const std::string dn = name(s.dist);
    for (const CompareRow& r : rows) {
        t.rows.push_back({dn, r.delta, r.n, r.alpha, r.eps_new, r.log_bound_new,
                          r.eps_sung, r.log_bound_sung, r.k_ratio});
    }
    return t;
}

inline SuiteTable run_end_check(const EndCheckSuite& s) {
    SuiteTable t;
    t.columns = {"case", "end_min_m"};
    for (const EndCase& c : s.cases) {
        t.rows.push_back({c.name, end_min_M(c.table)});
    }
    return t;
}

inline std::string suite_stem(const SuiteConfig& s) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ScalarSuite>) return "scalar";
            else if constexpr (std::is_same_v<T, KTableSuite>) return "k_table";
            else if constexpr (std::is_same_v<T, LemmaSuite>) return "lemma";
            else if constexpr (std::is_same_v<T, AcceptabilitySuite>)
                return "acceptability";
            else if constexpr (std::is_same_v<T, Theorem1Suite>) return "theorem1";
            else if constexpr (std::is_same_v<T, CompareSuite>) return "compare";
            else return "end_check";
        },
        s);
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

} // namespace detail

// Hash of the scientific content of a config: the worker count and output
// directory change neither suites nor seeds, so they are normalized away
// and reruns across worker counts produce identical manifests.
inline std::string run_hash(const ExperimentConfig& cfg) {
    ExperimentConfig canon = cfg;
    canon.workers = 1;
    canon.output = "out";
    return config_hash(canon);
}

inline RunManifest run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory: " +
                                 dir.string() + ": " + ec.message());
    }

    const LemmaForm form =
        cfg.proof_tight_lemma ? LemmaForm::ProofTight : LemmaForm::Stated;

    RunManifest manifest;
    manifest.config_hash = run_hash(cfg);
    manifest.seed = cfg.seed;

    for (std::size_t i = 0; i < cfg.suites.size(); ++i) {
        const std::uint64_t op_seed = derive_seed(cfg.seed, i);
        detail::SuiteTable table = std::visit(
            [&](const auto& s) -> detail::SuiteTable {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, ScalarSuite>) {
                    return detail::run_scalar(s, op_seed);
                } else if constexpr (std::is_same_v<T, KTableSuite>) {
                    return detail::run_k_table(s);
                } else if constexpr (std::is_same_v<T, LemmaSuite>) {
                    return detail::run_lemma(s, op_seed, cfg.workers, form);
                } else if constexpr (std::is_same_v<T, AcceptabilitySuite>) {
                    return detail::run_acceptability(s, op_seed, cfg.workers);
                } else if constexpr (std::is_same_v<T, Theorem1Suite>) {
                    return detail::run_theorem1(s, op_seed, cfg.workers);
                } else if constexpr (std::is_same_v<T, CompareSuite>) {
                    return detail::run_compare(s);
                } else {
                    return detail::run_end_check(s);
                }
            },
            cfg.suites[i]);
        table.stem = (i < 10 ? "0" : "") + fmt_u64(i) + "_" +
                     detail::suite_stem(cfg.suites[i]);

        if (table.failed) manifest.verdict = Verdict::Fail;
        if (cfg.format == OutputFormat::Csv || cfg.format == OutputFormat::Both) {
            const std::string fname = table.stem + ".csv";
            detail::write_file(dir / fname, detail::render_csv(table));
            manifest.files.push_back({fname, table.rows.size()});
        }
        if (cfg.format == OutputFormat::Json || cfg.format == OutputFormat::Both) {
            const std::string fname = table.stem + ".json";
            detail::write_file(dir / fname, detail::render_json(table));
            manifest.files.push_back({fname, table.rows.size()});
        }
    }

    ordered_json j;
    j["config_hash"] = manifest.config_hash;
    j["seed"] = manifest.seed;
    j["verdict"] = verdict_name(manifest.verdict);
    ordered_json files = ordered_json::array();
    for (const FileEntry& f : manifest.files) {
        ordered_json jf;
        jf["path"] = f.path;
        jf["rows"] = f.rows;
        files.push_back(std::move(jf));
    }
    j["files"] = files;
    detail::write_file(dir / "manifest.json", j.dump(2) + "\n");
    return manifest;
}

} // namespace tailbound
