// tailbound_main.cpp
//
// Command line front end.
//
//   tailbound verify scalar|lemma|theorem1|acceptability|end   default suites
//   tailbound table k|compare                                  bound tables
//   tailbound run <config.json>                                full experiment
//
// Every path funnels into run_experiment, so outputs are identical whether
// a suite is reached through a subcommand or a config file. Exit status is
// nonzero iff the manifest verdict is FAIL or an error occurred.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <tailbound/tailbound.hpp>

namespace {

struct GlobalOptions {
    std::uint64_t seed = 42;
    std::uint64_t reps = 0;
    std::string out = "out";
    std::string format = "csv";
    unsigned workers = 1;
    bool proof_tight_lemma = false;
};

tailbound::OutputFormat parse_format(const std::string& f) {
    if (f == "csv") return tailbound::OutputFormat::Csv;
    if (f == "json") return tailbound::OutputFormat::Json;
    if (f == "both") return tailbound::OutputFormat::Both;
    throw std::invalid_argument("unknown format '" + f +
                                "' (expected csv, json, or both)");
}

void apply_globals(tailbound::ExperimentConfig& cfg, const GlobalOptions& g,
                   bool override_seed) {
    if (override_seed) cfg.seed = g.seed;
    cfg.output = g.out;
    cfg.format = parse_format(g.format);
    cfg.workers = g.workers;
    cfg.proof_tight_lemma = g.proof_tight_lemma;
}

int execute(const tailbound::ExperimentConfig& cfg) {
    const tailbound::RunManifest manifest = tailbound::run_experiment(cfg);
    std::cout << "config_hash " << manifest.config_hash << "\n";
    std::cout << "seed " << manifest.seed << "\n";
    for (const tailbound::FileEntry& f : manifest.files) {
        std::cout << "wrote " << cfg.output << "/" << f.path << " ("
                  << f.rows << " rows)\n";
    }
    std::cout << "verdict " << tailbound::verdict_name(manifest.verdict)
              << "\n";
    return manifest.verdict == tailbound::Verdict::Fail ? 1 : 0;
}

std::uint64_t reps_or(const GlobalOptions& g, std::uint64_t dflt) {
    return g.reps > 0 ? g.reps : dflt;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verifiable concentration bounds for M-acceptable sums"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Experiment seed")->capture_default_str();
    app.add_option("--reps", g.reps,
                   "Monte Carlo replications per estimate (0 = suite default)");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--format", g.format, "Output format: csv|json|both")
        ->capture_default_str();
    app.add_option("--workers", g.workers, "Worker threads for Monte Carlo")
        ->capture_default_str();
    app.add_flag("--proof-tight-lemma", g.proof_tight_lemma,
                 "Use the tighter exp(K*lambda/2) MGF bound variant");

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->require_subcommand(1);
    auto* v_scalar = verify->add_subcommand(
        "scalar", "Pointwise exponential majorant scan");
    auto* v_lemma =
        verify->add_subcommand("lemma", "Centered MGF bound over the catalog");
    auto* v_theorem1 =
        verify->add_subcommand("theorem1", "Tail bound over the default families");
    auto* v_accept = verify->add_subcommand(
        "acceptability", "Joint/product MGF ratios for dependent families");
    auto* v_end =
        verify->add_subcommand("end", "Exact END constants on fixture tables");

    auto* table = app.add_subcommand("table", "Emit a bound table");
    table->require_subcommand(1);
    auto* t_k = table->add_subcommand("k", "Moment profile of the catalog");
    auto* t_compare =
        table->add_subcommand("compare", "Rate bound vs the reference bound");

    auto* run = app.add_subcommand("run", "Run a config-driven experiment");
    std::string config_path;
    run->add_option("config", config_path, "Path to a JSON config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        tailbound::ExperimentConfig cfg;
        bool override_seed = true;
        if (*v_scalar) {
            cfg.suites.push_back(tailbound::default_scalar_suite());
        } else if (*v_lemma) {
            for (auto& s : tailbound::default_lemma_suites(reps_or(g, 1'000'000))) {
                cfg.suites.push_back(std::move(s));
            }
        } else if (*v_theorem1) {
            for (auto& s :
                 tailbound::default_theorem1_suites(reps_or(g, 100'000))) {
                cfg.suites.push_back(std::move(s));
            }
        } else if (*v_accept) {
            for (auto& s :
                 tailbound::default_acceptability_suites(reps_or(g, 200'000))) {
                cfg.suites.push_back(std::move(s));
            }
        } else if (*v_end) {
            cfg.suites.push_back(tailbound::default_end_suite());
        } else if (*t_k) {
            cfg.suites.push_back(tailbound::default_k_table_suite());
        } else if (*t_compare) {
            for (auto& s : tailbound::default_compare_suites()) {
                cfg.suites.push_back(std::move(s));
            }
        } else {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) {
                throw std::runtime_error("cannot open config: " + config_path);
            }
            std::ostringstream text;
            text << in.rdbuf();
            cfg = tailbound::parse_config(text.str());
            // Config file settings win unless the flag was given explicitly.
            override_seed = app.count("--seed") > 0;
            if (app.count("--out") == 0) g.out = cfg.output;
            if (app.count("--format") == 0) {
                g.format = tailbound::format_name(cfg.format);
            }
            if (app.count("--workers") == 0) g.workers = cfg.workers;
            if (app.count("--proof-tight-lemma") == 0) {
                g.proof_tight_lemma = cfg.proof_tight_lemma;
            }
        }
        apply_globals(cfg, g, override_seed);
        return execute(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
