// config.hpp
//
// Experiment configuration: a JSON document selecting suites and their
// parameters. Parsing is strict (unknown keys are errors, every referenced
// distribution and family is validated immediately) and serialization
// round-trips exactly: parse_config(serialize_config(cfg)) == cfg.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "distributions.hpp"
#include "families.hpp"
#include "scalar_ineq.hpp"

namespace tailbound {

using ordered_json = nlohmann::ordered_json;

enum class OutputFormat { Csv, Json, Both };

inline std::string format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        default: return "both";
    }
}

struct ScalarSuite {
    double lo = -30.0;
    double hi = 30.0;
    double step = 1e-3;
    std::uint64_t random_points = 100'000;
    std::vector<BoundVariant> variants{BoundVariant::Abs, BoundVariant::Sq};
    bool operator==(const ScalarSuite&) const = default;
};

struct KTableEntry {
    DistributionSpec dist;
    double delta = 1.0;
    bool operator==(const KTableEntry&) const = default;
};

struct KTableSuite {
    std::vector<KTableEntry> entries;
    bool operator==(const KTableSuite&) const = default;
};

struct LemmaSuite {
    DistributionSpec dist;
    double delta = 1.0;
    std::vector<double> lambda_grid;
    std::uint64_t reps = 1'000'000;
    bool operator==(const LemmaSuite&) const = default;
};

struct AcceptabilitySuite {
    FamilySpec family;
    std::vector<double> lambda_grid;
    std::uint64_t reps = 200'000;
    bool operator==(const AcceptabilitySuite&) const = default;
};

struct Theorem1Suite {
    FamilySpec family;
    double delta = 1.0;
    std::vector<double> epsilon_grid;
    std::uint64_t reps = 100'000;
    bool operator==(const Theorem1Suite&) const = default;
};

struct CompareSuite {
    DistributionSpec dist;
    double delta = 1.0;
    std::vector<std::uint64_t> n_grid;
    double alpha = 1.0;
    double m = 1.0;
    bool operator==(const CompareSuite&) const = default;
};

struct EndCase {
    std::string name;
    BivariateTable table;
    bool operator==(const EndCase&) const = default;
};

struct EndCheckSuite {
    std::vector<EndCase> cases;
    bool operator==(const EndCheckSuite&) const = default;
};

using SuiteConfig = std::variant<ScalarSuite, KTableSuite, LemmaSuite,
                                 AcceptabilitySuite, Theorem1Suite,
                                 CompareSuite, EndCheckSuite>;

struct ExperimentConfig {
    std::uint64_t seed = 42;
    std::string output = "out";
    OutputFormat format = OutputFormat::Csv;
    unsigned workers = 1;
    bool proof_tight_lemma = false;
    std::vector<SuiteConfig> suites;
    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline void expect_keys(const ordered_json& j, const std::string& ctx,
                        std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw std::invalid_argument("config: " + ctx + " must be an object");
    }
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (item.key() == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw std::invalid_argument("config: unknown key '" + item.key() +
                                        "' in " + ctx);
        }
    }
}

inline const ordered_json& need(const ordered_json& j, const std::string& ctx,
                                const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw std::invalid_argument("config: missing key '" + std::string(key) +
                                    "' in " + ctx);
    }
    return *it;
}

} // namespace detail

inline DistributionSpec dist_from_json(const ordered_json& j) {
    const std::string kind =
        detail::need(j, "distribution", "kind").get<std::string>();
    DistributionSpec dist;
    if (kind == "rademacher") {
        detail::expect_keys(j, "rademacher", {"kind"});
        dist = Rademacher{};
    } else if (kind == "uniform") {
        detail::expect_keys(j, "uniform", {"kind", "a", "b"});
        dist = Uniform{detail::need(j, "uniform", "a").get<double>(),
                       detail::need(j, "uniform", "b").get<double>()};
    } else if (kind == "bernoulli") {
        detail::expect_keys(j, "bernoulli", {"kind", "p"});
        dist = Bernoulli{detail::need(j, "bernoulli", "p").get<double>()};
    } else if (kind == "centered_bernoulli") {
        detail::expect_keys(j, "centered_bernoulli", {"kind", "p"});
        dist = CenteredBernoulli{
            detail::need(j, "centered_bernoulli", "p").get<double>()};
    } else if (kind == "laplace") {
        detail::expect_keys(j, "laplace", {"kind", "scale"});
        dist = Laplace{detail::need(j, "laplace", "scale").get<double>()};
    } else if (kind == "gaussian") {
        detail::expect_keys(j, "gaussian", {"kind", "sigma"});
        dist = Gaussian{detail::need(j, "gaussian", "sigma").get<double>()};
    } else if (kind == "discrete_table") {
        detail::expect_keys(j, "discrete_table", {"kind", "values", "probs"});
        dist = DiscreteTable{
            detail::need(j, "discrete_table", "values").get<std::vector<double>>(),
            detail::need(j, "discrete_table", "probs").get<std::vector<double>>()};
    } else {
        throw std::invalid_argument("config: unknown distribution kind '" +
                                    kind + "'");
    }
    validate(dist);
    return dist;
}

inline ordered_json dist_to_json(const DistributionSpec& dist) {
    return std::visit(
        [](const auto& d) -> ordered_json {
            using T = std::decay_t<decltype(d)>;
            ordered_json j;
            if constexpr (std::is_same_v<T, Rademacher>) {
                j["kind"] = "rademacher";
            } else if constexpr (std::is_same_v<T, Uniform>) {
                j["kind"] = "uniform";
                j["a"] = d.a;
                j["b"] = d.b;
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                j["kind"] = "bernoulli";
                j["p"] = d.p;
            } else if constexpr (std::is_same_v<T, CenteredBernoulli>) {
                j["kind"] = "centered_bernoulli";
                j["p"] = d.p;
            } else if constexpr (std::is_same_v<T, Laplace>) {
                j["kind"] = "laplace";
                j["scale"] = d.scale;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                j["kind"] = "gaussian";
                j["sigma"] = d.sigma;
            } else {
                j["kind"] = "discrete_table";
                j["values"] = d.values;
                j["probs"] = d.probs;
            }
            return j;
        },
        dist);
}

inline FamilySpec family_from_json(const ordered_json& j) {
    const std::string kind = detail::need(j, "family", "kind").get<std::string>();
    FamilySpec spec;
    if (kind == "iid") {
        detail::expect_keys(j, "iid family", {"kind", "dist", "n", "m", "delta"});
        spec.kind = IidFamily{dist_from_json(detail::need(j, "iid family", "dist")),
                              detail::need(j, "iid family", "n").get<std::uint64_t>()};
    } else if (kind == "multinomial_coords") {
        detail::expect_keys(j, "multinomial_coords family",
                            {"kind", "trials", "probs", "take", "m", "delta"});
        spec.kind = MultinomialCoords{
            detail::need(j, "multinomial_coords family", "trials")
                .get<std::uint64_t>(),
            detail::need(j, "multinomial_coords family", "probs")
                .get<std::vector<double>>(),
            detail::need(j, "multinomial_coords family", "take")
                .get<std::uint64_t>()};
    } else if (kind == "srs_without_replacement") {
        detail::expect_keys(j, "srs_without_replacement family",
                            {"kind", "population", "draws", "m", "delta"});
        spec.kind = SrsWithoutReplacement{
            detail::need(j, "srs_without_replacement family", "population")
                .get<std::vector<double>>(),
            detail::need(j, "srs_without_replacement family", "draws")
                .get<std::uint64_t>()};
    } else if (kind == "random_permutation") {
        detail::expect_keys(j, "random_permutation family",
                            {"kind", "values", "m", "delta"});
        spec.kind = RandomPermutation{
            detail::need(j, "random_permutation family", "values")
                .get<std::vector<double>>()};
    } else if (kind == "neg_corr_gaussian") {
        detail::expect_keys(j, "neg_corr_gaussian family",
                            {"kind", "mean", "cov", "m", "delta"});
        spec.kind = NegCorrGaussian{
            detail::need(j, "neg_corr_gaussian family", "mean")
                .get<std::vector<double>>(),
            detail::need(j, "neg_corr_gaussian family", "cov")
                .get<std::vector<std::vector<double>>>()};
    } else {
        throw std::invalid_argument("config: unknown family kind '" + kind + "'");
    }
    spec.declared_m = j.value("m", 1.0);
    spec.declared_delta = j.value("delta", 1.0);
    validate_family(spec);
    return spec;
}

inline ordered_json family_to_json(const FamilySpec& spec) {
    ordered_json j = std::visit(
        [](const auto& k) -> ordered_json {
            using T = std::decay_t<decltype(k)>;
            ordered_json j;
            if constexpr (std::is_same_v<T, IidFamily>) {
                j["kind"] = "iid";
                j["dist"] = dist_to_json(k.dist);
                j["n"] = k.n;
            } else if constexpr (std::is_same_v<T, MultinomialCoords>) {
                j["kind"] = "multinomial_coords";
                j["trials"] = k.trials;
                j["probs"] = k.probs;
                j["take"] = k.take;
            } else if constexpr (std::is_same_v<T, SrsWithoutReplacement>) {
                j["kind"] = "srs_without_replacement";
                j["population"] = k.population;
                j["draws"] = k.draws;
            } else if constexpr (std::is_same_v<T, RandomPermutation>) {
                j["kind"] = "random_permutation";
                j["values"] = k.values;
            } else {
                j["kind"] = "neg_corr_gaussian";
                j["mean"] = k.mean;
                j["cov"] = k.cov;
            }
            return j;
        },
        spec.kind);
    j["m"] = spec.declared_m;
    j["delta"] = spec.declared_delta;
    return j;
}

inline SuiteConfig suite_from_json(const ordered_json& j) {
    const std::string kind = detail::need(j, "suite block", "suite").get<std::string>();
    if (kind == "scalar") {
        detail::expect_keys(j, "scalar suite",
                            {"suite", "lo", "hi", "step", "random_points",
                             "variants"});
        ScalarSuite s;
        s.lo = j.value("lo", s.lo);
        s.hi = j.value("hi", s.hi);
        s.step = j.value("step", s.step);
        s.random_points = j.value("random_points", s.random_points);
        if (j.contains("variants")) {
            s.variants.clear();
            for (const auto& v : j.at("variants")) {
                const std::string name = v.get<std::string>();
                if (name == "abs") {
                    s.variants.push_back(BoundVariant::Abs);
                } else if (name == "sq") {
                    s.variants.push_back(BoundVariant::Sq);
                } else {
                    throw std::invalid_argument(
                        "config: unknown variant '" + name +
                        "' in scalar suite (expected \"abs\" or \"sq\")");
                }
            }
        }
        if (!(s.lo <= s.hi) || !(s.step > 0.0) || s.variants.empty()) {
            throw std::invalid_argument("config: scalar suite grid is empty");
        }
        return s;
    }
    if (kind == "k-table") {
        detail::expect_keys(j, "k-table suite", {"suite", "entries"});
        KTableSuite s;
        for (const auto& e : detail::need(j, "k-table suite", "entries")) {
            detail::expect_keys(e, "k-table entry", {"dist", "delta"});
            KTableEntry entry{dist_from_json(detail::need(e, "k-table entry", "dist")),
                              detail::need(e, "k-table entry", "delta").get<double>()};
            moment_profile(entry.dist, entry.delta);
            s.entries.push_back(std::move(entry));
        }
        return s;
    }
    if (kind == "lemma") {
        detail::expect_keys(j, "lemma suite",
                            {"suite", "dist", "delta", "lambda_grid", "reps"});
        LemmaSuite s;
        s.dist = dist_from_json(detail::need(j, "lemma suite", "dist"));
        s.delta = detail::need(j, "lemma suite", "delta").get<double>();
        s.lambda_grid = detail::need(j, "lemma suite", "lambda_grid")
                            .get<std::vector<double>>();
        s.reps = j.value("reps", s.reps);
        moment_profile(s.dist, s.delta);
        return s;
    }
    if (kind == "acceptability") {
        detail::expect_keys(j, "acceptability suite",
                            {"suite", "family", "lambda_grid", "reps"});
        AcceptabilitySuite s;
        s.family = family_from_json(detail::need(j, "acceptability suite", "family"));
        s.lambda_grid = detail::need(j, "acceptability suite", "lambda_grid")
                            .get<std::vector<double>>();
        s.reps = j.value("reps", s.reps);
        return s;
    }
    if (kind == "theorem1") {
        detail::expect_keys(j, "theorem1 suite",
                            {"suite", "family", "delta", "epsilon_grid", "reps"});
        Theorem1Suite s;
        s.family = family_from_json(detail::need(j, "theorem1 suite", "family"));
        s.delta = detail::need(j, "theorem1 suite", "delta").get<double>();
        s.epsilon_grid = detail::need(j, "theorem1 suite", "epsilon_grid")
                             .get<std::vector<double>>();
        s.reps = j.value("reps", s.reps);
        marginal_profile(s.family, 0, s.delta);
        return s;
    }
    if (kind == "compare") {
        detail::expect_keys(j, "compare suite",
                            {"suite", "dist", "delta", "n_grid", "alpha", "m"});
        CompareSuite s;
        s.dist = dist_from_json(detail::need(j, "compare suite", "dist"));
        s.delta = detail::need(j, "compare suite", "delta").get<double>();
        s.n_grid = detail::need(j, "compare suite", "n_grid")
                       .get<std::vector<std::uint64_t>>();
        s.alpha = j.value("alpha", s.alpha);
        s.m = j.value("m", s.m);
        moment_profile(s.dist, s.delta);
        return s;
    }
    if (kind == "end-check") {
        detail::expect_keys(j, "end-check suite", {"suite", "cases"});
        EndCheckSuite s;
        for (const auto& c : detail::need(j, "end-check suite", "cases")) {
            detail::expect_keys(c, "end-check case",
                                {"name", "support_x", "support_y", "joint_probs"});
            EndCase ec;
            ec.name = detail::need(c, "end-check case", "name").get<std::string>();
            ec.table.support_x = detail::need(c, "end-check case", "support_x")
                                     .get<std::vector<double>>();
            ec.table.support_y = detail::need(c, "end-check case", "support_y")
                                     .get<std::vector<double>>();
            ec.table.joint_probs =
                detail::need(c, "end-check case", "joint_probs")
                    .get<std::vector<std::vector<double>>>();
            validate_table(ec.table);
            s.cases.push_back(std::move(ec));
        }
        return s;
    }
    throw std::invalid_argument("config: unknown suite '" + kind + "'");
}

inline ordered_json suite_to_json(const SuiteConfig& suite) {
    return std::visit(
        [](const auto& s) -> ordered_json {
            using T = std::decay_t<decltype(s)>;
            ordered_json j;
            if constexpr (std::is_same_v<T, ScalarSuite>) {
                j["suite"] = "scalar";
                j["lo"] = s.lo;
                j["hi"] = s.hi;
                j["step"] = s.step;
                j["random_points"] = s.random_points;
                ordered_json vs = ordered_json::array();
                for (const BoundVariant v : s.variants) vs.push_back(variant_name(v));
                j["variants"] = vs;
            } else if constexpr (std::is_same_v<T, KTableSuite>) {
                j["suite"] = "k-table";
                ordered_json es = ordered_json::array();
                for (const KTableEntry& e : s.entries) {
                    ordered_json je;
                    je["dist"] = dist_to_json(e.dist);
                    je["delta"] = e.delta;
                    es.push_back(std::move(je));
                }
                j["entries"] = es;
            } else if constexpr (std::is_same_v<T, LemmaSuite>) {
                j["suite"] = "lemma";
                j["dist"] = dist_to_json(s.dist);
                j["delta"] = s.delta;
                j["lambda_grid"] = s.lambda_grid;
                j["reps"] = s.reps;
            } else if constexpr (std::is_same_v<T, AcceptabilitySuite>) {
                j["suite"] = "acceptability";
                j["family"] = family_to_json(s.family);
                j["lambda_grid"] = s.lambda_grid;
                j["reps"] = s.reps;
            } else if constexpr (std::is_same_v<T, Theorem1Suite>) {
                j["suite"] = "theorem1";
                j["family"] = family_to_json(s.family);
                j["delta"] = s.delta;
                j["epsilon_grid"] = s.epsilon_grid;
                j["reps"] = s.reps;
            } else if constexpr (std::is_same_v<T, CompareSuite>) {
                j["suite"] = "compare";
                j["dist"] = dist_to_json(s.dist);
                j["delta"] = s.delta;
                j["n_grid"] = s.n_grid;
                j["alpha"] = s.alpha;
                j["m"] = s.m;
            } else {
                j["suite"] = "end-check";
                ordered_json cs = ordered_json::array();
                for (const EndCase& c : s.cases) {
                    ordered_json jc;
                    jc["name"] = c.name;
                    jc["support_x"] = c.table.support_x;
                    jc["support_y"] = c.table.support_y;
                    jc["joint_probs"] = c.table.joint_probs;
                    cs.push_back(std::move(jc));
                }
                j["cases"] = cs;
            }
            return j;
        },
        suite);
}

inline ExperimentConfig config_from_json(const ordered_json& j) {
    detail::expect_keys(j, "config",
                        {"seed", "output", "format", "workers",
                         "proof_tight_lemma", "suites"});
    ExperimentConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.output = j.value("output", cfg.output);
    if (j.contains("format")) {
        const std::string f = j.at("format").get<std::string>();
        if (f == "csv") {
            cfg.format = OutputFormat::Csv;
        } else if (f == "json") {
            cfg.format = OutputFormat::Json;
        } else if (f == "both") {
            cfg.format = OutputFormat::Both;
        } else {
            throw std::invalid_argument(
                "config: unknown format '" + f +
                "' (expected \"csv\", \"json\", or \"both\")");
        }
    }
    cfg.workers = j.value("workers", cfg.workers);
    if (cfg.workers < 1) {
        throw std::invalid_argument("config: workers must be at least 1");
    }
    cfg.proof_tight_lemma = j.value("proof_tight_lemma", cfg.proof_tight_lemma);
    for (const auto& s : detail::need(j, "config", "suites")) {
        cfg.suites.push_back(suite_from_json(s));
    }
    if (cfg.suites.empty()) {
        throw std::invalid_argument("config: suites must be nonempty");
    }
    return cfg;
}

inline ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["seed"] = cfg.seed;
    j["output"] = cfg.output;
    j["format"] = format_name(cfg.format);
    j["workers"] = cfg.workers;
    j["proof_tight_lemma"] = cfg.proof_tight_lemma;
    ordered_json suites = ordered_json::array();
    for (const SuiteConfig& s : cfg.suites) suites.push_back(suite_to_json(s));
    j["suites"] = suites;
    return j;
}

inline ExperimentConfig parse_config(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") +
                                    e.what());
    }
    try {
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: malformed value: ") +
                                    e.what());
    }
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

// Canonical content hash of a config, used in run manifests.
inline std::string config_hash(const ExperimentConfig& cfg) {
    return fmt_hex64(fnv1a64(config_to_json(cfg).dump()));
}

} // namespace tailbound
