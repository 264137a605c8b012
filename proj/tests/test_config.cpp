#include <catch2/catch_amalgamated.hpp>

#include <tailbound/config.hpp>
#include <tailbound/presets.hpp>

#include <stdexcept>

using Catch::Matchers::ContainsSubstring;
using namespace tailbound;

TEST_CASE("a minimal document fills in defaults", "[config]") {
    ExperimentConfig cfg = parse_config(R"({"suites": [{"suite": "scalar"}]})");
    REQUIRE(cfg.seed == 42);
    REQUIRE(cfg.output == "out");
    REQUIRE(cfg.format == OutputFormat::Csv);
    REQUIRE(cfg.workers == 1);
    REQUIRE_FALSE(cfg.proof_tight_lemma);
    REQUIRE(cfg.suites.size() == 1);
    const auto& s = std::get<ScalarSuite>(cfg.suites[0]);
    REQUIRE(s.lo == -30.0);
    REQUIRE(s.hi == 30.0);
    REQUIRE(s.step == 1e-3);
    REQUIRE(s.random_points == 100000);
    REQUIRE(s.variants.size() == 2);
}

TEST_CASE("serialization round-trips the full preset configs", "[config]") {
    ExperimentConfig ref = reference_config();
    REQUIRE(parse_config(serialize_config(ref)) == ref);

    ExperimentConfig full = default_config(123);
    REQUIRE(parse_config(serialize_config(full)) == full);

    ExperimentConfig tweaked = default_config(7);
    tweaked.format = OutputFormat::Both;
    tweaked.workers = 4;
    tweaked.proof_tight_lemma = true;
    tweaked.output = "elsewhere";
    REQUIRE(parse_config(serialize_config(tweaked)) == tweaked);
}

TEST_CASE("unknown keys are rejected by name", "[config]") {
    REQUIRE_THROWS_MATCHES(
        parse_config(R"({"sead": 1, "suites": [{"suite": "scalar"}]})"),
        std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("sead")));
    REQUIRE_THROWS_MATCHES(
        parse_config(R"({"suites": [{"suite": "scalar", "stepp": 1}]})"),
        std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("stepp")));
    REQUIRE_THROWS_MATCHES(
        parse_config(
            R"({"suites": [{"suite": "lemma", "dist": {"kind": "rademacher", "p": 1},
                "delta": 1, "lambda_grid": [0.5]}]})"),
        std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("'p'")));
}

TEST_CASE("missing required keys are rejected by name", "[config]") {
    REQUIRE_THROWS_MATCHES(
        parse_config(R"({"suites": [{"suite": "lemma",
                        "dist": {"kind": "rademacher"}, "lambda_grid": [0.5]}]})"),
        std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("delta")));
    REQUIRE_THROWS_MATCHES(parse_config(R"({"seed": 3})"), std::invalid_argument,
                           Catch::Matchers::MessageMatches(ContainsSubstring("suites")));
}

TEST_CASE("unknown enumerations are rejected", "[config]") {
    REQUIRE_THROWS_MATCHES(
        parse_config(R"({"suites": [{"suite": "wibble"}]})"),
        std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("wibble")));
    REQUIRE_THROWS_MATCHES(
        parse_config(
            R"({"suites": [{"suite": "k-table", "entries":
                [{"dist": {"kind": "zeta"}, "delta": 1}]}]})"),
        std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("zeta")));
    REQUIRE_THROWS_MATCHES(
        parse_config(
            R"({"format": "yaml", "suites": [{"suite": "scalar"}]})"),
        std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("yaml")));
    REQUIRE_THROWS_MATCHES(
        parse_config(
            R"({"suites": [{"suite": "scalar", "variants": ["abs", "cube"]}]})"),
        std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("cube")));
}

TEST_CASE("parameter validation happens at parse time", "[config]") {
    // A diverging exponential moment surfaces immediately, not at run time.
    REQUIRE_THROWS_MATCHES(
        parse_config(
            R"({"suites": [{"suite": "k-table", "entries":
                [{"dist": {"kind": "laplace", "scale": 1}, "delta": 1}]}]})"),
        std::domain_error, Catch::Matchers::MessageMatches(ContainsSubstring("diverges")));
    REQUIRE_THROWS_AS(
        parse_config(
            R"({"suites": [{"suite": "acceptability", "family":
                {"kind": "iid", "dist": {"kind": "rademacher"}, "n": 2, "m": 0.5},
                "lambda_grid": [0.5]}]})"),
        std::invalid_argument);
    REQUIRE_THROWS_AS(
        parse_config(R"({"workers": 0, "suites": [{"suite": "scalar"}]})"),
        std::invalid_argument);
    REQUIRE_THROWS_AS(
        parse_config(R"({"suites": []})"), std::invalid_argument);
    REQUIRE_THROWS_MATCHES(parse_config("{nope"), std::invalid_argument,
                           Catch::Matchers::MessageMatches(ContainsSubstring("not valid JSON")));
    REQUIRE_THROWS_MATCHES(
        parse_config(R"({"seed": "abc", "suites": [{"suite": "scalar"}]})"),
        std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("malformed value")));
}

TEST_CASE("config hashes track content, not formatting", "[config]") {
    ExperimentConfig a = default_config(1);
    ExperimentConfig b = default_config(1);
    REQUIRE(config_hash(a) == config_hash(b));
    b.seed = 2;
    REQUIRE(config_hash(a) != config_hash(b));
    REQUIRE(config_hash(a).size() == 16);
}

TEST_CASE("presets are internally consistent", "[config]") {
    ExperimentConfig full = default_config(42);
    REQUIRE_FALSE(full.suites.empty());
    std::size_t scalar = 0;
    std::size_t ktable = 0;
    std::size_t lemma = 0;
    std::size_t accept = 0;
    std::size_t theorem = 0;
    std::size_t compare = 0;
    std::size_t end = 0;
    for (const SuiteConfig& s : full.suites) {
        if (std::holds_alternative<ScalarSuite>(s)) ++scalar;
        if (std::holds_alternative<KTableSuite>(s)) ++ktable;
        if (std::holds_alternative<LemmaSuite>(s)) ++lemma;
        if (std::holds_alternative<AcceptabilitySuite>(s)) ++accept;
        if (std::holds_alternative<Theorem1Suite>(s)) ++theorem;
        if (std::holds_alternative<CompareSuite>(s)) ++compare;
        if (std::holds_alternative<EndCheckSuite>(s)) ++end;
    }
    REQUIRE(scalar == 1);
    REQUIRE(ktable == 1);
    REQUIRE(lemma == 7);
    REQUIRE(accept == 8);
    REQUIRE(theorem == 7);
    REQUIRE(compare == 3);
    REQUIRE(end == 1);

    // Every preset suite must survive its own validation hooks when
    // re-parsed, catching stale parameters in the presets themselves.
    REQUIRE_NOTHROW(parse_config(serialize_config(full)));
    REQUIRE_NOTHROW(parse_config(serialize_config(reference_config())));
}
