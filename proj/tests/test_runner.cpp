#include <catch2/catch_amalgamated.hpp>

#include <tailbound/presets.hpp>
#include <tailbound/runner.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

using namespace tailbound;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("tailbound_runner_" + tag);
    fs::remove_all(dir);
    return dir;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[entry.path().filename().string()] = ss.str();
    }
    return out;
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

ExperimentConfig small_config(std::uint64_t seed) {
    ExperimentConfig cfg = reference_config();
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("csv rendering is plain and stable", "[runner]") {
    detail::SuiteTable t;
    t.stem = "demo";
    t.columns = {"a", "b", "c"};
    t.rows.push_back({1.5, std::string("x"), std::uint64_t{7}});
    t.rows.push_back({2.0, std::string("y"), std::uint64_t{8}});
    REQUIRE(detail::render_csv(t) == "a,b,c\n1.5,x,7\n2,y,8\n");
    std::string json = detail::render_json(t);
    REQUIRE(json.find("\"suite\": \"demo\"") != std::string::npos);
    REQUIRE(json.find("\"a\": 1.5") != std::string::npos);
}

TEST_CASE("the run hash ignores execution-only settings", "[runner]") {
    ExperimentConfig a = small_config(5);
    ExperimentConfig b = small_config(5);
    b.workers = 8;
    b.output = "somewhere_else";
    REQUIRE(run_hash(a) == run_hash(b));
    b.seed = 6;
    REQUIRE(run_hash(a) != run_hash(b));
}

TEST_CASE("a reference run produces the contracted files", "[runner]") {
    ExperimentConfig cfg = small_config(20260817);
    fs::path dir = fresh_dir("contract");
    cfg.output = dir.string();
    RunManifest manifest = run_experiment(cfg);

    REQUIRE(manifest.verdict == Verdict::Pass);
    REQUIRE(manifest.seed == 20260817);
    REQUIRE(manifest.config_hash == run_hash(cfg));
    // 12 suites, both formats.
    REQUIRE(manifest.files.size() == 24);

    auto files = read_dir(dir);
    REQUIRE(files.size() == 25);
    REQUIRE(files.count("manifest.json") == 1);
    REQUIRE(first_line(files.at("00_scalar.csv")) ==
            "x,variant,exp_value,bound_value,slack,domain");
    REQUIRE(first_line(files.at("01_k_table.csv")) ==
            "dist,delta,mean,second_abs_moment,abs_exp_moment,k,k_sung");
    REQUIRE(first_line(files.at("02_lemma.csv")) ==
            "dist,delta,lambda,lhs,lhs_ci_high,rhs,margin,verdict");
    REQUIRE(first_line(files.at("05_acceptability.csv")) ==
            "family,n,lambda,ratio,se,lower99,upper99,m,verdict");
    REQUIRE(first_line(files.at("08_theorem1.csv")) ==
            "family,n,delta,epsilon,k,m,lhs,lhs_ci_high,log_bound,verdict");
    REQUIRE(first_line(files.at("10_compare.csv")) ==
            "dist,delta,n,alpha,eps_new,log_bound_new,eps_sung,log_bound_sung,"
            "k_ratio");
    REQUIRE(first_line(files.at("11_end_check.csv")) == "case,end_min_m");

    REQUIRE(files.at("manifest.json").find("\"verdict\": \"PASS\"") !=
            std::string::npos);
    REQUIRE(files.at("01_k_table.csv").find("rademacher") != std::string::npos);
    REQUIRE(files.at("11_end_check.csv").find("comonotone_bernoulli,2") !=
            std::string::npos);

    for (const FileEntry& f : manifest.files) {
        if (f.path == "01_k_table.csv" || f.path == "01_k_table.json") {
            REQUIRE(f.rows == 7);
        }
        if (f.path == "11_end_check.csv") {
            REQUIRE(f.rows == 4);
        }
        if (f.path == "00_scalar.csv") {
            REQUIRE(f.rows == 2 * (6001 + 20000));
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("runs are byte-identical across repeats and worker counts", "[runner]") {
    ExperimentConfig cfg = small_config(99);
    fs::path da = fresh_dir("rep_a");
    fs::path db = fresh_dir("rep_b");
    fs::path dc = fresh_dir("rep_c");

    cfg.output = da.string();
    cfg.workers = 1;
    run_experiment(cfg);

    cfg.output = db.string();
    run_experiment(cfg);

    cfg.output = dc.string();
    cfg.workers = 4;
    run_experiment(cfg);

    auto fa = read_dir(da);
    auto fb = read_dir(db);
    auto fc = read_dir(dc);
    REQUIRE(fa == fb);
    REQUIRE(fa == fc);

    fs::remove_all(da);
    fs::remove_all(db);
    fs::remove_all(dc);
}

TEST_CASE("csv-only runs emit half the files", "[runner]") {
    ExperimentConfig cfg = small_config(7);
    cfg.format = OutputFormat::Csv;
    cfg.suites = {default_end_suite()};
    fs::path dir = fresh_dir("csvonly");
    cfg.output = dir.string();
    RunManifest manifest = run_experiment(cfg);
    REQUIRE(manifest.files.size() == 1);
    REQUIRE(manifest.files[0].path == "00_end_check.csv");
    REQUIRE(manifest.files[0].rows == 4);
    auto files = read_dir(dir);
    REQUIRE(files.size() == 2);
    fs::remove_all(dir);
}
