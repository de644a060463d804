#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

int run(const std::string &args) {
    std::string cmd = std::string(SFFCC_CLI_PATH) + " " + args;
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const char *name) {
    auto dir = fs::temp_directory_path() / "sffcc_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("verify subcommands exit 0 and report ok") {
    auto dir = fresh_dir("verify");
    CHECK(run("verify --level rules --out " + dir.string() + " > /dev/null") == 0);
    CHECK(run("verify --level lattice --out " + dir.string() + " > /dev/null") == 0);
    auto rules = nlohmann::json::parse(slurp(dir / "verify_rules.json"));
    CHECK(rules["ok"] == true);
    CHECK(rules["cases"] == 200);
    auto lattice = nlohmann::json::parse(slurp(dir / "verify_lattice.json"));
    CHECK(lattice["ok"] == true);
    CHECK(lattice["failures"].empty());
}

TEST_CASE("analytics emits analytic and sampled columns that agree") {
    auto dir = fresh_dir("analytics");
    CHECK(run("analytics --strategy rus --size 11 --eta 1.0 --samples 200000 --seed 5 --out " +
              dir.string() + " > /dev/null") == 0);
    std::istringstream csv(slurp(dir / "analytics.csv"));
    std::string header, row;
    std::getline(csv, header);
    CHECK(header == "eta,V,N,strategy,P1,P2,P3,P4,s_P1,s_P2,s_P3,s_P4,n_samples");
    std::getline(csv, row);
    std::vector<std::string> cells;
    std::istringstream rs(row);
    for (std::string c; std::getline(rs, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 13);
    // lossless N=11: P1 = 1 - 2^-11, sampled within Monte-Carlo error
    CHECK(std::stod(cells[4]) == doctest::Approx(1.0 - std::pow(2.0, -11)));
    CHECK(std::stod(cells[8]) == doctest::Approx(std::stod(cells[4])).epsilon(0.005));
}

TEST_CASE("threshold run is reproducible and references its manifest") {
    auto dir = fresh_dir("threshold");
    auto cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({
        "schema_version": 1,
        "noise": {"model": "phenomenological", "p_err": 0.0, "p_eras": 0.0},
        "axes": [{"param": "p_eras", "offset": 0.0, "slope": 1.0}],
        "x_grid": {"lo": 0.10, "hi": 0.13, "steps": 3},
        "sizes": [4, 6], "n_trials": 200, "seed": 12
    })";
    std::string base = " --config " + cfg.string() + " --out ";
    CHECK(run("threshold" + base + (dir / "a").string() + " --workers 1 > /dev/null") == 0);
    CHECK(run("threshold" + base + (dir / "b").string() + " --workers 3 > /dev/null") == 0);
    auto csv_a = slurp(dir / "a" / "sweep.csv");
    CHECK(!csv_a.empty());
    CHECK(csv_a == slurp(dir / "b" / "sweep.csv"));
    CHECK(csv_a.rfind("# manifest: manifest.json\n", 0) == 0);

    auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
    auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(summary["config_hash"] == manifest["config_hash"]);
    CHECK(manifest["command"] == "threshold");
    CHECK(manifest["seed"] == 12);
}

TEST_CASE("invalid configs are rejected with exit code 2") {
    auto dir = fresh_dir("bad");
    auto write_cfg = [&](const char *name, const std::string &text) {
        auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    };
    auto bad_version = write_cfg("v.json", R"({"schema_version": 2})");
    CHECK(run("threshold --config " + bad_version + " 2> /dev/null") == 2);
    auto unknown_key = write_cfg("k.json", R"({
        "schema_version": 1, "bogus": true,
        "noise": {"model": "phenomenological"},
        "axes": [{"param": "p_err"}], "x_grid": [0.01, 0.02], "sizes": [4, 6]
    })");
    CHECK(run("threshold --config " + unknown_key + " 2> /dev/null") == 2);
    auto bad_axis = write_cfg("a.json", R"({
        "schema_version": 1,
        "noise": {"model": "phenomenological"},
        "axes": [{"param": "nonsense"}], "x_grid": [0.01, 0.02], "sizes": [4, 6]
    })");
    CHECK(run("threshold --config " + bad_axis + " 2> /dev/null") == 2);
    CHECK(run("threshold --config /nonexistent.json 2> /dev/null") == 2);
}
