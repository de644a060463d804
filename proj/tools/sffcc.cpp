#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sffcc/fusion.hpp"
#include "sffcc/graph_state.hpp"
#include "sffcc/lattice.hpp"
#include "sffcc/montecarlo.hpp"

using nlohmann::json;
using namespace sffcc;

namespace {

constexpr const char *kArtifactVersion = "1.0.0";
constexpr int kSchemaVersion = 1;

// Locale-independent fixed-significant-digit formatting for all numeric output.
std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

uint64_t fnv1a(const std::string &s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string iso_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
        throw ConfigError("config requires an integer schema_version");
    if (j["schema_version"].get<int>() != kSchemaVersion)
        throw ConfigError("unsupported schema_version (expected " +
                          std::to_string(kSchemaVersion) + ")");
    return j;
}

void reject_unknown_keys(const json &j, const std::set<std::string> &allowed,
                         const std::string &where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

double get_number(const json &j, const char *key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
    return j[key].get<double>();
}

FusionStrategy parse_strategy(const json &j) {
    reject_unknown_keys(j, {"kind", "size"}, "noise.strategy");
    if (!j.contains("kind") || !j.contains("size"))
        throw ConfigError("noise.strategy requires kind and size");
    std::string kind = j["kind"].get<std::string>();
    int size = j["size"].get<int>();
    if (size < 1) throw ConfigError("strategy size must be >= 1");
    if (kind == "rus") return FusionStrategy::rus(size);
    if (kind == "rep") return FusionStrategy::rep(size);
    throw ConfigError("strategy kind must be \"rus\" or \"rep\"");
}

NoiseConfig parse_noise(const json &j) {
    if (!j.is_object()) throw ConfigError("noise must be an object");
    if (!j.contains("model")) throw ConfigError("noise requires a model");
    std::string model = j["model"].get<std::string>();
    if (model == "phenomenological") {
        reject_unknown_keys(j, {"model", "p_err", "p_eras"}, "noise");
        return NoiseConfig::phenomenological(get_number(j, "p_err", 0.0),
                                             get_number(j, "p_eras", 0.0));
    }
    if (model != "physical")
        throw ConfigError("noise model must be \"phenomenological\" or \"physical\"");
    reject_unknown_keys(j, {"model", "strategy", "eta", "V", "spin", "reinit", "reinit_attempts"},
                        "noise");
    if (!j.contains("strategy")) throw ConfigError("physical noise requires a strategy");
    SpinNoiseParams spin;
    if (j.contains("spin")) {
        reject_unknown_keys(j["spin"], {"p_x", "p_y", "p_z"}, "noise.spin");
        spin.p_x = get_number(j["spin"], "p_x", 0.0);
        spin.p_y = get_number(j["spin"], "p_y", 0.0);
        spin.p_z = get_number(j["spin"], "p_z", 0.0);
    }
    return NoiseConfig::physical(parse_strategy(j["strategy"]), get_number(j, "eta", 1.0),
                                 get_number(j, "V", 1.0), spin,
                                 j.value("reinit", false), j.value("reinit_attempts", 0));
}

std::vector<double> parse_grid(const json &j, const std::string &where) {
    std::vector<double> grid;
    if (j.is_array()) {
        for (const auto &v : j) grid.push_back(v.get<double>());
    } else if (j.is_object()) {
        reject_unknown_keys(j, {"lo", "hi", "steps"}, where);
        double lo = j.at("lo").get<double>(), hi = j.at("hi").get<double>();
        int steps = j.at("steps").get<int>();
        if (steps < 2 || hi <= lo) throw ConfigError(where + " needs lo < hi and steps >= 2");
        for (int i = 0; i < steps; ++i)
            grid.push_back(lo + (hi - lo) * double(i) / double(steps - 1));
    } else {
        throw ConfigError(where + " must be an array or {lo, hi, steps}");
    }
    if (grid.empty()) throw ConfigError(where + " must be nonempty");
    return grid;
}

std::vector<SweepAxis> parse_axes(const json &j) {
    if (!j.is_array() || j.empty()) throw ConfigError("axes must be a nonempty array");
    static const std::set<std::string> known = {"p_err", "p_eras", "loss",
                                                "one_minus_V", "spin_pz", "spin_depol"};
    std::vector<SweepAxis> axes;
    for (const auto &a : j) {
        reject_unknown_keys(a, {"param", "offset", "slope"}, "axes[]");
        SweepAxis ax;
        ax.param = a.at("param").get<std::string>();
        if (!known.count(ax.param)) throw ConfigError("unknown axis param: " + ax.param);
        ax.offset = get_number(a, "offset", 0.0);
        ax.slope = get_number(a, "slope", 1.0);
        axes.push_back(ax);
    }
    return axes;
}

std::vector<int> parse_sizes(const json &j) {
    std::vector<int> sizes;
    for (const auto &v : j) sizes.push_back(v.get<int>());
    if (sizes.empty()) throw ConfigError("sizes must be nonempty");
    return sizes;
}

struct CommonFlags {
    std::string config_path, out_dir = ".";
    uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    int64_t trials = 0;
    std::vector<int> sizes;
};

void add_common_flags(CLI::App *cmd, CommonFlags &f, bool config_required) {
    auto *c = cmd->add_option("--config", f.config_path, "JSON config file");
    if (config_required) c->required();
    cmd->add_option("--seed", f.seed, "base RNG seed (overrides config)")
        ->each([&](const std::string &) { f.seed_set = true; });
    cmd->add_option("--workers", f.workers, "worker threads (0 = hardware parallelism)");
    cmd->add_option("--trials", f.trials, "trials per point (overrides config)");
    cmd->add_option("--sizes", f.sizes, "lattice sizes (overrides config)")->delimiter(',');
    cmd->add_option("--out", f.out_dir, "output directory");
}

SweepSpec sweep_from_config(const json &j, const CommonFlags &f) {
    reject_unknown_keys(j, {"schema_version", "noise", "axes", "x_grid", "sizes", "n_trials",
                            "seed"},
                        "config");
    for (const char *key : {"noise", "axes", "x_grid", "sizes"})
        if (!j.contains(key)) throw ConfigError(std::string("config requires ") + key);
    SweepSpec s;
    s.base = parse_noise(j["noise"]);
    s.axes = parse_axes(j["axes"]);
    s.x_grid = parse_grid(j["x_grid"], "x_grid");
    s.sizes = parse_sizes(j["sizes"]);
    s.n_trials = j.value("n_trials", int64_t(2000));
    s.base_seed = j.value("seed", uint64_t(1));
    if (f.seed_set) s.base_seed = f.seed;
    if (f.trials > 0) s.n_trials = f.trials;
    if (!f.sizes.empty()) s.sizes = f.sizes;
    if (s.n_trials < 1) throw ConfigError("n_trials must be >= 1");
    for (int L : s.sizes)
        if (L < 2 || L % 2) throw ConfigError("sizes must be even and >= 2");
    return s;
}

// Effective config (file contents + CLI overrides) hashed for the manifest;
// key order is canonical in nlohmann dumps, so the hash is stable.
uint64_t effective_hash(const json &cfg, const SweepSpec &s) {
    json eff = cfg;
    eff["seed"] = s.base_seed;
    eff["n_trials"] = s.n_trials;
    eff["sizes"] = s.sizes;
    return fnv1a(eff.dump());
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json make_manifest(const std::string &command, uint64_t config_hash, uint64_t seed,
                   const std::string &started, const std::vector<std::string> &outputs) {
    json m;
    m["artifact_version"] = kArtifactVersion;
    m["command"] = command;
    m["config_hash"] = hex64(config_hash);
    m["seed"] = seed;
    m["started"] = started;
    m["finished"] = iso_now();
    m["outputs"] = outputs;
    return m;
}

std::string sweep_csv(const std::vector<RatePoint> &points) {
    std::ostringstream csv;
    csv << "# manifest: manifest.json\n";
    csv << "x,L,n_trials,n_fail,R,sigma\n";
    for (const auto &p : points)
        csv << fmt(p.x) << ',' << p.est.L << ',' << p.est.n_trials << ',' << p.est.n_fail << ','
            << fmt(p.est.R) << ',' << fmt(p.est.sigma) << '\n';
    return csv.str();
}

int cmd_verify(const std::string &level, uint64_t seed, const std::string &out_dir) {
    json report;
    report["level"] = level;
    bool ok = true;

    if (level == "rules") {
        // Random decomposition corpus: edge and node splits checked across all
        // measurement-outcome branches against the tableau oracle.
        Rng rng(seed ? seed : 0x9e0002);
        int cases = 0;
        json failures = json::array();
        for (int trial = 0; trial < 200; ++trial) {
            int n = 3 + int(rng.next_below(6));
            GraphState g;
            for (int v = 0; v < n; ++v) g.add_vertex(v);
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    if (rng.next_double() < 0.5) g.add_edge(a, b);
            auto es = g.edges();
            DecompositionResult d;
            std::vector<int> measured;
            std::string kind;
            if (rng.next_bool() && !es.empty()) {
                auto [a, b] = es[rng.next_below(es.size())];
                d = edge_split(g, a, b);
                measured = {a, b};
                kind = "edge_split";
            } else {
                int v = int(rng.next_below(n));
                std::set<int> pa, pb;
                for (int u : g.neighbors(v)) (rng.next_bool() ? pa : pb).insert(u);
                d = node_split(g, v, pa, pb);
                measured = {v};
                kind = "node_split";
            }
            ++cases;
            if (!verify_equivalence(g, measured, d)) {
                ok = false;
                failures.push_back({{"case", trial},
                                    {"kind", kind},
                                    {"measured", measured},
                                    {"graph", json::parse(g.to_json())}});
            }
        }
        report["cases"] = cases;
        report["failures"] = failures;
    } else if (level == "lattice") {
        FusionNetwork net(2);
        auto sg = derive_syndrome_graph(net);
        json issues = json::array();
        for (size_t c = 0; c < sg.checks.size(); ++c) {
            int n_xx = 0;
            std::set<int> uniq(sg.checks[c].slots.begin(), sg.checks[c].slots.end());
            for (int s : sg.checks[c].slots)
                if (s % 2 == 0) ++n_xx;
            if (uniq.size() != 12 || n_xx != 6)
                issues.push_back({{"check", c}, {"problem", "degree or XX/ZZ composition"}});
        }
        auto rep = verify_small_instance(net, sg);
        if (!rep.ok) issues.push_back({{"problem", "oracle"}, {"detail", rep.detail}});
        ok = issues.empty();
        report["checks"] = sg.checks.size();
        report["oracle"] = rep.detail;
        report["failures"] = issues;
    } else {
        std::fprintf(stderr, "error: --level must be rules or lattice\n");
        return 2;
    }

    report["ok"] = ok;
    std::string text = report.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!out_dir.empty() && out_dir != "-") {
        std::filesystem::create_directories(out_dir);
        write_file(std::filesystem::path(out_dir) / ("verify_" + level + ".json"), text);
    }
    return ok ? 0 : 1;
}

int cmd_analytics(const std::string &kind, int size, std::vector<double> eta_grid, double V,
                  int64_t samples, uint64_t seed, const std::string &out_dir) {
    std::ostringstream csv;
    bool rus = kind == "rus";
    if (rus)
        csv << "eta,V,N,strategy,P1,P2,P3,P4,s_P1,s_P2,s_P3,s_P4,n_samples\n";
    else
        csv << "eta,V,m,strategy,R_XX,R_ZZ,E_XX,E_ZZ,s_R_XX,s_R_ZZ,n_samples\n";

    FusionStrategy strategy = rus ? FusionStrategy::rus(size) : FusionStrategy::rep(size);
    Rng rng(seed ? seed : 1);
    for (double eta : eta_grid) {
        FusionChannelParams p;
        p.eta = eta;
        p.V = V;
        int64_t tally[4] = {0, 0, 0, 0};
        for (int64_t i = 0; i < samples; ++i)
            ++tally[int(sample_encoded_fusion(strategy, p, rng).event)];
        double n = double(samples);
        // tally order follows FusionEvent: BothRecovered, XXOnly, ZZOnly, Erasure
        if (rus) {
            auto ev = rus_event_probs(size, p);
            csv << fmt(eta) << ',' << fmt(V) << ',' << size << ",rus," << fmt(ev.P1) << ','
                << fmt(ev.P2) << ',' << fmt(ev.P3) << ',' << fmt(ev.P4) << ','
                << fmt(tally[0] / n) << ',' << fmt(tally[1] / n) << ',' << fmt(tally[2] / n)
                << ',' << fmt(tally[3] / n) << ',' << samples << '\n';
        } else {
            auto rec = rep_recovery_probs(size, p);
            auto err = rep_error_rates(size, p);
            csv << fmt(eta) << ',' << fmt(V) << ',' << size << ",rep," << fmt(rec.R_XX) << ','
                << fmt(rec.R_ZZ) << ',' << fmt(err.E_XX) << ',' << fmt(err.E_ZZ) << ','
                << fmt((tally[0] + tally[1]) / n) << ',' << fmt((tally[0] + tally[2]) / n) << ','
                << samples << '\n';
        }
    }
    std::fputs(csv.str().c_str(), stdout);
    if (!out_dir.empty() && out_dir != "-") {
        std::filesystem::create_directories(out_dir);
        write_file(std::filesystem::path(out_dir) / "analytics.csv", csv.str());
    }
    return 0;
}

int cmd_trial(const json &cfg, const CommonFlags &f) {
    reject_unknown_keys(cfg, {"schema_version", "noise", "sizes", "n_trials", "seed"}, "config");
    if (!cfg.contains("noise") || !cfg.contains("sizes"))
        throw ConfigError("config requires noise and sizes");
    auto noise = parse_noise(cfg["noise"]);
    auto sizes = f.sizes.empty() ? parse_sizes(cfg["sizes"]) : f.sizes;
    int64_t trials = f.trials > 0 ? f.trials : cfg.value("n_trials", int64_t(100));
    uint64_t seed = f.seed_set ? f.seed : cfg.value("seed", uint64_t(1));

    json out;
    out["seed"] = seed;
    out["n_trials"] = trials;
    for (int L : sizes) {
        LatticeContext ctx(L);
        auto est = estimate_rate(noise, ctx, trials, seed, f.workers);
        json je;
        je["L"] = L;
        je["n_fail"] = est.n_fail;
        je["n_erasure"] = est.n_erasure;
        je["R"] = est.R;
        je["sigma"] = est.sigma;
        je["wilson"] = {est.wilson_lo, est.wilson_hi};
        out["results"].push_back(je);
    }
    std::string text = out.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!f.out_dir.empty() && f.out_dir != "-") {
        std::filesystem::create_directories(f.out_dir);
        write_file(std::filesystem::path(f.out_dir) / "trial.json", text);
    }
    return 0;
}

int cmd_threshold(const json &cfg, const CommonFlags &f) {
    auto started = iso_now();
    auto t0 = std::chrono::steady_clock::now();
    auto sweep = sweep_from_config(cfg, f);
    auto est = find_threshold(sweep, f.workers);
    double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    uint64_t hash = effective_hash(cfg, sweep);
    json summary;
    summary["manifest"] = "manifest.json";
    summary["config_hash"] = hex64(hash);
    summary["runtime_seconds"] = runtime;
    summary["threshold"]["found"] = est.found;
    if (est.found) {
        summary["threshold"]["x_star"] = est.x_star;
        summary["threshold"]["sigma"] = est.sigma;
        summary["threshold"]["ci95"] = {est.x_star - 1.959963984540054 * est.sigma,
                                        est.x_star + 1.959963984540054 * est.sigma};
    }
    if (!est.note.empty()) summary["threshold"]["note"] = est.note;

    std::filesystem::path out(f.out_dir);
    std::filesystem::create_directories(out);
    write_file(out / "sweep.csv", sweep_csv(est.points));
    write_file(out / "summary.json", summary.dump(2) + "\n");
    auto manifest = make_manifest("threshold", hash, sweep.base_seed, started,
                                  {"sweep.csv", "summary.json"});
    write_file(out / "manifest.json", manifest.dump(2) + "\n");

    std::fputs((summary.dump(2) + "\n").c_str(), stdout);
    return 0;
}

int cmd_region(const json &cfg, const CommonFlags &f) {
    auto started = iso_now();
    reject_unknown_keys(cfg, {"schema_version", "noise", "axes", "grid", "ray_grid", "sizes",
                              "n_trials", "seed"},
                        "config");
    for (const char *key : {"noise", "axes", "grid", "ray_grid", "sizes"})
        if (!cfg.contains(key)) throw ConfigError(std::string("config requires ") + key);
    RegionSpec spec;
    spec.base = parse_noise(cfg["noise"]);
    spec.axes = parse_axes(cfg["axes"]);
    if (!cfg["grid"].is_array()) throw ConfigError("grid must be an array of coordinate lists");
    for (const auto &axis_vals : cfg["grid"]) spec.grid.push_back(parse_grid(axis_vals, "grid"));
    spec.ray_grid = parse_grid(cfg["ray_grid"], "ray_grid");
    spec.sizes = f.sizes.empty() ? parse_sizes(cfg["sizes"]) : f.sizes;
    spec.n_trials = f.trials > 0 ? f.trials : cfg.value("n_trials", int64_t(500));
    spec.base_seed = f.seed_set ? f.seed : cfg.value("seed", uint64_t(1));

    auto samples = map_ft_region(spec, f.workers);

    std::ostringstream csv;
    csv << "# manifest: manifest.json\n";
    for (size_t k = 0; k < spec.axes.size(); ++k) csv << spec.axes[k].param << ',';
    csv << "inside,boundary_found";
    for (size_t k = 0; k < spec.axes.size(); ++k) csv << ",boundary_" << spec.axes[k].param;
    csv << '\n';
    for (const auto &s : samples) {
        for (double c : s.coords) csv << fmt(c) << ',';
        csv << (s.inside ? 1 : 0) << ',' << (s.boundary_found ? 1 : 0);
        for (size_t k = 0; k < spec.axes.size(); ++k)
            csv << ',' << (s.boundary_found ? fmt(s.boundary[k]) : std::string());
        csv << '\n';
    }

    json eff = cfg;
    eff["seed"] = spec.base_seed;
    eff["n_trials"] = spec.n_trials;
    eff["sizes"] = spec.sizes;
    uint64_t hash = fnv1a(eff.dump());

    std::filesystem::path out(f.out_dir);
    std::filesystem::create_directories(out);
    write_file(out / "region.csv", csv.str());
    auto manifest = make_manifest("region", hash, spec.base_seed, started, {"region.csv"});
    write_file(out / "manifest.json", manifest.dump(2) + "\n");
    std::fputs(csv.str().c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"sFFCC fusion-network simulator"};
    app.require_subcommand(1);

    std::string verify_level = "rules";
    CommonFlags verify_flags;
    auto *verify = app.add_subcommand("verify", "run decomposition-rule or lattice verification");
    verify->add_option("--level", verify_level, "rules | lattice");
    add_common_flags(verify, verify_flags, false);

    std::string an_kind = "rus";
    int an_size = 11;
    double an_V = 1.0;
    int64_t an_samples = 20000;
    std::vector<double> an_eta;
    CommonFlags an_flags;
    auto *analytics = app.add_subcommand("analytics", "analytic vs sampled encoded-fusion tables");
    analytics->add_option("--strategy", an_kind, "rus | rep");
    analytics->add_option("--size", an_size, "N (rus) or m (rep)");
    analytics->add_option("--eta", an_eta, "eta grid values")->delimiter(',');
    analytics->add_option("--V", an_V, "HOM visibility");
    analytics->add_option("--samples", an_samples, "Monte-Carlo samples per row");
    add_common_flags(analytics, an_flags, false);

    CommonFlags trial_flags, thr_flags, region_flags;
    auto *trial = app.add_subcommand("trial", "logical failure rate at a fixed noise point");
    add_common_flags(trial, trial_flags, true);
    auto *threshold = app.add_subcommand("threshold", "sweep + threshold extraction");
    add_common_flags(threshold, thr_flags, true);
    auto *region = app.add_subcommand("region", "fault-tolerant region classification");
    add_common_flags(region, region_flags, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed())
            return cmd_verify(verify_level, verify_flags.seed_set ? verify_flags.seed : 0,
                              verify_flags.out_dir);
        if (analytics->parsed()) {
            if (an_kind != "rus" && an_kind != "rep")
                throw ConfigError("--strategy must be rus or rep");
            if (an_size < 1) throw ConfigError("--size must be >= 1");
            if (an_samples < 1) throw ConfigError("--samples must be >= 1");
            if (an_eta.empty())
                for (int i = 0; i <= 20; ++i) an_eta.push_back(0.5 + 0.025 * i);
            for (double e : an_eta)
                if (e < 0.0 || e > 1.0) throw ConfigError("eta values must be in [0,1]");
            return cmd_analytics(an_kind, an_size, an_eta, an_V, an_samples,
                                 an_flags.seed_set ? an_flags.seed : 0, an_flags.out_dir);
        }
        if (trial->parsed()) return cmd_trial(load_config(trial_flags.config_path), trial_flags);
        if (threshold->parsed())
            return cmd_threshold(load_config(thr_flags.config_path), thr_flags);
        if (region->parsed())
            return cmd_region(load_config(region_flags.config_path), region_flags);
    } catch (const ConfigError &e) {
        json err{{"error", e.what()}};
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return 2;
    } catch (const std::exception &e) {
        json err{{"error", e.what()}};
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return 1;
    }
    return 0;
}
