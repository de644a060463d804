#include "sffcc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sffcc {

namespace {

void check01(double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must be in [0,1]");
}

} // namespace

void NoiseConfig::validate() const {
    if (model == Model::Phenomenological) {
        check01(phen.p_err, "p_err");
        check01(phen.p_eras, "p_eras");
        return;
    }
    check01(phys.eta, "eta");
    check01(phys.V, "V");
    phys.spin.validate();
    if (strategy.size < 1) throw std::invalid_argument("encoded fusion size must be >= 1");
    if (phys.reinit && strategy.kind != FusionStrategy::RUS)
        throw std::invalid_argument("re-initialization requires the RUS strategy");
    if (phys.reinit_attempts < 0) throw std::invalid_argument("reinit_attempts must be >= 0");
}

NoiseConfig NoiseConfig::phenomenological(double p_err, double p_eras) {
    NoiseConfig c;
    c.model = Model::Phenomenological;
    c.phen = {p_err, p_eras};
    c.validate();
    return c;
}

NoiseConfig NoiseConfig::physical(FusionStrategy strategy, double eta, double V,
                                  const SpinNoiseParams &spin, bool reinit, int reinit_attempts) {
    NoiseConfig c;
    c.model = Model::Physical;
    c.strategy = strategy;
    c.phys = {eta, V, spin, reinit, reinit_attempts};
    c.validate();
    return c;
}

FusionChannelParams channel_params(const NoiseConfig &config) {
    FusionChannelParams p;
    p.eta = config.phys.eta;
    p.V = config.phys.V;
    return p;
}

std::vector<EncodedFusionOutcome> sample_fusion_outcomes(const NoiseConfig &config,
                                                         const LatticeContext &ctx, Rng &rng) {
    if (config.model != NoiseConfig::Model::Physical)
        throw std::invalid_argument("fusion outcomes are sampled in the physical model only");
    auto params = channel_params(config);
    std::vector<EncodedFusionOutcome> outcomes(ctx.net.n_fusions());
    for (auto &o : outcomes) o = sample_encoded_fusion(config.strategy, params, rng);
    return outcomes;
}

std::vector<int> apply_reinit_rule(const FusionNetwork &net,
                                   std::vector<EncodedFusionOutcome> &outcomes, int n_prime,
                                   const FusionChannelParams &params, Rng &rng) {
    if (n_prime < 1) throw std::invalid_argument("reinit attempt count must be >= 1");
    if (int(outcomes.size()) != net.n_fusions())
        throw std::invalid_argument("outcome vector size mismatch");

    // fusion indices grouped by layer, preserving index order within a layer
    std::vector<std::vector<int>> by_layer(net.layers());
    for (int f = 0; f < net.n_fusions(); ++f) by_layer[net.fusions()[f].layer].push_back(f);

    std::vector<int> boosted;
    for (int t = 1; t < net.layers(); ++t) {
        for (int f : by_layer[t]) {
            if (outcomes[f].event == FusionEvent::BothRecovered) continue;
            const auto &fu = net.fusions()[f];
            int va = net.photon_vertex(fu.photon_a), vb = net.photon_vertex(fu.photon_b);
            int fa = net.fusion_of_photon(net.photon_id(va, t - 1));
            int fb = net.fusion_of_photon(net.photon_id(vb, t - 1));
            if (outcomes[fa].event != FusionEvent::ZZOnly ||
                outcomes[fb].event != FusionEvent::ZZOnly)
                continue;
            // both emitters were measured out by their ZZ-only fusions, so the
            // fusion restarts on freshly initialized spins with n_prime attempts
            outcomes[f] = sample_encoded_fusion(FusionStrategy::rus(n_prime), params, rng);
            boosted.push_back(f);
        }
    }
    return boosted;
}

namespace {

OutcomeAssignment assemble_assignment(const SyndromeGraph &sg,
                                      const std::vector<EncodedFusionOutcome> &outcomes) {
    OutcomeAssignment a(sg.n_slots);
    for (size_t f = 0; f < outcomes.size(); ++f) {
        const auto &o = outcomes[f];
        int xs = FusionNetwork::xx_slot(int(f)), zs = FusionNetwork::zz_slot(int(f));
        switch (o.event) {
            case FusionEvent::BothRecovered:
                a.value[xs] = o.xx_flipped ? OutcomeAssignment::kMinus : OutcomeAssignment::kPlus;
                a.value[zs] = o.zz_flipped ? OutcomeAssignment::kMinus : OutcomeAssignment::kPlus;
                break;
            case FusionEvent::XXOnly:
                a.value[xs] = o.xx_flipped ? OutcomeAssignment::kMinus : OutcomeAssignment::kPlus;
                a.value[zs] = OutcomeAssignment::kErased;
                break;
            case FusionEvent::ZZOnly:
                a.value[xs] = OutcomeAssignment::kErased;
                a.value[zs] = o.zz_flipped ? OutcomeAssignment::kMinus : OutcomeAssignment::kPlus;
                break;
            case FusionEvent::Erasure:
                a.value[xs] = OutcomeAssignment::kErased;
                a.value[zs] = OutcomeAssignment::kErased;
                break;
        }
    }
    return a;
}

// Per-emitter photon errors for the m photons an encoded fusion actually
// consumed: one Pauli draw per emission. A spin Z before emission k equals Z
// on photon k through the shared ZZ stabilizer of the spin-photon pair; spin
// X/Y errors are copied by the emission CNOTs onto every later photon of the
// block. Residuals carried past the last emission act on photons of later
// fusions and are dropped (per-fusion independence).
std::vector<int> sample_block_errors(int m, const SpinNoiseParams &spin, Rng &rng) {
    std::vector<int> err(size_t(m), 0);
    auto mul = [&](int photon, int pauli) { // Pauli product modulo phase
        static constexpr int tbl[4][4] = {
            {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
        err[size_t(photon)] = tbl[err[size_t(photon)]][pauli];
    };
    for (int k = 0; k < m; ++k) {
        double r = rng.next_double();
        if (r >= spin.p_x + spin.p_y + spin.p_z) continue;
        if (r < spin.p_x) {
            for (int j = k; j < m; ++j) mul(j, 1);
        } else if (r < spin.p_x + spin.p_y) {
            mul(k, 2);
            for (int j = k + 1; j < m; ++j) mul(j, 1);
        } else {
            mul(k, 3);
        }
    }
    return err;
}

} // namespace

OutcomeAssignment sample_assignment(const NoiseConfig &config, const LatticeContext &ctx,
                                    Rng &rng) {
    config.validate();
    const auto &sg = ctx.graph;

    if (config.model == NoiseConfig::Model::Phenomenological) {
        OutcomeAssignment a(sg.n_slots);
        for (int s = 0; s < sg.n_slots; ++s) {
            if (rng.next_double() < config.phen.p_eras)
                a.value[s] = OutcomeAssignment::kErased;
            else if (rng.next_double() < config.phen.p_err)
                a.value[s] = OutcomeAssignment::kMinus;
        }
        return a;
    }

    auto params = channel_params(config);
    auto outcomes = sample_fusion_outcomes(config, ctx, rng);

    std::vector<uint8_t> is_boosted(outcomes.size(), 0);
    int n_prime = config.phys.reinit_attempts > 0 ? config.phys.reinit_attempts
                                                  : config.strategy.size;
    if (config.phys.reinit) {
        for (int f : apply_reinit_rule(ctx.net, outcomes, n_prime, params, rng))
            is_boosted[size_t(f)] = 1;
    }

    const auto &spin = config.phys.spin;
    if (spin.p_x + spin.p_y + spin.p_z > 0.0) {
        // Only the two emitters of the current fusion carry spin noise, and
        // only while its photons are being emitted: errors are sampled for
        // the terminating attempt count, since later photons are never
        // produced for this fusion.
        for (size_t f = 0; f < outcomes.size(); ++f) {
            auto &o = outcomes[f];
            if (o.event == FusionEvent::Erasure) continue;
            auto errs_a = sample_block_errors(o.attempts_used, spin, rng);
            auto errs_b = sample_block_errors(o.attempts_used, spin, rng);
            auto [fx, fz] = spin_flip_map(o.event, o.attempts_used, errs_a, errs_b);
            o.xx_flipped ^= fx;
            o.zz_flipped ^= fz;
        }
    }

    return assemble_assignment(sg, outcomes);
}

Verdict run_trial(const NoiseConfig &config, const LatticeContext &ctx, uint64_t base_seed,
                  uint64_t trial_index) {
    Rng rng = Rng::for_trial(base_seed, trial_index);
    auto a = sample_assignment(config, ctx, rng);
    return decode(ctx.graph, a);
}

Verdict run_trial(const NoiseConfig &config, int L, uint64_t seed) {
    LatticeContext ctx(L);
    return run_trial(config, ctx, seed, 0);
}

namespace {

RateEstimate tally(int L, int64_t n_trials, int64_t n_fail, int64_t n_erasure) {
    RateEstimate e;
    e.L = L;
    e.n_trials = n_trials;
    e.n_fail = n_fail;
    e.n_erasure = n_erasure;
    double n = double(n_trials);
    e.R = double(n_fail) / n;
    e.sigma = std::sqrt(e.R * (1.0 - e.R) / n);
    const double z = 1.959963984540054; // 95%
    double z2 = z * z;
    double center = (e.R + z2 / (2 * n)) / (1 + z2 / n);
    double half = z / (1 + z2 / n) * std::sqrt(e.R * (1 - e.R) / n + z2 / (4 * n * n));
    e.wilson_lo = std::max(0.0, center - half);
    e.wilson_hi = std::min(1.0, center + half);
    return e;
}

} // namespace

RateEstimate estimate_rate(const NoiseConfig &config, const LatticeContext &ctx, int64_t n_trials,
                           uint64_t base_seed, int n_workers) {
    if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
    config.validate();
    int64_t fail = 0, eras = 0;
#ifdef _OPENMP
    int threads = n_workers > 0 ? n_workers : omp_get_max_threads();
#pragma omp parallel for reduction(+ : fail, eras) schedule(dynamic, 4) num_threads(threads)
#endif
    for (int64_t i = 0; i < n_trials; ++i) {
        Verdict v = run_trial(config, ctx, base_seed, uint64_t(i));
        if (v != Verdict::Success) ++fail;
        if (v == Verdict::LogicalErasure) ++eras;
    }
    return tally(ctx.net.L(), n_trials, fail, eras);
}

RateEstimate estimate_rate_serial(const NoiseConfig &config, const LatticeContext &ctx,
                                  int64_t n_trials, uint64_t base_seed) {
    if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
    config.validate();
    int64_t fail = 0, eras = 0;
    for (int64_t i = 0; i < n_trials; ++i) {
        Verdict v = run_trial(config, ctx, base_seed, uint64_t(i));
        if (v != Verdict::Success) ++fail;
        if (v == Verdict::LogicalErasure) ++eras;
    }
    return tally(ctx.net.L(), n_trials, fail, eras);
}

NoiseConfig config_at(const SweepSpec &sweep, double x) {
    NoiseConfig c = sweep.base;
    for (const auto &axis : sweep.axes) {
        double v = std::clamp(axis.offset + axis.slope * x, 0.0, 1.0);
        if (axis.param == "p_err")
            c.phen.p_err = v;
        else if (axis.param == "p_eras")
            c.phen.p_eras = v;
        else if (axis.param == "loss")
            c.phys.eta = 1.0 - v;
        else if (axis.param == "one_minus_V")
            c.phys.V = 1.0 - v;
        else if (axis.param == "spin_pz")
            c.phys.spin.p_z = v;
        else if (axis.param == "spin_depol")
            c.phys.spin = SpinNoiseParams::depolarizing(v);
        else
            throw std::invalid_argument("unknown sweep parameter: " + axis.param);
    }
    c.validate();
    return c;
}

uint64_t point_seed(uint64_t base_seed, int L, size_t x_index) {
    uint64_t s = base_seed ^ (0x9e3779b97f4a7c15ULL * uint64_t(L + 1));
    s = splitmix64(s);
    s ^= 0xd1342543de82ef95ULL * (uint64_t(x_index) + 1);
    return splitmix64(s);
}

std::vector<RatePoint> run_sweep(const SweepSpec &sweep, int n_workers) {
    if (sweep.axes.empty()) throw std::invalid_argument("sweep needs at least one axis");
    if (sweep.x_grid.empty()) throw std::invalid_argument("sweep needs a nonempty grid");
    if (sweep.sizes.empty()) throw std::invalid_argument("sweep needs at least one size");

    std::vector<RatePoint> points;
    for (int L : sweep.sizes) {
        LatticeContext ctx(L);
        for (size_t xi = 0; xi < sweep.x_grid.size(); ++xi) {
            double x = sweep.x_grid[xi];
            auto cfg = config_at(sweep, x);
            auto est = estimate_rate(cfg, ctx, sweep.n_trials, point_seed(sweep.base_seed, L, xi),
                                     n_workers);
            points.push_back({x, est});
        }
    }
    return points;
}

namespace {

// Weighted least-squares polynomial fit, low order; returns coefficients
// c[0] + c[1] x + c[2] x^2 (unused tail zero).
std::array<double, 3> poly_fit(const std::vector<double> &x, const std::vector<double> &y,
                               const std::vector<double> &w, int degree) {
    int k = degree + 1;
    double A[3][3] = {{0}}, b[3] = {0};
    for (size_t i = 0; i < x.size(); ++i) {
        double xp[3] = {1.0, x[i], x[i] * x[i]};
        for (int r = 0; r < k; ++r) {
            b[r] += w[i] * xp[r] * y[i];
            for (int c = 0; c < k; ++c) A[r][c] += w[i] * xp[r] * xp[c];
        }
    }
    // Gaussian elimination with partial pivoting on the k x k system
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(A[idx[r]][col]) > std::abs(A[idx[piv]][col])) piv = r;
        std::swap(idx[col], idx[piv]);
        double d = A[idx[col]][col];
        if (std::abs(d) < 1e-300) throw std::runtime_error("degenerate fit system");
        for (int r = col + 1; r < k; ++r) {
            double f = A[idx[r]][col] / d;
            for (int c = col; c < k; ++c) A[idx[r]][c] -= f * A[idx[col]][c];
            b[idx[r]] -= f * b[idx[col]];
        }
    }
    std::array<double, 3> out{0, 0, 0};
    for (int col = k - 1; col >= 0; --col) {
        double acc = b[idx[col]];
        for (int c = col + 1; c < k; ++c) acc -= A[idx[col]][c] * out[size_t(c)];
        out[size_t(col)] = acc / A[idx[col]][col];
    }
    return out;
}

double poly_eval(const std::array<double, 3> &c, double x) { return c[0] + x * (c[1] + x * c[2]); }

// Real roots of c0 + c1 x + c2 x^2 inside [lo, hi], ascending.
std::vector<double> poly_roots_in(const std::array<double, 3> &c, double lo, double hi) {
    std::vector<double> roots;
    double scale = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), 1e-30});
    if (std::abs(c[2]) < 1e-12 * scale) {
        if (std::abs(c[1]) > 1e-12 * scale) roots.push_back(-c[0] / c[1]);
    } else {
        double disc = c[1] * c[1] - 4 * c[2] * c[0];
        if (disc >= 0) {
            double sq = std::sqrt(disc);
            // numerically stable pair
            double q = -0.5 * (c[1] + (c[1] >= 0 ? sq : -sq));
            roots.push_back(q / c[2]);
            if (std::abs(q) > 0) roots.push_back(c[0] / q);
        }
    }
    std::vector<double> in;
    for (double r : roots)
        if (r >= lo && r <= hi) in.push_back(r);
    std::sort(in.begin(), in.end());
    in.erase(std::unique(in.begin(), in.end(),
                         [&](double a, double b) { return std::abs(a - b) < 1e-12 * (hi - lo); }),
             in.end());
    return in;
}

struct CurveData {
    std::vector<double> x, R, w;
    std::vector<int64_t> n;
};

// Fit both curves and return the crossing of (largest - second) if any.
struct CrossFit {
    bool found = false;
    double x_star = 0, diff_lo = 0, diff_hi = 0;
};

CrossFit fit_crossing(const CurveData &small, const CurveData &large, double lo, double hi) {
    int deg = int(std::min<size_t>(2, small.x.size() - 1));
    auto cs = poly_fit(small.x, small.R, small.w, deg);
    auto cl = poly_fit(large.x, large.R, large.w, deg);
    std::array<double, 3> d{cl[0] - cs[0], cl[1] - cs[1], cl[2] - cs[2]};
    CrossFit out;
    out.diff_lo = poly_eval(d, lo);
    out.diff_hi = poly_eval(d, hi);
    auto roots = poly_roots_in(d, lo, hi);
    if (roots.empty()) return out;
    // prefer a crossing from below threshold (difference increasing)
    for (double r : roots) {
        double slope = d[1] + 2 * d[2] * r;
        if (slope > 0) {
            out.found = true;
            out.x_star = r;
            return out;
        }
    }
    out.found = true;
    out.x_star = roots.front();
    return out;
}

double fit_weight(double R, int64_t n) {
    // rule-of-succession variance floor keeps zero-failure points finite
    double p = (R * double(n) + 1.0) / (double(n) + 2.0);
    return double(n) / (p * (1.0 - p));
}

} // namespace

ThresholdEstimate extract_threshold(const SweepSpec &sweep, const std::vector<RatePoint> &points,
                                    int n_bootstrap) {
    std::map<int, CurveData> by_L;
    for (const auto &p : points) {
        auto &c = by_L[p.est.L];
        c.x.push_back(p.x);
        c.R.push_back(p.est.R);
        c.n.push_back(p.est.n_trials);
        c.w.push_back(fit_weight(p.est.R, p.est.n_trials));
    }
    if (by_L.size() < 2)
        throw std::invalid_argument("threshold extraction needs at least two sizes");
    auto it = by_L.rbegin();
    CurveData large = it->second;
    ++it;
    CurveData small = it->second;
    if (small.x.size() < 2 || large.x.size() < 2)
        throw std::invalid_argument("threshold extraction needs at least two grid points");

    double lo = *std::min_element(small.x.begin(), small.x.end());
    double hi = *std::max_element(small.x.begin(), small.x.end());

    ThresholdEstimate est;
    est.points = points;
    auto fit = fit_crossing(small, large, lo, hi);
    est.found = fit.found;
    est.x_star = fit.x_star;
    est.diff_lo = fit.diff_lo;
    est.diff_hi = fit.diff_hi;
    if (!est.found) {
        if (fit.diff_hi < 0)
            est.note = "no crossing in grid: all points sub-threshold, extend the grid upward";
        else if (fit.diff_lo > 0)
            est.note = "no crossing in grid: all points above threshold, extend the grid downward";
        else
            est.note = "no crossing in grid: curves do not separate, add trials or widen the grid";
        return est;
    }

    // binomial bootstrap of every point, refit, spread of the crossing
    Rng rng(sweep.base_seed ^ 0xb0075742a9ULL);
    auto resample = [&](CurveData c) {
        for (size_t i = 0; i < c.R.size(); ++i) {
            int64_t nf = 0;
            for (int64_t t = 0; t < c.n[i]; ++t)
                if (rng.next_double() < c.R[i]) ++nf;
            c.R[i] = double(nf) / double(c.n[i]);
            c.w[i] = fit_weight(c.R[i], c.n[i]);
        }
        return c;
    };
    std::vector<double> stars;
    for (int b = 0; b < n_bootstrap; ++b) {
        auto f = fit_crossing(resample(small), resample(large), lo, hi);
        if (f.found) stars.push_back(f.x_star);
    }
    if (stars.size() >= 2) {
        double mean = 0;
        for (double s : stars) mean += s;
        mean /= double(stars.size());
        double var = 0;
        for (double s : stars) var += (s - mean) * (s - mean);
        est.sigma = std::sqrt(var / double(stars.size() - 1));
    }
    if (int(stars.size()) < n_bootstrap / 2)
        est.note = "crossing unstable under bootstrap resampling";
    return est;
}

ThresholdEstimate find_threshold(const SweepSpec &sweep, int n_workers) {
    return extract_threshold(sweep, run_sweep(sweep, n_workers));
}

std::vector<RegionSample> map_ft_region(const RegionSpec &spec, int n_workers) {
    if (spec.axes.size() < 2 || spec.axes.size() > 3)
        throw std::invalid_argument("region mapping takes 2 or 3 axes");
    if (spec.grid.size() != spec.axes.size())
        throw std::invalid_argument("one coordinate list per axis required");

    // cartesian product of the per-axis coordinate lists
    std::vector<std::vector<double>> pts{{}};
    for (const auto &axis_vals : spec.grid) {
        std::vector<std::vector<double>> next;
        for (const auto &p : pts)
            for (double v : axis_vals) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        pts = std::move(next);
    }

    std::vector<RegionSample> out;
    for (size_t pi = 0; pi < pts.size(); ++pi) {
        RegionSample s;
        s.coords = pts[pi];
        double mag = 0;
        for (double c : s.coords) mag = std::max(mag, std::abs(c));
        if (mag == 0.0) {
            s.inside = true; // noiseless origin
            out.push_back(std::move(s));
            continue;
        }
        SweepSpec ray;
        ray.base = spec.base;
        for (size_t k = 0; k < spec.axes.size(); ++k)
            ray.axes.push_back({spec.axes[k].param, spec.axes[k].offset,
                                spec.axes[k].slope * s.coords[k]});
        ray.x_grid = spec.ray_grid;
        ray.sizes = spec.sizes;
        ray.n_trials = spec.n_trials;
        uint64_t mix = spec.base_seed + 0x9e3779b97f4a7c15ULL * (uint64_t(pi) + 1);
        ray.base_seed = splitmix64(mix);
        auto th = find_threshold(ray, n_workers);
        s.inside = th.found ? th.x_star > 1.0 : th.diff_hi < 0.0;
        s.boundary_found = th.found;
        if (th.found)
            for (double c : s.coords) s.boundary.push_back(c * th.x_star);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace sffcc
