#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sffcc/decoder.hpp"
#include "sffcc/emitter.hpp"
#include "sffcc/fusion.hpp"
#include "sffcc/lattice.hpp"
#include "sffcc/rng.hpp"

namespace sffcc {

struct PhenomenologicalNoise {
    double p_err = 0.0, p_eras = 0.0; // i.i.d. per outcome slot; erasure wins on overlap
};

struct PhysicalNoise {
    double eta = 1.0, V = 1.0;
    SpinNoiseParams spin{};
    bool reinit = false;     // emitter re-initialization boost (RUS only)
    int reinit_attempts = 0; // N' fresh attempts for boosted fusions; 0 means N
};

struct NoiseConfig {
    enum class Model { Phenomenological, Physical };
    Model model = Model::Phenomenological;
    PhenomenologicalNoise phen{};
    PhysicalNoise phys{};
    FusionStrategy strategy = FusionStrategy::rus(1); // physical model only

    void validate() const;
    static NoiseConfig phenomenological(double p_err, double p_eras);
    static NoiseConfig physical(FusionStrategy strategy, double eta, double V,
                                const SpinNoiseParams &spin = {}, bool reinit = false,
                                int reinit_attempts = 0);
};

// Immutable per-size state shared by all trials of a sweep point.
struct LatticeContext {
    FusionNetwork net;
    SyndromeGraph graph;
    explicit LatticeContext(int L) : net(L), graph(derive_syndrome_graph(net)) {}
};

// Physical channel for the encoded-fusion sampler. Spin noise is sampled
// separately through the emitter circuits, so p_x/p_z stay zero here: the
// sampler is the single source of outcome statistics (no double counting).
FusionChannelParams channel_params(const NoiseConfig &config);

// One encoded outcome per fusion, in fusion-index order (physical model).
std::vector<EncodedFusionOutcome> sample_fusion_outcomes(const NoiseConfig &config,
                                                         const LatticeContext &ctx, Rng &rng);

// Emitter re-initialization scan over layers 1..3L-1 in order: where both
// layer-(t-1) fusions of a layer-t fusion's emitters ended ZZOnly and the
// fusion itself recovered at most one operator, its outcome is resampled with
// n_prime fresh attempts. The first layer is never boosted. Returns the
// indices of resampled fusions.
std::vector<int> apply_reinit_rule(const FusionNetwork &net,
                                   std::vector<EncodedFusionOutcome> &outcomes, int n_prime,
                                   const FusionChannelParams &params, Rng &rng);

// Full noise sample for one trial: i.i.d. slot noise (phenomenological) or
// encoded outcomes with reinit scan and per-fusion spin errors on the two
// participating emitters (physical), mapped onto outcome slots.
OutcomeAssignment sample_assignment(const NoiseConfig &config, const LatticeContext &ctx, Rng &rng);

// Deterministic for fixed (config, L, base_seed, trial_index); independent of
// worker count because each trial owns a counter-derived stream.
Verdict run_trial(const NoiseConfig &config, const LatticeContext &ctx, uint64_t base_seed,
                  uint64_t trial_index);
Verdict run_trial(const NoiseConfig &config, int L, uint64_t seed); // builds a fresh context

struct RateEstimate {
    int L = 0;
    int64_t n_trials = 0, n_fail = 0, n_erasure = 0; // erasures are counted in n_fail
    double R = 0.0, sigma = 0.0;                     // point estimate and binomial std error
    double wilson_lo = 0.0, wilson_hi = 0.0;         // 95% Wilson interval
};

RateEstimate estimate_rate(const NoiseConfig &config, const LatticeContext &ctx, int64_t n_trials,
                           uint64_t base_seed, int n_workers = 0);
// Serial reference path; identical results to estimate_rate by construction.
RateEstimate estimate_rate_serial(const NoiseConfig &config, const LatticeContext &ctx,
                                  int64_t n_trials, uint64_t base_seed);

// Affine map x -> offset + slope*x applied to a named parameter:
// p_err, p_eras, loss (eta = 1-v), one_minus_V (V = 1-v), spin_pz, spin_depol.
struct SweepAxis {
    std::string param;
    double offset = 0.0, slope = 1.0;
};

struct SweepSpec {
    NoiseConfig base{};
    std::vector<SweepAxis> axes;
    std::vector<double> x_grid;
    std::vector<int> sizes; // at least two for crossing estimation
    int64_t n_trials = 2000;
    uint64_t base_seed = 1;
};

NoiseConfig config_at(const SweepSpec &sweep, double x);
uint64_t point_seed(uint64_t base_seed, int L, size_t x_index);

struct RatePoint {
    double x = 0.0;
    RateEstimate est{};
};

std::vector<RatePoint> run_sweep(const SweepSpec &sweep, int n_workers = 0);

struct ThresholdEstimate {
    bool found = false;
    double x_star = 0.0, sigma = 0.0;
    double diff_lo = 0.0, diff_hi = 0.0; // fitted R_largest - R_second at the grid ends
    std::string note;                    // bracketing advice when no crossing exists
    std::vector<RatePoint> points;
};

// Crossing of the two largest-size rate curves via weighted low-order
// polynomial fits; sigma from binomial bootstrap resampling of the points.
ThresholdEstimate extract_threshold(const SweepSpec &sweep, const std::vector<RatePoint> &points,
                                    int n_bootstrap = 200);
ThresholdEstimate find_threshold(const SweepSpec &sweep, int n_workers = 0);

struct RegionSpec {
    NoiseConfig base{};
    std::vector<SweepAxis> axes;           // 2 or 3 noise axes
    std::vector<std::vector<double>> grid; // coordinate values per axis
    std::vector<double> ray_grid;          // scale factors along each ray; straddles 1
    std::vector<int> sizes;
    int64_t n_trials = 500;
    uint64_t base_seed = 1;
};

struct RegionSample {
    std::vector<double> coords;
    bool inside = false;
    bool boundary_found = false;
    std::vector<double> boundary; // coords scaled to the ray threshold, when found
};

// Below/above-threshold classification of every grid point via find_threshold
// along the ray through it; emits boundary samples where the ray crosses.
std::vector<RegionSample> map_ft_region(const RegionSpec &spec, int n_workers = 0);

} // namespace sffcc
