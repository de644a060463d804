#pragma once

#include <utility>
#include <vector>

#include "sffcc/rng.hpp"

namespace sffcc {

struct FusionChannelParams {
    double eta = 1.0;    // end-to-end efficiency per photon
    double V = 1.0;      // HOM visibility
    double P_fail = 0.5; // intrinsic failure probability (unboosted linear optics)
    double p_x = 0.0;    // per-physical-fusion ZZ-outcome flip probability
    double p_z = 0.0;    // per-physical-fusion XX-outcome flip probability
    void validate() const;
};

// Five-outcome physical fusion model for a rotated {ZZ,XX} fusion under loss
// and distinguishability; collapses to (P_s, P_f, P_l) at V = 1.
struct PhysicalOutcomeDist {
    double P_s;    // success, XX intact
    double P_s_eX; // success, XX erased
    double P_f;    // failure, XX recovered
    double P_f_eX; // failure, XX erased
    double P_l;    // loss erasure
};

enum class FusionEvent { BothRecovered, XXOnly, ZZOnly, Erasure };

struct EncodedFusionOutcome {
    FusionEvent event = FusionEvent::Erasure;
    int attempts_used = 0; // m; the terminating attempt for RUS, the code size for REP
    bool xx_flipped = false;
    bool zz_flipped = false;
};

struct FusionStrategy {
    enum Kind { REP, RUS } kind;
    int size; // m for REP, N for RUS
    static FusionStrategy rep(int m) { return {REP, m}; }
    static FusionStrategy rus(int n) { return {RUS, n}; }
};

PhysicalOutcomeDist physical_outcome_dist(const FusionChannelParams &params);

struct RepRecovery {
    double R_XX, R_ZZ;
};
RepRecovery rep_recovery_probs(int m, const FusionChannelParams &params);

struct RepErrors {
    double E_XX, E_ZZ;
};
// E_ZZ is conditional on a usable recovered ZZ vote. With tie_as_erasure,
// split votes are discarded instead of counted as flips; the discarded mass
// is rep_tie_erasure_prob.
RepErrors rep_error_rates(int m, const FusionChannelParams &params, bool tie_as_erasure = true);
double rep_tie_erasure_prob(int m, const FusionChannelParams &params);

struct RusEventProbs {
    double P1; // both XX and ZZ
    double P2; // XX only
    double P3; // ZZ only
    double P4; // erasure
};
RusEventProbs rus_event_probs(int N, const FusionChannelParams &params);

struct RusErrors {
    double E_XX, E_ZZ;
};
RusErrors rus_error_rates(int N, const FusionChannelParams &params);

struct CombinedRusProbs {
    double P_XZ;      // both recovered
    double P_Xonly;   // XX only
    double P_Zonly;   // ZZ only (by complement)
    double P_erasure; // nothing recovered
};
CombinedRusProbs combined_rus_probs(int N, const FusionChannelParams &params);

EncodedFusionOutcome sample_encoded_fusion(FusionStrategy strategy, const FusionChannelParams &params,
                                           Rng &rng);

// Terminating-attempt count for the two-step spin-noise pipeline. XXOnly is
// always N; the other recovered events draw from the per-attempt increments
// of the corresponding cumulative combined probability.
int attempt_count_sample(FusionEvent event, int N, const FusionChannelParams &params, Rng &rng);

// Map per-photon Pauli errors (0=I,1=X,2=Y,3=Z, photon index 0-based within
// the encoded qubit) to encoded-outcome flips for an event terminating at
// attempt m. X/Y on the m-th photons flip ZZ; Z/Y parity over the first m
// photons of both sides flips XX.
std::pair<bool, bool> spin_flip_map(FusionEvent event, int m, const std::vector<int> &photon_errors_a,
                                    const std::vector<int> &photon_errors_b);

} // namespace sffcc
