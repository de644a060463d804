#include "sffcc/fusion.hpp"

#include <cmath>
#include <stdexcept>

namespace sffcc {

namespace {

void check01(double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must be in [0,1]");
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

// Probability of an odd number of successes among n Bernoulli(p) draws.
double odd_parity_prob(int n, double p) {
    double acc = 0.0;
    for (int k = 1; k <= n; k += 2)
        acc += binom(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
    return acc;
}

// Three-outcome physical model (visibility folded into flip rates, not
// erasure): success, failure-with-XX, loss.
struct ThreeOutcome {
    double P_s, P_f, P_l;
};

ThreeOutcome three_outcome(const FusionChannelParams &p) {
    double e2 = p.eta * p.eta;
    return {e2 * (1.0 - p.P_fail), e2 * p.P_fail, 1.0 - e2};
}

// Cumulative combined probabilities for an i-attempt RUS prefix.
struct CombinedCumulative {
    std::vector<double> xz, xonly, eras, zonly; // index i = prefix length, 0..N
};

CombinedCumulative combined_cumulative(int N, const FusionChannelParams &p) {
    auto d = physical_outcome_dist(p);
    CombinedCumulative c;
    c.xz.assign(N + 1, 0.0);
    c.xonly.assign(N + 1, 0.0);
    c.eras.assign(N + 1, 0.0);
    c.zonly.assign(N + 1, 0.0);
    for (int i = 1; i <= N; ++i) {
        double xz = 0.0, er = 0.0;
        double fpow = 1.0;
        for (int j = 0; j < i; ++j) {
            xz += d.P_s * fpow;
            er += (d.P_l + d.P_f_eX) * fpow * std::pow(d.P_l, i - 1 - j);
            fpow *= d.P_f;
        }
        c.xz[i] = xz;
        c.xonly[i] = std::pow(d.P_f, i);
        c.eras[i] = er;
        c.zonly[i] = 1.0 - c.xz[i] - c.xonly[i] - c.eras[i];
    }
    return c;
}

int sample_from_increments(const std::vector<double> &cumulative, int N, Rng &rng) {
    double total = cumulative[N];
    if (total <= 0.0) throw std::invalid_argument("attempt-count distribution has zero mass");
    double u = rng.next_double() * total;
    double acc = 0.0;
    for (int i = 1; i <= N; ++i) {
        double inc = std::max(0.0, cumulative[i] - cumulative[i - 1]);
        acc += inc;
        if (u < acc) return i;
    }
    return N;
}

bool parity_xy(const std::vector<int> &errs, int photon) {
    int e = errs[photon];
    return e == 1 || e == 2;
}

bool parity_zy(const std::vector<int> &errs, int upto) {
    bool par = false;
    for (int i = 0; i < upto; ++i)
        if (errs[i] == 2 || errs[i] == 3) par = !par;
    return par;
}

} // namespace

void FusionChannelParams::validate() const {
    check01(eta, "eta");
    check01(V, "V");
    check01(P_fail, "P_fail");
    check01(p_x, "p_x");
    check01(p_z, "p_z");
}

PhysicalOutcomeDist physical_outcome_dist(const FusionChannelParams &params) {
    params.validate();
    double e2 = params.eta * params.eta;
    double P_Z = 1.0 - params.P_fail, P_Ze = params.P_fail;
    double P_Xe = (1.0 - params.V) / 4.0, P_X = 1.0 - P_Xe;
    return {e2 * P_Z * P_X, e2 * P_Z * P_Xe, e2 * P_Ze * P_X, e2 * P_Ze * P_Xe, 1.0 - e2};
}

namespace {

// Per-vote ZZ flip probability for REP: votes from intact successes carry the
// distinguishability flip (1-V)/2 on top of p_x, XX-erased successes only p_x.
double rep_vote_flip_prob(const FusionChannelParams &p) {
    auto d = physical_outcome_dist(p);
    double vote = d.P_s + d.P_s_eX;
    if (vote <= 0.0) return 0.0;
    double flip_v = (1.0 - p.V) / 2.0;
    double mixed = p.p_x * (1.0 - flip_v) + (1.0 - p.p_x) * flip_v;
    return (d.P_s * mixed + d.P_s_eX * p.p_x) / vote;
}

} // namespace

RepRecovery rep_recovery_probs(int m, const FusionChannelParams &params) {
    if (m < 1) throw std::invalid_argument("REP size must be >= 1");
    params.validate();
    auto d = physical_outcome_dist(params);
    return {std::pow(d.P_s + d.P_f, m), 1.0 - std::pow(1.0 - (d.P_s + d.P_s_eX), m)};
}

double rep_tie_erasure_prob(int m, const FusionChannelParams &params) {
    auto d = physical_outcome_dist(params);
    double P_v = d.P_s + d.P_s_eX, q = rep_vote_flip_prob(params);
    double acc = 0.0;
    for (int votes = 2; votes <= m; votes += 2) {
        double p_votes = binom(m, votes) * std::pow(P_v, votes) * std::pow(1.0 - P_v, m - votes);
        acc += p_votes * binom(votes, votes / 2) * std::pow(q, votes / 2) *
               std::pow(1.0 - q, votes / 2);
    }
    return acc;
}

RepErrors rep_error_rates(int m, const FusionChannelParams &params, bool tie_as_erasure) {
    if (m < 1) throw std::invalid_argument("REP size must be >= 1");
    params.validate();
    auto d = physical_outcome_dist(params);
    double P_v = d.P_s + d.P_s_eX, q = rep_vote_flip_prob(params);
    double e_xx = odd_parity_prob(m, params.p_z);
    double num = 0.0;
    for (int votes = 1; votes <= m; ++votes) {
        double p_votes = binom(m, votes) * std::pow(P_v, votes) * std::pow(1.0 - P_v, m - votes);
        int k_min = tie_as_erasure ? votes / 2 + 1 : (votes + 1) / 2;
        double flip = 0.0;
        for (int k = k_min; k <= votes; ++k)
            flip += binom(votes, k) * std::pow(q, k) * std::pow(1.0 - q, votes - k);
        num += p_votes * flip;
    }
    double denom = rep_recovery_probs(m, params).R_ZZ;
    if (tie_as_erasure) denom -= rep_tie_erasure_prob(m, params);
    double e_zz = denom > 0.0 ? num / denom : 0.0;
    return {e_xx, e_zz};
}

RusEventProbs rus_event_probs(int N, const FusionChannelParams &params) {
    if (N < 1) throw std::invalid_argument("RUS size must be >= 1");
    params.validate();
    auto t = three_outcome(params);
    double p1 = 0.0, p3 = 0.0, p4 = 0.0;
    double fpow = 1.0;
    for (int j = 0; j < N; ++j) {
        p1 += t.P_s * fpow;
        p4 += fpow * std::pow(t.P_l, N - j);
        if (j <= N - 2) {
            double inner = 0.0;
            for (int k = 1; k <= N - j - 1; ++k) inner += std::pow(t.P_l, k) * (1.0 - t.P_l);
            p3 += fpow * inner;
        }
        fpow *= t.P_f;
    }
    return {p1, std::pow(t.P_f, N), p3, p4};
}

RusErrors rus_error_rates(int N, const FusionChannelParams &params) {
    if (N < 1) throw std::invalid_argument("RUS size must be >= 1");
    params.validate();
    auto t = three_outcome(params);
    double num = 0.0, fpow = 1.0;
    for (int j = 0; j < N; ++j) {
        num += fpow * t.P_s * odd_parity_prob(j + 1, params.p_z);
        fpow *= t.P_f;
    }
    num += std::pow(t.P_f, N) * odd_parity_prob(N, params.p_z);
    auto ev = rus_event_probs(N, params);
    double r_xx = ev.P1 + ev.P2;
    return {r_xx > 0.0 ? num / r_xx : 0.0, params.p_x};
}

CombinedRusProbs combined_rus_probs(int N, const FusionChannelParams &params) {
    if (N < 1) throw std::invalid_argument("RUS size must be >= 1");
    params.validate();
    auto c = combined_cumulative(N, params);
    return {c.xz[N], c.xonly[N], c.zonly[N], c.eras[N]};
}

EncodedFusionOutcome sample_encoded_fusion(FusionStrategy strategy, const FusionChannelParams &params,
                                           Rng &rng) {
    params.validate();
    if (strategy.size < 1) throw std::invalid_argument("encoded fusion size must be >= 1");
    EncodedFusionOutcome out;
    if (strategy.kind == FusionStrategy::REP) {
        // Five-outcome attempts: any XX-erased or lost attempt kills the
        // encoded XX product; intact successes carry the extra (1-V)/2 flip.
        auto d = physical_outcome_dist(params);
        double flip_v = (1.0 - params.V) / 2.0;
        int m = strategy.size;
        out.attempts_used = m;
        int votes = 0, vote_flips = 0;
        bool xx_alive = true, xx_parity = false;
        for (int i = 0; i < m; ++i) {
            double u = rng.next_double();
            if (u < d.P_s + d.P_s_eX) {
                bool xx_erased = u >= d.P_s;
                ++votes;
                double pf = xx_erased ? params.p_x
                                      : params.p_x * (1.0 - flip_v) + (1.0 - params.p_x) * flip_v;
                if (rng.next_double() < pf) ++vote_flips;
                if (xx_erased) xx_alive = false;
            } else if (u >= d.P_s + d.P_s_eX + d.P_f) {
                xx_alive = false; // loss or XX-erased failure
            }
            if (rng.next_double() < params.p_z) xx_parity = !xx_parity;
        }
        bool zz_alive = votes > 0;
        bool zz_flip = false;
        if (zz_alive) {
            if (2 * vote_flips == votes)
                zz_alive = false; // split vote treated as erased
            else
                zz_flip = 2 * vote_flips > votes;
        }
        if (xx_alive && zz_alive)
            out.event = FusionEvent::BothRecovered;
        else if (xx_alive)
            out.event = FusionEvent::XXOnly;
        else if (zz_alive)
            out.event = FusionEvent::ZZOnly;
        else
            out.event = FusionEvent::Erasure;
        out.xx_flipped = xx_alive && xx_parity;
        out.zz_flipped = zz_alive && zz_flip;
        return out;
    }

    // RUS: sequential five-outcome attempts; a loss or an XX-erased failure
    // switches the failure basis, after which any non-lossy attempt yields ZZ.
    auto d = physical_outcome_dist(params);
    int N = strategy.size;
    bool xx_parity = false;
    for (int i = 1; i <= N; ++i) {
        double u = rng.next_double();
        if (u < d.P_s || u < d.P_s + d.P_s_eX) {
            bool xx_erased = u >= d.P_s;
            if (rng.next_double() < params.p_z) xx_parity = !xx_parity;
            out.attempts_used = i;
            out.event = xx_erased ? FusionEvent::ZZOnly : FusionEvent::BothRecovered;
            out.zz_flipped = rng.next_double() < params.p_x;
            if (out.event == FusionEvent::BothRecovered) {
                out.xx_flipped = xx_parity;
                if (rng.next_double() < (1.0 - params.V) / 2.0) out.zz_flipped = !out.zz_flipped;
            }
            return out;
        }
        if (u < d.P_s + d.P_s_eX + d.P_f) {
            if (rng.next_double() < params.p_z) xx_parity = !xx_parity;
            continue; // failure, XX chain grows
        }
        // Loss or XX-erased failure: basis switched to ZZ.
        for (int k = i + 1; k <= N; ++k) {
            if (rng.next_double() >= d.P_l) {
                out.attempts_used = k;
                out.event = FusionEvent::ZZOnly;
                out.zz_flipped = rng.next_double() < params.p_x;
                return out;
            }
        }
        out.attempts_used = N;
        out.event = FusionEvent::Erasure;
        return out;
    }
    out.attempts_used = N;
    out.event = FusionEvent::XXOnly;
    out.xx_flipped = xx_parity;
    return out;
}

int attempt_count_sample(FusionEvent event, int N, const FusionChannelParams &params, Rng &rng) {
    if (N < 1) throw std::invalid_argument("RUS size must be >= 1");
    params.validate();
    if (event == FusionEvent::Erasure)
        throw std::invalid_argument("attempt count undefined for erased fusions");
    if (event == FusionEvent::XXOnly) return N;
    auto c = combined_cumulative(N, params);
    return sample_from_increments(event == FusionEvent::BothRecovered ? c.xz : c.zonly, N, rng);
}

std::pair<bool, bool> spin_flip_map(FusionEvent event, int m, const std::vector<int> &photon_errors_a,
                                    const std::vector<int> &photon_errors_b) {
    if (m < 1) throw std::invalid_argument("attempt count must be >= 1");
    if (photon_errors_a.size() < size_t(m) || photon_errors_b.size() < size_t(m))
        throw std::invalid_argument("photon error vectors shorter than attempt count");
    if (event == FusionEvent::Erasure) return {false, false};
    bool xx = parity_zy(photon_errors_a, m) ^ parity_zy(photon_errors_b, m);
    bool zz = parity_xy(photon_errors_a, m - 1) ^ parity_xy(photon_errors_b, m - 1);
    switch (event) {
        case FusionEvent::BothRecovered: return {xx, zz};
        case FusionEvent::XXOnly: return {xx, false};
        case FusionEvent::ZZOnly: return {false, zz};
        default: return {false, false};
    }
}

} // namespace sffcc
