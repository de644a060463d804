#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "sffcc/montecarlo.hpp"

using namespace sffcc;

namespace {

double seconds_for(const NoiseConfig &cfg, const LatticeContext &ctx, int64_t trials,
                   bool parallel, int64_t *n_fail) {
    auto t0 = std::chrono::steady_clock::now();
    auto est = parallel ? estimate_rate(cfg, ctx, trials, 42)
                        : estimate_rate_serial(cfg, ctx, trials, 42);
    *n_fail = est.n_fail;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench(const char *name, const NoiseConfig &cfg, int L, int64_t trials) {
    LatticeContext ctx(L);
    int64_t fail_s = 0, fail_p = 0;
    double ts = seconds_for(cfg, ctx, trials, false, &fail_s);
    double tp = seconds_for(cfg, ctx, trials, true, &fail_p);
    if (fail_s != fail_p) {
        std::fprintf(stderr, "FAIL %s: serial and parallel disagree (%lld vs %lld)\n", name,
                     static_cast<long long>(fail_s), static_cast<long long>(fail_p));
        std::exit(1);
    }
    std::printf("%-28s L=%d trials=%lld  serial %8.1f/s  parallel %8.1f/s  speedup %.2fx\n",
                name, L, static_cast<long long>(trials), trials / ts, trials / tp, ts / tp);
}

} // namespace

int main(int argc, char **argv) {
    int64_t trials = argc > 1 ? std::atoll(argv[1]) : 2000;
    int L = argc > 2 ? std::atoi(argv[2]) : 6;

    bench("phenomenological", NoiseConfig::phenomenological(0.008, 0.01), L, trials);
    bench("physical RUS N=10 loss", NoiseConfig::physical(FusionStrategy::rus(10), 0.93, 1.0), L,
          trials);
    SpinNoiseParams spin;
    spin.p_z = 0.004;
    bench("physical RUS N=10 spin", NoiseConfig::physical(FusionStrategy::rus(10), 1.0, 1.0, spin),
          L, trials);
    bench("physical REP m=5 loss", NoiseConfig::physical(FusionStrategy::rep(5), 0.98, 1.0), L,
          trials);
    return 0;
}
