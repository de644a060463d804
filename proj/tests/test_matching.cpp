#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "sffcc/matching.hpp"
#include "sffcc/rng.hpp"

using namespace sffcc;

namespace {

std::vector<std::vector<int64_t>> random_weights(Rng &rng, int n, int64_t w_max) {
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) w[i][j] = w[j][i] = int64_t(rng.next_below(w_max + 1));
    return w;
}

} // namespace

TEST_CASE("blossom agrees with the exhaustive matcher on random instances") {
    Rng rng(0xb10550u);
    for (int n : {2, 4, 6, 8, 10, 12}) {
        for (int rep = 0; rep < 60; ++rep) {
            // small weight range forces many ties and zero-weight edges
            auto w = random_weights(rng, n, rep % 3 == 0 ? 3 : 40);
            auto mate = min_weight_perfect_matching(w);
            auto oracle = min_weight_perfect_matching_exhaustive(w);
            CHECK(matching_weight(w, mate) == matching_weight(w, oracle));
        }
    }
}

TEST_CASE("blossom agrees with the exhaustive matcher on metric instances") {
    Rng rng(0x9e0d1cu);
    for (int rep = 0; rep < 40; ++rep) {
        int n = 14;
        std::vector<std::array<int, 2>> pts(n);
        for (auto &p : pts) p = {int(rng.next_below(20)), int(rng.next_below(20))};
        std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                w[i][j] = std::abs(pts[i][0] - pts[j][0]) + std::abs(pts[i][1] - pts[j][1]);
        auto mate = min_weight_perfect_matching(w);
        auto oracle = min_weight_perfect_matching_exhaustive(w);
        CHECK(matching_weight(w, mate) == matching_weight(w, oracle));
    }
}

TEST_CASE("larger instances stay perfect and locally optimal") {
    Rng rng(0x51a7eu);
    auto w = random_weights(rng, 80, 1000);
    auto mate = min_weight_perfect_matching(w);
    for (size_t i = 0; i < mate.size(); ++i) {
        CHECK(mate[i] >= 0);
        CHECK(mate[size_t(mate[i])] == int(i));
    }
    // no improving pair swap exists in an optimal matching
    for (int a = 0; a < 80; ++a)
        for (int b = a + 1; b < 80; ++b) {
            int ma = mate[a], mb = mate[b];
            if (ma == b || mb == a) continue;
            CHECK(w[a][ma] + w[b][mb] <= w[a][b] + w[ma][mb]);
            CHECK(w[a][ma] + w[b][mb] <= w[a][mb] + w[ma][b]);
        }
}

TEST_CASE("degenerate and invalid inputs") {
    CHECK(min_weight_perfect_matching({}).empty());
    std::vector<std::vector<int64_t>> two{{0, 7}, {7, 0}};
    auto mate = min_weight_perfect_matching(two);
    CHECK(mate == std::vector<int>{1, 0});

    CHECK_THROWS_AS(min_weight_perfect_matching({{0}}), std::invalid_argument);
    std::vector<std::vector<int64_t>> asym{{0, 1}, {2, 0}};
    CHECK_THROWS_AS(min_weight_perfect_matching(asym), std::invalid_argument);
    std::vector<std::vector<int64_t>> neg{{0, -1}, {-1, 0}};
    CHECK_THROWS_AS(min_weight_perfect_matching(neg), std::invalid_argument);
}
