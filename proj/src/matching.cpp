#include "sffcc/matching.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <limits>
#include <stdexcept>

namespace sffcc {

namespace {

// O(n^3) maximum weighted matching in a general graph (Galil's primal-dual
// blossom scheme, dense form). Vertices 1..n; contracted blossoms occupy
// n+1..n_x. Weights are doubled internally so dual labels stay integral.
class Blossom {
  public:
    explicit Blossom(int n) : n_(n), cap_(2 * n + 1) {
        g_.assign(cap_ * cap_, Edge{0, 0, 0});
        for (int u = 1; u <= n_; ++u)
            for (int v = 1; v <= n_; ++v) g(u, v) = Edge{u, v, 0};
        lab_.assign(cap_, 0);
        match_.assign(cap_, 0);
        slack_.assign(cap_, 0);
        st_.assign(cap_, 0);
        pa_.assign(cap_, 0);
        S_.assign(cap_, 0);
        vis_.assign(cap_, 0);
        flower_.assign(cap_, {});
        flower_from_.assign(cap_ * (n_ + 1), 0);
    }

    void set_weight(int u, int v, int64_t w) { g(u, v).w = g(v, u).w = 2 * w; }

    // returns mate (1-indexed; 0 = unmatched)
    std::vector<int> solve() {
        std::fill(match_.begin(), match_.end(), 0);
        n_x_ = n_;
        for (int u = 0; u <= n_; ++u) {
            st_[u] = u;
            flower_[u].clear();
        }
        int64_t w_max = 0;
        for (int u = 1; u <= n_; ++u)
            for (int v = 1; v <= n_; ++v) {
                from(u, v) = (u == v ? u : 0);
                w_max = std::max(w_max, g(u, v).w);
            }
        for (int u = 1; u <= n_; ++u) lab_[u] = w_max;
        while (matching()) {
        }
        return match_;
    }

  private:
    struct Edge {
        int u, v;
        int64_t w;
    };
    static constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

    Edge &g(int u, int v) { return g_[u * cap_ + v]; }
    int &from(int b, int x) { return flower_from_[b * (n_ + 1) + x]; }

    int64_t e_delta(const Edge &e) { return lab_[e.u] + lab_[e.v] - g(e.u, e.v).w; }

    void update_slack(int u, int x) {
        if (!slack_[x] || e_delta(g(u, x)) < e_delta(g(slack_[x], x))) slack_[x] = u;
    }
    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n_; ++u)
            if (g(u, x).w > 0 && st_[u] != x && S_[st_[u]] == 0) update_slack(u, x);
    }
    void q_push(int x) {
        if (x <= n_)
            q_.push_back(x);
        else
            for (int i : flower_[x]) q_push(i);
    }
    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n_)
            for (int i : flower_[x]) set_st(i, b);
    }
    int get_pr(int b, int xr) {
        auto &f = flower_[b];
        int pr = int(std::find(f.begin(), f.end(), xr) - f.begin());
        if (pr % 2 == 1) {
            std::reverse(f.begin() + 1, f.end());
            return int(f.size()) - pr;
        }
        return pr;
    }
    void set_match(int u, int v) {
        match_[u] = g(u, v).v;
        if (u <= n_) return;
        Edge &e = g(u, v);
        int xr = from(u, e.u);
        int pr = get_pr(u, xr);
        auto &f = flower_[u];
        for (int i = 0; i < pr; ++i) set_match(f[i], f[i ^ 1]);
        set_match(xr, v);
        std::rotate(f.begin(), f.begin() + pr, f.end());
    }
    void augment(int u, int v) {
        for (;;) {
            int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }
    int get_lca(int u, int v) {
        for (++timer_; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis_[u] == timer_) return u;
            vis_[u] = timer_;
            u = st_[match_[u]];
            if (u) u = st_[pa_[u]];
        }
        return 0;
    }
    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= n_x_ && st_[b]) ++b;
        if (b > n_x_) ++n_x_;
        lab_[b] = 0;
        S_[b] = 0;
        match_[b] = match_[lca];
        auto &f = flower_[b];
        f.clear();
        f.push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            f.push_back(x);
            f.push_back(y = st_[match_[x]]);
            q_push(y);
        }
        std::reverse(f.begin() + 1, f.end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            f.push_back(x);
            f.push_back(y = st_[match_[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x_; ++x) g(b, x).w = g(x, b).w = 0;
        for (int x = 1; x <= n_; ++x) from(b, x) = 0;
        for (int xs : f) {
            for (int x = 1; x <= n_x_; ++x)
                if (g(b, x).w == 0 || e_delta(g(xs, x)) < e_delta(g(b, x))) {
                    g(b, x) = g(xs, x);
                    g(x, b) = g(x, xs);
                }
            for (int x = 1; x <= n_; ++x)
                if (from(xs, x)) from(b, x) = xs;
        }
        set_slack(b);
    }
    void expand_blossom(int b) {
        auto &f = flower_[b];
        for (int i : f) set_st(i, i);
        int xr = from(b, g(b, pa_[b]).u);
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = f[i], xns = f[i + 1];
            pa_[xs] = g(xns, xs).u;
            S_[xs] = 1;
            S_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        S_[xr] = 1;
        pa_[xr] = pa_[b];
        for (size_t i = pr + 1; i < f.size(); ++i) {
            S_[f[i]] = -1;
            set_slack(f[i]);
        }
        st_[b] = 0;
    }
    bool on_found_edge(const Edge &e) {
        int u = st_[e.u], v = st_[e.v];
        if (S_[v] == -1) {
            pa_[v] = e.u;
            S_[v] = 1;
            int nu = st_[match_[v]];
            slack_[v] = slack_[nu] = 0;
            S_[nu] = 0;
            q_push(nu);
        } else if (S_[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }
    bool matching() {
        std::fill(S_.begin() + 1, S_.begin() + n_x_ + 1, -1);
        std::fill(slack_.begin() + 1, slack_.begin() + n_x_ + 1, 0);
        q_.clear();
        for (int x = 1; x <= n_x_; ++x)
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                S_[x] = 0;
                q_push(x);
            }
        if (q_.empty()) return false;
        for (;;) {
            while (!q_.empty()) {
                int u = q_.front();
                q_.pop_front();
                if (S_[st_[u]] == 1) continue;
                for (int v = 1; v <= n_; ++v)
                    if (g(u, v).w > 0 && st_[u] != st_[v]) {
                        if (e_delta(g(u, v)) == 0) {
                            if (on_found_edge(g(u, v))) return true;
                        } else
                            update_slack(u, st_[v]);
                    }
            }
            int64_t d = kInf;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && S_[b] == 1) d = std::min(d, lab_[b] / 2);
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x]) {
                    if (S_[x] == -1)
                        d = std::min(d, e_delta(g(slack_[x], x)));
                    else if (S_[x] == 0)
                        d = std::min(d, e_delta(g(slack_[x], x)) / 2);
                }
            for (int u = 1; u <= n_; ++u) {
                if (S_[st_[u]] == 0) {
                    if (lab_[u] <= d) return false;
                    lab_[u] -= d;
                } else if (S_[st_[u]] == 1)
                    lab_[u] += d;
            }
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b) {
                    if (S_[b] == 0)
                        lab_[b] += d * 2;
                    else if (S_[b] == 1)
                        lab_[b] -= d * 2;
                }
            q_.clear();
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                    e_delta(g(slack_[x], x)) == 0)
                    if (on_found_edge(g(slack_[x], x))) return true;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && S_[b] == 1 && lab_[b] == 0) expand_blossom(b);
        }
    }

    int n_, cap_, n_x_ = 0, timer_ = 0;
    std::vector<Edge> g_;
    std::vector<int64_t> lab_;
    std::vector<int> match_, slack_, st_, pa_, S_, vis_;
    std::vector<std::vector<int>> flower_;
    std::vector<int> flower_from_;
    std::deque<int> q_;
};

void check_matrix(const std::vector<std::vector<int64_t>> &w) {
    size_t n = w.size();
    if (n % 2 != 0) throw std::invalid_argument("odd number of vertices");
    for (size_t i = 0; i < n; ++i) {
        if (w[i].size() != n) throw std::invalid_argument("weight matrix not square");
        for (size_t j = 0; j < n; ++j) {
            if (w[i][j] < 0) throw std::invalid_argument("negative weight");
            if (w[i][j] != w[j][i]) throw std::invalid_argument("weight matrix not symmetric");
        }
    }
}

} // namespace

std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<int64_t>> &w) {
    check_matrix(w);
    int n = int(w.size());
    if (n == 0) return {};
    // maximize (big - w): cardinality dominates, so the matching is perfect
    // and minimizes the original total weight
    int64_t w_max = 1;
    for (const auto &row : w)
        for (int64_t x : row) w_max = std::max(w_max, x);
    int64_t big = w_max * n + 1;
    Blossom bl(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) bl.set_weight(i + 1, j + 1, big - w[i][j]);
    auto mate1 = bl.solve();
    std::vector<int> mate(n, -1);
    for (int i = 1; i <= n; ++i) {
        if (mate1[i] == 0) throw std::logic_error("matching is not perfect");
        mate[i - 1] = mate1[i] - 1;
    }
    for (int i = 0; i < n; ++i)
        if (mate[i] == i || mate[mate[i]] != i) throw std::logic_error("matching inconsistent");
    return mate;
}

std::vector<int> min_weight_perfect_matching_exhaustive(const std::vector<std::vector<int64_t>> &w) {
    check_matrix(w);
    int n = int(w.size());
    if (n == 0) return {};
    if (n > 20) throw std::invalid_argument("exhaustive matcher limited to n <= 20");
    std::vector<int64_t> dp(size_t(1) << n, -1);
    std::vector<int> pick(size_t(1) << n, -1);
    dp[0] = 0;
    for (uint32_t mask = 1; mask < (uint32_t(1) << n); ++mask) {
        int i = 0;
        while (!(mask >> i & 1)) ++i;
        for (int j = i + 1; j < n; ++j) {
            if (!(mask >> j & 1)) continue;
            uint32_t rest = mask ^ (1u << i) ^ (1u << j);
            if (dp[rest] < 0) continue;
            int64_t cand = dp[rest] + w[i][j];
            if (dp[mask] < 0 || cand < dp[mask]) {
                dp[mask] = cand;
                pick[mask] = j;
            }
        }
    }
    std::vector<int> mate(n, -1);
    uint32_t mask = (uint32_t(1) << n) - 1;
    while (mask) {
        int i = 0;
        while (!(mask >> i & 1)) ++i;
        int j = pick[mask];
        mate[i] = j;
        mate[j] = i;
        mask ^= (1u << i) ^ (1u << j);
    }
    return mate;
}

int64_t matching_weight(const std::vector<std::vector<int64_t>> &w, const std::vector<int> &mate) {
    int64_t total = 0;
    for (size_t i = 0; i < mate.size(); ++i)
        if (int(i) < mate[i]) total += w[i][mate[i]];
    return total;
}

} // namespace sffcc
