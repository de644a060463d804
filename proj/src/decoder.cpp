#include "sffcc/decoder.hpp"

#include <json.hpp>
#include <map>
#include <queue>
#include <stdexcept>

#include "sffcc/gf2.hpp"
#include "sffcc/matching.hpp"

namespace sffcc {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

namespace {

// Reroute a logical slot set off the erased slots by multiplying checks into
// it; nullopt iff its erased support is not a GF(2) combination of the
// erased-slot restrictions of the checks (no erasure-free representative).
std::optional<std::vector<int>> reroute_logical(const SyndromeGraph &sg,
                                                const std::vector<int> &erased,
                                                const std::vector<int> &logical) {
    std::vector<uint8_t> in_logical(sg.n_slots, 0);
    for (int s : logical) in_logical[s] = 1;

    if (!erased.empty()) {
        // only checks touching erased slots can help; solve over erased-slot
        // coordinates
        std::vector<int> col(sg.n_slots, -1);
        for (size_t k = 0; k < erased.size(); ++k) col[erased[k]] = int(k);
        std::vector<int> cand;
        std::vector<uint8_t> seen(sg.checks.size(), 0);
        for (int s : erased)
            for (int c : sg.slot_checks[s])
                if (!seen[c]) {
                    seen[c] = 1;
                    cand.push_back(c);
                }
        Gf2Matrix rows(cand.size(), erased.size());
        for (size_t r = 0; r < cand.size(); ++r)
            for (int s : sg.checks[cand[r]].slots)
                if (col[s] >= 0) rows.row(r).flip(size_t(col[s]));
        BitVec target(erased.size());
        for (int s : erased)
            if (in_logical[s]) target.flip(size_t(col[s]));
        auto comb = rows.solve_row_combination(target);
        if (!comb) return std::nullopt;
        for (size_t r = 0; r < cand.size(); ++r)
            if (comb->get(r))
                for (int s : sg.checks[cand[r]].slots) in_logical[s] ^= 1;
    }

    std::vector<int> out;
    for (int s = 0; s < sg.n_slots; ++s)
        if (in_logical[s]) out.push_back(s);
    return out;
}

std::vector<int> erased_slots_of_sector(const SyndromeGraph &sg, int sector,
                                        const OutcomeAssignment &a) {
    std::vector<int> erased;
    for (int s = 0; s < sg.n_slots; ++s)
        if (sg.slot_sector[s] == sector && a.value[s] == OutcomeAssignment::kErased)
            erased.push_back(s);
    return erased;
}

} // namespace

std::optional<SupercellGraph> merge_supercells(const SyndromeGraph &sg, int sector,
                                               const OutcomeAssignment &a,
                                               const std::vector<int> &logical) {
    if (int(a.value.size()) != sg.n_slots) throw std::invalid_argument("assignment size mismatch");

    auto erased = erased_slots_of_sector(sg, sector, a);
    auto rerouted = reroute_logical(sg, erased, logical);
    if (!rerouted) return std::nullopt; // logical erasure

    UnionFind uf(int(sg.checks.size()));
    for (int s : erased) uf.unite(sg.slot_checks[s][0], sg.slot_checks[s][1]);

    SupercellGraph sc;
    sc.sector = sector;
    sc.cell_of_check.assign(sg.checks.size(), -1);
    for (size_t c = 0; c < sg.checks.size(); ++c) {
        if (sg.checks[c].sector != sector) continue;
        int root = uf.find(int(c));
        if (sc.cell_of_check[root] < 0) sc.cell_of_check[root] = sc.n_cells++;
        sc.cell_of_check[c] = sc.cell_of_check[root];
    }
    for (int s = 0; s < sg.n_slots; ++s)
        if (sg.slot_sector[s] == sector && a.value[s] != OutcomeAssignment::kErased)
            sc.slots.push_back(s);
    sc.logical = std::move(*rerouted);
    for (int s : sc.logical)
        if (a.value[s] == OutcomeAssignment::kErased)
            throw std::logic_error("rerouted logical still touches an erased slot");
    return sc;
}

std::vector<uint8_t> supercell_syndrome(const SyndromeGraph &sg, const SupercellGraph &sc,
                                        const OutcomeAssignment &a) {
    std::vector<uint8_t> defect(sc.n_cells, 0);
    for (int s : sc.slots) {
        if (a.value[s] != OutcomeAssignment::kMinus) continue;
        int c0 = sc.cell_of_check[sg.slot_checks[s][0]];
        int c1 = sc.cell_of_check[sg.slot_checks[s][1]];
        if (c0 != c1) {
            defect[c0] ^= 1;
            defect[c1] ^= 1;
        }
    }
    return defect;
}

std::vector<int> mwpm_decode(const SyndromeGraph &sg, const SupercellGraph &sc,
                             const std::vector<uint8_t> &defect) {
    std::vector<int> defects;
    for (int c = 0; c < sc.n_cells; ++c)
        if (defect[c]) defects.push_back(c);
    if (defects.empty()) return {};

    // adjacency over supercells through surviving slots
    std::vector<std::vector<std::pair<int, int>>> adj(sc.n_cells); // (cell, slot)
    for (int s : sc.slots) {
        int c0 = sc.cell_of_check[sg.slot_checks[s][0]];
        int c1 = sc.cell_of_check[sg.slot_checks[s][1]];
        if (c0 == c1) continue;
        adj[c0].push_back({c1, s});
        adj[c1].push_back({c0, s});
    }

    int D = int(defects.size());
    const int64_t unreachable = int64_t(sc.n_cells) + 1;
    std::vector<std::vector<int>> dist(D), pred(D); // pred = slot into each cell
    for (int d = 0; d < D; ++d) {
        dist[d].assign(sc.n_cells, -1);
        pred[d].assign(sc.n_cells, -1);
        std::queue<int> q;
        dist[d][defects[d]] = 0;
        q.push(defects[d]);
        while (!q.empty()) {
            int c = q.front();
            q.pop();
            for (auto [nc, s] : adj[c])
                if (dist[d][nc] < 0) {
                    dist[d][nc] = dist[d][c] + 1;
                    pred[d][nc] = s;
                    q.push(nc);
                }
        }
    }

    std::vector<std::vector<int64_t>> w(D, std::vector<int64_t>(D, 0));
    for (int i = 0; i < D; ++i)
        for (int j = i + 1; j < D; ++j) {
            int dij = dist[i][defects[j]];
            w[i][j] = w[j][i] = dij < 0 ? unreachable * unreachable : dij;
        }
    if (D % 2 != 0) throw std::logic_error("odd number of defects");
    auto mate = min_weight_perfect_matching(w);

    std::vector<uint8_t> corr(sg.n_slots, 0);
    for (int i = 0; i < D; ++i) {
        int j = mate[i];
        if (j < i) continue;
        if (dist[i][defects[j]] < 0)
            throw std::logic_error("defects matched across disconnected components");
        // walk back from defect j to defect i along the BFS tree of i
        for (int c = defects[j]; c != defects[i];) {
            int s = pred[i][c];
            corr[s] ^= 1;
            int c0 = sc.cell_of_check[sg.slot_checks[s][0]];
            int c1 = sc.cell_of_check[sg.slot_checks[s][1]];
            c = (c == c0) ? c1 : c0;
        }
    }
    std::vector<int> out;
    for (int s = 0; s < sg.n_slots; ++s)
        if (corr[s]) out.push_back(s);
    return out;
}

Verdict adjudicate(const std::vector<int> &correction, const std::vector<int> &error_slots,
                   const std::vector<int> &logical) {
    std::vector<uint8_t> in_logical;
    int max_slot = -1;
    for (int s : logical) max_slot = std::max(max_slot, s);
    for (int s : correction) max_slot = std::max(max_slot, s);
    for (int s : error_slots) max_slot = std::max(max_slot, s);
    in_logical.assign(size_t(max_slot + 1), 0);
    for (int s : logical) in_logical[s] = 1;
    int parity = 0;
    for (int s : correction) parity ^= in_logical[s];
    for (int s : error_slots) parity ^= in_logical[s];
    return parity ? Verdict::LogicalError : Verdict::Success;
}

Verdict decode(const SyndromeGraph &sg, const OutcomeAssignment &a, std::string *dump_json) {
    // A correction-plus-error loop wrapping either spatial torus direction
    // flips the transverse membrane, so every sector tracks both spatial
    // sheets. Erasure is checked first: all sheets of both sectors must admit
    // erasure-free representatives.
    std::array<std::optional<SupercellGraph>, 2> sc;
    std::array<std::array<std::optional<std::vector<int>>, 2>, 2> sheets;
    for (int sec = 0; sec < 2; ++sec) {
        sc[sec] = merge_supercells(sg, sec, a, sg.logicals[sec].space_u);
        bool ok = sc[sec].has_value();
        if (ok) {
            auto erased = erased_slots_of_sector(sg, sec, a);
            sheets[sec][0] = sc[sec]->logical;
            sheets[sec][1] = reroute_logical(sg, erased, sg.logicals[sec].space_v);
            ok = sheets[sec][1].has_value();
        }
        if (!ok) {
            if (dump_json) {
                nlohmann::json j;
                j["verdict"] = "logical_erasure";
                j["sector"] = sec;
                *dump_json = j.dump();
            }
            return Verdict::LogicalErasure;
        }
    }

    Verdict verdict = Verdict::Success;
    nlohmann::json dump;
    for (int sec = 0; sec < 2; ++sec) {
        auto defect = supercell_syndrome(sg, *sc[sec], a);
        auto correction = mwpm_decode(sg, *sc[sec], defect);
        std::vector<int> error;
        for (int s : sc[sec]->slots)
            if (a.value[s] == OutcomeAssignment::kMinus) error.push_back(s);
        Verdict v = Verdict::Success;
        for (const auto &sheet : sheets[sec])
            if (adjudicate(correction, error, *sheet) == Verdict::LogicalError)
                v = Verdict::LogicalError;
        if (v == Verdict::LogicalError) verdict = Verdict::LogicalError;
        if (dump_json) {
            auto &js = dump["sectors"][sec];
            std::vector<int> defects;
            for (int c = 0; c < sc[sec]->n_cells; ++c)
                if (defect[c]) defects.push_back(c);
            js["defects"] = defects;
            js["erased_slots"] = erased_slots_of_sector(sg, sec, a);
            js["error_slots"] = error;
            js["correction"] = correction;
            js["verdict"] = v == Verdict::LogicalError ? "logical_error" : "success";
        }
    }
    if (dump_json) {
        dump["verdict"] = verdict == Verdict::LogicalError ? "logical_error" : "success";
        *dump_json = dump.dump();
    }
    return verdict;
}

} // namespace sffcc
