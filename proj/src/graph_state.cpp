#include "sffcc/graph_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace sffcc {

void GraphState::add_vertex(int v) { adj_.try_emplace(v); }

void GraphState::add_edge(int a, int b) {
    if (a == b) throw std::invalid_argument("self-loop in graph state");
    add_vertex(a);
    add_vertex(b);
    adj_[a].insert(b);
    adj_[b].insert(a);
}

void GraphState::remove_vertex(int v) {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw std::invalid_argument("remove_vertex: no such vertex");
    for (int u : it->second) adj_[u].erase(v);
    adj_.erase(it);
    hadamard_.erase(v);
}

void GraphState::remove_edge(int a, int b) {
    if (!has_edge(a, b)) throw std::invalid_argument("remove_edge: no such edge");
    adj_[a].erase(b);
    adj_[b].erase(a);
}

bool GraphState::has_edge(int a, int b) const {
    auto it = adj_.find(a);
    return it != adj_.end() && it->second.count(b) != 0;
}

const std::set<int> &GraphState::neighbors(int v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw std::invalid_argument("neighbors: no such vertex");
    return it->second;
}

std::vector<int> GraphState::vertices() const {
    std::vector<int> vs;
    vs.reserve(adj_.size());
    for (const auto &[v, nbrs] : adj_) vs.push_back(v);
    return vs;
}

std::vector<std::pair<int, int>> GraphState::edges() const {
    std::vector<std::pair<int, int>> es;
    for (const auto &[v, nbrs] : adj_)
        for (int u : nbrs)
            if (v < u) es.emplace_back(v, u);
    return es;
}

void GraphState::set_hadamard(int v, bool on) {
    if (!has_vertex(v)) throw std::invalid_argument("set_hadamard: no such vertex");
    if (on)
        hadamard_.insert(v);
    else
        hadamard_.erase(v);
}

int GraphState::fresh_id() const { return adj_.empty() ? 0 : adj_.rbegin()->first + 1; }

std::map<int, size_t> GraphState::qubit_index() const {
    std::map<int, size_t> idx;
    size_t i = 0;
    for (const auto &[v, nbrs] : adj_) idx[v] = i++;
    return idx;
}

StabilizerState GraphState::to_state() const {
    auto idx = qubit_index();
    StabilizerState st(idx.size());
    for (size_t q = 0; q < idx.size(); ++q) st.apply_h(q);
    for (auto [a, b] : edges()) st.apply_cz(idx.at(a), idx.at(b));
    for (int v : hadamard_) st.apply_h(idx.at(v));
    return st;
}

std::string GraphState::to_json() const {
    nlohmann::json j;
    j["vertices"] = vertices();
    auto &je = j["edges"] = nlohmann::json::array();
    for (auto [a, b] : edges()) je.push_back({a, b});
    j["local_hadamards"] = std::vector<int>(hadamard_.begin(), hadamard_.end());
    return j.dump();
}

GraphState GraphState::from_json(const std::string &text) {
    auto j = nlohmann::json::parse(text);
    GraphState g;
    for (int v : j.at("vertices")) g.add_vertex(v);
    for (const auto &e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    for (int v : j.at("local_hadamards")) g.set_hadamard(v, true);
    return g;
}

DecompositionResult edge_split(const GraphState &g, int a, int b) {
    if (!g.has_edge(a, b)) throw std::invalid_argument("edge_split: no such edge");
    GraphState out = g;
    int ap = out.fresh_id();
    int bp = ap + 1;
    out.add_vertex(ap);
    out.add_vertex(bp);
    for (int u : g.neighbors(a))
        if (u != b) out.add_edge(ap, u);
    for (int u : g.neighbors(b))
        if (u != a) out.add_edge(bp, u);
    out.remove_vertex(a);
    out.remove_vertex(b);
    DecompositionResult r;
    r.resource_graphs.push_back(std::move(out));
    r.fusions.push_back({ap, bp, FusionBasis::XZ_ZX});
    r.provenance.push_back({ap, a, 0});
    r.provenance.push_back({bp, b, 1});
    return r;
}

DecompositionResult node_split(const GraphState &g, int v, const std::set<int> &part_a,
                               const std::set<int> &part_b) {
    if (!g.has_vertex(v)) throw std::invalid_argument("node_split: no such vertex");
    const auto &nbrs = g.neighbors(v);
    std::set<int> joined = part_a;
    joined.insert(part_b.begin(), part_b.end());
    if (joined != nbrs || joined.size() != part_a.size() + part_b.size())
        throw std::invalid_argument("node_split: parts must partition the neighborhood");
    GraphState out = g;
    int va = out.fresh_id();
    int vb = va + 1;
    out.add_vertex(va);
    out.add_vertex(vb);
    for (int u : part_a) out.add_edge(va, u);
    for (int u : part_b) out.add_edge(vb, u);
    out.remove_vertex(v);
    DecompositionResult r;
    r.resource_graphs.push_back(std::move(out));
    r.fusions.push_back({va, vb, FusionBasis::XX_ZZ});
    r.provenance.push_back({va, v, 0});
    r.provenance.push_back({vb, v, 1});
    return r;
}

GraphState measure_x_rewrite(const GraphState &g, int v) {
    if (!g.has_vertex(v)) throw std::invalid_argument("measure_x_rewrite: no such vertex");
    if (g.hadamard(v))
        throw std::invalid_argument("measure_x_rewrite: measured vertex carries a Hadamard flag");
    GraphState out = g;
    const auto &nbrs = g.neighbors(v);
    if (nbrs.empty()) {
        out.remove_vertex(v);
        return out;
    }
    if (nbrs.size() == 1) {
        // X on a leaf: the neighbor decouples into a Z eigenstate.
        int u = *nbrs.begin();
        if (g.hadamard(u))
            throw std::invalid_argument("measure_x_rewrite: flagged neighbor unsupported");
        out.remove_vertex(v);
        for (int w : std::vector<int>(out.neighbors(u).begin(), out.neighbors(u).end()))
            out.remove_edge(u, w);
        out.set_hadamard(u, true);
        return out;
    }
    // Find an unflagged leaf neighbor to absorb the connectivity.
    int special = -1;
    for (int u : nbrs) {
        if (g.degree(u) == 1 && !g.hadamard(u)) {
            special = u;
            break;
        }
    }
    if (special < 0)
        throw std::invalid_argument("measure_x_rewrite: no closed form (no unflagged leaf neighbor)");
    for (int u : nbrs)
        if (u != special) out.add_edge(special, u);
    out.remove_vertex(v);
    out.set_hadamard(special, true);
    return out;
}

StabilizerGroup measure_x_tableau(const GraphState &g, int v) {
    auto idx = g.qubit_index();
    StabilizerState st = g.to_state();
    PauliOperator xv(idx.size());
    xv.set_pauli(idx.at(v), 1);
    st.measure(xv, +1);
    std::vector<bool> keep(idx.size(), true);
    keep[idx.at(v)] = false;
    return st.stabilizer_group().restricted_to(keep);
}

namespace {

PauliOperator op_on(const std::map<int, size_t> &idx, std::initializer_list<std::pair<int, uint8_t>> ps) {
    PauliOperator p(idx.size());
    for (auto [v, pauli] : ps) p.set_pauli(idx.at(v), pauli);
    return p;
}

std::vector<PauliOperator> fusion_operators(const FusionSpec &f, const std::map<int, size_t> &idx) {
    switch (f.basis) {
        case FusionBasis::XZ_ZX:
            return {op_on(idx, {{f.qubit_a, 1}, {f.qubit_b, 3}}),
                    op_on(idx, {{f.qubit_a, 3}, {f.qubit_b, 1}})};
        case FusionBasis::XX_ZZ:
            return {op_on(idx, {{f.qubit_a, 1}, {f.qubit_b, 1}}),
                    op_on(idx, {{f.qubit_a, 3}, {f.qubit_b, 3}})};
        case FusionBasis::ZZ_XX_rot:
            return {op_on(idx, {{f.qubit_a, 3}, {f.qubit_b, 3}}),
                    op_on(idx, {{f.qubit_a, 1}, {f.qubit_b, 1}})};
    }
    throw std::logic_error("unreachable");
}

struct BranchSummary {
    // Probability-weighted distribution over sign-stripped canonical terminal
    // groups on the surviving qubits. Nontrivial outcome branches differ from
    // the all-+1 branch only by a Pauli frame on the survivors, so groups are
    // compared modulo signs branch-wise...
    std::map<std::string, double> bits_dist;
    // ...and sign-exactly on the all-+1 anchor branch.
    std::optional<std::string> plus_branch;
};

// Enumerate every outcome branch of the measurement sequence. Each random
// measurement halves the branch weight; deterministic outcomes keep it, so
// the distribution is insensitive to how many random bits each side draws.
BranchSummary branch_groups(const StabilizerState &init,
                            const std::vector<PauliOperator> &measurements,
                            const std::vector<bool> &keep) {
    if (measurements.size() > 20)
        throw std::invalid_argument("too many measurements for exhaustive branch enumeration");
    BranchSummary out;
    size_t branches = size_t(1) << measurements.size();
    for (size_t mask = 0; mask < branches; ++mask) {
        StabilizerState st = init;
        bool feasible = true;
        double weight = 1.0;
        for (size_t i = 0; i < measurements.size(); ++i) {
            int want = (mask >> i) & 1 ? -1 : +1;
            auto det = st.deterministic_outcome(measurements[i]);
            if (det && *det != want) {
                feasible = false;
                break;
            }
            if (!det) weight *= 0.5;
            st.measure(measurements[i], want);
        }
        if (!feasible) continue;
        StabilizerGroup grp = st.stabilizer_group().restricted_to(keep);
        grp.canonicalize();
        std::string exact, bits;
        for (const auto &gen : grp.generators) {
            exact += gen.str() + ";";
            bits += gen.str().substr(1) + ";";
        }
        out.bits_dist[bits] += weight;
        if (mask == 0) out.plus_branch = exact;
    }
    return out;
}

} // namespace

bool verify_equivalence(const GraphState &lhs, const std::vector<int> &lhs_x_measured,
                        const DecompositionResult &rhs) {
    // Surviving qubit ids must coincide on both sides.
    std::set<int> lhs_survivors;
    for (int v : lhs.vertices()) lhs_survivors.insert(v);
    for (int v : lhs_x_measured) lhs_survivors.erase(v);

    GraphState rhs_union;
    for (const auto &g : rhs.resource_graphs) {
        for (int v : g.vertices()) {
            if (rhs_union.has_vertex(v)) return false; // resource graphs must be disjoint
            rhs_union.add_vertex(v);
            if (g.hadamard(v)) rhs_union.set_hadamard(v, true);
        }
        for (auto [a, b] : g.edges()) rhs_union.add_edge(a, b);
    }
    std::set<int> rhs_survivors;
    for (int v : rhs_union.vertices()) rhs_survivors.insert(v);
    for (const auto &f : rhs.fusions) {
        rhs_survivors.erase(f.qubit_a);
        rhs_survivors.erase(f.qubit_b);
    }
    for (int v : rhs.virtual_x_measurements) rhs_survivors.erase(v);
    if (lhs_survivors != rhs_survivors) return false;

    auto lhs_idx = lhs.qubit_index();
    std::vector<PauliOperator> lhs_meas;
    for (int v : lhs_x_measured) lhs_meas.push_back(op_on(lhs_idx, {{v, 1}}));
    std::vector<bool> lhs_keep(lhs_idx.size(), true);
    for (int v : lhs_x_measured) lhs_keep[lhs_idx.at(v)] = false;

    auto rhs_idx = rhs_union.qubit_index();
    std::vector<PauliOperator> rhs_meas;
    for (const auto &f : rhs.fusions)
        for (auto &op : fusion_operators(f, rhs_idx)) rhs_meas.push_back(op);
    for (int v : rhs.virtual_x_measurements) rhs_meas.push_back(op_on(rhs_idx, {{v, 1}}));
    std::vector<bool> rhs_keep(rhs_idx.size(), true);
    for (const auto &[v, q] : rhs_idx)
        if (rhs_survivors.count(v) == 0) rhs_keep[q] = false;

    // Both restrictions enumerate surviving qubits in the same (sorted id)
    // order, so the canonical keys are directly comparable.
    auto lhs_sum = branch_groups(lhs.to_state(), lhs_meas, lhs_keep);
    auto rhs_sum = branch_groups(rhs_union.to_state(), rhs_meas, rhs_keep);
    if (lhs_sum.plus_branch != rhs_sum.plus_branch) return false;
    if (lhs_sum.bits_dist.size() != rhs_sum.bits_dist.size()) return false;
    for (const auto &[key, w] : lhs_sum.bits_dist) {
        auto it = rhs_sum.bits_dist.find(key);
        if (it == rhs_sum.bits_dist.end() || std::abs(it->second - w) > 1e-12) return false;
    }
    return true;
}

} // namespace sffcc
