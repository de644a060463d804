#include "sffcc/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <json.hpp>
#include <map>
#include <stdexcept>

#include "sffcc/gf2.hpp"

namespace sffcc {

namespace {

int floordiv(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }

int mod(int a, int b) { return ((a % b) + b) % b; }

// Boundary edges of face F(i,j) as (di, dj, type) offsets, in cyclic order.
// Roles {1,3,5} carry color c+1 and roles {0,2,4} color c+2 (c = face color).
constexpr int kFaceEdge[6][3] = {{0, 0, 0}, {1, 0, 1}, {1, 0, 2},
                                 {1, -1, 0}, {1, -1, 1}, {0, 0, 2}};

// The fusion on edge (ci, cj, type) at `layer`; throws if that bond is not
// the active one for the layer's color.
int fusion_at(const FusionNetwork &net, int ci, int cj, int type, int layer) {
    layer = mod(layer, net.layers());
    int a = net.vertex_id(ci, cj, 0);
    int f = net.fusion_of_photon(net.photon_id(a, layer));
    const auto &fu = net.fusions()[f];
    auto c = net.vertex_coord(a);
    if (fu.cell_i != c[0] || fu.cell_j != c[1] || fu.edge_type != type)
        throw std::logic_error("edge inactive at requested layer");
    return f;
}

PauliOperator slot_op(const FusionNetwork &net, int slot) {
    const auto &fu = net.fusions()[slot / 2];
    PauliOperator p(net.n_photons());
    int letter = (slot % 2 == 0) ? 1 : 3; // XX or ZZ
    p.set_pauli(fu.photon_a, letter);
    p.set_pauli(fu.photon_b, letter);
    return p;
}

// Ring stabilizer generator t of ring r: Z_t X_{t-1} X_{t+1} in ring-local
// coordinates (all photons Hadamard-flagged). `unflag` drops the flag on one
// layer for negative controls.
PauliOperator ring_gen(const FusionNetwork &net, int r, int t, int unflag = -1) {
    int n3 = net.layers();
    PauliOperator p(net.n_photons());
    for (int d : {-1, 0, +1}) {
        int q = mod(t + d, n3);
        int letter = (d == 0) ? 3 : 1;
        if (q == unflag) letter = 4 - letter; // X <-> Z
        p.set_pauli(net.photon_id(r, q), letter);
    }
    return p;
}

// Slot pattern entry relative to a check anchor: face-edge role, layer
// offset, and outcome type (0 = XX, 1 = ZZ).
struct TemplateSlot {
    int role, dt, type;
    auto operator<=>(const TemplateSlot &) const = default;
};

// Derive the check template from first principles on a fixed small instance:
// for one face of each color, intersect the ring groups of the six boundary
// vertices with the group generated by the window's fusion operators, then
// enumerate the resulting subcode for minimal-weight elements. The survivors
// of weight 12 must all be layer translates of a single pattern, identical
// across colors once expressed in face-relative roles.
std::vector<TemplateSlot> derive_check_template() {
    FusionNetwork net(4);
    int n3 = net.layers();
    std::vector<TemplateSlot> tmpl;
    for (int c = 0; c < 3; ++c) {
        int fi = 5 + c, fj = 2; // face color (fi - fj) mod 3 = c
        // window = the rings of the six face vertices
        std::array<int, 6> fv = {net.vertex_id(fi, fj, 0),         net.vertex_id(fi, fj, 1),
                                 net.vertex_id(fi + 1, fj, 0),     net.vertex_id(fi + 1, fj - 1, 1),
                                 net.vertex_id(fi + 1, fj - 1, 0), net.vertex_id(fi, fj - 1, 1)};

        std::map<int, int> qidx;
        for (int k = 0; k < 6; ++k)
            for (int t = 0; t < n3; ++t) qidx[net.photon_id(fv[k], t)] = k * n3 + t;
        size_t nq = qidx.size();

        std::vector<PauliOperator> rgens;
        for (int k = 0; k < 6; ++k)
            for (int t = 0; t < n3; ++t) {
                PauliOperator p(nq);
                p.set_pauli(k * n3 + t, 3);
                p.set_pauli(k * n3 + mod(t - 1, n3), 1);
                p.set_pauli(k * n3 + mod(t + 1, n3), 1);
                rgens.push_back(p);
            }
        std::vector<PauliOperator> fgens;
        std::vector<int> fid; // window fusion -> global fusion
        for (int f = 0; f < net.n_fusions(); ++f) {
            const auto &fu = net.fusions()[f];
            auto ia = qidx.find(fu.photon_a), ib = qidx.find(fu.photon_b);
            if (ia == qidx.end() || ib == qidx.end()) continue;
            for (int letter : {1, 3}) {
                PauliOperator p(nq);
                p.set_pauli(ia->second, letter);
                p.set_pauli(ib->second, letter);
                fgens.push_back(p);
            }
            fid.push_back(f);
        }

        auto C = StabilizerGroup::intersection(StabilizerGroup(rgens), StabilizerGroup(fgens));
        size_t dim = C.generators.size();
        if (dim == 0 || dim > 16) throw std::logic_error("unexpected window subcode dimension");

        // express C in slot coordinates
        Gf2Matrix Fm(fgens.size(), 2 * nq);
        for (size_t r = 0; r < fgens.size(); ++r)
            for (size_t q = 0; q < nq; ++q) {
                Fm.row(r).set(q, fgens[r].x_bits.get(q));
                Fm.row(r).set(nq + q, fgens[r].z_bits.get(q));
            }
        std::vector<BitVec> basis;
        for (const auto &g : C.generators) {
            BitVec v(2 * nq);
            for (size_t q = 0; q < nq; ++q) {
                v.set(q, g.x_bits.get(q));
                v.set(nq + q, g.z_bits.get(q));
            }
            auto comb = Fm.solve_row_combination(v);
            if (!comb) throw std::logic_error("subcode element outside fusion span");
            basis.push_back(*comb);
        }

        // face-edge identity -> role
        std::map<std::array<int, 3>, int> role_of;
        for (int k = 0; k < 6; ++k) {
            const int *e = kFaceEdge[k];
            auto cc = net.vertex_coord(net.vertex_id(fi + e[0], fj + e[1], 0));
            role_of[{cc[0], cc[1], e[2]}] = k;
        }

        int found = 0;
        for (uint64_t mask = 1; mask < (uint64_t(1) << dim); ++mask) {
            BitVec v(fgens.size());
            for (size_t b = 0; b < dim; ++b)
                if (mask >> b & 1) v.xor_with(basis[b]);
            if (v.popcount() != 12) continue;
            // convert to (role, layer, type), locate the anchor, normalize
            std::vector<TemplateSlot> cur;
            int anchor = -1;
            for (size_t g = 0; g < fgens.size(); ++g) {
                if (!v.get(g)) continue;
                const auto &fu = net.fusions()[fid[g / 2]];
                auto it = role_of.find({fu.cell_i, fu.cell_j, fu.edge_type});
                if (it == role_of.end()) throw std::logic_error("check slot off the face boundary");
                int type = int(g % 2);
                cur.push_back({it->second, fu.layer, type});
                if (type == 0 && fu.layer % 3 == (c + 1) % 3) {
                    if (anchor >= 0 && anchor != fu.layer)
                        throw std::logic_error("ambiguous check anchor");
                    anchor = fu.layer;
                }
            }
            if (anchor < 0) throw std::logic_error("no check anchor found");
            for (auto &s : cur) {
                s.dt = mod(s.dt - anchor, n3);
                if (s.dt >= 6) throw std::logic_error("check spans more than 6 layers");
            }
            std::sort(cur.begin(), cur.end());
            if (tmpl.empty())
                tmpl = cur;
            else if (cur != tmpl)
                throw std::logic_error("check template not translation covariant");
            ++found;
        }
        if (found != net.L()) throw std::logic_error("unexpected number of face checks");
    }
    return tmpl;
}

const std::vector<TemplateSlot> &check_template() {
    static const std::vector<TemplateSlot> tmpl = derive_check_template();
    return tmpl;
}

// Exact membership of a slot set's Pauli product in the resource group R
// (tensor product of the ring groups), including the sign. Returns the
// product operator through `out` for reuse.
bool product_in_rings(const FusionNetwork &net, const std::vector<int> &slots,
                      PauliOperator &out) {
    int n3 = net.layers();
    PauliOperator lam(net.n_photons());
    for (int s : slots) lam.multiply_inplace(slot_op(net, s));
    // Per ring, the only candidate combination has a_t = z_t; its x-bits must
    // match and the signed product must reproduce lam exactly.
    PauliOperator rec(net.n_photons());
    for (int r = 0; r < net.n_vertices(); ++r) {
        for (int t = 0; t < n3; ++t) {
            bool xt = lam.x_bits.get(net.photon_id(r, t));
            bool need = lam.z_bits.get(net.photon_id(r, mod(t - 1, n3))) ^
                        lam.z_bits.get(net.photon_id(r, mod(t + 1, n3)));
            if (xt != need) return false;
            if (lam.z_bits.get(net.photon_id(r, t))) rec.multiply_inplace(ring_gen(net, r, t));
        }
    }
    out = lam;
    return rec == lam;
}

} // namespace

FusionNetwork::FusionNetwork(int L) : L_(L) {
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("L must be even and >= 2");
    photon_fusion_.assign(n_photons(), -1);
    for (int t = 0; t < layers(); ++t) {
        int color = t % 3;
        for (int i = 0; i < 3 * L_; ++i) {
            for (int j = 0; j < L_; ++j) {
                for (int type = 0; type < 3; ++type) {
                    // Bond colors: type 0 -> i-j-1, 1 -> i-j, 2 -> i-j+1.
                    if (mod(i - j - 1 + type, 3) != color) continue;
                    int a = vertex_id(i, j, 0);
                    int b = type == 0   ? vertex_id(i, j, 1)
                            : type == 1 ? vertex_id(i - 1, j, 1)
                                        : vertex_id(i, j - 1, 1);
                    Fusion f{photon_id(a, t), photon_id(b, t), t, i, j, type, color};
                    photon_fusion_[f.photon_a] = int(fusions_.size());
                    photon_fusion_[f.photon_b] = int(fusions_.size());
                    fusions_.push_back(f);
                }
            }
        }
    }
    for (int p = 0; p < n_photons(); ++p)
        if (photon_fusion_[p] < 0) throw std::logic_error("photon without fusion");
}

int FusionNetwork::vertex_id(int i, int j, int s) const {
    int k = floordiv(j, L_);
    j -= k * L_;
    i = mod(i - k * L_, 3 * L_);
    return (i * L_ + j) * 2 + s;
}

std::array<int, 3> FusionNetwork::vertex_coord(int v) const {
    int s = v % 2;
    int cell = v / 2;
    return {cell / L_, cell % L_, s};
}

std::array<int, 3> FusionNetwork::neighbors_by_color(int v) const {
    auto [i, j, s] = vertex_coord(v);
    std::array<int, 3> out{};
    if (s == 0) {
        out[mod(i - j - 1, 3)] = vertex_id(i, j, 1);
        out[mod(i - j, 3)] = vertex_id(i - 1, j, 1);
        out[mod(i - j + 1, 3)] = vertex_id(i, j - 1, 1);
    } else {
        out[mod(i - j - 1, 3)] = vertex_id(i, j, 0);
        out[mod(i - j + 1, 3)] = vertex_id(i + 1, j, 0);
        out[mod(i - j, 3)] = vertex_id(i, j + 1, 0);
    }
    return out;
}

GraphState FusionNetwork::ring_graph() const {
    GraphState g;
    int n = layers();
    for (int t = 0; t < n; ++t) {
        g.add_vertex(t);
        g.set_hadamard(t, true);
    }
    for (int t = 0; t < n; ++t) g.add_edge(t, (t + 1) % n);
    return g;
}

FusionNetwork build_sffcc_network(int L) { return FusionNetwork(L); }

SyndromeGraph derive_syndrome_graph(const FusionNetwork &net) {
    const auto &tmpl = check_template();
    int L = net.L(), n3 = net.layers();
    SyndromeGraph sg;
    sg.L = L;
    sg.n_slots = net.n_slots();

    for (int fi = 0; fi < 3 * L; ++fi)
        for (int fj = 0; fj < L; ++fj) {
            int c = mod(fi - fj, 3);
            for (int k = 0; k < L; ++k) {
                int t0 = mod(c + 1, 3) + 3 * k;
                SyndromeGraph::Check ck{{}, fi, fj, t0, t0 % 2};
                for (size_t s = 0; s < tmpl.size(); ++s) {
                    const auto &ts = tmpl[s];
                    const int *e = kFaceEdge[ts.role];
                    int f = fusion_at(net, fi + e[0], fj + e[1], e[2], t0 + ts.dt);
                    ck.slots[s] = 2 * f + ts.type;
                }
                sg.checks.push_back(ck);
            }
        }

    // incidence: every slot in exactly two checks, both of one sector
    std::vector<std::vector<int>> inc(sg.n_slots);
    for (size_t ci = 0; ci < sg.checks.size(); ++ci)
        for (int s : sg.checks[ci].slots) inc[s].push_back(int(ci));
    sg.slot_checks.resize(sg.n_slots);
    sg.slot_sector.resize(sg.n_slots);
    for (int s = 0; s < sg.n_slots; ++s) {
        if (inc[s].size() != 2) throw std::logic_error("slot not in exactly two checks");
        sg.slot_checks[s] = {inc[s][0], inc[s][1]};
        int sec = sg.checks[inc[s][0]].sector;
        if (sg.checks[inc[s][1]].sector != sec) throw std::logic_error("slot straddles sectors");
        sg.slot_sector[s] = sec;
    }

    // Logical correlation sheets. The ring relation x_t = z_{t-1} xor z_{t+1}
    // admits spatial membranes over any bond cut whose adjacent vertices each
    // have exactly two cut bonds of distinct colors: take those bonds' XX
    // outcomes at active layers of the sector parity and ZZ outcomes at the
    // opposite parity. The cuts must close on the torus, whose identification
    // (i,j) ~ (i+L,j+L) preserves i mod L and j mod L: bonds {type 0, type 2}
    // of cells with i = 0 mod L and {type 0, type 1} of cells with j = 0 mod L
    // wrap the two spatial directions.
    auto sheet = [&](const std::vector<std::array<int, 3>> &bonds, int sector) {
        std::vector<int> slots;
        for (const auto &[bi, bj, type] : bonds) {
            int ce = mod(bi - bj - 1 + type, 3);
            for (int t = ce; t < n3; t += 3) {
                int f = fusion_at(net, bi, bj, type, t);
                slots.push_back(t % 2 == sector ? FusionNetwork::xx_slot(f)
                                                : FusionNetwork::zz_slot(f));
            }
        }
        return slots;
    };
    for (int sec = 0; sec < 2; ++sec) {
        auto &lg = sg.logicals[sec];
        std::vector<std::array<int, 3>> cut_u, cut_v;
        for (int i = 0; i < 3 * L; i += L)
            for (int j = 0; j < L; ++j) {
                cut_u.push_back({i, j, 0});
                cut_u.push_back({i, j, 2});
            }
        for (int i = 0; i < 3 * L; ++i) {
            cut_v.push_back({i, 0, 0});
            cut_v.push_back({i, 0, 1});
        }
        lg.space_u = sheet(cut_u, sec);
        lg.space_v = sheet(cut_v, sec);
    }

    // First-principles self-check at every L: each check and logical, as a
    // product of its slot operators, must be a +1 element of the resource
    // group, hence a surviving stabilizer. Logicals must stay in their sector.
    PauliOperator prod(0);
    for (size_t ci = 0; ci < sg.checks.size(); ++ci) {
        std::vector<int> slots(sg.checks[ci].slots.begin(), sg.checks[ci].slots.end());
        if (!product_in_rings(net, slots, prod) || prod.neg)
            throw std::logic_error("check is not a +1 resource-group element");
    }
    for (int sec = 0; sec < 2; ++sec)
        for (const auto *lg : {&sg.logicals[sec].space_u, &sg.logicals[sec].space_v}) {
            if (!product_in_rings(net, *lg, prod) || prod.neg)
                throw std::logic_error("logical is not a +1 resource-group element");
            for (int s : *lg)
                if (sg.slot_sector[s] != sec) throw std::logic_error("logical leaves its sector");
        }

    return sg;
}

std::string SyndromeGraph::to_json() const {
    nlohmann::json j;
    j["L"] = L;
    j["n_slots"] = n_slots;
    auto &jc = j["checks"] = nlohmann::json::array();
    for (const auto &c : checks)
        jc.push_back({{"face", {c.face_i, c.face_j}},
                      {"anchor_layer", c.anchor_layer},
                      {"sector", c.sector},
                      {"slots", c.slots}});
    auto &js = j["slots"] = nlohmann::json::array();
    for (int s = 0; s < n_slots; ++s)
        js.push_back({{"fusion", s / 2},
                      {"type", s % 2 ? "ZZ" : "XX"},
                      {"sector", slot_sector[s]},
                      {"checks", slot_checks[s]}});
    for (int sec = 0; sec < 2; ++sec) {
        auto &jl = j["logicals"][sec == 0 ? "primal" : "dual"];
        jl["space_u"] = logicals[sec].space_u;
        jl["space_v"] = logicals[sec].space_v;
    }
    return j.dump();
}

VerifyReport verify_small_instance(const FusionNetwork &net, const SyndromeGraph &sg,
                                   const VerifyOptions &opts) {
    if (net.n_photons() > 256)
        return {false, "instance too large for the exhaustive oracle"};
    size_t nq = net.n_photons();
    int n3 = net.layers();

    std::vector<PauliOperator> rgens, fgens;
    for (int r = 0; r < net.n_vertices(); ++r)
        for (int t = 0; t < n3; ++t)
            rgens.push_back(ring_gen(net, r, t,
                                     r == opts.drop_hadamard_ring ? opts.drop_hadamard_layer : -1));
    for (int f = 0; f < net.n_fusions(); ++f) {
        const auto &fu = net.fusions()[f];
        for (int k = 0; k < 2; ++k) {
            PauliOperator p(nq);
            if (f == opts.unrotate_fusion) { // {XZ, ZX} instead of {XX, ZZ}
                p.set_pauli(fu.photon_a, k ? 3 : 1);
                p.set_pauli(fu.photon_b, k ? 1 : 3);
            } else {
                p.set_pauli(fu.photon_a, k ? 3 : 1);
                p.set_pauli(fu.photon_b, k ? 3 : 1);
            }
            fgens.push_back(p);
        }
    }
    StabilizerGroup F(fgens);
    auto C = StabilizerGroup::intersection(StabilizerGroup(rgens), F);

    auto slots_to_op = [&](const std::vector<int> &slots) {
        PauliOperator p(nq);
        for (int s : slots) p.multiply_inplace(fgens[s]);
        return p;
    };

    Gf2Matrix span(0, sg.n_slots);
    for (size_t ci = 0; ci < sg.checks.size(); ++ci) {
        const auto &ck = sg.checks[ci];
        std::vector<int> slots(ck.slots.begin(), ck.slots.end());
        if (!C.contains(slots_to_op(slots))) {
            VerifyReport rep;
            rep.detail = "check " + std::to_string(ci) + " (face (" + std::to_string(ck.face_i) +
                         "," + std::to_string(ck.face_j) + "), anchor layer " +
                         std::to_string(ck.anchor_layer) + ") is not a surviving stabilizer";
            return rep;
        }
        BitVec v(sg.n_slots);
        for (int s : slots) v.flip(size_t(s));
        span.add_row(v);
    }
    size_t check_rank = span.rank();

    for (int sec = 0; sec < 2; ++sec)
        for (const auto *lg : {&sg.logicals[sec].space_u, &sg.logicals[sec].space_v}) {
            if (!C.contains(slots_to_op(*lg)))
                return {false, "logical operator is not a surviving stabilizer"};
            BitVec v(sg.n_slots);
            for (int s : *lg) v.flip(size_t(s));
            size_t before = span.rank();
            span.add_row(v);
            if (span.rank() != before + 1)
                return {false, "logical operator is dependent on checks"};
        }

    // The remaining two dimensions of C are the time-parity membranes (all ZZ
    // outcomes at layers of one parity). They are not tracked observables, but
    // completing the span with them proves checks + logicals + membranes = C.
    for (int par = 0; par < 2; ++par) {
        std::vector<int> membrane;
        for (int f = 0; f < net.n_fusions(); ++f)
            if (net.fusions()[f].layer % 2 == par)
                membrane.push_back(FusionNetwork::zz_slot(f));
        if (!C.contains(slots_to_op(membrane)))
            return {false, "time-parity membrane is not a surviving stabilizer"};
        BitVec v(sg.n_slots);
        for (int s : membrane) v.flip(size_t(s));
        span.add_row(v);
    }
    if (span.rank() != C.generators.size())
        return {false, "checks plus logicals do not generate the surviving stabilizer group"};

    VerifyReport rep;
    rep.ok = true;
    rep.detail = "dim C = " + std::to_string(C.generators.size()) + ", check rank " +
                 std::to_string(check_rank) + ", 4 independent logicals";
    return rep;
}

} // namespace sffcc
