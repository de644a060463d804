#pragma once

#include <array>
#include <string>
#include <vector>

#include "sffcc/graph_state.hpp"
#include "sffcc/stabilizer.hpp"

namespace sffcc {

// Periodic honeycomb geometry for the synchronous FFCC network.
//
// Primitive cells (i, j) hold two vertices A and B. Bonds from A(i,j):
//   type 0 -> B(i,j),    color (i-j-1) mod 3
//   type 1 -> B(i-1,j),  color (i-j)   mod 3
//   type 2 -> B(i,j-1),  color (i-j+1) mod 3
// Faces F(i,j) have color (i-j) mod 3 and are bounded by alternating edges
// of the other two colors. Each color class is a perfect matching, so every
// vertex fuses exactly once per layer; layer t activates color t mod 3.
//
// The torus identifies (i,j) ~ (i+L, j+L) ~ (i+3L, j), preserving colors;
// the fundamental domain is i in [0,3L), j in [0,L) -> 3L^2 cells, 6L^2
// vertices (emitters). There are 3L layers, so the color schedule and the
// 6-layer check period both close; L must be even.
//
// Every emitter's world line is one resource state: a periodic ring of 3L
// photons (one per layer), each carrying a Hadamard flag from the virtual X
// measurements of the lattice decomposition. All fusions are rotated
// {ZZ,XX}, each photon participates in exactly one, and each ring fuses
// with its 3 lattice neighbours only.
class FusionNetwork {
  public:
    explicit FusionNetwork(int L);

    struct Fusion {
        int photon_a, photon_b; // photon_a on the A-side vertex
        int layer;
        int cell_i, cell_j, edge_type; // bond identity
        int color;
    };

    int L() const { return L_; }
    int layers() const { return 3 * L_; }
    int n_cells() const { return 3 * L_ * L_; }
    int n_vertices() const { return 6 * L_ * L_; }
    int n_photons() const { return n_vertices() * layers(); }
    int n_fusions() const { return int(fusions_.size()); }
    int n_slots() const { return 2 * n_fusions(); }

    // Vertex ids; (i,j) are reduced onto the torus, s = 0 for A, 1 for B.
    int vertex_id(int i, int j, int s) const;
    // (i, j, s) for a vertex id, i in [0,3L), j in [0,L).
    std::array<int, 3> vertex_coord(int v) const;
    // The three lattice neighbours of a vertex, indexed by bond color.
    std::array<int, 3> neighbors_by_color(int v) const;

    int photon_id(int v, int t) const { return v * layers() + t; }
    int photon_vertex(int p) const { return p / layers(); }
    int photon_layer(int p) const { return p % layers(); }

    const std::vector<Fusion> &fusions() const { return fusions_; }
    // The unique fusion consuming a photon.
    int fusion_of_photon(int p) const { return photon_fusion_[p]; }
    // Slot ids: 2f is the XX outcome of fusion f, 2f+1 the ZZ outcome.
    static int xx_slot(int f) { return 2 * f; }
    static int zz_slot(int f) { return 2 * f + 1; }

    // Resource state of one emitter: a 3L-qubit periodic ring, every qubit
    // Hadamard-flagged, vertex ids equal to the layer index.
    GraphState ring_graph() const;

  private:
    int L_;
    std::vector<Fusion> fusions_;
    std::vector<int> photon_fusion_;
};

FusionNetwork build_sffcc_network(int L);

// Checks and logical correlation operators over the fusion-outcome slots.
//
// Every check is anchored at a face F(i,j) of color c and a layer t = c+1
// (mod 3): it multiplies the XX outcomes of the face's (c+1)-colored edge
// trio at layer t, the ZZ outcomes of the (c+2)-trio at t+1, the ZZ outcomes
// of the (c+1)-trio at t+3 and the XX outcomes of the (c+2)-trio at t+4 --
// degree 12, six XX and six ZZ. The template is not hard-coded: it is derived
// once per process from a windowed GF(2) intersection R cap F around single
// faces of each color on a small base instance, then tiled by translation.
//
// Anchor-layer parity is preserved along every slot incidence, so the checks
// split into two disconnected sectors (primal = even anchors, dual = odd);
// each fusion sends its XX outcome to one sector and its ZZ outcome to the
// other, and each slot sits in exactly two checks of its sector.
struct SyndromeGraph {
    int L = 0;
    int n_slots = 0;

    struct Check {
        std::array<int, 12> slots;
        int face_i, face_j, anchor_layer;
        int sector;
    };
    std::vector<Check> checks;
    std::vector<std::array<int, 2>> slot_checks; // the two incident checks per slot
    std::vector<int> slot_sector;

    // Per sector, two independent logical correlation operators (slot id
    // lists): one membrane per spatial homology direction of the stored code,
    // extended along the foliation. The time-parity membrane (every ZZ slot
    // at layers of one parity) is not tracked: it degenerates into the check
    // span at L = 0 mod 4 and protects no stored information.
    struct Logicals {
        std::vector<int> space_u, space_v;
    };
    std::array<Logicals, 2> logicals;

    std::string to_json() const;
};

SyndromeGraph derive_syndrome_graph(const FusionNetwork &net);

// Exhaustive surviving-stabilizer oracle for small instances (photon count
// capped): recomputes C = R cap F from scratch and checks that every derived
// check is a +1 element of C and that checks plus logicals generate C.
// Tamper knobs support negative controls.
struct VerifyOptions {
    int unrotate_fusion = -1;    // swap this fusion's ops to the {XZ,ZX} basis
    int drop_hadamard_ring = -1; // drop one Hadamard flag on this ring...
    int drop_hadamard_layer = 0; // ...at this layer
};
struct VerifyReport {
    bool ok = false;
    std::string detail;
};
VerifyReport verify_small_instance(const FusionNetwork &net, const SyndromeGraph &sg,
                                   const VerifyOptions &opts = {});

} // namespace sffcc
