#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sffcc/stabilizer.hpp"

namespace sffcc {

// Graph state with optional local Hadamard flags: the represented state is
// H_flags |G>. Vertex ids are stable integers; rewrites allocate fresh ids.
class GraphState {
  public:
    void add_vertex(int v);
    void add_edge(int a, int b);
    void remove_vertex(int v);
    void remove_edge(int a, int b);
    bool has_vertex(int v) const { return adj_.count(v) != 0; }
    bool has_edge(int a, int b) const;

    const std::set<int> &neighbors(int v) const;
    size_t degree(int v) const { return neighbors(v).size(); }
    std::vector<int> vertices() const;
    std::vector<std::pair<int, int>> edges() const;
    size_t vertex_count() const { return adj_.size(); }

    void set_hadamard(int v, bool on);
    bool hadamard(int v) const { return hadamard_.count(v) != 0; }
    const std::set<int> &hadamard_set() const { return hadamard_; }

    int fresh_id() const;

    // Dense qubit index per vertex id (sorted order); shared by all tableau
    // conversions of this graph.
    std::map<int, size_t> qubit_index() const;

    // Tableau of H_flags |G>.
    StabilizerState to_state() const;
    StabilizerGroup to_group() const { return to_state().stabilizer_group(); }

    std::string to_json() const;
    static GraphState from_json(const std::string &text);

    bool operator==(const GraphState &o) const { return adj_ == o.adj_ && hadamard_ == o.hadamard_; }

  private:
    std::map<int, std::set<int>> adj_;
    std::set<int> hadamard_;
};

enum class FusionBasis {
    XZ_ZX,      // measures {X_a Z_b, Z_a X_b}
    XX_ZZ,      // measures {X_a X_b, Z_a Z_b}; ZZ recovered on failure
    ZZ_XX_rot,  // rotated: measures {Z_a Z_b, X_a X_b}; XX recovered on failure
};

struct FusionSpec {
    int qubit_a = 0;
    int qubit_b = 0;
    FusionBasis basis = FusionBasis::XX_ZZ;
};

struct SplitProvenance {
    int new_id;
    int parent_id;
    int side; // 0 or 1
};

struct DecompositionResult {
    std::vector<GraphState> resource_graphs;
    std::vector<FusionSpec> fusions;
    std::vector<int> virtual_x_measurements;
    std::vector<SplitProvenance> provenance;
};

// Edge split: remove edge {a,b}; a and b are replaced by fresh qubits a', b'
// inheriting N_a\{b} and N_b\{a}, joined by an {XZ,ZX} fusion. Equivalent to
// X-measuring a and b on the original graph.
DecompositionResult edge_split(const GraphState &g, int a, int b);

// Node split: vertex v is replaced by fresh qubits v_a ~ part_a and
// v_b ~ part_b, joined by an {XX,ZZ} fusion. Equivalent to X-measuring v.
DecompositionResult node_split(const GraphState &g, int v, const std::set<int> &part_a,
                               const std::set<int> &part_b);

// Closed-form X-measurement rewrite (+1 branch) for the cases the sFFCC
// decomposition needs: v of degree <= 1, or v with an unflagged degree-1
// neighbor that absorbs the connectivity and picks up a Hadamard flag.
// Throws std::invalid_argument when no closed form applies (use the tableau
// oracle for those).
GraphState measure_x_rewrite(const GraphState &g, int v);

// Terminal stabilizer group of X-measuring v on g (forced +1), restricted to
// the surviving qubits. Works for any degree; oracle path for the rewrite.
StabilizerGroup measure_x_tableau(const GraphState &g, int v);

// Exhaustive outcome-branch equivalence: the lhs graph with X measurements on
// `lhs_x_measured` against the decomposition's fusion + virtual measurements.
// True iff the all-+1 branches yield sign-identical terminal groups on the
// survivors and the outcome distributions over terminal groups agree modulo
// the outcome-dependent Pauli frame (sign-stripped comparison branch-wise).
bool verify_equivalence(const GraphState &lhs, const std::vector<int> &lhs_x_measured,
                        const DecompositionResult &rhs);

} // namespace sffcc
