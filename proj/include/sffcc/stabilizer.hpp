#pragma once

#include <optional>
#include <vector>

#include "sffcc/pauli.hpp"
#include "sffcc/rng.hpp"

namespace sffcc {

// A list of independent, mutually commuting Hermitian Pauli generators.
// Canonical form is reduced row echelon over GF(2) with X-block columns
// before Z-block columns; row operations multiply the Pauli operators so
// signs stay exact.
class StabilizerGroup {
  public:
    StabilizerGroup() = default;
    explicit StabilizerGroup(std::vector<PauliOperator> gens) : generators(std::move(gens)) {}

    size_t n_qubits() const { return generators.empty() ? 0 : generators[0].n_qubits(); }

    // All pairs commute, GF(2)-independent, -I not in the group.
    bool is_valid() const;

    void canonicalize();

    bool equals(const StabilizerGroup &other) const;

    // Is p (with its sign) a member?
    bool contains(const PauliOperator &p) const;
    // Is +p or -p a member? Returns the member's sign if so.
    std::optional<bool> contains_up_to_sign(const PauliOperator &p) const;

    // Sign-consistent intersection of the generated groups.
    static StabilizerGroup intersection(const StabilizerGroup &a, const StabilizerGroup &b);

    // Subgroup supported entirely on the kept qubits (true = keep), with the
    // returned operators shrunk onto those qubits in ascending index order.
    StabilizerGroup restricted_to(const std::vector<bool> &keep) const;

    std::vector<PauliOperator> generators;
};

// Full tableau (n stabilizers + n destabilizers) for pure stabilizer states.
class StabilizerState {
  public:
    // |0...0> on n qubits.
    explicit StabilizerState(size_t n_qubits);

    size_t n_qubits() const { return n_; }

    void apply_h(size_t q);
    void apply_cnot(size_t control, size_t target);
    void apply_cz(size_t a, size_t b);
    void apply_pauli(const PauliOperator &p);

    // Graph-state preparation helper: H on every qubit of |0..0> gives |+>^n,
    // then CZ per edge. (Callers use the gate API; this is just convenience.)
    static StabilizerState graph_state(size_t n, const std::vector<std::pair<size_t, size_t>> &edges);

    // Measure a Hermitian Pauli. Returns +1/-1. If the outcome is random,
    // `forced` (when set) selects the branch, otherwise `rng` draws it.
    // Forcing an outcome that contradicts a deterministic value throws.
    int measure(const PauliOperator &p, std::optional<int> forced = std::nullopt, Rng *rng = nullptr);

    // Deterministic-outcome query without state update; nullopt if random.
    std::optional<int> deterministic_outcome(const PauliOperator &p) const;

    StabilizerGroup stabilizer_group() const;

    const std::vector<int> &measurement_record() const { return record_; }

  private:
    size_t n_;
    std::vector<PauliOperator> stab_;
    std::vector<PauliOperator> destab_;
    std::vector<int> record_;
};

} // namespace sffcc
