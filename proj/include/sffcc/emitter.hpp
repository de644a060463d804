#pragma once

#include <string>
#include <vector>

#include "sffcc/graph_state.hpp"
#include "sffcc/rng.hpp"
#include "sffcc/stabilizer.hpp"

namespace sffcc {

enum class StepKind { Emit, SpinHadamard, SpinMeasureZ };

struct CircuitStep {
    StepKind kind;
    int photon = -1; // for Emit
};

// Emission circuit for an (encoded) linear chain: spin prepared in |+>, one
// CNOT per photon, Hadamards only at encoded-qubit block boundaries, terminal
// spin Z measurement.
struct GenerationCircuit {
    std::vector<CircuitStep> steps;
    int n_encoded = 0;
    int m = 1; // photons per encoded qubit
    int photon_count() const { return n_encoded * m; }
    std::vector<size_t> emit_step_indices() const;
    std::string str() const;
};

GenerationCircuit build_chain_circuit(int n_encoded, int m);

// Target photon state of the noiseless circuit (spin measured out, +1 frame):
// a chain over the first photon of each block, with the other block photons
// attached as Hadamard-flagged leaves on their first photon. Photon p is
// vertex p (emission order).
GraphState chain_graph(int n_encoded, int m);

struct SpinNoiseParams {
    double p_x = 0, p_y = 0, p_z = 0; // per-photon-step spin Pauli probabilities
    static SpinNoiseParams depolarizing(double p_s) { return {p_s / 3, p_s / 3, p_s / 3}; }
    void validate() const;
};

// Depolarizing probability p^(s) for Markovian dephasing over one photon
// period: p^(s)/3 = (1/4)(1 - exp(-tau/T2)).
double markov_p_from_T2(double tau, double T2);

struct SpinError {
    size_t step_index; // injected immediately before steps[step_index]
    int pauli;         // 1=X, 2=Y, 3=Z
};

// One i.i.d. draw per Emit step.
std::vector<SpinError> sample_spin_errors(const GenerationCircuit &circuit,
                                          const SpinNoiseParams &params, Rng &rng);

// Photon Pauli error vector (0=I,1=X,2=Y,3=Z per photon) equivalent to the
// injected spin errors: conjugate through the remaining gates, eliminate the
// spin component against the pre-measurement stabilizers, then reduce to the
// canonical minimal-support representative modulo the resource-state group.
std::vector<int> propagate_errors(const GenerationCircuit &circuit,
                                  const std::vector<SpinError> &spin_errors);

// Canonical coset representative of a photon error modulo the circuit's
// resource-state stabilizer group (idempotent; signs ignored).
std::vector<int> reduce_photon_error(const GenerationCircuit &circuit, const std::vector<int> &error);

} // namespace sffcc
