#include "sffcc/emitter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace sffcc {

namespace {

// Pauli conjugation through Clifford gates, bits only (signs irrelevant for
// error propagation).
void conj_h(PauliOperator &p, size_t q) {
    bool x = p.x_bits.get(q), z = p.z_bits.get(q);
    p.x_bits.set(q, z);
    p.z_bits.set(q, x);
}

void conj_cnot(PauliOperator &p, size_t c, size_t t) {
    p.x_bits.set(t, p.x_bits.get(t) ^ p.x_bits.get(c));
    p.z_bits.set(c, p.z_bits.get(c) ^ p.z_bits.get(t));
}

void xor_bits(PauliOperator &a, const PauliOperator &b) {
    a.x_bits.xor_with(b.x_bits);
    a.z_bits.xor_with(b.z_bits);
}

size_t sym_lowest(const PauliOperator &p) {
    size_t n = p.n_qubits();
    for (size_t q = 0; q < n; ++q)
        if (p.x_bits.get(q)) return q;
    for (size_t q = 0; q < n; ++q)
        if (p.z_bits.get(q)) return n + q;
    return 2 * n;
}

bool sym_get(const PauliOperator &p, size_t col) {
    size_t n = p.n_qubits();
    return col < n ? p.x_bits.get(col) : p.z_bits.get(col - n);
}

// (weight, support positions, pauli pattern) key for the greedy support pass:
// minimal weight first, then errors on lower photon indices, then a fixed
// tie-break on the pauli labels themselves.
std::tuple<size_t, std::vector<size_t>, std::string> support_key(const PauliOperator &p) {
    std::vector<size_t> support;
    std::string s;
    s.reserve(p.n_qubits());
    for (size_t q = 0; q < p.n_qubits(); ++q) {
        int code = p.pauli_at(q);
        if (code != 0) support.push_back(q);
        s.push_back(char('0' + code));
    }
    return {support.size(), std::move(support), std::move(s)};
}

// Spin is tableau qubit 0; photon p is qubit 1 + p.
StabilizerState run_ideal(const GenerationCircuit &c, bool measure_spin) {
    StabilizerState st(size_t(1) + c.photon_count());
    for (const auto &step : c.steps) {
        switch (step.kind) {
            case StepKind::Emit: st.apply_cnot(0, size_t(1) + step.photon); break;
            case StepKind::SpinHadamard: st.apply_h(0); break;
            case StepKind::SpinMeasureZ:
                if (measure_spin) {
                    PauliOperator zs(st.n_qubits());
                    zs.set_pauli(0, 3);
                    st.measure(zs, +1);
                }
                return st;
        }
    }
    throw std::logic_error("circuit missing terminal spin measurement");
}

StabilizerGroup photon_group(const GenerationCircuit &c) {
    auto st = run_ideal(c, true);
    std::vector<bool> keep(st.n_qubits(), true);
    keep[0] = false;
    return st.stabilizer_group().restricted_to(keep);
}

PauliOperator reduce_modulo(PauliOperator e, const StabilizerGroup &group) {
    StabilizerGroup canon = group;
    canon.canonicalize();
    for (const auto &g : canon.generators)
        if (sym_get(e, sym_lowest(g))) xor_bits(e, g);
    // Greedy support minimization, preferring low photon indices.
    bool improved = true;
    while (improved) {
        improved = false;
        for (const auto &g : canon.generators) {
            PauliOperator cand = e;
            xor_bits(cand, g);
            if (support_key(cand) < support_key(e)) {
                e = cand;
                improved = true;
            }
        }
    }
    e.neg = false;
    return e;
}

} // namespace

std::vector<size_t> GenerationCircuit::emit_step_indices() const {
    std::vector<size_t> idx;
    for (size_t i = 0; i < steps.size(); ++i)
        if (steps[i].kind == StepKind::Emit) idx.push_back(i);
    return idx;
}

std::string GenerationCircuit::str() const {
    std::string s;
    for (const auto &step : steps) {
        if (!s.empty()) s += "; ";
        switch (step.kind) {
            case StepKind::Emit: s += "E" + std::to_string(step.photon); break;
            case StepKind::SpinHadamard: s += "H"; break;
            case StepKind::SpinMeasureZ: s += "MZ"; break;
        }
    }
    return s;
}

GenerationCircuit build_chain_circuit(int n_encoded, int m) {
    if (n_encoded < 1 || m < 1) throw std::invalid_argument("chain sizes must be >= 1");
    GenerationCircuit c;
    c.n_encoded = n_encoded;
    c.m = m;
    c.steps.push_back({StepKind::SpinHadamard});
    for (int b = 0; b < n_encoded; ++b) {
        for (int j = 0; j < m; ++j) c.steps.push_back({StepKind::Emit, b * m + j});
        c.steps.push_back({StepKind::SpinHadamard});
    }
    c.steps.push_back({StepKind::SpinMeasureZ});
    return c;
}

GraphState chain_graph(int n_encoded, int m) {
    if (n_encoded < 1 || m < 1) throw std::invalid_argument("chain sizes must be >= 1");
    GraphState g;
    for (int b = 0; b < n_encoded; ++b) {
        int first = b * m;
        g.add_vertex(first);
        for (int j = 1; j < m; ++j) {
            g.add_edge(first, first + j);
            g.set_hadamard(first + j, true);
        }
        if (b > 0) g.add_edge((b - 1) * m, first);
    }
    return g;
}

void SpinNoiseParams::validate() const {
    if (p_x < 0 || p_y < 0 || p_z < 0 || p_x + p_y + p_z > 1.0 + 1e-12)
        throw std::invalid_argument("spin error probabilities must be nonnegative and sum to <= 1");
}

double markov_p_from_T2(double tau, double T2) {
    if (T2 <= 0.0) throw std::domain_error("T2 must be positive");
    if (tau < 0.0) throw std::invalid_argument("tau must be nonnegative");
    return 0.75 * (1.0 - std::exp(-tau / T2));
}

std::vector<SpinError> sample_spin_errors(const GenerationCircuit &circuit,
                                          const SpinNoiseParams &params, Rng &rng) {
    params.validate();
    std::vector<SpinError> errors;
    for (size_t i = 0; i < circuit.steps.size(); ++i) {
        if (circuit.steps[i].kind != StepKind::Emit) continue;
        double u = rng.next_double();
        if (u < params.p_x)
            errors.push_back({i, 1});
        else if (u < params.p_x + params.p_y)
            errors.push_back({i, 2});
        else if (u < params.p_x + params.p_y + params.p_z)
            errors.push_back({i, 3});
    }
    return errors;
}

std::vector<int> propagate_errors(const GenerationCircuit &circuit,
                                  const std::vector<SpinError> &spin_errors) {
    size_t nq = size_t(1) + circuit.photon_count();
    for (const auto &e : spin_errors) {
        if (e.step_index >= circuit.steps.size())
            throw std::invalid_argument("spin error step index out of range");
        if (e.pauli < 1 || e.pauli > 3) throw std::invalid_argument("spin error must be X, Y or Z");
    }
    std::vector<SpinError> sorted = spin_errors;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SpinError &a, const SpinError &b) { return a.step_index < b.step_index; });

    PauliOperator e(nq);
    size_t next = 0;
    for (size_t i = 0; i < circuit.steps.size(); ++i) {
        while (next < sorted.size() && sorted[next].step_index == i) {
            PauliOperator inj(nq);
            inj.set_pauli(0, sorted[next].pauli);
            xor_bits(e, inj);
            ++next;
        }
        const auto &step = circuit.steps[i];
        if (step.kind == StepKind::Emit)
            conj_cnot(e, 0, size_t(1) + step.photon);
        else if (step.kind == StepKind::SpinHadamard)
            conj_h(e, 0);
        else
            break;
    }

    // A spin X/Y at the measurement flips the heralded outcome; eliminate it
    // against a pre-measurement stabilizer so the photon-only equivalent
    // includes the corresponding frame shift.
    if (e.x_bits.get(0)) {
        auto pre = run_ideal(circuit, false).stabilizer_group();
        for (const auto &g : pre.generators) {
            if (g.x_bits.get(0)) {
                xor_bits(e, g);
                break;
            }
        }
    }
    e.z_bits.set(0, false); // Z acts trivially on the measured |0> branch

    PauliOperator photon_part(circuit.photon_count());
    for (int p = 0; p < circuit.photon_count(); ++p)
        photon_part.set_pauli(p, e.pauli_at(size_t(1) + p));
    photon_part = reduce_modulo(photon_part, photon_group(circuit));

    std::vector<int> out(circuit.photon_count());
    for (int p = 0; p < circuit.photon_count(); ++p) out[p] = photon_part.pauli_at(p);
    return out;
}

std::vector<int> reduce_photon_error(const GenerationCircuit &circuit, const std::vector<int> &error) {
    if (error.size() != size_t(circuit.photon_count()))
        throw std::invalid_argument("error vector length mismatch");
    PauliOperator e(error.size());
    for (size_t p = 0; p < error.size(); ++p) e.set_pauli(p, error[p]);
    e = reduce_modulo(e, photon_group(circuit));
    std::vector<int> out(error.size());
    for (size_t p = 0; p < error.size(); ++p) out[p] = e.pauli_at(p);
    return out;
}

} // namespace sffcc
