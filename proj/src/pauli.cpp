#include "sffcc/pauli.hpp"

namespace sffcc {

PauliOperator PauliOperator::from_str(const std::string &s) {
    size_t start = 0;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = (s[0] == '-');
        start = 1;
    }
    PauliOperator p(s.size() - start);
    p.neg = neg;
    for (size_t q = 0; q < p.n_qubits(); ++q) {
        switch (s[start + q]) {
            case 'I':
            case '_': break;
            case 'X': p.set_pauli(q, 1); break;
            case 'Y': p.set_pauli(q, 2); break;
            case 'Z': p.set_pauli(q, 3); break;
            default: throw std::invalid_argument("bad Pauli character in \"" + s + "\"");
        }
    }
    return p;
}

void PauliOperator::multiply_inplace(const PauliOperator &o) {
    if (n_qubits() != o.n_qubits())
        throw std::invalid_argument("Pauli length mismatch");
    // Phase accounting in powers of i, per the canonical Y = iXZ convention.
    size_t a = x_bits.and_popcount(z_bits);
    size_t b = o.x_bits.and_popcount(o.z_bits);
    size_t d = z_bits.and_popcount(o.x_bits);
    x_bits.xor_with(o.x_bits);
    z_bits.xor_with(o.z_bits);
    size_t c = x_bits.and_popcount(z_bits);
    unsigned g = (a + b + 2 * d + 4 * n_qubits() - c) & 3;
    neg = neg ^ o.neg ^ (g >= 2);
}

size_t PauliOperator::weight() const {
    size_t w = 0;
    for (size_t i = 0; i < x_bits.words().size(); ++i)
        w += std::popcount(x_bits.words()[i] | z_bits.words()[i]);
    return w;
}

std::string PauliOperator::str() const {
    std::string s(neg ? "-" : "+");
    for (size_t q = 0; q < n_qubits(); ++q) s.push_back("_XYZ"[pauli_at(q)]);
    return s;
}

} // namespace sffcc
