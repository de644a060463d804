#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sffcc/bitvec.hpp"

namespace sffcc {

// Hermitian Pauli string in symplectic form: sign * prod_j i^{x_j z_j} X^{x_j} Z^{z_j}.
// Only +/-1 signs are tracked; products of commuting Hermitian Paulis stay
// Hermitian and keep exact signs. Anticommuting products would carry a factor
// of i, which is dropped: the result is the Hermitian representative with the
// sign given by floor(phase/2) of the accumulated i-power.
class PauliOperator {
  public:
    explicit PauliOperator(size_t n_qubits)
        : x_bits(n_qubits), z_bits(n_qubits), neg(false) {}

    // Parse e.g. "+XIZ", "-YY", "XZ" (leading sign optional, I/_ for identity).
    static PauliOperator from_str(const std::string &s);

    size_t n_qubits() const { return x_bits.size(); }

    // 0=I, 1=X, 2=Y, 3=Z
    int pauli_at(size_t q) const {
        bool x = x_bits.get(q), z = z_bits.get(q);
        return x ? (z ? 2 : 1) : (z ? 3 : 0);
    }
    void set_pauli(size_t q, int p) {
        x_bits.set(q, p == 1 || p == 2);
        z_bits.set(q, p == 2 || p == 3);
    }

    bool is_identity_bits() const { return x_bits.none() && z_bits.none(); }

    bool commutes(const PauliOperator &o) const {
        return !(x_bits.and_parity(o.z_bits) ^ z_bits.and_parity(o.x_bits));
    }

    PauliOperator multiplied_by(const PauliOperator &o) const {
        PauliOperator r = *this;
        r.multiply_inplace(o);
        return r;
    }
    void multiply_inplace(const PauliOperator &o);

    size_t weight() const;

    bool operator==(const PauliOperator &o) const = default;

    std::string str() const;

    BitVec x_bits;
    BitVec z_bits;
    bool neg; // true => overall -1 sign
};

} // namespace sffcc
