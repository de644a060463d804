#include <doctest.h>

#include "dense_oracle.hpp"
#include "sffcc/pauli.hpp"
#include "sffcc/rng.hpp"

using sffcc::PauliOperator;
using sffcc::Rng;

namespace {

PauliOperator random_pauli(Rng &rng, size_t n, bool random_sign = true) {
    PauliOperator p(n);
    for (size_t q = 0; q < n; ++q) p.set_pauli(q, int(rng.next_below(4)));
    if (random_sign) p.neg = rng.next_bool();
    return p;
}

// The stored result of A*B is the Hermitian representative: equal to the true
// matrix product when A and B commute, and to -i times it when they
// anticommute (true product = i * stored).
void check_product_against_matrices(const PauliOperator &a, const PauliOperator &b) {
    auto prod = a.multiplied_by(b);
    auto lhs = oracle::matmul(oracle::pauli_matrix(a), oracle::pauli_matrix(b));
    auto rhs = oracle::pauli_matrix(prod);
    if (a.commutes(b)) {
        CHECK(oracle::mat_close(lhs, rhs));
    } else {
        CHECK(oracle::mat_close(lhs, rhs, oracle::cd(0, 1)));
    }
}

} // namespace

TEST_CASE("string parse and print round-trip") {
    for (const char *s : {"+X", "-Z", "+XYZ_", "-YY", "+____", "+XZXZX"}) {
        auto p = PauliOperator::from_str(s);
        CHECK(p.str() == s);
    }
    auto p = PauliOperator::from_str("XIZ");
    CHECK(p.str() == "+X_Z");
    CHECK(p.pauli_at(0) == 1);
    CHECK(p.pauli_at(1) == 0);
    CHECK(p.pauli_at(2) == 3);
    CHECK(p.weight() == 2);
    CHECK_THROWS_AS(PauliOperator::from_str("+XQ"), std::invalid_argument);
}

TEST_CASE("single-qubit multiplication table against 2x2 matrices") {
    for (int pa = 0; pa < 4; ++pa) {
        for (int pb = 0; pb < 4; ++pb) {
            for (int sa = 0; sa < 2; ++sa) {
                for (int sb = 0; sb < 2; ++sb) {
                    PauliOperator a(1), b(1);
                    a.set_pauli(0, pa);
                    b.set_pauli(0, pb);
                    a.neg = sa;
                    b.neg = sb;
                    check_product_against_matrices(a, b);
                }
            }
        }
    }
}

TEST_CASE("(X(x)Z) * (Z(x)Z) matches the 4x4 matrix product") {
    auto a = PauliOperator::from_str("+XZ");
    auto b = PauliOperator::from_str("+ZZ");
    auto prod = a.multiplied_by(b);
    // XZ * ZZ = (XZ)(x)(ZZ) = -iY (x) I, so the Hermitian representative is -Y(x)I.
    CHECK(prod.str() == "-Y_");
    check_product_against_matrices(a, b);
}

TEST_CASE("all two-qubit products against 4x4 matrices") {
    for (int a4 = 0; a4 < 16; ++a4) {
        for (int b4 = 0; b4 < 16; ++b4) {
            PauliOperator a(2), b(2);
            a.set_pauli(0, a4 & 3);
            a.set_pauli(1, a4 >> 2);
            b.set_pauli(0, b4 & 3);
            b.set_pauli(1, b4 >> 2);
            check_product_against_matrices(a, b);
        }
    }
}

TEST_CASE("random n-qubit products against dense matrices") {
    Rng rng(0x5eed01);
    for (size_t n = 3; n <= 5; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            auto a = random_pauli(rng, n);
            auto b = random_pauli(rng, n);
            check_product_against_matrices(a, b);
        }
    }
}

TEST_CASE("commutes matches matrix commutator") {
    Rng rng(0x5eed02);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_pauli(rng, 3);
        auto b = random_pauli(rng, 3);
        auto ab = oracle::matmul(oracle::pauli_matrix(a), oracle::pauli_matrix(b));
        auto ba = oracle::matmul(oracle::pauli_matrix(b), oracle::pauli_matrix(a));
        CHECK(a.commutes(b) == oracle::mat_close(ab, ba));
    }
}

TEST_CASE("group axioms on the Hermitian representatives") {
    Rng rng(0x5eed03);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_pauli(rng, 4);
        // a * a = +I
        auto sq = a.multiplied_by(a);
        CHECK(sq.is_identity_bits());
        CHECK_FALSE(sq.neg);
        // identity is neutral
        PauliOperator id(4);
        CHECK(a.multiplied_by(id) == a);
        CHECK(id.multiplied_by(a) == a);
        // commuting triple products associate with exact signs
        auto b = random_pauli(rng, 4);
        auto c = random_pauli(rng, 4);
        if (a.commutes(b) && b.commutes(c) && a.commutes(c)) {
            auto left = a.multiplied_by(b).multiplied_by(c);
            auto right = a.multiplied_by(b.multiplied_by(c));
            CHECK(left == right);
        }
    }
}
